#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "leaklint/errors.hpp"
#include "leaklint/lexer.hpp"
#include "leaklint/model.hpp"
#include "leaklint/source_unit.hpp"

namespace leaklint {

namespace parse_detail {

struct RawStmt {
  std::string indent;
  std::vector<Token> tokens;
};

inline bool is_compound_kw(const std::string& s) {
  static const std::unordered_set<std::string> kw = {
      "if",   "elif",  "else",   "for",     "while", "def",
      "class", "with", "try",   "except",  "finally", "async"};
  return kw.count(s) > 0;
}

inline int bracket_delta(const Token& t) {
  if (t.kind != TokKind::Op) return 0;
  if (t.text == "(" || t.text == "[" || t.text == "{") return 1;
  if (t.text == ")" || t.text == "]" || t.text == "}") return -1;
  return 0;
}

inline std::vector<Token> slice(const std::vector<Token>& toks, size_t lo,
                                size_t hi) {
  return std::vector<Token>(toks.begin() + lo, toks.begin() + hi);
}

/// Splits one logical line into simple statements: compound headers are
/// cut at their colon and the inline suite recurses with a deeper indent;
/// semicolons separate statements at bracket depth zero.
inline void split_range(const std::vector<Token>& toks, size_t lo, size_t hi,
                        const std::string& indent, std::vector<RawStmt>& out) {
  while (lo < hi && toks[lo].kind == TokKind::Op && toks[lo].text == ";") ++lo;
  if (lo >= hi) return;
  const Token& first = toks[lo];
  if (first.kind == TokKind::Keyword && is_compound_kw(first.text)) {
    int depth = 0;
    size_t colon = hi;
    for (size_t i = lo; i < hi; ++i) {
      depth += bracket_delta(toks[i]);
      if (depth == 0 && toks[i].kind == TokKind::Op && toks[i].text == ":") {
        colon = i;
        break;
      }
    }
    if (colon < hi) {
      out.push_back(RawStmt{indent, slice(toks, lo, colon + 1)});
      if (colon + 1 < hi) split_range(toks, colon + 1, hi, indent + " ", out);
      return;
    }
    out.push_back(RawStmt{indent, slice(toks, lo, hi)});
    return;
  }
  int depth = 0;
  for (size_t i = lo; i < hi; ++i) {
    depth += bracket_delta(toks[i]);
    if (depth == 0 && toks[i].kind == TokKind::Op && toks[i].text == ";") {
      out.push_back(RawStmt{indent, slice(toks, lo, i)});
      split_range(toks, i + 1, hi, indent, out);
      return;
    }
  }
  out.push_back(RawStmt{indent, slice(toks, lo, hi)});
}

/// Recursive-descent expression scanner. It does not build a tree; it
/// records calls and name reads into the model while tracking enough
/// shape (dotted paths, receivers, spans) to fill in CallSite rows.
class ExprParser {
 public:
  ExprParser(ProgramModel& m, const std::vector<std::string>& lines,
             const std::vector<Token>& toks, int stmt_index)
      : m_(m), lines_(lines), t_(toks), stmt_(stmt_index) {}

  /// Parses [lo, hi) as a loose expression list, skipping what it cannot
  /// shape (keywords of comprehensions, dict colons, and similar).
  void soup(size_t lo, size_t hi) {
    pos_ = lo;
    end_ = hi;
    while (pos_ < end_) {
      if (at_op(",") || at_op(":")) {
        ++pos_;
        continue;
      }
      size_t before = pos_;
      parse_ternary();
      if (pos_ == before) ++pos_;
    }
  }

 private:
  struct PNode {
    enum class K { Name, Attr, Call, Subscript, Literal, Group };
    K k = K::Literal;
    bool valid = false;
    Span span{};
    std::string dotted;  // pure dotted path when applicable
    std::string tail;    // candidate callee tail
    int call_id = -1;    // id of the call producing this value
    Span base_span{};    // Attr: span of the object expression
    int base_call = -1;  // Attr: call id of the object expression
  };

  ProgramModel& m_;
  const std::vector<std::string>& lines_;
  const std::vector<Token>& t_;
  int stmt_ = -1;
  size_t pos_ = 0;
  size_t end_ = 0;
  std::vector<int> frames_;

  bool at_end() const { return pos_ >= end_; }
  const Token& peek() const { return t_[pos_]; }
  bool at_op(const char* s) const {
    return !at_end() && peek().kind == TokKind::Op && peek().text == s;
  }
  bool at_kw(const char* s) const {
    return !at_end() && peek().kind == TokKind::Keyword && peek().text == s;
  }

  static Span join(const Span& a, const Span& b) {
    return Span{a.start_line, a.start_col, b.end_line, b.end_col};
  }

  static PNode group(const PNode& a, const PNode& b) {
    PNode n;
    n.valid = true;
    n.k = PNode::K::Group;
    n.span = join(a.span, b.span);
    return n;
  }

  PNode parse_ternary() {
    PNode a = parse_or();
    if (!a.valid) return a;
    if (at_kw("if")) {
      ++pos_;
      PNode c = parse_or();
      if (c.valid) a = group(a, c);
      if (at_kw("else")) {
        ++pos_;
        PNode d = parse_ternary();
        if (d.valid) a = group(a, d);
      }
    }
    return a;
  }

  PNode parse_or() {
    PNode a = parse_and();
    while (a.valid && at_kw("or")) {
      ++pos_;
      PNode b = parse_and();
      if (!b.valid) break;
      a = group(a, b);
    }
    return a;
  }

  PNode parse_and() {
    PNode a = parse_not();
    while (a.valid && at_kw("and")) {
      ++pos_;
      PNode b = parse_not();
      if (!b.valid) break;
      a = group(a, b);
    }
    return a;
  }

  PNode parse_not() {
    if (at_kw("not")) {
      Span s = peek().span;
      ++pos_;
      PNode a = parse_not();
      if (a.valid) a.span = join(s, a.span);
      PNode n = a;
      n.k = PNode::K::Group;
      n.call_id = -1;
      return n;
    }
    return parse_cmp();
  }

  bool at_cmp_op() const {
    if (at_end()) return false;
    const Token& tk = peek();
    if (tk.kind == TokKind::Op)
      return tk.text == "<" || tk.text == ">" || tk.text == "<=" ||
             tk.text == ">=" || tk.text == "==" || tk.text == "!=";
    return false;
  }

  PNode parse_cmp() {
    PNode a = parse_bitor();
    while (a.valid) {
      if (at_cmp_op() || at_kw("in")) {
        ++pos_;
      } else if (at_kw("is")) {
        ++pos_;
        if (at_kw("not")) ++pos_;
      } else if (at_kw("not") && pos_ + 1 < end_ &&
                 t_[pos_ + 1].kind == TokKind::Keyword &&
                 t_[pos_ + 1].text == "in") {
        pos_ += 2;
      } else {
        break;
      }
      PNode b = parse_bitor();
      if (!b.valid) break;
      a = group(a, b);
    }
    return a;
  }

  PNode parse_binary_ops(PNode (ExprParser::*next)(),
                         std::initializer_list<const char*> ops) {
    PNode a = (this->*next)();
    while (a.valid) {
      bool matched = false;
      for (const char* op : ops)
        if (at_op(op)) {
          matched = true;
          break;
        }
      if (!matched) break;
      ++pos_;
      PNode b = (this->*next)();
      if (!b.valid) break;
      a = group(a, b);
    }
    return a;
  }

  PNode parse_bitor() { return parse_binary_ops(&ExprParser::parse_bitxor, {"|"}); }
  PNode parse_bitxor() { return parse_binary_ops(&ExprParser::parse_bitand, {"^"}); }
  PNode parse_bitand() { return parse_binary_ops(&ExprParser::parse_shift, {"&"}); }
  PNode parse_shift() {
    return parse_binary_ops(&ExprParser::parse_arith, {"<<", ">>"});
  }
  PNode parse_arith() {
    return parse_binary_ops(&ExprParser::parse_term, {"+", "-"});
  }
  PNode parse_term() {
    return parse_binary_ops(&ExprParser::parse_unary, {"*", "/", "//", "%", "@"});
  }

  PNode parse_unary() {
    if (at_op("+") || at_op("-") || at_op("~")) {
      Span s = peek().span;
      ++pos_;
      PNode a = parse_unary();
      if (a.valid) {
        a.span = join(s, a.span);
        a.k = PNode::K::Group;
        a.call_id = -1;
      }
      return a;
    }
    if (at_kw("await")) {
      ++pos_;
      return parse_unary();
    }
    return parse_power();
  }

  PNode parse_power() {
    PNode a = parse_postfix();
    if (a.valid && at_op("**")) {
      ++pos_;
      PNode b = parse_unary();
      if (b.valid) a = group(a, b);
    }
    return a;
  }

  PNode parse_postfix() {
    PNode a = parse_atom();
    while (a.valid && !at_end()) {
      if (at_op(".")) {
        if (pos_ + 1 >= end_ || t_[pos_ + 1].kind != TokKind::Name) break;
        const Token& attr = t_[pos_ + 1];
        pos_ += 2;
        PNode n;
        n.valid = true;
        n.k = PNode::K::Attr;
        n.span = join(a.span, attr.span);
        n.tail = attr.text;
        n.dotted = a.dotted.empty() ? "" : a.dotted + "." + attr.text;
        n.base_span = a.span;
        n.base_call = a.call_id;
        a = n;
        continue;
      }
      if (at_op("(")) {
        a = parse_call(a);
        continue;
      }
      if (at_op("[")) {
        ++pos_;
        Span close = soup_until("]");
        PNode n;
        n.valid = true;
        n.k = PNode::K::Subscript;
        n.span = join(a.span, close);
        n.tail = a.tail;
        n.call_id = a.call_id;
        a = n;
        continue;
      }
      break;
    }
    return a;
  }

  PNode parse_call(const PNode& callee) {
    const Token open = peek();
    ++pos_;
    const int call_id = static_cast<int>(m_.calls.size());
    {
      CallSite cs;
      cs.id = call_id;
      cs.stmt_index = stmt_;
      cs.callee_tail = callee.tail;
      cs.callee_path =
          !callee.dotted.empty() ? callee.dotted : span_text(lines_, callee.span);
      if (callee.k == PNode::K::Attr) {
        cs.receiver = callee.base_span;
        cs.receiver_call = callee.base_call;
      }
      m_.calls.push_back(std::move(cs));
    }
    frames_.push_back(call_id);
    std::vector<Span> args;
    std::vector<Kwarg> kwargs;
    Span close = open.span;
    while (!at_end()) {
      if (at_op(")")) {
        close = peek().span;
        ++pos_;
        break;
      }
      if (at_op(",")) {
        ++pos_;
        continue;
      }
      if (peek().kind == TokKind::Name && pos_ + 1 < end_ &&
          t_[pos_ + 1].kind == TokKind::Op && t_[pos_ + 1].text == "=") {
        std::string kw = peek().text;
        pos_ += 2;
        PNode v = parse_ternary();
        if (v.valid)
          kwargs.push_back(Kwarg{std::move(kw), v.span});
        else if (!at_end() && !at_op(")"))
          ++pos_;
        continue;
      }
      if (at_op("*") || at_op("**")) {
        Span star = peek().span;
        ++pos_;
        PNode v = parse_ternary();
        args.push_back(v.valid ? join(star, v.span) : star);
        continue;
      }
      size_t before = pos_;
      PNode v = parse_ternary();
      if (v.valid) args.push_back(v.span);
      if (pos_ == before) ++pos_;
    }
    frames_.pop_back();
    CallSite& cs = m_.calls[call_id];
    cs.args = std::move(args);
    cs.kwargs = std::move(kwargs);
    cs.span = join(callee.span, close);
    cs.args_span = Span{open.span.end_line, open.span.end_col,
                        close.start_line, close.start_col};
    PNode n;
    n.valid = true;
    n.k = PNode::K::Call;
    n.span = cs.span;
    n.call_id = call_id;
    return n;
  }

  /// Scans loose contents up to the closing bracket and returns its span.
  Span soup_until(const char* close) {
    Span last = pos_ > 0 ? t_[pos_ - 1].span : Span{};
    while (!at_end()) {
      if (at_op(close)) {
        Span s = peek().span;
        ++pos_;
        return s;
      }
      if (at_op(",") || at_op(":")) {
        last = peek().span;
        ++pos_;
        continue;
      }
      size_t before = pos_;
      PNode v = parse_ternary();
      if (v.valid) last = v.span;
      if (pos_ == before) {
        last = peek().span;
        ++pos_;
      }
    }
    return last;
  }

  PNode parse_lambda() {
    Span start = peek().span;
    ++pos_;
    int depth = 0;
    while (!at_end()) {
      depth += bracket_delta(peek());
      if (depth == 0 && at_op(":")) break;
      ++pos_;
    }
    if (at_op(":")) ++pos_;
    PNode body = parse_ternary();
    PNode n;
    n.valid = true;
    n.k = PNode::K::Group;
    n.span = body.valid ? join(start, body.span) : start;
    return n;
  }

  PNode parse_atom() {
    if (at_end()) return PNode{};
    const Token& tk = peek();
    if (tk.kind == TokKind::Name) {
      m_.name_reads.push_back(NameRead{
          tk.text, tk.span, stmt_, frames_.empty() ? -1 : frames_.back()});
      PNode n;
      n.valid = true;
      n.k = PNode::K::Name;
      n.span = tk.span;
      n.dotted = tk.text;
      n.tail = tk.text;
      ++pos_;
      return n;
    }
    if (tk.kind == TokKind::Number || tk.kind == TokKind::Str) {
      PNode n;
      n.valid = true;
      n.span = tk.span;
      ++pos_;
      return n;
    }
    if (tk.kind == TokKind::Keyword) {
      if (tk.text == "None" || tk.text == "True" || tk.text == "False") {
        PNode n;
        n.valid = true;
        n.span = tk.span;
        ++pos_;
        return n;
      }
      if (tk.text == "lambda") return parse_lambda();
      return PNode{};
    }
    if (tk.kind == TokKind::Op) {
      if (tk.text == "(") {
        Span start = tk.span;
        ++pos_;
        if (at_op(")")) {
          Span close = peek().span;
          ++pos_;
          PNode n;
          n.valid = true;
          n.span = join(start, close);
          return n;
        }
        PNode inner = parse_ternary();
        int items = inner.valid ? 1 : 0;
        bool comma = false;
        Span close = inner.valid ? inner.span : start;
        while (!at_end()) {
          if (at_op(")")) {
            close = peek().span;
            ++pos_;
            break;
          }
          if (at_op(",")) {
            comma = true;
            ++pos_;
            continue;
          }
          size_t before = pos_;
          PNode x = parse_ternary();
          if (x.valid) ++items;
          if (pos_ == before) ++pos_;
        }
        if (items == 1 && !comma && inner.valid) {
          inner.span = join(start, close);
          return inner;
        }
        PNode n;
        n.valid = true;
        n.span = join(start, close);
        return n;
      }
      if (tk.text == "[" || tk.text == "{") {
        Span start = tk.span;
        const char* close = tk.text == "[" ? "]" : "}";
        ++pos_;
        Span end = soup_until(close);
        PNode n;
        n.valid = true;
        n.span = join(start, end);
        return n;
      }
      if (tk.text == "*" || tk.text == "**") {
        Span start = tk.span;
        ++pos_;
        PNode v = parse_ternary();
        PNode n;
        n.valid = true;
        n.k = PNode::K::Group;
        n.span = v.valid ? join(start, v.span) : start;
        return n;
      }
      if (tk.text == "...") {
        PNode n;
        n.valid = true;
        n.span = tk.span;
        ++pos_;
        return n;
      }
      return PNode{};
    }
    return PNode{};
  }
};

/// Parses assignment targets from [lo, hi). Bare names are full binds;
/// attribute, subscript and augmented targets are partial binds of the
/// base name. Reads inside subscript indexes still count as reads.
inline void parse_targets(ProgramModel& m, const std::vector<std::string>& lines,
                          const std::vector<Token>& toks, size_t lo, size_t hi,
                          Statement& st, bool augmented, int stmt_index) {
  // annotation: drop everything after a top-level ':'
  {
    int depth = 0;
    for (size_t i = lo; i < hi; ++i) {
      depth += bracket_delta(toks[i]);
      if (depth == 0 && toks[i].kind == TokKind::Op && toks[i].text == ":") {
        hi = i;
        break;
      }
    }
  }
  // split on top-level commas
  std::vector<std::pair<size_t, size_t>> segs;
  {
    int depth = 0;
    size_t start = lo;
    for (size_t i = lo; i < hi; ++i) {
      depth += bracket_delta(toks[i]);
      if (depth == 0 && toks[i].kind == TokKind::Op && toks[i].text == ",") {
        segs.push_back({start, i});
        start = i + 1;
      }
    }
    segs.push_back({start, hi});
  }
  for (auto [a, b] : segs) {
    if (a < b && toks[a].kind == TokKind::Op &&
        (toks[a].text == "*" || toks[a].text == "**"))
      ++a;
    if (a >= b) continue;
    // unwrap a fully parenthesised or bracketed tuple target
    if (toks[a].kind == TokKind::Op &&
        (toks[a].text == "(" || toks[a].text == "[")) {
      int depth = 0;
      size_t match = b;
      for (size_t i = a; i < b; ++i) {
        depth += bracket_delta(toks[i]);
        if (depth == 0) {
          match = i;
          break;
        }
      }
      if (match == b - 1) {
        parse_targets(m, lines, toks, a + 1, b - 1, st, augmented, stmt_index);
        continue;
      }
    }
    if (toks[a].kind != TokKind::Name) continue;
    const Token& base = toks[a];
    bool partial = augmented;
    size_t i = a + 1;
    bool ok = true;
    while (i < b) {
      if (toks[i].kind == TokKind::Op && toks[i].text == "." && i + 1 < b &&
          toks[i + 1].kind == TokKind::Name) {
        partial = true;
        i += 2;
        continue;
      }
      if (toks[i].kind == TokKind::Op && toks[i].text == "[") {
        int depth = 0;
        size_t j = i;
        for (; j < b; ++j) {
          depth += bracket_delta(toks[j]);
          if (depth == 0 && j > i) break;
        }
        if (j >= b) {
          ok = false;
          break;
        }
        ExprParser sub(m, lines, toks, stmt_index);
        sub.soup(i + 1, j);
        partial = true;
        i = j + 1;
        continue;
      }
      ok = false;
      break;
    }
    if (!ok) continue;
    st.lhs_names.push_back(base.text);
    st.lhs_partial.push_back(partial);
    st.lhs_spans.push_back(base.span);
  }
}

inline void parse_statement(ProgramModel& m, const std::vector<std::string>& lines,
                            const RawStmt& raw) {
  static const std::unordered_set<std::string> no_scan = {
      "import", "from", "global", "nonlocal", "pass",
      "break",  "continue", "def", "class"};
  static const std::unordered_set<std::string> aug_ops = {
      "+=", "-=", "*=", "/=", "//=", "**=", "%=",
      "@=", "&=", "|=", "^=", ">>=", "<<="};

  const std::vector<Token>& toks = raw.tokens;
  Statement st;
  st.index = static_cast<int>(m.statements.size());
  st.indent = raw.indent;
  st.span = Span{toks.front().span.start_line, toks.front().span.start_col,
                 toks.back().span.end_line, toks.back().span.end_col};
  const size_t calls_before = m.calls.size();
  const int idx = st.index;

  // locate top-level assignment operators
  std::vector<size_t> eqs;
  size_t aug = toks.size();
  {
    int depth = 0;
    for (size_t i = 0; i < toks.size(); ++i) {
      depth += bracket_delta(toks[i]);
      if (depth != 0 || toks[i].kind != TokKind::Op) continue;
      if (toks[i].text == "=") eqs.push_back(i);
      else if (aug == toks.size() && aug_ops.count(toks[i].text)) aug = i;
    }
  }

  ExprParser parser(m, lines, toks, idx);
  if (aug < toks.size() && (eqs.empty() || aug < eqs.front())) {
    st.kind = StmtKind::Assign;
    parse_targets(m, lines, toks, 0, aug, st, true, idx);
    parser.soup(aug + 1, toks.size());
  } else if (!eqs.empty()) {
    st.kind = StmtKind::Assign;
    size_t start = 0;
    for (size_t e : eqs) {
      parse_targets(m, lines, toks, start, e, st, false, idx);
      start = e + 1;
    }
    parser.soup(start, toks.size());
  } else if (toks.front().kind == TokKind::Keyword) {
    const std::string& kw = toks.front().text;
    if (kw == "None" || kw == "True" || kw == "False" || kw == "not" ||
        kw == "await" || kw == "lambda") {
      st.kind = StmtKind::Expr;
      parser.soup(0, toks.size());
    } else {
      st.kind = StmtKind::Other;
      size_t lo = 1;
      bool scan = no_scan.count(kw) == 0;
      if (kw == "async") {
        if (toks.size() > 1 && toks[1].kind == TokKind::Keyword &&
            (toks[1].text == "def" || toks[1].text == "class"))
          scan = false;
        else
          lo = 2;
      }
      if (scan) parser.soup(lo, toks.size());
    }
  } else {
    st.kind = StmtKind::Expr;
    parser.soup(0, toks.size());
  }

  for (size_t c = calls_before; c < m.calls.size(); ++c)
    st.rhs_calls.push_back(static_cast<int>(c));
  m.statements.push_back(std::move(st));
}

}  // namespace parse_detail

/// Parses a unit into statements, calls and name reads.
inline ProgramModel build_model(const SourceUnit& unit) {
  ProgramModel m;
  m.unit_id = unit.id;
  m.source_hash = unit_hash(unit);
  for (const LogicalLine& ll : lex(unit.lines)) {
    std::vector<parse_detail::RawStmt> raw;
    parse_detail::split_range(ll.tokens, 0, ll.tokens.size(), ll.indent, raw);
    for (const auto& rs : raw)
      if (!rs.tokens.empty()) parse_detail::parse_statement(m, unit.lines, rs);
  }
  return m;
}

}  // namespace leaklint
