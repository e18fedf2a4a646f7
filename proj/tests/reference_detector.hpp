// Independent re-implementation of the leak rules for straight-line
// programs (one single-line statement per line, no indentation). Works
// directly on raw line text with per-name taint sets, so it shares no
// parsing or dataflow machinery with the library under test.
#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "leaklint/detect.hpp"
#include "leaklint/taxonomy.hpp"

namespace refdet {

struct Finding {
  leaklint::LeakKind kind;
  leaklint::LeakCause cause;
  int line = 0;

  bool operator<(const Finding& o) const {
    if (line != o.line) return line < o.line;
    if (kind != o.kind) return kind < o.kind;
    return cause < o.cause;
  }
  bool operator==(const Finding& o) const {
    return kind == o.kind && cause == o.cause && line == o.line;
  }
};

namespace detail {

inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

inline bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

// blanks out string literals and drops trailing comments
inline std::string sanitize(const std::string& line) {
  std::string out = line;
  size_t i = 0;
  while (i < out.size()) {
    char c = out[i];
    if (c == '\'' || c == '"') {
      size_t j = i + 1;
      while (j < out.size() && out[j] != c) ++j;
      for (size_t k = i; k <= j && k < out.size(); ++k) out[k] = ' ';
      i = j + 1;
      continue;
    }
    if (c == '#') {
      out.resize(i);
      break;
    }
    ++i;
  }
  return out;
}

struct RefCall {
  std::string tail;
  std::string recv;        // simple-name receiver, if any
  bool ctor_recv = false;  // receiver is a same-line `expr()` chain
  std::string ctor_name;
  int recv_open = -1;  // '(' of the receiver call when ctor_recv
  int open = -1;       // offset of this call's '('
  int close = -1;
};

inline int match_paren(const std::string& s, int open) {
  int depth = 0;
  for (size_t i = open; i < s.size(); ++i) {
    if (s[i] == '(' || s[i] == '[') ++depth;
    if (s[i] == ')' || s[i] == ']') {
      --depth;
      if (depth == 0) return static_cast<int>(i);
    }
  }
  return -1;
}

inline std::vector<RefCall> find_calls(const std::string& s) {
  std::vector<RefCall> calls;
  size_t i = 0;
  while (i < s.size()) {
    if (!ident_char(s[i]) || digit(s[i])) {
      while (i < s.size() && ident_char(s[i])) ++i;
      if (i < s.size() && !ident_char(s[i])) ++i;
      continue;
    }
    size_t start = i;
    while (i < s.size() && ident_char(s[i])) ++i;
    size_t j = i;
    while (j < s.size() && s[j] == ' ') ++j;
    if (j >= s.size() || s[j] != '(') continue;

    RefCall c;
    c.tail = s.substr(start, i - start);
    c.open = static_cast<int>(j);
    c.close = match_paren(s, c.open);
    // what sits before the dot, if the callee is an attribute
    int k = static_cast<int>(start) - 1;
    while (k >= 0 && s[k] == ' ') --k;
    if (k >= 0 && s[k] == '.') {
      --k;
      while (k >= 0 && s[k] == ' ') --k;
      if (k >= 0 && ident_char(s[k])) {
        int e = k;
        while (k >= 0 && ident_char(s[k])) --k;
        c.recv = s.substr(k + 1, e - k);
      } else if (k >= 0 && s[k] == ')') {
        // receiver of the form expr(...).tail — resolve the chained call
        int depth = 0;
        int q = k;
        for (; q >= 0; --q) {
          if (s[q] == ')') ++depth;
          if (s[q] == '(') {
            --depth;
            if (depth == 0) break;
          }
        }
        int e = q - 1;
        while (e >= 0 && s[e] == ' ') --e;
        int b = e;
        while (b >= 0 && ident_char(s[b])) --b;
        if (e >= 0 && b < e) {
          c.ctor_recv = true;
          c.ctor_name = s.substr(b + 1, e - b);
          c.recv_open = q;
        }
      }
    }
    calls.push_back(std::move(c));
  }
  return calls;
}

// identifiers that count as reads: not an attribute name, not a kwarg name
inline std::vector<std::pair<std::string, int>> find_reads(const std::string& s,
                                                           int from, int to) {
  std::vector<std::pair<std::string, int>> out;
  int i = from;
  while (i < to) {
    char c = s[i];
    if (!ident_char(c) || digit(c)) {
      while (i < to && ident_char(s[i])) ++i;
      if (i < to && !ident_char(s[i])) ++i;
      continue;
    }
    int start = i;
    while (i < to && ident_char(s[i])) ++i;
    int before = start - 1;
    while (before >= from && s[before] == ' ') --before;
    if (before >= from && s[before] == '.') continue;
    int after = i;
    while (after < to && s[after] == ' ') ++after;
    if (after < to && s[after] == '=' &&
        (after + 1 >= to || s[after + 1] != '=')) {
      // keyword argument or assignment target, not a read
      continue;
    }
    out.push_back({s.substr(start, i - start), start});
  }
  return out;
}

struct RefStmt {
  int line = 0;  // 1-based
  std::string text;
  std::vector<std::string> lhs;
  bool partial = false;
  int rhs_from = 0;
  std::vector<RefCall> calls;
};

using Marker = std::pair<std::string, int>;  // name, version

}  // namespace detail

inline std::vector<Finding> analyze(const std::vector<std::string>& raw,
                                    const leaklint::Taxonomy& tax) {
  using namespace detail;
  using leaklint::LeakCause;
  using leaklint::LeakKind;
  using leaklint::Role;

  // 1. statement list
  std::vector<RefStmt> stmts;
  for (size_t li = 0; li < raw.size(); ++li) {
    std::string s = sanitize(raw[li]);
    size_t first = s.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (s.compare(first, 7, "import ") == 0 || s.compare(first, 5, "from ") == 0)
      continue;

    RefStmt st;
    st.line = static_cast<int>(li) + 1;
    st.text = s;

    // top-level assignment split
    int depth = 0;
    int eq = -1;
    bool augmented = false;
    for (size_t i = 0; i < s.size(); ++i) {
      char c = s[i];
      if (c == '(' || c == '[') ++depth;
      if (c == ')' || c == ']') --depth;
      if (depth == 0 && c == '=' && (i + 1 >= s.size() || s[i + 1] != '=') &&
          (i == 0 || (s[i - 1] != '=' && s[i - 1] != '!' && s[i - 1] != '<' &&
                      s[i - 1] != '>'))) {
        eq = static_cast<int>(i);
        if (i > 0 && std::string("+-*/%&|^").find(s[i - 1]) != std::string::npos)
          augmented = true;
        break;
      }
    }
    if (eq >= 0) {
      std::string target = s.substr(0, augmented ? eq - 1 : eq);
      st.rhs_from = eq + 1;
      st.partial = augmented;
      // split targets on top-level commas
      int d = 0;
      size_t piece = 0;
      auto flush = [&](size_t endp) {
        std::string t = target.substr(piece, endp - piece);
        size_t b = t.find_first_not_of(" ()*");
        if (b == std::string::npos) return;
        size_t e = b;
        while (e < t.size() && ident_char(t[e])) ++e;
        std::string name = t.substr(b, e - b);
        if (name.empty()) return;
        st.lhs.push_back(name);
        size_t rest = t.find_first_not_of(" )", e);
        if (rest != std::string::npos) st.partial = true;
      };
      for (size_t i = 0; i < target.size(); ++i) {
        if (target[i] == '(' || target[i] == '[') ++d;
        if (target[i] == ')' || target[i] == ']') --d;
        if (d == 0 && target[i] == ',') {
          flush(i);
          piece = i + 1;
        }
      }
      flush(target.size());
    }
    st.calls = find_calls(s);
    // calls inside the target region belong to subscript indexes; drop them
    if (eq >= 0) {
      st.calls.erase(std::remove_if(st.calls.begin(), st.calls.end(),
                                    [&](const RefCall& c) {
                                      return c.open < eq;
                                    }),
                     st.calls.end());
    }
    stmts.push_back(std::move(st));
  }

  // 2. forward taint propagation with per-statement snapshots
  std::map<std::string, std::set<int>> influenced;
  std::map<std::string, std::set<Marker>> anc;
  std::map<std::string, int> ver;

  struct Snapshot {
    std::map<std::string, std::set<int>> influenced;
    std::map<std::string, std::set<Marker>> ancplus;  // anc plus own marker
    std::map<std::string, int> ver;
  };
  std::vector<Snapshot> snaps(stmts.size());

  for (size_t k = 0; k < stmts.size(); ++k) {
    const RefStmt& st = stmts[k];
    auto reads = find_reads(st.text, st.partial ? 0 : st.rhs_from,
                            static_cast<int>(st.text.size()));
    // snapshot the state every read sees before this statement binds
    for (const auto& [name, off] : reads) {
      snaps[k].influenced[name] = influenced[name];
      std::set<Marker> plus = anc[name];
      plus.insert({name, ver[name]});
      snaps[k].ancplus[name] = plus;
      snaps[k].ver[name] = ver[name];
    }

    std::set<int> contrib{static_cast<int>(k)};
    std::set<Marker> markers;
    for (const auto& [name, off] : reads) {
      contrib.insert(influenced[name].begin(), influenced[name].end());
      markers.insert({name, ver[name]});
      markers.insert(anc[name].begin(), anc[name].end());
    }
    for (const std::string& l : st.lhs) {
      if (st.partial) {
        influenced[l].insert(contrib.begin(), contrib.end());
        std::set<Marker> merged = anc[l];
        merged.insert({l, ver[l]});
        merged.insert(markers.begin(), markers.end());
        ++ver[l];
        anc[l] = std::move(merged);
      } else {
        influenced[l] = contrib;
        ++ver[l];
        anc[l] = markers;
      }
    }
  }

  auto call_reads = [&](int k, const RefCall& c) {
    return find_reads(stmts[k].text, c.open + 1,
                      c.close >= 0 ? c.close
                                   : static_cast<int>(stmts[k].text.size()));
  };

  struct CallRef {
    int stmt;
    const RefCall* call;
  };
  std::vector<CallRef> samples, splits, fits, transforms, evals;
  std::vector<CallRef> marker_ctors;
  for (size_t k = 0; k < stmts.size(); ++k)
    for (const RefCall& c : stmts[k].calls) {
      Role role = tax.classify(c.tail);
      CallRef ref{static_cast<int>(k), &c};
      if (role == Role::Sample) samples.push_back(ref);
      if (role == Role::Split) splits.push_back(ref);
      if (role == Role::Fit || role == Role::FitTransform) fits.push_back(ref);
      if (role == Role::Transform || role == Role::FitTransform)
        transforms.push_back(ref);
      if (role == Role::Evaluate) evals.push_back(ref);
      if (tax.is_transformer_ctor(c.tail)) marker_ctors.push_back(ref);
    }

  std::vector<Finding> out;

  // overlap: sampled data reaches a later split
  for (const CallRef& s : samples) {
    const CallRef* hit = nullptr;
    for (const CallRef& p : splits) {
      if (p.stmt <= s.stmt) continue;
      if (hit && (p.stmt > hit->stmt ||
                  (p.stmt == hit->stmt && p.call->open > hit->call->open)))
        continue;
      for (const auto& [name, off] : call_reads(p.stmt, *p.call)) {
        const auto& infl = snaps[p.stmt].influenced[name];
        if (infl.count(s.stmt)) {
          hit = &p;
          break;
        }
      }
    }
    if (hit)
      out.push_back({LeakKind::Overlap, LeakCause::SplitBeforeSample,
                     stmts[s.stmt].line});
  }

  // preprocessing
  std::set<std::pair<long long, long long>> no_split_seen;
  for (const CallRef& f : fits) {
    // transformer-constructor occurrences in the receiver's history,
    // ordered like call ids: (stmt, offset of '(')
    std::vector<std::pair<long long, long long>> found;
    std::set<int> recv_infl;
    if (f.call->ctor_recv) {
      if (tax.is_transformer_ctor(f.call->ctor_name))
        found.push_back({f.stmt, f.call->recv_open});
      int rclose = match_paren(stmts[f.stmt].text, f.call->recv_open);
      for (const auto& [name, off] :
           find_reads(stmts[f.stmt].text, f.call->recv_open + 1,
                      rclose >= 0 ? rclose : f.call->recv_open + 1)) {
        const auto& infl = snaps[f.stmt].influenced[name];
        recv_infl.insert(infl.begin(), infl.end());
      }
    }
    if (!f.call->recv.empty()) {
      const auto& infl = snaps[f.stmt].influenced[f.call->recv];
      recv_infl.insert(infl.begin(), infl.end());
    }
    for (const CallRef& mc : marker_ctors)
      if (recv_infl.count(mc.stmt)) found.push_back({mc.stmt, mc.call->open});
    std::sort(found.begin(), found.end());
    bool has_marker = !found.empty();

    bool feeds_transform = false;
    if (!has_marker) {
      for (const CallRef& t : transforms) {
        if (t.stmt < f.stmt || t.call == f.call) continue;
        if (t.call->ctor_recv && t.stmt == f.stmt &&
            t.call->recv_open == f.call->open)
          feeds_transform = true;  // chained fit(...).transform(...)
        std::vector<std::string> probe;
        if (!t.call->recv.empty()) probe.push_back(t.call->recv);
        for (const auto& [name, off] : call_reads(t.stmt, *t.call))
          probe.push_back(name);
        for (const std::string& name : probe)
          if (snaps[t.stmt].influenced[name].count(f.stmt))
            feeds_transform = true;
        if (feeds_transform) break;
      }
      if (!feeds_transform) continue;
    }

    // split whose arguments derive from the fit statement or its inputs
    std::set<Marker> fit_arg_markers;
    for (const auto& [name, off] : call_reads(f.stmt, *f.call))
      fit_arg_markers.insert({name, snaps[f.stmt].ver[name]});

    const CallRef* hit = nullptr;
    for (const CallRef& p : splits) {
      if (p.stmt <= f.stmt) continue;
      if (hit && (p.stmt > hit->stmt ||
                  (p.stmt == hit->stmt && p.call->open > hit->call->open)))
        continue;
      for (const auto& [name, off] : call_reads(p.stmt, *p.call)) {
        bool derived = snaps[p.stmt].influenced[name].count(f.stmt) > 0;
        if (!derived)
          for (const Marker& mk : snaps[p.stmt].ancplus[name])
            if (fit_arg_markers.count(mk)) derived = true;
        if (derived) {
          hit = &p;
          break;
        }
      }
    }

    if (hit) {
      out.push_back({LeakKind::Preprocessing, LeakCause::SplitAfterTransform,
                     stmts[f.stmt].line});
      continue;
    }
    if (!splits.empty()) continue;

    std::pair<long long, long long> key =
        has_marker ? found.front()
                   : std::pair<long long, long long>{(1ll << 32) + f.stmt,
                                                     f.call->open};
    if (no_split_seen.count(key)) continue;
    no_split_seen.insert(key);
    out.push_back(
        {LeakKind::Preprocessing, LeakCause::NoSplit, stmts[f.stmt].line});
  }

  // repeated evaluation of a test-marked variable
  std::vector<std::string> test_names;
  for (size_t k = 0; k < stmts.size(); ++k) {
    const RefStmt& st = stmts[k];
    for (const auto& [name, off] :
         find_reads(st.text, st.partial ? 0 : st.rhs_from,
                    static_cast<int>(st.text.size())))
      if (tax.is_test_name(name) &&
          std::find(test_names.begin(), test_names.end(), name) ==
              test_names.end())
        test_names.push_back(name);
  }

  for (const std::string& name : test_names) {
    struct Usage {
      int stmt;
      const RefCall* call;
    };
    std::vector<Usage> usages;
    for (size_t k = 0; k < stmts.size(); ++k) {
      const RefStmt& st = stmts[k];
      for (const auto& [rd, off] :
           find_reads(st.text, st.partial ? 0 : st.rhs_from,
                      static_cast<int>(st.text.size()))) {
        if (rd != name) continue;
        const RefCall* inner = nullptr;
        for (const CallRef& e : evals) {
          if (e.stmt != static_cast<int>(k)) continue;
          if (off <= e.call->open ||
              (e.call->close >= 0 && off >= e.call->close))
            continue;
          if (!inner || e.call->open > inner->open) inner = e.call;
        }
        if (!inner) continue;
        bool dup = false;
        for (const Usage& u : usages)
          if (u.call == inner) dup = true;
        if (!dup) usages.push_back({static_cast<int>(k), inner});
      }
    }
    std::stable_sort(usages.begin(), usages.end(),
                     [](const Usage& a, const Usage& b) {
                       if (a.stmt != b.stmt) return a.stmt < b.stmt;
                       return a.call->open < b.call->open;
                     });

    struct Chain {
      Marker root;
      std::vector<Usage> uses;
    };
    std::vector<Chain> chains;
    for (const Usage& u : usages) {
      const auto& plus = snaps[u.stmt].ancplus[name];
      bool placed = false;
      for (Chain& ch : chains)
        if (plus.count(ch.root)) {
          ch.uses.push_back(u);
          placed = true;
          break;
        }
      if (!placed) chains.push_back({{name, snaps[u.stmt].ver[name]}, {u}});
    }
    for (const Chain& ch : chains)
      if (ch.uses.size() >= 2)
        out.push_back({LeakKind::MultiTest, LeakCause::RepeatedEvaluation,
                       stmts[ch.uses.front().stmt].line});
  }

  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace refdet
