#pragma once

#include <cctype>
#include <cstring>
#include <string>
#include <unordered_set>
#include <vector>

#include "leaklint/errors.hpp"
#include "leaklint/span.hpp"

namespace leaklint {

enum class TokKind { Name, Keyword, Number, Str, Op };

struct Token {
  TokKind kind = TokKind::Op;
  std::string text;
  Span span;
};

/// One logical source line: physical lines joined across bracket pairs,
/// backslash continuations and multi-line strings. Comments and blank
/// lines are already stripped.
struct LogicalLine {
  std::string indent;  // whitespace prefix of the first physical line
  std::vector<Token> tokens;
};

namespace lex_detail {

inline bool ident_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c >= 0x80;
}

inline bool ident_cont(unsigned char c) {
  return std::isalnum(c) || c == '_' || c >= 0x80;
}

inline bool is_keyword(const std::string& s) {
  static const std::unordered_set<std::string> kw = {
      "False",  "None",   "True",    "and",      "as",       "assert",
      "async",  "await",  "break",   "class",    "continue", "def",
      "del",    "elif",   "else",    "except",   "finally",  "for",
      "from",   "global", "if",      "import",   "in",       "is",
      "lambda", "nonlocal", "not",   "or",       "pass",     "raise",
      "return", "try",    "while",   "with",     "yield"};
  return kw.count(s) > 0;
}

inline bool string_prefix(const std::string& s) {
  if (s.empty() || s.size() > 3) return false;
  for (char c : s) {
    char l = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (l != 'r' && l != 'b' && l != 'u' && l != 'f') return false;
  }
  return true;
}

/// Consumes a string literal starting at lines[li][col] (the quote).
/// Advances li/col past the closing quote and returns the literal text
/// verbatim, with '\n' joining physical lines.
inline std::string scan_string(const std::vector<std::string>& lines,
                               size_t& li, size_t& col) {
  const size_t start_line = li;
  char q = lines[li][col];
  bool triple = lines[li].compare(col, 3, std::string(3, q)) == 0;
  std::string text;
  auto unterminated = [&]() {
    return ParseError(static_cast<int>(start_line) + 1, "unterminated string");
  };
  if (triple) {
    text += std::string(3, q);
    col += 3;
    while (true) {
      if (li >= lines.size()) throw unterminated();
      const std::string& line = lines[li];
      if (col >= line.size()) {
        text += '\n';
        ++li;
        col = 0;
        if (li >= lines.size()) throw unterminated();
        continue;
      }
      char c = line[col];
      if (c == '\\') {
        text += c;
        ++col;
        if (col < line.size()) {
          text += line[col];
          ++col;
        }
        continue;
      }
      if (c == q && line.compare(col, 3, std::string(3, q)) == 0) {
        text += std::string(3, q);
        col += 3;
        return text;
      }
      text += c;
      ++col;
    }
  }
  text += q;
  ++col;
  while (true) {
    if (li >= lines.size()) throw unterminated();
    const std::string& line = lines[li];
    if (col >= line.size()) throw unterminated();
    char c = line[col];
    if (c == '\\') {
      text += c;
      ++col;
      if (col < line.size()) {
        text += line[col];
        ++col;
      } else {
        text += '\n';
        ++li;
        col = 0;
      }
      continue;
    }
    if (c == q) {
      text += c;
      ++col;
      return text;
    }
    text += c;
    ++col;
  }
}

inline size_t scan_number(const std::string& line, size_t col) {
  size_t end = col;
  bool based = false;
  if (line[end] == '0' && end + 1 < line.size() &&
      std::strchr("xXbBoO", line[end + 1]) != nullptr) {
    based = true;
    end += 2;
  }
  while (end < line.size()) {
    char c = line[end];
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.') {
      ++end;
      continue;
    }
    if ((c == '+' || c == '-') && !based && end > col &&
        (line[end - 1] == 'e' || line[end - 1] == 'E')) {
      ++end;
      continue;
    }
    break;
  }
  return end;
}

inline size_t match_op(const std::string& line, size_t col) {
  static const char* three[] = {"**=", "//=", ">>=", "<<=", "..."};
  static const char* two[] = {"**", "//", ">>", "<<", "<=", ">=", "==", "!=",
                              "->", ":=", "+=", "-=", "*=", "/=", "%=", "@=",
                              "&=", "|=", "^="};
  for (const char* op : three)
    if (line.compare(col, 3, op) == 0) return 3;
  for (const char* op : two)
    if (line.compare(col, 2, op) == 0) return 2;
  if (std::strchr("+-*/%@&|^~<>()[]{},:.;=", line[col]) != nullptr) return 1;
  return 0;
}

}  // namespace lex_detail

/// Splits source lines into logical lines of tokens.
inline std::vector<LogicalLine> lex(const std::vector<std::string>& lines) {
  using namespace lex_detail;
  std::vector<LogicalLine> out;
  LogicalLine cur;
  bool open_logical = false;
  std::vector<char> brackets;
  size_t li = 0;
  size_t col = 0;

  auto flush = [&]() {
    if (!cur.tokens.empty()) out.push_back(std::move(cur));
    cur = LogicalLine{};
    open_logical = false;
  };

  while (li < lines.size()) {
    if (!open_logical) {
      const std::string& line = lines[li];
      size_t ws = 0;
      while (ws < line.size() && (line[ws] == ' ' || line[ws] == '\t')) ++ws;
      bool blank = true;
      for (size_t k = ws; k < line.size(); ++k) {
        if (line[k] == '#') break;
        if (!std::isspace(static_cast<unsigned char>(line[k]))) {
          blank = false;
          break;
        }
      }
      if (blank) {
        ++li;
        continue;
      }
      cur.indent = line.substr(0, ws);
      open_logical = true;
      col = ws;
    }

    bool continuation = false;
    while (true) {
      if (li >= lines.size()) break;
      const std::string& line = lines[li];
      if (col >= line.size()) break;
      char c = line[col];
      if (c == ' ' || c == '\t' || c == '\r') {
        ++col;
        continue;
      }
      if (c == '#') {
        col = line.size();
        break;
      }
      if (c == '\\') {
        size_t rest = col + 1;
        while (rest < line.size() && (line[rest] == '\r' || line[rest] == ' '))
          ++rest;
        if (rest >= line.size()) {
          continuation = true;
          col = line.size();
          break;
        }
        throw ParseError(static_cast<int>(li) + 1, "unexpected '\\'");
      }
      const int tl = static_cast<int>(li) + 1;
      const int tc = static_cast<int>(col);
      if (c == '\'' || c == '"') {
        std::string text = scan_string(lines, li, col);
        cur.tokens.push_back(Token{TokKind::Str, std::move(text),
                                   Span{tl, tc, static_cast<int>(li) + 1,
                                        static_cast<int>(col)}});
        continue;
      }
      if (ident_start(static_cast<unsigned char>(c))) {
        size_t end = col;
        while (end < line.size() &&
               ident_cont(static_cast<unsigned char>(line[end])))
          ++end;
        std::string word = line.substr(col, end - col);
        if (end < line.size() && (line[end] == '\'' || line[end] == '"') &&
            string_prefix(word)) {
          col = end;
          std::string text = scan_string(lines, li, col);
          cur.tokens.push_back(Token{TokKind::Str, word + text,
                                     Span{tl, tc, static_cast<int>(li) + 1,
                                          static_cast<int>(col)}});
          continue;
        }
        col = end;
        TokKind kind = is_keyword(word) ? TokKind::Keyword : TokKind::Name;
        cur.tokens.push_back(
            Token{kind, std::move(word), Span{tl, tc, tl, static_cast<int>(col)}});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) ||
          (c == '.' && col + 1 < line.size() &&
           std::isdigit(static_cast<unsigned char>(line[col + 1])))) {
        size_t end = scan_number(line, col);
        cur.tokens.push_back(Token{TokKind::Number, line.substr(col, end - col),
                                   Span{tl, tc, tl, static_cast<int>(end)}});
        col = end;
        continue;
      }
      size_t oplen = match_op(line, col);
      if (oplen == 0)
        throw ParseError(tl, std::string("unexpected character '") + c + "'");
      std::string op = line.substr(col, oplen);
      if (op == "(" || op == "[" || op == "{") brackets.push_back(op[0]);
      if (op == ")" || op == "]" || op == "}") {
        static const std::string pairs = "()[]{}";
        if (brackets.empty() ||
            pairs.find(brackets.back()) + 1 != pairs.find(op[0]))
          throw ParseError(tl, "mismatched '" + op + "'");
        brackets.pop_back();
      }
      col += oplen;
      cur.tokens.push_back(
          Token{TokKind::Op, std::move(op), Span{tl, tc, tl, static_cast<int>(col)}});
    }

    ++li;
    col = 0;
    if (open_logical && (continuation || !brackets.empty()) &&
        li < lines.size())
      continue;
    if (!brackets.empty())
      throw ParseError(static_cast<int>(lines.size()), "unclosed bracket");
    flush();
  }
  if (!brackets.empty())
    throw ParseError(static_cast<int>(lines.size()), "unclosed bracket");
  flush();
  return out;
}

}  // namespace leaklint
