#pragma once

#include <string>
#include <vector>

namespace leaklint {

/// Half-open source region. Lines are 1-based, columns 0-based,
/// end column exclusive.
struct Span {
  int start_line = 0;
  int start_col = 0;
  int end_line = 0;
  int end_col = 0;

  friend bool operator==(const Span& a, const Span& b) {
    return a.start_line == b.start_line && a.start_col == b.start_col &&
           a.end_line == b.end_line && a.end_col == b.end_col;
  }
};

inline bool span_before_or_at(int line_a, int col_a, int line_b, int col_b) {
  return line_a < line_b || (line_a == line_b && col_a <= col_b);
}

/// True when `inner` lies fully inside `outer`.
inline bool span_contains(const Span& outer, const Span& inner) {
  return span_before_or_at(outer.start_line, outer.start_col, inner.start_line,
                           inner.start_col) &&
         span_before_or_at(inner.end_line, inner.end_col, outer.end_line,
                           outer.end_col);
}

/// Extracts the exact source text a span denotes from 1-based `lines`.
inline std::string span_text(const std::vector<std::string>& lines,
                             const Span& s) {
  if (s.start_line < 1 || s.end_line > static_cast<int>(lines.size()) ||
      s.start_line > s.end_line) {
    return {};
  }
  if (s.start_line == s.end_line) {
    const std::string& line = lines[s.start_line - 1];
    int from = s.start_col;
    int to = s.end_col;
    if (from < 0 || to > static_cast<int>(line.size()) || from > to) return {};
    return line.substr(from, to - from);
  }
  std::string out = lines[s.start_line - 1].substr(s.start_col);
  for (int l = s.start_line + 1; l < s.end_line; ++l) {
    out += '\n';
    out += lines[l - 1];
  }
  out += '\n';
  out += lines[s.end_line - 1].substr(0, s.end_col);
  return out;
}

}  // namespace leaklint
