#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "leaklint/detect.hpp"
#include "leaklint/errors.hpp"
#include "leaklint/model.hpp"
#include "leaklint/source_unit.hpp"

namespace leaklint {

enum class EditKind { DeleteStmt, InsertLine, RenameToken };

struct Edit {
  EditKind kind = EditKind::InsertLine;
  int first_line = 0;  // DeleteStmt: inclusive physical range
  int last_line = 0;
  int anchor_line = 0;  // InsertLine: new line goes above this line
  Span target{};        // RenameToken
  std::string text;     // inserted line or replacement token
};

struct Patch {
  LeakKind kind = LeakKind::Overlap;
  LeakCause cause = LeakCause::SplitBeforeSample;
  int source_stmt = -1;
  std::uint64_t base_hash = 0;
  std::vector<Edit> edits;
  std::string preview;
};

inline constexpr const char* kSplitTodo =
    "#TODO: Check the arguments provided to the call to split.";

namespace fix_detail {

inline std::string strip_indent(const std::string& line) {
  size_t i = 0;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  return line.substr(i);
}

inline void check_exclusive_lines(const ProgramModel& m, int stmt) {
  const Span& s = m.statements[stmt].span;
  for (const auto& other : m.statements) {
    if (other.index == stmt) continue;
    if (other.span.start_line <= s.end_line &&
        other.span.end_line >= s.start_line)
      throw NotFixable("statement on lines " + std::to_string(s.start_line) +
                       ".." + std::to_string(s.end_line) +
                       " shares a physical line with another statement");
  }
}

}  // namespace fix_detail

/// Computes a unified diff of two line vectors with three context lines.
inline std::string unified_diff(const std::vector<std::string>& a,
                                const std::vector<std::string>& b,
                                const std::string& path) {
  const size_t n = a.size(), m = b.size();
  std::vector<std::vector<int>> lcs(n + 1, std::vector<int>(m + 1, 0));
  for (size_t i = n; i-- > 0;)
    for (size_t j = m; j-- > 0;)
      lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1
                               : std::max(lcs[i + 1][j], lcs[i][j + 1]);
  struct Row {
    char op;  // ' ', '-', '+'
    size_t ai, bi;
  };
  std::vector<Row> rows;
  size_t i = 0, j = 0;
  while (i < n && j < m) {
    if (a[i] == b[j]) {
      rows.push_back({' ', i, j});
      ++i, ++j;
    } else if (lcs[i + 1][j] >= lcs[i][j + 1]) {
      rows.push_back({'-', i, j});
      ++i;
    } else {
      rows.push_back({'+', i, j});
      ++j;
    }
  }
  for (; i < n; ++i) rows.push_back({'-', i, j});
  for (; j < m; ++j) rows.push_back({'+', i, j});

  std::string out;
  if (rows.empty()) return out;
  out += "--- " + path + "\n";
  out += "+++ " + path + "\n";
  const int ctx = 3;
  size_t r = 0;
  while (r < rows.size()) {
    while (r < rows.size() && rows[r].op == ' ') ++r;
    if (r >= rows.size()) break;
    size_t lo = r >= static_cast<size_t>(ctx) ? r - ctx : 0;
    size_t hi = r;
    size_t run = r;
    while (run < rows.size()) {
      if (rows[run].op != ' ') {
        hi = run + 1;
        ++run;
        continue;
      }
      size_t gap = run;
      while (gap < rows.size() && rows[gap].op == ' ') ++gap;
      if (gap < rows.size() && gap - run <= static_cast<size_t>(2 * ctx)) {
        run = gap;
        continue;
      }
      break;
    }
    size_t end = std::min(rows.size(), hi + ctx);
    size_t a_start = rows[lo].ai + 1, b_start = rows[lo].bi + 1;
    size_t a_count = 0, b_count = 0;
    for (size_t k = lo; k < end; ++k) {
      if (rows[k].op != '+') ++a_count;
      if (rows[k].op != '-') ++b_count;
    }
    if (a_count == 0) a_start = rows[lo].ai;
    if (b_count == 0) b_start = rows[lo].bi;
    out += "@@ -" + std::to_string(a_start) + "," + std::to_string(a_count) +
           " +" + std::to_string(b_start) + "," + std::to_string(b_count) +
           " @@\n";
    for (size_t k = lo; k < end; ++k) {
      const Row& row = rows[k];
      out += row.op;
      out += row.op == '+' ? b[row.bi] : a[row.ai];
      out += '\n';
    }
    r = end;
  }
  return out;
}

/// Applies a patch to a copy of the unit. Renames first, then the
/// line-level edits from the bottom of the file upwards; inserts that
/// share an anchor keep their listed order.
inline SourceUnit apply_patch(const SourceUnit& unit, const Patch& patch) {
  if (unit_hash(unit) != patch.base_hash)
    throw SpanStale("unit no longer matches the patch base");
  SourceUnit out = unit;

  std::vector<const Edit*> renames;
  for (const auto& e : patch.edits)
    if (e.kind == EditKind::RenameToken) renames.push_back(&e);
  std::sort(renames.begin(), renames.end(), [](const Edit* a, const Edit* b) {
    if (a->target.start_line != b->target.start_line)
      return a->target.start_line > b->target.start_line;
    return a->target.start_col > b->target.start_col;
  });
  for (const Edit* e : renames) {
    const Span& s = e->target;
    if (s.start_line != s.end_line || s.start_line < 1 ||
        s.start_line > static_cast<int>(out.lines.size()))
      throw SpanStale("rename target is out of range");
    std::string& line = out.lines[s.start_line - 1];
    if (s.start_col < 0 || s.end_col > static_cast<int>(line.size()) ||
        s.start_col > s.end_col)
      throw SpanStale("rename target is out of range");
    line.replace(s.start_col, s.end_col - s.start_col, e->text);
  }

  // group line edits by key line, processed bottom-up
  std::map<int, std::pair<std::vector<std::string>, std::pair<int, int>>> byline;
  for (const auto& e : patch.edits) {
    if (e.kind == EditKind::InsertLine) {
      byline[e.anchor_line].first.push_back(e.text);
    } else if (e.kind == EditKind::DeleteStmt) {
      auto& slot = byline[e.first_line];
      slot.second = {e.first_line, e.last_line};
    }
  }
  for (auto it = byline.rbegin(); it != byline.rend(); ++it) {
    const int key = it->first;
    const auto& inserts = it->second.first;
    const auto [d1, d2] = it->second.second;
    if (d2 >= d1 && d1 > 0) {
      if (d1 < 1 || d2 > static_cast<int>(out.lines.size()))
        throw SpanStale("delete range is out of range");
      out.lines.erase(out.lines.begin() + (d1 - 1), out.lines.begin() + d2);
      const int removed = d2 - d1 + 1;
      std::vector<CellRange> next;
      for (CellRange c : out.cell_map) {
        if (c.last_line < d1) {
          next.push_back(c);
          continue;
        }
        if (c.first_line > d2) {
          c.first_line -= removed;
          c.last_line -= removed;
          next.push_back(c);
          continue;
        }
        int before = c.first_line <= d1 - 1
                         ? std::min(c.last_line, d1 - 1) - c.first_line + 1
                         : 0;
        int after = c.last_line >= d2 + 1
                        ? c.last_line - std::max(c.first_line, d2 + 1) + 1
                        : 0;
        int count = before + after;
        if (count == 0) continue;
        c.first_line = before > 0 ? c.first_line : d1;
        c.last_line = c.first_line + count - 1;
        next.push_back(c);
      }
      out.cell_map = std::move(next);
    }
    if (!inserts.empty()) {
      if (key < 1 || key > static_cast<int>(out.lines.size()) + 1)
        throw SpanStale("insert anchor is out of range");
      out.lines.insert(out.lines.begin() + (key - 1), inserts.begin(),
                       inserts.end());
      const int added = static_cast<int>(inserts.size());
      for (CellRange& c : out.cell_map) {
        if (key >= c.first_line && key <= c.last_line) {
          c.last_line += added;
        } else if (c.first_line > key) {
          c.first_line += added;
          c.last_line += added;
        }
      }
    }
  }
  return out;
}

/// Applies several patches in order, refusing overlapping line edits.
inline SourceUnit apply_patches(const SourceUnit& unit,
                                const std::vector<Patch>& patches) {
  std::vector<std::pair<int, int>> touched;
  for (const auto& p : patches)
    for (const auto& e : p.edits) {
      int lo = 0, hi = 0;
      if (e.kind == EditKind::DeleteStmt) {
        lo = e.first_line;
        hi = e.last_line;
      } else if (e.kind == EditKind::InsertLine) {
        lo = hi = e.anchor_line;
      } else {
        lo = hi = e.target.start_line;
      }
      for (const auto& [a, b] : touched)
        if (lo <= b && hi >= a)
          throw OverlapConflict("patches touch overlapping lines " +
                                std::to_string(lo) + ".." + std::to_string(hi));
      touched.push_back({lo, hi});
    }
  SourceUnit cur = unit;
  for (const auto& p : patches) {
    Patch adjusted = p;
    adjusted.base_hash = unit_hash(cur);
    cur = apply_patch(cur, adjusted);
  }
  return cur;
}

/// Builds the quick-fix patch for a detected instance.
inline Patch synthesize_fix(const LeakageInstance& inst, const ProgramModel& m,
                            const SourceUnit& unit) {
  if (m.source_hash != unit_hash(unit))
    throw StaleModel("model was built from a different revision of the unit");
  if (!inst.fixable) throw NotFixable("instance is not fixable");

  Patch patch;
  patch.kind = inst.kind;
  patch.cause = inst.cause;
  patch.source_stmt = inst.source_stmt;
  patch.base_hash = m.source_hash;

  auto insert = [&patch](int anchor, std::string text) {
    Edit e;
    e.kind = EditKind::InsertLine;
    e.anchor_line = anchor;
    e.text = std::move(text);
    patch.edits.push_back(std::move(e));
  };

  switch (inst.cause) {
    case LeakCause::SplitBeforeSample:
    case LeakCause::SplitAfterTransform: {
      fix_detail::check_exclusive_lines(m, inst.split_stmt);
      const Statement& split = m.statements[inst.split_stmt];
      const Statement& anchor = m.statements[inst.anchor_stmt];
      const int a1 = anchor.span.start_line;
      const int s1 = split.span.start_line;
      const int s2 = split.span.end_line;
      insert(a1, anchor.indent + kSplitTodo);
      insert(a1, anchor.indent + fix_detail::strip_indent(unit.lines[s1 - 1]));
      for (int l = s1 + 1; l <= s2; ++l) insert(a1, unit.lines[l - 1]);
      Edit del;
      del.kind = EditKind::DeleteStmt;
      del.first_line = s1;
      del.last_line = s2;
      patch.edits.push_back(std::move(del));
      break;
    }
    case LeakCause::NoSplit: {
      const Statement& fit = m.statements[inst.anchor_stmt];
      const int a1 = fit.span.start_line;
      insert(a1, fit.indent + kSplitTodo);
      insert(a1, fit.indent + "split()");
      break;
    }
    case LeakCause::RepeatedEvaluation: {
      const std::string& name = inst.variables.at(0);
      for (size_t i = 1; i < inst.usage_calls.size(); ++i) {
        const CallSite& call = m.calls[inst.usage_calls[i]];
        const std::string renamed = name + "_" + std::to_string(i);
        for (const NameRead* r : reads_in_args(m, call)) {
          if (r->name != name) continue;
          // a read nested in a more specific usage belongs to that usage
          bool inner_owns = false;
          for (int other : inst.usage_calls) {
            if (other == call.id) continue;
            const CallSite& oc = m.calls[other];
            if (oc.stmt_index == r->stmt_index &&
                span_contains(oc.args_span, r->span) &&
                span_contains(call.args_span, oc.args_span) &&
                !(oc.args_span == call.args_span))
              inner_owns = true;
          }
          if (inner_owns) continue;
          Edit e;
          e.kind = EditKind::RenameToken;
          e.target = r->span;
          e.text = renamed;
          patch.edits.push_back(std::move(e));
        }
        const Statement& st = m.statements[call.stmt_index];
        insert(st.span.start_line,
               st.indent + "#TODO: Load new test data into " + renamed + ".");
      }
      break;
    }
  }
  SourceUnit patched = apply_patch(unit, patch);
  patch.preview = unified_diff(unit.lines, patched.lines, unit.id);
  return patch;
}

}  // namespace leaklint
