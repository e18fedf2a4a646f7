#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "leaklint/detect.hpp"
#include "leaklint/errors.hpp"
#include "leaklint/model.hpp"
#include "leaklint/report.hpp"

namespace leaklint {

struct ExpectedInstance {
  LeakKind kind = LeakKind::Overlap;
  LeakCause cause = LeakCause::SplitBeforeSample;
  int line = 0;
};

struct KindCounts {
  int tp = 0;
  int fp = 0;
  int fn = 0;
};

struct FileScore {
  std::string path;
  bool matched = true;
  KindCounts by_kind[3];
  KindCounts total() const {
    KindCounts t;
    for (const auto& k : by_kind) {
      t.tp += k.tp;
      t.fp += k.fp;
      t.fn += k.fn;
    }
    return t;
  }
};

struct CorpusScore {
  std::vector<FileScore> files;
  KindCounts by_kind[3];
  int files_matched = 0;
  KindCounts total() const {
    KindCounts t;
    for (const auto& k : by_kind) {
      t.tp += k.tp;
      t.fp += k.fp;
      t.fn += k.fn;
    }
    return t;
  }
};

/// Reads the `<file>.expected` sidecar: one `kind cause line [sinks...]`
/// entry per line, `#` starts a comment.
inline std::vector<ExpectedInstance> load_sidecar(const std::string& source_path) {
  const std::string path = source_path + ".expected";
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingSidecar(path + ": sidecar not found");
  std::vector<ExpectedInstance> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream row(line);
    std::string kind, cause;
    int src = 0;
    if (!(row >> kind)) continue;
    if (!(row >> cause >> src))
      throw ConfigParseError(lineno, path + ": expected 'kind cause line'");
    ExpectedInstance e;
    if (kind == "overlap") e.kind = LeakKind::Overlap;
    else if (kind == "preprocessing") e.kind = LeakKind::Preprocessing;
    else if (kind == "multitest") e.kind = LeakKind::MultiTest;
    else throw ConfigParseError(lineno, path + ": unknown kind '" + kind + "'");
    if (cause == "SplitBeforeSample") e.cause = LeakCause::SplitBeforeSample;
    else if (cause == "SplitAfterTransform") e.cause = LeakCause::SplitAfterTransform;
    else if (cause == "NoSplit") e.cause = LeakCause::NoSplit;
    else if (cause == "RepeatedEvaluation") e.cause = LeakCause::RepeatedEvaluation;
    else throw ConfigParseError(lineno, path + ": unknown cause '" + cause + "'");
    e.line = src;
    out.push_back(e);
  }
  return out;
}

/// Multiset match of detected against annotated instances on the triple
/// (kind, cause, source line).
inline FileScore score_file(const std::string& path, const ProgramModel& m,
                            const std::vector<LeakageInstance>& detected,
                            const std::vector<ExpectedInstance>& expected) {
  FileScore score;
  score.path = path;
  std::vector<bool> used(expected.size(), false);
  for (const auto& inst : detected) {
    const int line = source_line_of(m, inst);
    bool hit = false;
    for (size_t i = 0; i < expected.size(); ++i) {
      if (used[i]) continue;
      if (expected[i].kind == inst.kind && expected[i].cause == inst.cause &&
          expected[i].line == line) {
        used[i] = true;
        hit = true;
        break;
      }
    }
    auto& k = score.by_kind[static_cast<int>(inst.kind)];
    if (hit) ++k.tp;
    else ++k.fp;
  }
  for (size_t i = 0; i < expected.size(); ++i)
    if (!used[i]) ++score.by_kind[static_cast<int>(expected[i].kind)].fn;
  const KindCounts t = score.total();
  score.matched = t.fp == 0 && t.fn == 0;
  return score;
}

inline void accumulate(CorpusScore& total, const FileScore& file) {
  total.files.push_back(file);
  for (int k = 0; k < 3; ++k) {
    total.by_kind[k].tp += file.by_kind[k].tp;
    total.by_kind[k].fp += file.by_kind[k].fp;
    total.by_kind[k].fn += file.by_kind[k].fn;
  }
  if (file.matched) ++total.files_matched;
}

}  // namespace leaklint
