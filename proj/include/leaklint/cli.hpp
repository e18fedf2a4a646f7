#pragma once

#include <algorithm>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "leaklint/analyze.hpp"
#include "leaklint/corpus.hpp"
#include "leaklint/errors.hpp"
#include "leaklint/report.hpp"
#include "leaklint/source_unit.hpp"
#include "leaklint/taxonomy.hpp"
#include "leaklint/version.hpp"

namespace leaklint {

struct RunConfig {
  std::vector<std::string> paths;
  std::string format = "text";
  bool fix = false;
  bool dry_run = false;
  std::string config_path;
  bool corpus_mode = false;
  std::string fail_on = "any";
};

namespace cli {

namespace cli_detail {

inline bool is_source_file(const std::filesystem::path& p) {
  return p.extension() == ".py" || p.extension() == ".ipynb";
}

inline std::vector<std::string> collect_files(const std::vector<std::string>& paths,
                                              std::vector<std::string>& missing) {
  namespace fs = std::filesystem;
  std::vector<std::string> files;
  for (const auto& raw : paths) {
    fs::path p(raw);
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      std::vector<std::string> found;
      for (auto it = fs::recursive_directory_iterator(p, ec);
           it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec) break;
        if (it->is_regular_file(ec) && is_source_file(it->path()))
          found.push_back(it->path().generic_string());
      }
      std::sort(found.begin(), found.end());
      for (auto& f : found) files.push_back(std::move(f));
      continue;
    }
    if (fs::is_regular_file(p, ec)) {
      files.push_back(p.generic_string());
      continue;
    }
    missing.push_back(raw);
  }
  return files;
}

struct KindTally {
  int overlap = 0;
  int preprocessing = 0;
  int multitest = 0;
};

}  // namespace cli_detail

/// Runs the command line tool. Exit codes: 0 for no findings (or when
/// --fail-on none), 1 when leakage was found, 2 on operational errors.
inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Static detector for train/test data leakage in Python "
               "scripts and notebooks"};
  app.name(std::string(kToolName));
  app.add_option("paths", cfg.paths, "Files or directories to analyze")
      ->required();
  app.add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_flag("--fix", cfg.fix, "Apply quick fixes in place");
  app.add_flag("--dry-run", cfg.dry_run,
               "Show the fixes as diffs without writing files");
  app.add_option("--config", cfg.config_path, "Taxonomy override file");
  app.add_flag("--corpus", cfg.corpus_mode,
               "Score files against their .expected sidecars");
  app.add_option("--fail-on", cfg.fail_on, "When to exit nonzero")
      ->check(CLI::IsMember({"any", "none"}))
      ->capture_default_str();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "leaklint: " << e.what() << "\n";
    return 2;
  }

  if (cfg.dry_run) cfg.fix = true;
  if (cfg.fix && cfg.corpus_mode) {
    err << "leaklint: --fix and --corpus cannot be combined\n";
    return 2;
  }

  Taxonomy tax;
  if (!cfg.config_path.empty()) {
    try {
      tax = load_taxonomy(cfg.config_path);
    } catch (const Error& e) {
      err << "leaklint: " << e.what() << "\n";
      return 2;
    }
  }

  std::vector<std::string> missing;
  std::vector<std::string> files = cli_detail::collect_files(cfg.paths, missing);
  bool had_error = false;
  for (const auto& path : missing) {
    err << "leaklint: " << path << ": no such file or directory\n";
    had_error = true;
  }

  const bool json = cfg.format == "json";
  auto reports = nlohmann::ordered_json::array();
  std::string text;
  int findings = 0;

  if (cfg.corpus_mode) {
    CorpusScore total;
    for (const auto& path : files) {
      try {
        SourceUnit unit = load_unit(path);
        Analysis a = analyze_unit(unit, tax);
        std::vector<ExpectedInstance> expected = load_sidecar(path);
        FileScore fs = score_file(path, a.model, a.instances, expected);
        accumulate(total, fs);
      } catch (const Error& e) {
        had_error = true;
        if (json) reports.push_back(error_report_json(path, e.what()));
        else text += path + ": error: " + std::string(e.what()) + "\n";
      }
    }
    if (json) {
      nlohmann::ordered_json j;
      j["tool"] = {{"name", std::string(kToolName)},
                   {"version", std::string(kToolVersion)}};
      auto arr = nlohmann::ordered_json::array();
      for (const auto& fs : total.files) {
        const KindCounts t = fs.total();
        arr.push_back({{"path", fs.path},
                       {"matched", fs.matched},
                       {"tp", t.tp},
                       {"fp", t.fp},
                       {"fn", t.fn}});
      }
      j["files"] = std::move(arr);
      const KindCounts t = total.total();
      j["summary"] = {
          {"files", static_cast<int>(total.files.size())},
          {"matched", total.files_matched},
          {"overlap",
           {{"tp", total.by_kind[0].tp}, {"fp", total.by_kind[0].fp},
            {"fn", total.by_kind[0].fn}}},
          {"preprocessing",
           {{"tp", total.by_kind[1].tp}, {"fp", total.by_kind[1].fp},
            {"fn", total.by_kind[1].fn}}},
          {"multitest",
           {{"tp", total.by_kind[2].tp}, {"fp", total.by_kind[2].fp},
            {"fn", total.by_kind[2].fn}}},
          {"tp", t.tp},
          {"fp", t.fp},
          {"fn", t.fn}};
      if (had_error && !reports.empty()) j["errors"] = std::move(reports);
      out << j.dump() << "\n";
    } else {
      for (const auto& fs : total.files) {
        if (fs.matched) {
          text += fs.path + ": match\n";
        } else {
          const KindCounts t = fs.total();
          text += fs.path + ": MISMATCH (tp=" + std::to_string(t.tp) +
                  ", fp=" + std::to_string(t.fp) +
                  ", fn=" + std::to_string(t.fn) + ")\n";
        }
      }
      const KindCounts t = total.total();
      text += "corpus: files=" + std::to_string(total.files.size()) +
              " matched=" + std::to_string(total.files_matched) +
              " tp=" + std::to_string(t.tp) + " fp=" + std::to_string(t.fp) +
              " fn=" + std::to_string(t.fn) + "\n";
      const char* labels[3] = {"overlap", "preprocessing", "multitest"};
      for (int k = 0; k < 3; ++k)
        text += std::string(labels[k]) + ": tp=" +
                std::to_string(total.by_kind[k].tp) + " fp=" +
                std::to_string(total.by_kind[k].fp) + " fn=" +
                std::to_string(total.by_kind[k].fn) + "\n";
      out << text;
    }
    if (had_error) return 2;
    return total.files_matched == static_cast<int>(total.files.size()) ? 0 : 1;
  }

  for (const auto& path : files) {
    try {
      SourceUnit unit = load_unit(path);
      if (cfg.fix) {
        FixOutcome fo = fix_all(unit, tax);
        findings += static_cast<int>(fo.initial.size());
        if (!cfg.dry_run && fo.fixes_applied > 0) write_unit(fo.unit, path);
        if (json) {
          reports.push_back(unit_report_json(unit, fo.initial_model, fo.initial,
                                             &fo.previews, fo.fixes_applied));
        } else {
          text += unit_report_text(unit, fo.initial_model, fo.initial);
          if (cfg.dry_run) {
            for (const auto& p : fo.previews)
              if (!p.empty()) text += p;
          } else {
            text += path + ": applied " + std::to_string(fo.fixes_applied) +
                    " fix(es)\n";
          }
        }
      } else {
        Analysis a = analyze_unit(unit, tax);
        findings += static_cast<int>(a.instances.size());
        if (json)
          reports.push_back(unit_report_json(unit, a.model, a.instances));
        else
          text += unit_report_text(unit, a.model, a.instances);
      }
    } catch (const Error& e) {
      had_error = true;
      if (json) reports.push_back(error_report_json(path, e.what()));
      else text += path + ": error: " + std::string(e.what()) + "\n";
    }
  }

  if (json) out << reports.dump() << "\n";
  else out << text;

  if (had_error) return 2;
  if (findings > 0 && cfg.fail_on == "any") return 1;
  return 0;
}

}  // namespace cli
}  // namespace leaklint
