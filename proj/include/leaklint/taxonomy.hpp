#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "leaklint/errors.hpp"

namespace leaklint {

enum class Role { None, Split, Sample, Fit, Transform, FitTransform, Evaluate };

namespace tax_detail {

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline bool contains_any(const std::string& hay,
                         const std::vector<std::string>& needles) {
  for (const auto& n : needles)
    if (!n.empty() && hay.find(n) != std::string::npos) return true;
  return false;
}

}  // namespace tax_detail

/// Keyword lists that map callee tails and variable names onto roles.
/// Matching is case-insensitive substring containment.
struct Taxonomy {
  std::vector<std::string> split = {"split"};
  std::vector<std::string> sample = {"sample", "resample"};
  std::vector<std::string> fit = {"fit"};
  std::vector<std::string> transform = {"transform"};
  std::vector<std::string> fit_transform = {"fit_transform"};
  std::vector<std::string> evaluate = {"score",    "evaluate",
                                       "predict",  "cross_val",
                                       "accuracy", "auc",
                                       "classification_report"};
  std::vector<std::string> transformer_markers = {"vectorizer", "scaler",
                                                  "encoder",    "selector",
                                                  "pca",        "imputer"};
  std::vector<std::string> test_name_markers = {"test"};

  /// Role of a call by its callee tail. More specific roles win when
  /// several keyword lists match the same tail.
  Role classify(std::string_view callee_tail) const {
    using tax_detail::contains_any;
    const std::string t = tax_detail::lower(callee_tail);
    if (contains_any(t, fit_transform)) return Role::FitTransform;
    if (contains_any(t, split)) return Role::Split;
    if (contains_any(t, sample)) return Role::Sample;
    if (contains_any(t, evaluate)) return Role::Evaluate;
    if (contains_any(t, fit)) return Role::Fit;
    if (contains_any(t, transform)) return Role::Transform;
    return Role::None;
  }

  bool is_transformer_ctor(std::string_view callee_tail) const {
    return tax_detail::contains_any(tax_detail::lower(callee_tail),
                                    transformer_markers);
  }

  bool is_test_name(std::string_view name) const {
    return tax_detail::contains_any(tax_detail::lower(name),
                                    test_name_markers);
  }
};

/// Parses taxonomy overrides: one `role: kw1, kw2, ...` entry per line,
/// `#` starts a comment. A listed role replaces its default list.
inline Taxonomy parse_taxonomy(const std::string& text) {
  Taxonomy tax;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = tax_detail::trim(line);
    if (line.empty()) continue;
    size_t colon = line.find(':');
    if (colon == std::string::npos)
      throw ConfigParseError(lineno, "expected 'role: keywords'");
    std::string role = tax_detail::trim(line.substr(0, colon));
    std::vector<std::string> words;
    std::string rest = line.substr(colon + 1);
    size_t start = 0;
    while (start <= rest.size()) {
      size_t comma = rest.find(',', start);
      std::string word = tax_detail::trim(
          comma == std::string::npos ? rest.substr(start)
                                     : rest.substr(start, comma - start));
      if (!word.empty()) words.push_back(tax_detail::lower(word));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    std::vector<std::string>* target = nullptr;
    if (role == "split") target = &tax.split;
    else if (role == "sample") target = &tax.sample;
    else if (role == "fit") target = &tax.fit;
    else if (role == "transform") target = &tax.transform;
    else if (role == "fit_transform") target = &tax.fit_transform;
    else if (role == "evaluate") target = &tax.evaluate;
    else if (role == "transformer_markers") target = &tax.transformer_markers;
    else if (role == "test_name_markers") target = &tax.test_name_markers;
    else throw ConfigParseError(lineno, "unknown role '" + role + "'");
    if (words.empty() && (role == "split" || role == "sample"))
      throw ConfigParseError(lineno, "role '" + role + "' needs at least one keyword");
    *target = std::move(words);
  }
  return tax;
}

inline Taxonomy load_taxonomy(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_taxonomy(buf.str());
}

}  // namespace leaklint
