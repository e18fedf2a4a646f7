#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "leaklint/errors.hpp"

namespace leaklint {

enum class UnitKind { Script, Notebook };

/// One code cell's slice of the flat line space, [first_line, last_line],
/// both 1-based inclusive. cell_index is the cell's position in the
/// notebook document (markdown and raw cells count).
struct CellRange {
  int cell_index = 0;
  int first_line = 0;
  int last_line = 0;
};

/// A script or flattened notebook with stable 1-based line identities.
/// Immutable after construction; shareable across threads.
struct SourceUnit {
  std::string id;
  UnitKind kind = UnitKind::Script;
  std::vector<std::string> lines;       // without newline characters
  std::vector<CellRange> cell_map;      // empty for scripts
  bool trailing_newline = true;
  nlohmann::ordered_json notebook;      // original document, notebooks only
};

struct MappedLine {
  std::optional<int> cell_index;  // absent for scripts
  int line = 0;                   // 1-based offset within the cell, or the
                                  // flat line itself for scripts
};

namespace detail {

inline bool valid_utf8(const std::string& bytes) {
  size_t i = 0;
  const auto n = bytes.size();
  while (i < n) {
    unsigned char c = static_cast<unsigned char>(bytes[i]);
    size_t extra = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      if (c < 0xC2) return false;  // overlong
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      if (c > 0xF4) return false;
    } else {
      return false;
    }
    for (size_t k = 1; k <= extra; ++k) {
      if (i + k >= n) return false;
      if ((static_cast<unsigned char>(bytes[i + k]) & 0xC0) != 0x80)
        return false;
    }
    i += extra + 1;
  }
  return true;
}

/// Splits on '\n' only; '\r' stays part of the line so byte-faithful
/// re-serialization works for CRLF input too.
inline std::vector<std::string> split_lines(const std::string& text,
                                            bool* trailing_newline = nullptr) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= text.size()) {
    size_t nl = text.find('\n', start);
    if (nl == std::string::npos) {
      if (start < text.size()) out.push_back(text.substr(start));
      if (trailing_newline) *trailing_newline = start == text.size();
      break;
    }
    out.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  if (text.empty() && trailing_newline) *trailing_newline = false;
  return out;
}

inline std::string cell_source_text(const nlohmann::ordered_json& cell) {
  auto it = cell.find("source");
  if (it == cell.end()) return {};
  if (it->is_string()) return it->get<std::string>();
  if (it->is_array()) {
    std::string text;
    for (const auto& part : *it) {
      if (!part.is_string())
        throw MalformedNotebook("cell source entries must be strings");
      text += part.get<std::string>();
    }
    return text;
  }
  throw MalformedNotebook("cell source must be a string or string array");
}

}  // namespace detail

/// FNV-1a over line contents; used to pair models and patches with the
/// exact unit bytes they were computed from.
inline std::uint64_t unit_hash(const SourceUnit& unit) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](char c) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  };
  for (const auto& line : unit.lines) {
    for (char c : line) mix(c);
    mix('\n');
  }
  return h;
}

inline SourceUnit unit_from_script_text(std::string id, const std::string& text) {
  if (!detail::valid_utf8(text))
    throw IoError(id + ": input is not valid UTF-8");
  SourceUnit unit;
  unit.id = std::move(id);
  unit.kind = UnitKind::Script;
  unit.lines = detail::split_lines(text, &unit.trailing_newline);
  return unit;
}

inline SourceUnit unit_from_notebook_json(std::string id,
                                          nlohmann::ordered_json doc) {
  SourceUnit unit;
  unit.id = std::move(id);
  unit.kind = UnitKind::Notebook;
  auto cells = doc.find("cells");
  if (cells == doc.end() || !cells->is_array())
    throw MalformedNotebook(unit.id + ": notebook JSON lacks a cell list");
  int next_line = 1;
  int cell_index = 0;
  for (const auto& cell : *cells) {
    const int this_index = cell_index++;
    if (!cell.is_object()) continue;
    if (cell.value("cell_type", std::string()) != "code") continue;
    std::vector<std::string> cell_lines =
        detail::split_lines(detail::cell_source_text(cell));
    if (cell_lines.empty()) continue;
    CellRange range;
    range.cell_index = this_index;
    range.first_line = next_line;
    for (auto& line : cell_lines) unit.lines.push_back(std::move(line));
    next_line = static_cast<int>(unit.lines.size()) + 1;
    range.last_line = next_line - 1;
    unit.cell_map.push_back(range);
  }
  unit.notebook = std::move(doc);
  return unit;
}

inline SourceUnit unit_from_notebook_text(std::string id,
                                          const std::string& text) {
  if (!detail::valid_utf8(text))
    throw IoError(id + ": input is not valid UTF-8");
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedNotebook(id + ": " + e.what());
  }
  return unit_from_notebook_json(std::move(id), std::move(doc));
}

/// Loads a script or notebook; extension selects the kind
/// (.ipynb means notebook, anything else is a script).
inline SourceUnit load_unit(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.generic_string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError(path.generic_string() + ": read failed");
  std::string text = buf.str();
  if (path.extension() == ".ipynb")
    return unit_from_notebook_text(path.generic_string(), text);
  return unit_from_script_text(path.generic_string(), text);
}

/// Maps a flat line to (cell, offset) for notebooks; identity for scripts.
inline MappedLine map_line(const SourceUnit& unit, int flat_line) {
  if (flat_line < 1 || flat_line > static_cast<int>(unit.lines.size()))
    throw OutOfRange(unit.id + ": line " + std::to_string(flat_line) +
                     " outside [1, " + std::to_string(unit.lines.size()) + "]");
  if (unit.kind == UnitKind::Script) return MappedLine{std::nullopt, flat_line};
  for (const auto& range : unit.cell_map) {
    if (flat_line >= range.first_line && flat_line <= range.last_line)
      return MappedLine{range.cell_index, flat_line - range.first_line + 1};
  }
  throw OutOfRange(unit.id + ": line " + std::to_string(flat_line) +
                   " not covered by any cell");
}

/// Serializes back to file bytes. Scripts reproduce the input modulo a
/// single trailing newline; notebooks get their code-cell sources rebuilt
/// from the flat lines while every other field of the document is kept.
inline std::string serialize(const SourceUnit& unit) {
  if (unit.kind == UnitKind::Script) {
    std::string out;
    for (size_t i = 0; i < unit.lines.size(); ++i) {
      out += unit.lines[i];
      if (i + 1 < unit.lines.size() || unit.trailing_newline) out += '\n';
    }
    return out;
  }
  nlohmann::ordered_json doc = unit.notebook;
  auto cells = doc.find("cells");
  if (cells == doc.end() || !cells->is_array())
    throw MalformedNotebook(unit.id + ": notebook JSON lacks a cell list");
  int cell_index = 0;
  for (auto& cell : *cells) {
    const int this_index = cell_index++;
    if (!cell.is_object()) continue;
    if (cell.value("cell_type", std::string()) != "code") continue;
    const CellRange* range = nullptr;
    for (const auto& r : unit.cell_map) {
      if (r.cell_index == this_index) {
        range = &r;
        break;
      }
    }
    auto source = nlohmann::ordered_json::array();
    if (range) {
      for (int l = range->first_line; l <= range->last_line; ++l) {
        std::string line = unit.lines[l - 1];
        if (l < range->last_line) line += '\n';
        source.push_back(line);
      }
    }
    cell["source"] = std::move(source);
  }
  return doc.dump(1) + "\n";
}

inline void write_unit(const SourceUnit& unit,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.generic_string() + ": cannot open for writing");
  const std::string text = serialize(unit);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError(path.generic_string() + ": write failed");
}

}  // namespace leaklint
