#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "leaklint/detect.hpp"
#include "leaklint/model.hpp"
#include "leaklint/source_unit.hpp"
#include "leaklint/version.hpp"

namespace leaklint {

inline const char* kind_name(LeakKind k) {
  switch (k) {
    case LeakKind::Overlap: return "overlap";
    case LeakKind::Preprocessing: return "preprocessing";
    default: return "multitest";
  }
}

inline const char* kind_label(LeakKind k) {
  switch (k) {
    case LeakKind::Overlap: return "OVERLAP";
    case LeakKind::Preprocessing: return "PREPROCESSING";
    default: return "MULTITEST";
  }
}

inline const char* cause_name(LeakCause c) {
  switch (c) {
    case LeakCause::SplitBeforeSample: return "SplitBeforeSample";
    case LeakCause::SplitAfterTransform: return "SplitAfterTransform";
    case LeakCause::NoSplit: return "NoSplit";
    default: return "RepeatedEvaluation";
  }
}

inline int source_line_of(const ProgramModel& m, const LeakageInstance& inst) {
  return m.statements[inst.source_stmt].span.start_line;
}

inline nlohmann::ordered_json instance_json(const SourceUnit& unit,
                                            const ProgramModel& m,
                                            const LeakageInstance& inst,
                                            const std::string* preview) {
  nlohmann::ordered_json j;
  j["kind"] = kind_name(inst.kind);
  j["cause"] = cause_name(inst.cause);
  const int flat = source_line_of(m, inst);
  MappedLine loc = map_line(unit, flat);
  j["line"] = loc.line;
  auto sinks = nlohmann::ordered_json::array();
  for (int s : inst.sink_stmts) sinks.push_back(m.statements[s].span.start_line);
  j["sink_lines"] = std::move(sinks);
  if (loc.cell_index) j["cell"] = *loc.cell_index;
  j["variables"] = inst.variables;
  j["fixable"] = inst.fixable;
  j["message"] = inst.message;
  if (preview != nullptr) j["fix_preview"] = *preview;
  return j;
}

/// Report for one unit. `previews` runs parallel to `instances` and may
/// hold empty strings; `fixes_applied` below zero omits the field.
inline nlohmann::ordered_json unit_report_json(
    const SourceUnit& unit, const ProgramModel& m,
    const std::vector<LeakageInstance>& instances,
    const std::vector<std::string>* previews = nullptr,
    int fixes_applied = -1) {
  nlohmann::ordered_json j;
  j["tool"] = {{"name", std::string(kToolName)},
               {"version", std::string(kToolVersion)}};
  j["unit"] = unit.id;
  auto arr = nlohmann::ordered_json::array();
  int counts[3] = {0, 0, 0};
  for (size_t i = 0; i < instances.size(); ++i) {
    const std::string* preview = nullptr;
    if (previews && i < previews->size() && !(*previews)[i].empty())
      preview = &(*previews)[i];
    arr.push_back(instance_json(unit, m, instances[i], preview));
    ++counts[static_cast<int>(instances[i].kind)];
  }
  j["instances"] = std::move(arr);
  j["summary"] = {{"overlap", counts[0]},
                  {"preprocessing", counts[1]},
                  {"multitest", counts[2]}};
  if (fixes_applied >= 0) j["fixes_applied"] = fixes_applied;
  return j;
}

inline nlohmann::ordered_json error_report_json(const std::string& unit_id,
                                                const std::string& error) {
  nlohmann::ordered_json j;
  j["tool"] = {{"name", std::string(kToolName)},
               {"version", std::string(kToolVersion)}};
  j["unit"] = unit_id;
  j["error"] = error;
  j["instances"] = nlohmann::ordered_json::array();
  j["summary"] = {{"overlap", 0}, {"preprocessing", 0}, {"multitest", 0}};
  return j;
}

inline std::string instance_text(const SourceUnit& unit, const ProgramModel& m,
                                 const LeakageInstance& inst) {
  const int flat = source_line_of(m, inst);
  MappedLine loc = map_line(unit, flat);
  std::string where;
  if (loc.cell_index)
    where = "cell " + std::to_string(*loc.cell_index) + ", line " +
            std::to_string(loc.line);
  else
    where = std::to_string(loc.line);
  return unit.id + ":" + where + ": " + kind_label(inst.kind) + " leakage (" +
         cause_name(inst.cause) + ") \xE2\x80\x94 " + inst.message;
}

inline std::string unit_report_text(const SourceUnit& unit,
                                    const ProgramModel& m,
                                    const std::vector<LeakageInstance>& instances) {
  if (instances.empty()) return unit.id + ": no data leakage detected\n";
  std::string out;
  for (const auto& inst : instances) out += instance_text(unit, m, inst) + "\n";
  return out;
}

}  // namespace leaklint
