#pragma once

#include <string>
#include <vector>

#include "leaklint/detect.hpp"
#include "leaklint/fix.hpp"
#include "leaklint/flow.hpp"
#include "leaklint/model.hpp"
#include "leaklint/parse.hpp"
#include "leaklint/source_unit.hpp"
#include "leaklint/taxonomy.hpp"

namespace leaklint {

struct Analysis {
  ProgramModel model;
  FlowGraph flow;
  std::vector<LeakageInstance> instances;
};

inline Analysis analyze_unit(const SourceUnit& unit, const Taxonomy& tax) {
  Analysis a;
  a.model = build_model(unit);
  a.flow = build_flow(a.model);
  a.instances = detect_all(a.model, a.flow, tax);
  return a;
}

struct FixOutcome {
  SourceUnit unit;                         // unit after the applied fixes
  ProgramModel initial_model;              // model of the unit as given
  std::vector<LeakageInstance> initial;    // instances before fixing
  std::vector<std::string> previews;       // per initial instance; may be empty
  std::vector<LeakageInstance> remaining;  // instances after the last fix
  int fixes_applied = 0;
};

/// Repairs instances one at a time, re-analyzing after every applied
/// patch so later fixes see the rewritten source. Previews are rendered
/// against the unit as given, one per fixable initial instance.
inline FixOutcome fix_all(const SourceUnit& start, const Taxonomy& tax) {
  constexpr int kMaxRounds = 64;
  FixOutcome out;

  Analysis first = analyze_unit(start, tax);
  out.initial_model = first.model;
  out.initial = first.instances;
  for (const LeakageInstance& inst : first.instances) {
    std::string preview;
    if (inst.fixable) {
      try {
        preview = synthesize_fix(inst, first.model, start).preview;
      } catch (const NotFixable&) {
      }
    }
    out.previews.push_back(std::move(preview));
  }

  SourceUnit unit = start;
  for (int round = 0; round < kMaxRounds; ++round) {
    Analysis a = round == 0 ? std::move(first) : analyze_unit(unit, tax);
    bool applied = false;
    for (const LeakageInstance& inst : a.instances) {
      if (!inst.fixable) continue;
      Patch patch;
      try {
        patch = synthesize_fix(inst, a.model, unit);
      } catch (const NotFixable&) {
        continue;
      }
      unit = apply_patch(unit, patch);
      ++out.fixes_applied;
      applied = true;
      break;
    }
    if (!applied) {
      out.remaining = std::move(a.instances);
      break;
    }
    if (round == kMaxRounds - 1)
      out.remaining = analyze_unit(unit, tax).instances;
  }
  out.unit = std::move(unit);
  return out;
}

}  // namespace leaklint
