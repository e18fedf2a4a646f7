#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "leaklint/flow.hpp"
#include "leaklint/model.hpp"
#include "leaklint/taxonomy.hpp"

namespace leaklint {

enum class LeakKind { Overlap, Preprocessing, MultiTest };
enum class LeakCause {
  SplitBeforeSample,
  SplitAfterTransform,
  NoSplit,
  RepeatedEvaluation
};

struct LeakageInstance {
  LeakKind kind = LeakKind::Overlap;
  LeakCause cause = LeakCause::SplitBeforeSample;
  int source_stmt = -1;
  std::vector<int> sink_stmts;
  std::vector<std::string> variables;
  bool fixable = false;
  std::string message;
  // fix payload
  int split_stmt = -1;           // statement to move
  int anchor_stmt = -1;          // statement to insert above
  std::vector<int> usage_calls;  // evaluate calls, in reuse order
};

namespace detect_detail {

inline bool stmt_shares_lines(const ProgramModel& m, int stmt) {
  const Span& s = m.statements[stmt].span;
  for (const auto& other : m.statements) {
    if (other.index == stmt) continue;
    if (other.span.start_line <= s.end_line &&
        other.span.end_line >= s.start_line)
      return true;
  }
  return false;
}

/// Nodes a split call's arguments resolve to, paired with the read names.
inline std::vector<std::pair<const NameRead*, int>> arg_read_nodes(
    const ProgramModel& m, const FlowGraph& g, const CallSite& call) {
  std::vector<std::pair<const NameRead*, int>> out;
  for (const NameRead* r : reads_in_args(m, call))
    out.push_back({r, g.read_node(r->name, call.stmt_index)});
  return out;
}

inline bool derives_from_any(const FlowGraph& g, int node,
                             const std::vector<int>& targets) {
  for (int t : targets)
    if (derives(g, node, t)) return true;
  return false;
}

/// Start nodes for the lineage of a call's receiver expression.
inline std::vector<int> receiver_nodes(const ProgramModel& m,
                                       const FlowGraph& g,
                                       const CallSite& call) {
  std::vector<int> out;
  if (call.receiver_call >= 0) out.push_back(g.node_of_call(call.receiver_call));
  if (call.receiver)
    for (const NameRead* r : reads_in_span(m, call.stmt_index, *call.receiver))
      out.push_back(g.read_node(r->name, call.stmt_index));
  return out;
}

/// Earliest transformer-constructor call id in the receiver lineage,
/// or -1 when none is found.
inline int marker_ctor_in_lineage(const ProgramModel& m, const FlowGraph& g,
                                  const Taxonomy& tax, const CallSite& call) {
  int best = -1;
  for (int start : receiver_nodes(m, g, call)) {
    for (int node : lineage(g, start)) {
      const FlowNode& n = g.nodes[node];
      if (n.kind != NodeKind::CallResult) continue;
      const CallSite& c = m.calls[n.call_id];
      if (!tax.is_transformer_ctor(c.callee_tail)) continue;
      if (best < 0 || c.id < best) best = c.id;
    }
  }
  return best;
}

inline std::string overlap_message() {
  return "Data is resampled before the train/test split, so duplicated or "
         "synthetic rows can appear in both sets.";
}

inline std::string split_after_transform_message() {
  return "A transformer is fitted before the train/test split, so test set "
         "statistics leak into the training features.";
}

inline std::string no_split_message() {
  return "A transformer is fitted on the full dataset and the data is never "
         "split into training and test sets.";
}

inline std::string multi_test_message(const std::string& name, size_t uses) {
  return "Variable '" + name + "' is used in " + std::to_string(uses) +
         " evaluation calls; reusing the same test set inflates the reported "
         "performance.";
}

}  // namespace detect_detail

/// Overlap leakage: a sampling call whose output later reaches a split.
inline std::vector<LeakageInstance> detect_overlap(const ProgramModel& m,
                                                   const FlowGraph& g,
                                                   const Taxonomy& tax) {
  using namespace detect_detail;
  std::vector<LeakageInstance> out;
  std::vector<const CallSite*> samples;
  std::vector<const CallSite*> splits;
  for (const auto& c : m.calls) {
    Role role = tax.classify(c.callee_tail);
    if (role == Role::Sample) samples.push_back(&c);
    else if (role == Role::Split) splits.push_back(&c);
  }
  for (const CallSite* s : samples) {
    std::vector<int> targets{g.node_of_call(s->id)};
    for (int v : g.stmt_versions[s->stmt_index]) targets.push_back(v);

    const CallSite* hit = nullptr;
    std::vector<std::string> variables;
    for (const CallSite* p : splits) {
      if (p->stmt_index <= s->stmt_index) continue;
      if (hit && (p->stmt_index > hit->stmt_index ||
                  (p->stmt_index == hit->stmt_index && p->id > hit->id)))
        continue;
      std::vector<std::string> vars;
      for (const auto& [r, rn] : arg_read_nodes(m, g, *p)) {
        if (!derives_from_any(g, rn, targets)) continue;
        if (std::find(vars.begin(), vars.end(), r->name) == vars.end())
          vars.push_back(r->name);
      }
      if (!vars.empty()) {
        hit = p;
        variables = std::move(vars);
      }
    }
    if (!hit) continue;

    // the fix re-inserts the split above the sampling statement that
    // directly precedes it
    int anchor = -1;
    for (const CallSite* other : samples)
      if (other->stmt_index < hit->stmt_index && other->stmt_index > anchor)
        anchor = other->stmt_index;

    LeakageInstance inst;
    inst.kind = LeakKind::Overlap;
    inst.cause = LeakCause::SplitBeforeSample;
    inst.source_stmt = s->stmt_index;
    inst.sink_stmts = {hit->stmt_index};
    inst.variables = std::move(variables);
    inst.split_stmt = hit->stmt_index;
    inst.anchor_stmt = anchor;
    inst.fixable = anchor >= 0 && !stmt_shares_lines(m, hit->stmt_index);
    inst.message = overlap_message();
    out.push_back(std::move(inst));
  }
  return out;
}

/// Preprocessing leakage: a transformer fitted on data that is split
/// afterwards, or fitted when the unit never splits at all.
inline std::vector<LeakageInstance> detect_preprocessing(const ProgramModel& m,
                                                         const FlowGraph& g,
                                                         const Taxonomy& tax) {
  using namespace detect_detail;
  std::vector<LeakageInstance> out;
  std::vector<const CallSite*> fits;
  std::vector<const CallSite*> transforms;
  std::vector<const CallSite*> splits;
  for (const auto& c : m.calls) {
    Role role = tax.classify(c.callee_tail);
    if (role == Role::Fit || role == Role::FitTransform) fits.push_back(&c);
    if (role == Role::Transform || role == Role::FitTransform)
      transforms.push_back(&c);
    if (role == Role::Split) splits.push_back(&c);
  }

  struct NoSplitSeen {
    long long key;
    const CallSite* fit;
  };
  std::vector<NoSplitSeen> no_split_groups;

  for (const CallSite* f : fits) {
    std::vector<int> result_targets{g.node_of_call(f->id)};
    for (int v : g.stmt_versions[f->stmt_index]) result_targets.push_back(v);

    int marker = marker_ctor_in_lineage(m, g, tax, *f);
    bool feeds_transform = false;
    for (const CallSite* t : transforms) {
      if (t->id == f->id || t->stmt_index < f->stmt_index) continue;
      std::vector<int> starts = receiver_nodes(m, g, *t);
      for (const auto& [r, rn] : arg_read_nodes(m, g, *t)) starts.push_back(rn);
      if (t->receiver_call == f->id) feeds_transform = true;
      for (int n : starts)
        if (derives_from_any(g, n, result_targets)) feeds_transform = true;
      if (feeds_transform) break;
    }
    if (marker < 0 && !feeds_transform) continue;

    std::vector<int> split_targets = result_targets;
    for (const auto& [r, rn] : arg_read_nodes(m, g, *f))
      split_targets.push_back(rn);

    const CallSite* hit = nullptr;
    for (const CallSite* p : splits) {
      if (p->stmt_index <= f->stmt_index) continue;
      if (hit && (p->stmt_index > hit->stmt_index ||
                  (p->stmt_index == hit->stmt_index && p->id > hit->id)))
        continue;
      for (const auto& [r, rn] : arg_read_nodes(m, g, *p))
        if (derives_from_any(g, rn, split_targets)) {
          hit = p;
          break;
        }
    }

    std::vector<std::string> variables = m.statements[f->stmt_index].lhs_names;
    if (variables.empty() && f->receiver) {
      for (const NameRead* r : reads_in_span(m, f->stmt_index, *f->receiver))
        if (r->span == *f->receiver) variables.push_back(r->name);
    }

    if (hit) {
      LeakageInstance inst;
      inst.kind = LeakKind::Preprocessing;
      inst.cause = LeakCause::SplitAfterTransform;
      inst.source_stmt = f->stmt_index;
      inst.sink_stmts = {hit->stmt_index};
      inst.variables = std::move(variables);
      inst.split_stmt = hit->stmt_index;
      inst.anchor_stmt = f->stmt_index;
      inst.fixable = !stmt_shares_lines(m, hit->stmt_index);
      inst.message = split_after_transform_message();
      out.push_back(std::move(inst));
      continue;
    }
    if (!splits.empty()) continue;

    long long key = marker >= 0 ? marker : (1ll << 32) + f->id;
    bool seen = false;
    for (const auto& grp : no_split_groups)
      if (grp.key == key) {
        seen = true;
        break;
      }
    if (seen) continue;
    no_split_groups.push_back({key, f});

    LeakageInstance inst;
    inst.kind = LeakKind::Preprocessing;
    inst.cause = LeakCause::NoSplit;
    inst.source_stmt = f->stmt_index;
    inst.variables = std::move(variables);
    inst.anchor_stmt = f->stmt_index;
    inst.fixable = true;
    inst.message = no_split_message();
    out.push_back(std::move(inst));
  }
  return out;
}

/// Multi-test leakage: a test-marked variable reused across several
/// evaluation calls without being reloaded in between.
inline std::vector<LeakageInstance> detect_multitest(const ProgramModel& m,
                                                     const FlowGraph& g,
                                                     const Taxonomy& tax) {
  using namespace detect_detail;
  std::vector<LeakageInstance> out;
  std::vector<const CallSite*> evals;
  for (const auto& c : m.calls)
    if (tax.classify(c.callee_tail) == Role::Evaluate) evals.push_back(&c);
  if (evals.empty()) return out;

  std::vector<std::string> names;
  for (const auto& r : m.name_reads)
    if (tax.is_test_name(r.name) &&
        std::find(names.begin(), names.end(), r.name) == names.end())
      names.push_back(r.name);

  for (const std::string& name : names) {
    // usages: innermost evaluate call around each read of the name
    std::vector<const CallSite*> usages;
    for (const auto& r : m.name_reads) {
      if (r.name != name) continue;
      const CallSite* inner = nullptr;
      for (const CallSite* e : evals) {
        if (e->stmt_index != r.stmt_index ||
            !span_contains(e->args_span, r.span))
          continue;
        if (!inner || span_contains(inner->args_span, e->args_span))
          inner = e;
      }
      if (inner && std::find(usages.begin(), usages.end(), inner) == usages.end())
        usages.push_back(inner);
    }
    std::stable_sort(usages.begin(), usages.end(),
                     [](const CallSite* a, const CallSite* b) {
                       if (a->stmt_index != b->stmt_index)
                         return a->stmt_index < b->stmt_index;
                       return a->id < b->id;
                     });

    // chain usages whose value derives from the chain's first version
    struct Chain {
      int root;
      std::vector<const CallSite*> uses;
    };
    std::vector<Chain> chains;
    for (const CallSite* u : usages) {
      int node = g.read_node(name, u->stmt_index);
      bool placed = false;
      for (auto& ch : chains)
        if (derives(g, node, ch.root)) {
          ch.uses.push_back(u);
          placed = true;
          break;
        }
      if (!placed) chains.push_back(Chain{node, {u}});
    }

    for (const auto& ch : chains) {
      if (ch.uses.size() < 2) continue;
      LeakageInstance inst;
      inst.kind = LeakKind::MultiTest;
      inst.cause = LeakCause::RepeatedEvaluation;
      inst.source_stmt = ch.uses.front()->stmt_index;
      for (size_t i = 1; i < ch.uses.size(); ++i)
        inst.sink_stmts.push_back(ch.uses[i]->stmt_index);
      inst.variables = {name};
      for (const CallSite* u : ch.uses) inst.usage_calls.push_back(u->id);
      inst.fixable = true;
      inst.message = multi_test_message(name, ch.uses.size());
      out.push_back(std::move(inst));
    }
  }
  return out;
}

/// All detectors, ordered by source statement and then by kind.
inline std::vector<LeakageInstance> detect_all(const ProgramModel& m,
                                               const FlowGraph& g,
                                               const Taxonomy& tax) {
  std::vector<LeakageInstance> all = detect_overlap(m, g, tax);
  for (auto& i : detect_preprocessing(m, g, tax)) all.push_back(std::move(i));
  for (auto& i : detect_multitest(m, g, tax)) all.push_back(std::move(i));
  std::stable_sort(all.begin(), all.end(),
                   [](const LeakageInstance& a, const LeakageInstance& b) {
                     if (a.source_stmt != b.source_stmt)
                       return a.source_stmt < b.source_stmt;
                     return static_cast<int>(a.kind) < static_cast<int>(b.kind);
                   });
  return all;
}

}  // namespace leaklint
