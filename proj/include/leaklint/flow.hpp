#pragma once

#include <algorithm>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "leaklint/errors.hpp"
#include "leaklint/model.hpp"

namespace leaklint {

enum class NodeKind { Version, CallResult, Origin };

struct FlowNode {
  NodeKind kind = NodeKind::Origin;
  std::string name;    // Version and Origin nodes
  int version = -1;    // 0-based per name
  int def_stmt = -1;   // binding statement, or the call's statement
  Span def_span{};
  int call_id = -1;    // CallResult nodes
  std::vector<int> parents;
};

/// Dataflow over the flattened statement list. Version nodes are created
/// per binding, call results per call, and one origin node stands in for
/// every name that is read without a visible binding.
struct FlowGraph {
  std::vector<FlowNode> nodes;
  std::vector<int> call_nodes;  // call id to node id
  std::unordered_map<std::string, int> origin_nodes;
  // name to (def_stmt, node id) pairs in binding order
  std::unordered_map<std::string, std::vector<std::pair<int, int>>> bindings;
  std::vector<std::vector<int>> stmt_versions;
  std::vector<std::vector<int>> stmt_call_nodes;

  int node_of_call(int call_id) const {
    if (call_id < 0 || call_id >= static_cast<int>(call_nodes.size()) ||
        call_nodes[call_id] < 0)
      throw UnknownNode("no node for call " + std::to_string(call_id));
    return call_nodes[call_id];
  }

  /// Node a read of `name` at `stmt` resolves to: the latest version
  /// bound strictly before the statement, else the origin node, else -1.
  int read_node(const std::string& name, int stmt) const {
    auto it = bindings.find(name);
    if (it != bindings.end()) {
      const auto& v = it->second;
      for (auto rit = v.rbegin(); rit != v.rend(); ++rit)
        if (rit->first < stmt) return rit->second;
    }
    auto ot = origin_nodes.find(name);
    return ot == origin_nodes.end() ? -1 : ot->second;
  }
};

inline FlowGraph build_flow(const ProgramModel& m) {
  FlowGraph g;
  const size_t nstmt = m.statements.size();
  g.call_nodes.assign(m.calls.size(), -1);
  g.stmt_versions.resize(nstmt);
  g.stmt_call_nodes.resize(nstmt);

  std::vector<std::vector<const NameRead*>> reads_by_stmt(nstmt);
  for (const auto& r : m.name_reads)
    if (r.stmt_index >= 0 && r.stmt_index < static_cast<int>(nstmt))
      reads_by_stmt[r.stmt_index].push_back(&r);
  std::vector<std::vector<const CallSite*>> calls_by_stmt(nstmt);
  for (const auto& c : m.calls)
    if (c.stmt_index >= 0 && c.stmt_index < static_cast<int>(nstmt))
      calls_by_stmt[c.stmt_index].push_back(&c);

  auto origin = [&g](const std::string& name) {
    auto it = g.origin_nodes.find(name);
    if (it != g.origin_nodes.end()) return it->second;
    int id = static_cast<int>(g.nodes.size());
    FlowNode n;
    n.kind = NodeKind::Origin;
    n.name = name;
    g.nodes.push_back(std::move(n));
    g.origin_nodes[name] = id;
    return id;
  };
  auto resolve = [&](const std::string& name, int stmt) {
    auto it = g.bindings.find(name);
    if (it != g.bindings.end()) {
      const auto& v = it->second;
      for (auto rit = v.rbegin(); rit != v.rend(); ++rit)
        if (rit->first < stmt) return rit->second;
    }
    return origin(name);
  };

  for (size_t si = 0; si < nstmt; ++si) {
    const Statement& st = m.statements[si];
    std::vector<std::pair<const NameRead*, int>> reads;
    for (const NameRead* r : reads_by_stmt[si])
      reads.push_back({r, resolve(r->name, static_cast<int>(si))});

    // call results first, then edges; strict span containment keeps the
    // graph acyclic, so creation order does not matter
    const std::vector<const CallSite*>& calls = calls_by_stmt[si];
    for (const CallSite* c : calls) {
      int nid = static_cast<int>(g.nodes.size());
      FlowNode n;
      n.kind = NodeKind::CallResult;
      n.def_stmt = static_cast<int>(si);
      n.def_span = c->span;
      n.call_id = c->id;
      g.nodes.push_back(std::move(n));
      g.call_nodes[c->id] = nid;
      g.stmt_call_nodes[si].push_back(nid);
    }
    for (const CallSite* c : calls) {
      FlowNode& n = g.nodes[g.call_nodes[c->id]];
      for (const auto& [r, rn] : reads)
        if (span_contains(c->span, r->span)) n.parents.push_back(rn);
      for (const CallSite* other : calls) {
        if (other == c) continue;
        if (span_contains(c->span, other->span) && !(other->span == c->span))
          n.parents.push_back(g.call_nodes[other->id]);
      }
    }

    std::vector<int> base;
    for (const auto& [r, rn] : reads) base.push_back(rn);
    for (int cn : g.stmt_call_nodes[si]) base.push_back(cn);
    for (size_t k = 0; k < st.lhs_names.size(); ++k) {
      const std::string& name = st.lhs_names[k];
      int nid = static_cast<int>(g.nodes.size());
      FlowNode n;
      n.kind = NodeKind::Version;
      n.name = name;
      n.version = static_cast<int>(g.bindings[name].size());
      n.def_stmt = static_cast<int>(si);
      n.def_span = st.lhs_spans[k];
      n.parents = base;
      if (st.lhs_partial[k] || !st.indent.empty()) {
        int prev = resolve(name, static_cast<int>(si));
        n.parents.push_back(prev);
      }
      g.nodes.push_back(std::move(n));
      g.bindings[name].push_back({static_cast<int>(si), nid});
      g.stmt_versions[si].push_back(nid);
    }
  }
  return g;
}

/// Reflexive-transitive reachability along parent edges.
inline bool derives(const FlowGraph& g, int node, int ancestor) {
  if (node < 0 || ancestor < 0) return false;
  if (node == ancestor) return true;
  std::vector<char> seen(g.nodes.size(), 0);
  std::vector<int> stack{node};
  seen[node] = 1;
  while (!stack.empty()) {
    int cur = stack.back();
    stack.pop_back();
    for (int p : g.nodes[cur].parents) {
      if (p == ancestor) return true;
      if (p >= 0 && !seen[p]) {
        seen[p] = 1;
        stack.push_back(p);
      }
    }
  }
  return false;
}

/// All ancestors of `node`, including itself.
inline std::vector<int> lineage(const FlowGraph& g, int node) {
  std::vector<int> out;
  if (node < 0) return out;
  std::vector<char> seen(g.nodes.size(), 0);
  std::vector<int> stack{node};
  seen[node] = 1;
  while (!stack.empty()) {
    int cur = stack.back();
    stack.pop_back();
    out.push_back(cur);
    for (int p : g.nodes[cur].parents)
      if (p >= 0 && !seen[p]) {
        seen[p] = 1;
        stack.push_back(p);
      }
  }
  return out;
}

}  // namespace leaklint
