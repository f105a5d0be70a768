#include "portmission/depgraph.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

namespace portmission {

Result<DependencyGraph, GraphError> build_graph(const MissionPlan& plan) {
  DependencyGraph g;
  g.node_count = static_cast<int>(plan.steps.size());
  g.dependents.assign(g.node_count, {});
  g.prereqs.assign(g.node_count, {});

  for (const SymbolicAction& step : plan.steps) {
    for (int p : step.preconditions) {
      if (p < 0 || p >= g.node_count || p == step.id) {
        return GraphError{GraphErrorKind::DanglingReference,
                          {},
                          "step " + std::to_string(step.id) +
                              " references invalid step " + std::to_string(p)};
      }
      g.dependents[p].insert(step.id);
      g.prereqs[step.id].insert(p);
    }
  }

  // Cycle check via Kahn; any leftover node sits on a cycle.
  std::vector<int> degree(g.node_count);
  for (int i = 0; i < g.node_count; ++i) degree[i] = g.in_degree(i);
  std::priority_queue<int, std::vector<int>, std::greater<int>> q;
  for (int i = 0; i < g.node_count; ++i) {
    if (degree[i] == 0) q.push(i);
  }
  int visited = 0;
  while (!q.empty()) {
    const int n = q.top();
    q.pop();
    ++visited;
    for (int d : g.dependents[n]) {
      if (--degree[d] == 0) q.push(d);
    }
  }
  if (visited != g.node_count) {
    // Walk prerequisite links among leftover nodes until one repeats.
    int at = 0;
    while (degree[at] == 0) ++at;
    std::vector<int> trail;
    std::vector<char> seen(g.node_count, 0);
    while (!seen[at]) {
      seen[at] = 1;
      trail.push_back(at);
      for (int p : g.prereqs[at]) {
        if (degree[p] > 0) {
          at = p;
          break;
        }
      }
    }
    std::vector<int> cycle;
    bool in_cycle = false;
    for (int n : trail) {
      if (n == at) in_cycle = true;
      if (in_cycle) cycle.push_back(n);
    }
    std::reverse(cycle.begin(), cycle.end());  // edge order: prereq first
    std::string reason = "precondition cycle:";
    for (int n : cycle) reason += " " + std::to_string(n);
    return GraphError{GraphErrorKind::Cycle, cycle, reason};
  }
  return g;
}

ExecutionState initial_state(const DependencyGraph& graph) {
  ExecutionState st;
  for (int i = 0; i < graph.node_count; ++i) st.pending.insert(i);
  return st;
}

std::vector<int> ready_set(const DependencyGraph& graph,
                           const ExecutionState& state) {
  std::vector<int> ready;
  for (int id : state.pending) {
    const auto& pre = graph.prereqs[id];
    const bool ok = std::all_of(pre.begin(), pre.end(), [&](int p) {
      return state.completed.count(p) > 0;
    });
    if (ok) ready.push_back(id);
  }
  return ready;  // std::set iteration is already ascending
}

Result<ExecutionState, StateError> mark_executing(const DependencyGraph& graph,
                                                  ExecutionState state, int id) {
  if (!state.pending.count(id)) return StateError::NotReady;
  for (int p : graph.prereqs[id]) {
    if (!state.completed.count(p)) return StateError::NotReady;
  }
  state.pending.erase(id);
  state.executing.insert(id);
  return state;
}

Result<ExecutionState, StateError> mark_complete(ExecutionState state, int id) {
  if (!state.executing.count(id)) return StateError::NotExecuting;
  state.executing.erase(id);
  state.completed.insert(id);
  return state;
}

std::vector<int> topological_order(const DependencyGraph& graph) {
  std::vector<int> degree(graph.node_count);
  for (int i = 0; i < graph.node_count; ++i) degree[i] = graph.in_degree(i);
  std::priority_queue<int, std::vector<int>, std::greater<int>> q;
  for (int i = 0; i < graph.node_count; ++i) {
    if (degree[i] == 0) q.push(i);
  }
  std::vector<int> order;
  while (!q.empty()) {
    const int n = q.top();
    q.pop();
    order.push_back(n);
    for (int d : graph.dependents[n]) {
      if (--degree[d] == 0) q.push(d);
    }
  }
  return order;
}

std::string to_dot(const DependencyGraph& graph) {
  std::ostringstream os;
  os << "digraph mission {\n";
  for (int i = 0; i < graph.node_count; ++i) {
    os << "  " << i << ";\n";
  }
  for (int i = 0; i < graph.node_count; ++i) {
    for (int d : graph.dependents[i]) {
      os << "  " << i << " -> " << d << ";\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace portmission
