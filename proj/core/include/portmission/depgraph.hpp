#pragma once

#include <set>
#include <string>
#include <vector>

#include "portmission/plan.hpp"
#include "portmission/result.hpp"

namespace portmission {

/// DAG over step ids: edge (i -> j) iff i is a precondition of step j.
struct DependencyGraph {
  int node_count = 0;
  std::vector<std::set<int>> dependents;  // outgoing edges per node
  std::vector<std::set<int>> prereqs;     // incoming edges per node

  int in_degree(int id) const { return static_cast<int>(prereqs[id].size()); }
  bool operator==(const DependencyGraph&) const = default;
};

enum class GraphErrorKind { Cycle, DanglingReference };

struct GraphError {
  GraphErrorKind kind;
  std::vector<int> cycle;  // one offending cycle, in edge order
  std::string reason;
};

Result<DependencyGraph, GraphError> build_graph(const MissionPlan& plan);

/// completed / executing / pending partition the node set.
struct ExecutionState {
  std::set<int> completed;
  std::set<int> executing;
  std::set<int> pending;
};

ExecutionState initial_state(const DependencyGraph& graph);

/// Pending ids whose prerequisites are all completed, ascending.
std::vector<int> ready_set(const DependencyGraph& graph,
                           const ExecutionState& state);

enum class StateError { NotExecuting, NotReady };

/// Moves a ready pending id into executing.
Result<ExecutionState, StateError> mark_executing(const DependencyGraph& graph,
                                                  ExecutionState state, int id);

/// Moves an executing id into completed.
Result<ExecutionState, StateError> mark_complete(ExecutionState state, int id);

/// Kahn's algorithm with ascending-id tie breaking, so concurrent readiness
/// resolves deterministically.
std::vector<int> topological_order(const DependencyGraph& graph);

/// DOT text: one node per line, one edge per line.
std::string to_dot(const DependencyGraph& graph);

}  // namespace portmission
