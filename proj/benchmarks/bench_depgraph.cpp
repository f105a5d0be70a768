#include <benchmark/benchmark.h>

#include "portmission/depgraph.hpp"

namespace {

using namespace portmission;

MissionPlan chain(int n) {
  MissionPlan plan;
  plan.mission_id = "chain";
  for (int i = 0; i < n; ++i) {
    SymbolicAction s;
    s.id = i;
    s.action = i % 2 ? ActionKind::Hover : ActionKind::Navigate;
    s.robot = i % 2 ? Robot::UAV : Robot::USV;
    if (i > 0) s.preconditions = {i - 1};
    plan.steps.push_back(s);
  }
  return plan;
}

void BM_BuildGraph(benchmark::State& state) {
  const MissionPlan plan = chain(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto graph = build_graph(plan);
    benchmark::DoNotOptimize(graph);
  }
}
BENCHMARK(BM_BuildGraph)->Arg(8)->Arg(64)->Arg(512);

void BM_ReadySetScheduleLoop(benchmark::State& state) {
  const MissionPlan plan = chain(static_cast<int>(state.range(0)));
  const DependencyGraph graph = build_graph(plan).value();
  for (auto _ : state) {
    ExecutionState st = initial_state(graph);
    while (static_cast<int>(st.completed.size()) < graph.node_count) {
      for (int id : ready_set(graph, st)) {
        st = mark_executing(graph, std::move(st), id).value();
        st = mark_complete(std::move(st), id).value();
      }
    }
    benchmark::DoNotOptimize(st);
  }
}
BENCHMARK(BM_ReadySetScheduleLoop)->Arg(8)->Arg(64)->Arg(512);

void BM_TopologicalOrder(benchmark::State& state) {
  const DependencyGraph graph =
      build_graph(chain(static_cast<int>(state.range(0)))).value();
  for (auto _ : state) {
    auto order = topological_order(graph);
    benchmark::DoNotOptimize(order);
  }
}
BENCHMARK(BM_TopologicalOrder)->Arg(64)->Arg(512);

}  // namespace
