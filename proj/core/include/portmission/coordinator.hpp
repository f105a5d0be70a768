#pragma once

#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "portmission/clients.hpp"
#include "portmission/control.hpp"
#include "portmission/depgraph.hpp"
#include "portmission/plan.hpp"
#include "portmission/world.hpp"

namespace portmission {

struct ReplanPolicy {
  int max_replans = 2;
  long max_ticks = 400000;  // hard stop; exceeding it aborts the mission
  long abort_at_tick = -1;  // operator abort hook, <0 disables
  /// Deterministic fault injection: (plan generation, step id) pairs that
  /// fail as soon as they are dispatched.
  std::vector<std::pair<int, int>> inject_failures;
  std::vector<std::string> critical_keywords{"human", "vehicle", "collision",
                                             "fire"};
};

enum class MissionStatus { Succeeded, Failed, Aborted };
const char* to_string(MissionStatus s);

enum class StepResultKind { Completed, Failed, Skipped };
const char* to_string(StepResultKind r);

struct TimelineEntry {
  int generation = 0;
  int step_id = 0;
  ActionKind action = ActionKind::Navigate;
  Robot robot = Robot::USV;
  long start_tick = 0;
  long end_tick = 0;
  StepResultKind result = StepResultKind::Completed;
  std::string detail;
  bool safe_return = false;
};

struct Alert {
  long tick = 0;
  int step_id = -1;
  std::string text;
};

struct MissionOutcome {
  MissionStatus status = MissionStatus::Failed;
  std::vector<TimelineEntry> timeline;
  std::vector<InspectionReport> inspections;
  std::vector<Alert> alerts;
  int replans = 0;
  long final_tick = 0;
  long makespan_ticks = 0;  // last mission-phase step end
  std::vector<std::string> events;      // structured-text event lines
  std::vector<std::string> trace_rows;  // tick<TAB>robot<TAB>x y z psi v
  WorldState final_world;
};

struct ModelClients {
  PlannerClient* planner = nullptr;
  InspectorClient* inspector = nullptr;
};

struct RobotAvailability {
  std::vector<Robot> robot_of;  // indexed by step id
  bool usv_idle = true;
  bool uav_idle = true;
};

/// Ready steps filtered to at most one new action per idle robot,
/// ascending id within each robot.
std::vector<int> dispatch_ready(const ExecutionState& state,
                                const DependencyGraph& graph,
                                const RobotAvailability& robots);

/// Captures an observation at the step's pose, forwards the sigma queries,
/// and raises `alert` before returning when a concern matches the critical
/// keyword list.
Result<InspectionReport, ClientError> handle_inspection(
    const SymbolicAction& step, const WorldState& world,
    InspectorClient& inspector, const std::string& context,
    const std::vector<std::string>& critical_keywords,
    const std::function<void(const std::string&)>& alert);

/// Requests a fresh plan covering only the un-completed steps of the failed
/// plan; the result is parsed, validated and graph-checked before adoption.
Result<MissionPlan, ClientError> replan(const MissionRequest& request,
                                        const WorldState& world,
                                        const MissionPlan& failed_plan,
                                        const std::set<int>& completed,
                                        PlannerClient& planner,
                                        const ReplanPolicy& policy,
                                        int replans_used);

/// Algorithm core: dispatch ready actions in parallel (one per robot), step
/// the world once per tick, fold completions back into the dependency state,
/// inspect, alert, replan on failure, and fall back to safe return.
MissionOutcome run_mission(const MissionPlan& plan, WorldState world,
                           const ModelClients& clients,
                           const MissionRequest& request,
                           const ReplanPolicy& policy,
                           const ControlConfig& cfg = {});

}  // namespace portmission
