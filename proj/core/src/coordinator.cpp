#include "portmission/coordinator.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <map>
#include <sstream>

#include "portmission/executors.hpp"

namespace portmission {

using nlohmann::json;

const char* to_string(MissionStatus s) {
  switch (s) {
    case MissionStatus::Succeeded: return "Succeeded";
    case MissionStatus::Failed: return "Failed";
    case MissionStatus::Aborted: return "Aborted";
  }
  return "?";
}

const char* to_string(StepResultKind r) {
  switch (r) {
    case StepResultKind::Completed: return "Completed";
    case StepResultKind::Failed: return "Failed";
    case StepResultKind::Skipped: return "Skipped";
  }
  return "?";
}

std::vector<int> dispatch_ready(const ExecutionState& state,
                                const DependencyGraph& graph,
                                const RobotAvailability& robots) {
  std::vector<int> picks;
  bool usv_free = robots.usv_idle;
  bool uav_free = robots.uav_idle;
  for (int id : ready_set(graph, state)) {
    const Robot r = robots.robot_of[id];
    if (r == Robot::USV && usv_free) {
      picks.push_back(id);
      usv_free = false;
    } else if (r == Robot::UAV && uav_free) {
      picks.push_back(id);
      uav_free = false;
    }
  }
  return picks;
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool is_critical(const InspectionReport& report,
                 const std::vector<std::string>& keywords) {
  for (const auto& [text, severity] : report.concerns) {
    if (severity == Severity::Critical) return true;
    const std::string t = lower(text);
    for (const std::string& k : keywords) {
      if (t.find(lower(k)) != std::string::npos) return true;
    }
  }
  return false;
}

}  // namespace

Result<InspectionReport, ClientError> handle_inspection(
    const SymbolicAction& step, const WorldState& world,
    InspectorClient& inspector, const std::string& context,
    const std::vector<std::string>& critical_keywords,
    const std::function<void(const std::string&)>& alert) {
  const SceneObservation obs = observe(world, step.robot);
  auto resp = inspector.inspect(obs, step.queries, context);
  if (!resp) return resp.error();

  InspectionReport report = std::move(resp.value().report);
  if (!report.concerns.empty() && is_critical(report, critical_keywords)) {
    std::string text = "critical finding at step " + std::to_string(step.id) + ":";
    for (const auto& [concern, severity] : report.concerns) {
      text += " " + concern + ";";
    }
    if (alert) alert(text);
  }
  return report;
}

Result<MissionPlan, ClientError> replan(const MissionRequest& request,
                                        const WorldState& world,
                                        const MissionPlan& failed_plan,
                                        const std::set<int>& completed,
                                        PlannerClient& planner,
                                        const ReplanPolicy& policy,
                                        int replans_used) {
  (void)world;
  if (replans_used >= policy.max_replans) {
    return ClientError{ClientErrorKind::BudgetExhausted, 0,
                       "replanning budget exhausted"};
  }

  // Remaining objectives, renumbered densely; precondition references to
  // completed steps drop out, references among survivors are remapped.
  MissionPlan remaining;
  remaining.mission_id = failed_plan.mission_id;
  std::map<int, int> remap;
  for (const SymbolicAction& s : failed_plan.steps) {
    if (!completed.count(s.id)) {
      remap[s.id] = static_cast<int>(remap.size());
    }
  }
  for (const SymbolicAction& s : failed_plan.steps) {
    if (completed.count(s.id)) continue;
    SymbolicAction n = s;
    n.id = remap.at(s.id);
    n.preconditions.clear();
    for (int p : s.preconditions) {
      if (const auto it = remap.find(p); it != remap.end()) {
        n.preconditions.insert(it->second);
      }
    }
    remaining.steps.push_back(std::move(n));
  }

  MissionRequest resume = request;
  resume.instruction += "\n[RESUME]\n" + serialize_plan(remaining);

  auto resp = planner.plan(resume);
  if (!resp) return resp.error();

  auto parsed = parse_plan(resp.value().document);
  if (!parsed) {
    return ClientError{ClientErrorKind::InvalidPlanReturned, 0,
                       std::string("parse: ") + parsed.error().reason};
  }
  const ValidationReport validation = validate_plan(parsed.value(), request);
  if (!validation.admissible()) {
    return ClientError{ClientErrorKind::InvalidPlanReturned, 0,
                       "replanned plan has " +
                           std::to_string(validation.violations.size()) +
                           " validation violations"};
  }
  auto graph = build_graph(parsed.value());
  if (!graph) {
    return ClientError{ClientErrorKind::InvalidPlanReturned, 0,
                       "replanned plan rejected: " + graph.error().reason};
  }
  return parsed.value();
}

// ---------------------------------------------------------------------------

namespace {

struct EventLog {
  std::vector<std::string>* sink = nullptr;
  void emit(const json& j) { sink->push_back(j.dump()); }
};

std::string trace_row(long tick, const char* robot, double x, double y,
                      double z, double psi, double v) {
  std::ostringstream os;
  os << tick << '\t' << robot << '\t' << std::fixed << std::setprecision(6)
     << x << '\t' << y << '\t' << z << '\t' << psi << '\t' << v;
  return os.str();
}

struct ActiveExec {
  std::unique_ptr<ActionExecutor> exec;
  long start = 0;
  bool force_fail = false;
};

struct PendingResult {
  int id = 0;
  long start = 0;
  long end = 0;
  ExecPhase phase = ExecPhase::Done;
  std::string reason;
};

std::vector<Robot> robots_of(const MissionPlan& plan) {
  std::vector<Robot> r(plan.steps.size(), Robot::USV);
  for (const SymbolicAction& s : plan.steps) {
    r[static_cast<std::size_t>(s.id)] = s.robot;
  }
  return r;
}

void emit_trace(MissionOutcome& out, const WorldState& w) {
  out.trace_rows.push_back(
      trace_row(w.tick, "USV", w.usv.x, w.usv.y, 0.0, w.usv.psi, w.usv.v));
  out.trace_rows.push_back(trace_row(w.tick, "UAV", w.uav.p.x, w.uav.p.y,
                                     w.uav.p.z, w.uav.psi, w.uav.vel.norm()));
}

void run_safe_return(WorldState& world, MissionOutcome& out, EventLog& log,
                     const ControlConfig& cfg, int generation, int id_base) {
  std::vector<SymbolicAction> sequence;
  int next_id = id_base;
  if (!world.uav_on_deck) {
    SymbolicAction fly;
    fly.id = next_id++;
    fly.action = ActionKind::FlyTo;
    fly.robot = Robot::UAV;
    fly.theta.geometry = PointParams{Vec2{world.usv.x, world.usv.y},
                                     cfg.safe_return_altitude};
    sequence.push_back(fly);

    SymbolicAction land;
    land.id = next_id++;
    land.action = ActionKind::LandOnUSV;
    land.robot = Robot::UAV;
    sequence.push_back(land);
  }
  if (world.landmarks.count("PortDock")) {
    SymbolicAction home;
    home.id = next_id++;
    home.action = ActionKind::GoHome;
    home.robot = Robot::USV;
    sequence.push_back(home);
  }

  for (const SymbolicAction& act : sequence) {
    const long start = world.tick;
    log.emit({{"event", "step_started"},
              {"tick", start},
              {"gen", generation},
              {"phase", "safe_return"},
              {"step", act.id},
              {"action", to_string(act.action)},
              {"robot", to_string(act.robot)}});

    auto exec = ActionExecutor::create(act, world, cfg);
    if (!exec) {
      log.emit({{"event", "step_failed"},
                {"tick", start},
                {"gen", generation},
                {"phase", "safe_return"},
                {"step", act.id},
                {"reason", exec.error()}});
      out.timeline.push_back({generation, act.id, act.action, act.robot,
                              start, start, StepResultKind::Failed,
                              exec.error(), true});
      return;  // remaining safe-return actions are infeasible
    }

    bool done = false;
    std::string fail_reason;
    long guard = 120000;
    while (guard-- > 0) {
      ExecTick et = exec.value()->tick(world);
      UsvCommand usv_cmd = act.robot == Robot::USV
                               ? et.usv_cmd
                               : usv_hold_command(world.usv, cfg);
      UavCommand uav_cmd =
          act.robot == Robot::UAV
              ? et.uav_cmd
              : (world.uav_on_deck ? UavCommand{}
                                   : uav_hold_command(world.uav, cfg));
      if (et.release_deck) world.uav_on_deck = false;
      if (et.touch_down) world.uav_on_deck = true;
      if (et.phase == ExecPhase::Failed) {
        fail_reason = et.fail_reason;
        break;
      }
      world = step(world, usv_cmd, uav_cmd);
      emit_trace(out, world);
      if (et.phase == ExecPhase::Done) {
        done = true;
        break;
      }
    }

    const long end = world.tick;
    if (done) {
      log.emit({{"event", "step_completed"},
                {"tick", end},
                {"gen", generation},
                {"phase", "safe_return"},
                {"step", act.id},
                {"action", to_string(act.action)},
                {"robot", to_string(act.robot)},
                {"start", start}});
      out.timeline.push_back({generation, act.id, act.action, act.robot,
                              start, end, StepResultKind::Completed, "", true});
    } else {
      log.emit({{"event", "step_failed"},
                {"tick", end},
                {"gen", generation},
                {"phase", "safe_return"},
                {"step", act.id},
                {"reason", fail_reason.empty() ? "did not converge" : fail_reason}});
      out.timeline.push_back({generation, act.id, act.action, act.robot,
                              start, end, StepResultKind::Failed,
                              fail_reason.empty() ? "did not converge" : fail_reason,
                              true});
      return;
    }
  }
}

}  // namespace

MissionOutcome run_mission(const MissionPlan& plan, WorldState world,
                           const ModelClients& clients,
                           const MissionRequest& request,
                           const ReplanPolicy& policy,
                           const ControlConfig& cfg) {
  MissionOutcome out;
  EventLog log{&out.events};
  const long start_tick = world.tick;

  MissionPlan current = plan;
  auto graph_r = build_graph(current);
  if (!graph_r) {
    out.status = MissionStatus::Failed;
    log.emit({{"event", "mission_end"},
              {"tick", world.tick},
              {"status", "Failed"},
              {"reason", graph_r.error().reason},
              {"replans", 0}});
    out.final_world = std::move(world);
    out.final_tick = out.final_world.tick;
    return out;
  }
  DependencyGraph graph = std::move(graph_r.value());
  ExecutionState state = initial_state(graph);
  std::vector<Robot> robots = robots_of(current);

  int generation = 0;
  bool recording = false;
  bool pending_replan = false;
  std::map<Robot, ActiveExec> active;
  std::vector<PendingResult> pending;
  std::optional<MissionStatus> verdict;
  std::string verdict_reason;

  emit_trace(out, world);

  while (true) {
    const long now = world.tick;

    if (!verdict && policy.abort_at_tick >= 0 && now >= policy.abort_at_tick) {
      verdict = MissionStatus::Aborted;
      verdict_reason = "operator abort";
    }
    if (!verdict && now - start_tick >= policy.max_ticks) {
      verdict = MissionStatus::Aborted;
      verdict_reason = "tick budget exceeded";
    }

    // Fold results detected last tick back into the dependency state, in
    // ascending (end tick, step id) order so outcomes stay deterministic.
    std::sort(pending.begin(), pending.end(),
              [](const PendingResult& a, const PendingResult& b) {
                return std::tie(a.end, a.id) < std::tie(b.end, b.id);
              });
    for (const PendingResult& r : pending) {
      const SymbolicAction& step = current.steps[static_cast<std::size_t>(r.id)];
      if (r.phase == ExecPhase::Done) {
        bool inspect_failed = false;
        if (step.action == ActionKind::Inspect && clients.inspector) {
          auto report = handle_inspection(
              step, world, *clients.inspector, request.instruction,
              policy.critical_keywords, [&](const std::string& text) {
                out.alerts.push_back({world.tick, step.id, text});
                log.emit({{"event", "alert"},
                          {"tick", world.tick},
                          {"gen", generation},
                          {"step", step.id},
                          {"text", text}});
              });
          if (!report) {
            inspect_failed = true;
            log.emit({{"event", "step_failed"},
                      {"tick", r.end},
                      {"gen", generation},
                      {"phase", "mission"},
                      {"step", r.id},
                      {"reason", to_string(report.error().kind)}});
            out.timeline.push_back({generation, r.id, step.action, step.robot,
                                    r.start, r.end, StepResultKind::Failed,
                                    to_string(report.error().kind), false});
            pending_replan = true;
          } else {
            out.inspections.push_back(std::move(report.value()));
            log.emit({{"event", "inspection"},
                      {"tick", world.tick},
                      {"gen", generation},
                      {"step", r.id},
                      {"concerns",
                       static_cast<int>(out.inspections.back().concerns.size())},
                      {"recorded", recording}});
          }
        }
        if (inspect_failed) continue;

        state = mark_complete(std::move(state), r.id).value();
        if (step.action == ActionKind::Record) recording = true;
        if (step.action == ActionKind::Report) {
          log.emit({{"event", "report_flush"},
                    {"tick", world.tick},
                    {"gen", generation},
                    {"step", r.id},
                    {"inspections", static_cast<int>(out.inspections.size())}});
        }
        out.timeline.push_back({generation, r.id, step.action, step.robot,
                                r.start, r.end, StepResultKind::Completed, "",
                                false});
        log.emit({{"event", "step_completed"},
                  {"tick", r.end},
                  {"gen", generation},
                  {"phase", "mission"},
                  {"step", r.id},
                  {"action", to_string(step.action)},
                  {"robot", to_string(step.robot)},
                  {"start", r.start}});
      } else {
        out.timeline.push_back({generation, r.id, step.action, step.robot,
                                r.start, r.end, StepResultKind::Failed,
                                r.reason, false});
        log.emit({{"event", "step_failed"},
                  {"tick", r.end},
                  {"gen", generation},
                  {"phase", "mission"},
                  {"step", r.id},
                  {"reason", r.reason}});
        pending_replan = true;
      }
    }
    pending.clear();

    if (!verdict &&
        static_cast<int>(state.completed.size()) == graph.node_count) {
      verdict = MissionStatus::Succeeded;
    }

    // Replanning waits until in-flight actions drain, so completed work is
    // never discarded mid-action.
    if (!verdict && pending_replan && active.empty()) {
      auto fresh = replan(request, world, current, state.completed,
                          *clients.planner, policy, out.replans);
      if (fresh) {
        ++out.replans;
        ++generation;
        current = std::move(fresh.value());
        graph = build_graph(current).value();  // replan() pre-checked this
        state = initial_state(graph);
        robots = robots_of(current);
        pending_replan = false;
        log.emit({{"event", "replanned"},
                  {"tick", now},
                  {"gen", generation},
                  {"steps", static_cast<int>(current.steps.size())}});
      } else {
        verdict = MissionStatus::Failed;
        verdict_reason = to_string(fresh.error().kind);
      }
    }

    if (verdict) break;

    if (!pending_replan) {
      RobotAvailability avail;
      avail.robot_of = robots;
      avail.usv_idle = !active.count(Robot::USV);
      avail.uav_idle = !active.count(Robot::UAV);
      for (int id : dispatch_ready(state, graph, avail)) {
        const SymbolicAction& step = current.steps[static_cast<std::size_t>(id)];
        state = mark_executing(graph, std::move(state), id).value();
        log.emit({{"event", "step_started"},
                  {"tick", now},
                  {"gen", generation},
                  {"phase", "mission"},
                  {"step", id},
                  {"action", to_string(step.action)},
                  {"robot", to_string(step.robot)}});

        auto exec = ActionExecutor::create(step, world, cfg);
        if (!exec) {
          pending.push_back({id, now, now, ExecPhase::Failed, exec.error()});
          continue;
        }
        const bool inject = std::any_of(
            policy.inject_failures.begin(), policy.inject_failures.end(),
            [&](const std::pair<int, int>& f) {
              return f.first == generation && f.second == id;
            });
        active[step.robot] =
            ActiveExec{std::move(exec.value()), now, inject};
      }
    }

    UsvCommand usv_cmd = usv_hold_command(world.usv, cfg);
    UavCommand uav_cmd =
        world.uav_on_deck ? UavCommand{} : uav_hold_command(world.uav, cfg);
    bool release_deck = false;
    bool touch_down = false;
    std::vector<Robot> finished;
    for (auto& [robot, a] : active) {
      ExecTick et;
      if (a.force_fail) {
        et.phase = ExecPhase::Failed;
        et.fail_reason = "injected_fault";
      } else {
        et = a.exec->tick(world);
      }
      if (robot == Robot::USV) {
        usv_cmd = et.usv_cmd;
      } else {
        uav_cmd = et.uav_cmd;
      }
      release_deck = release_deck || et.release_deck;
      touch_down = touch_down || et.touch_down;
      if (et.phase != ExecPhase::Running) {
        pending.push_back(
            {a.exec->step().id, a.start, now, et.phase, et.fail_reason});
        finished.push_back(robot);
      }
    }
    for (Robot r : finished) active.erase(r);

    if (release_deck) world.uav_on_deck = false;
    if (touch_down) world.uav_on_deck = true;

    std::vector<std::string> boundary;
    world = step(world, usv_cmd, uav_cmd, &boundary);
    for (const std::string& b : boundary) {
      log.emit({{"event", "boundary"}, {"tick", now}, {"what", b}});
    }
    emit_trace(out, world);
  }

  out.status = *verdict;
  for (const TimelineEntry& e : out.timeline) {
    out.makespan_ticks = std::max(out.makespan_ticks, e.end_tick - start_tick);
  }

  // Anything still in flight when the verdict landed was preempted.
  for (auto& [robot, a] : active) {
    const SymbolicAction& step = a.exec->step();
    out.timeline.push_back({generation, step.id, step.action, step.robot,
                            a.start, world.tick, StepResultKind::Skipped,
                            verdict_reason, false});
    log.emit({{"event", "step_failed"},
              {"tick", world.tick},
              {"gen", generation},
              {"phase", "mission"},
              {"step", step.id},
              {"reason", "preempted: " + verdict_reason}});
  }
  active.clear();

  if (out.status != MissionStatus::Succeeded) {
    run_safe_return(world, out, log, cfg, generation,
                    static_cast<int>(current.steps.size()));
  }

  json end_event{{"event", "mission_end"},
                 {"tick", world.tick},
                 {"status", to_string(out.status)},
                 {"replans", out.replans}};
  if (!verdict_reason.empty()) end_event["reason"] = verdict_reason;
  log.emit(end_event);

  out.final_tick = world.tick;
  out.final_world = std::move(world);
  return out;
}

}  // namespace portmission
