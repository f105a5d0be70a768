#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

#include "portmission/clients.hpp"
#include "query_classes.hpp"

namespace portmission {

const char* to_string(ClientErrorKind k) {
  switch (k) {
    case ClientErrorKind::Timeout: return "Timeout";
    case ClientErrorKind::HttpStatus: return "HttpStatus";
    case ClientErrorKind::AuthMissing: return "AuthMissing";
    case ClientErrorKind::InspectorUnavailable: return "InspectorUnavailable";
    case ClientErrorKind::BudgetExhausted: return "BudgetExhausted";
    case ClientErrorKind::InvalidPlanReturned: return "InvalidPlanReturned";
    case ClientErrorKind::TranscriptExhausted: return "TranscriptExhausted";
  }
  return "?";
}

const char* to_string(Severity s) {
  switch (s) {
    case Severity::Note: return "note";
    case Severity::Warning: return "warning";
    case Severity::Critical: return "critical";
  }
  return "?";
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

// -------------------------------------------------------------------------
// Plan template library. Targets derive from named landmarks so the same
// templates fit any world that names them.

constexpr const char* kResumeMarker = "[RESUME]";

Vec2 landmark_or(const MissionRequest& req, const char* name, Vec2 fallback) {
  if (const auto p = req.environment.landmark(name)) return {p->x, p->y};
  return fallback;
}

SymbolicAction make_step(int id, ActionKind action, Robot robot) {
  SymbolicAction s;
  s.id = id;
  s.action = action;
  s.robot = robot;
  if (id > 0) s.preconditions.insert(id - 1);
  return s;
}

void set_point(SymbolicAction& s, Vec2 target, double altitude = 0.0) {
  PointParams p;
  p.target = target;
  p.altitude = altitude;
  s.theta.geometry = p;
}

MissionPlan crane_plan(const MissionRequest& req) {
  const Vec2 crane = landmark_or(req, "Crane", {100, 90});
  const Vec2 home = landmark_or(req, "PortDock", {20, 20});
  const Vec2 staging = crane + Vec2{-14, -12};
  const Vec2 viewpoint = crane + Vec2{3, -13};

  MissionPlan plan;
  plan.mission_id = "crane-inspection";
  auto s0 = make_step(0, ActionKind::Navigate, Robot::USV);
  set_point(s0, staging);
  auto s1 = make_step(1, ActionKind::Takeoff, Robot::UAV);
  s1.theta.geometry = PointParams{std::nullopt, 15.0};
  s1.theta.from_deck = true;
  auto s2 = make_step(2, ActionKind::FlyTo, Robot::UAV);
  set_point(s2, viewpoint, 15.0);
  auto s3 = make_step(3, ActionKind::Inspect, Robot::UAV);
  set_point(s3, viewpoint, 15.0);
  s3.theta.dwell_s = 2.0;
  s3.queries = {"Is there any human or vehicle near the crane?"};
  auto s4 = make_step(4, ActionKind::FlyTo, Robot::UAV);
  set_point(s4, staging, 15.0);
  auto s5 = make_step(5, ActionKind::LandOnUSV, Robot::UAV);
  auto s6 = make_step(6, ActionKind::GoHome, Robot::USV);
  set_point(s6, home);
  plan.steps = {s0, s1, s2, s3, s4, s5, s6};
  return plan;
}

MissionPlan container_plan(const MissionRequest& req) {
  const Vec2 stack = landmark_or(req, "ContainerStack", {140, 60});
  const Vec2 home = landmark_or(req, "PortDock", {20, 20});
  const Vec2 staging = stack + Vec2{-18, -16};

  MissionPlan plan;
  plan.mission_id = "container-stack-survey";
  auto s0 = make_step(0, ActionKind::Navigate, Robot::USV);
  set_point(s0, staging);
  auto s1 = make_step(1, ActionKind::Takeoff, Robot::UAV);
  s1.theta.geometry = PointParams{std::nullopt, 12.0};
  s1.theta.from_deck = true;
  auto s2 = make_step(2, ActionKind::Survey, Robot::UAV);
  RectParams rect;
  rect.vertices = {Vec2{stack.x - 14, stack.y - 12}, Vec2{stack.x + 14, stack.y - 12},
                   Vec2{stack.x + 14, stack.y + 12}, Vec2{stack.x - 14, stack.y + 12}};
  rect.altitude = 12.0;
  s2.theta.geometry = rect;
  auto s3 = make_step(3, ActionKind::Inspect, Robot::UAV);
  set_point(s3, stack + Vec2{-14, -12}, 12.0);
  s3.theta.dwell_s = 2.0;
  s3.queries = {"Are the container stacks well aligned?"};
  auto s4 = make_step(4, ActionKind::FlyTo, Robot::UAV);
  set_point(s4, staging, 12.0);
  auto s5 = make_step(5, ActionKind::LandOnUSV, Robot::UAV);
  auto s6 = make_step(6, ActionKind::GoHome, Robot::USV);
  set_point(s6, home);
  plan.steps = {s0, s1, s2, s3, s4, s5, s6};
  return plan;
}

MissionPlan docking_plan(const MissionRequest& req) {
  const Vec2 dock = landmark_or(req, "DockingArea", {62, 118});
  const Vec2 home = landmark_or(req, "PortDock", {20, 20});

  MissionPlan plan;
  plan.mission_id = "docking-zone-inspection";
  // The docking zone sits near home, so the UAV deploys directly with no
  // USV repositioning.
  auto s0 = make_step(0, ActionKind::Takeoff, Robot::UAV);
  s0.theta.geometry = PointParams{std::nullopt, 12.0};
  auto s1 = make_step(1, ActionKind::Survey, Robot::UAV);
  RectParams rect;
  rect.vertices = {Vec2{dock.x - 12, dock.y - 10}, Vec2{dock.x + 12, dock.y - 10},
                   Vec2{dock.x + 12, dock.y + 10}, Vec2{dock.x - 12, dock.y + 10}};
  rect.altitude = 12.0;
  s1.theta.geometry = rect;
  auto s2 = make_step(2, ActionKind::Inspect, Robot::UAV);
  set_point(s2, dock + Vec2{0, -14}, 12.0);
  s2.theta.dwell_s = 2.0;
  s2.queries = {"Is there a sailboat in the docking station?"};
  auto s3 = make_step(3, ActionKind::FlyTo, Robot::UAV);
  set_point(s3, home, 12.0);
  auto s4 = make_step(4, ActionKind::LandOnUSV, Robot::UAV);
  auto s5 = make_step(5, ActionKind::GoHome, Robot::USV);
  set_point(s5, home);
  plan.steps = {s0, s1, s2, s3, s4, s5};
  return plan;
}

MissionPlan dock_container_plan(const MissionRequest& req) {
  const Vec2 dock = landmark_or(req, "DockingArea", {62, 118});
  const Vec2 stack = landmark_or(req, "ContainerStack", {140, 60});
  const Vec2 home = landmark_or(req, "PortDock", {20, 20});
  // Hold south of the crane corridor, between the two survey areas.
  const Vec2 staging = Vec2{(dock.x + stack.x) * 0.5,
                            std::min(dock.y, stack.y) - 8.0};

  MissionPlan plan;
  plan.mission_id = "dock-and-container-survey";
  auto s0 = make_step(0, ActionKind::Navigate, Robot::USV);
  set_point(s0, staging);
  auto s1 = make_step(1, ActionKind::Takeoff, Robot::UAV);
  s1.theta.geometry = PointParams{std::nullopt, 14.0};
  s1.theta.from_deck = true;
  auto s2 = make_step(2, ActionKind::Survey, Robot::UAV);
  RectParams dock_rect;
  dock_rect.vertices = {Vec2{dock.x - 12, dock.y - 10}, Vec2{dock.x + 12, dock.y - 10},
                        Vec2{dock.x + 12, dock.y + 10}, Vec2{dock.x - 12, dock.y + 10}};
  dock_rect.altitude = 14.0;
  s2.theta.geometry = dock_rect;
  auto s3 = make_step(3, ActionKind::Survey, Robot::UAV);
  RectParams stack_rect;
  stack_rect.vertices = {Vec2{stack.x - 14, stack.y - 12}, Vec2{stack.x + 14, stack.y - 12},
                         Vec2{stack.x + 14, stack.y + 12}, Vec2{stack.x - 14, stack.y + 12}};
  stack_rect.altitude = 14.0;
  s3.theta.geometry = stack_rect;
  auto s4 = make_step(4, ActionKind::Inspect, Robot::UAV);
  set_point(s4, stack + Vec2{-14, -12}, 14.0);
  s4.theta.dwell_s = 2.0;
  s4.queries = {"Is there a sailboat in the docking station?",
                "Are the container stacks well aligned?"};
  auto s5 = make_step(5, ActionKind::FlyTo, Robot::UAV);
  set_point(s5, staging, 14.0);
  auto s6 = make_step(6, ActionKind::LandOnUSV, Robot::UAV);
  auto s7 = make_step(7, ActionKind::GoHome, Robot::USV);
  set_point(s7, home);
  plan.steps = {s0, s1, s2, s3, s4, s5, s6, s7};
  return plan;
}

MissionPlan joint_plan(const MissionRequest& req) {
  const Vec2 crane = landmark_or(req, "Crane", {100, 90});
  const Vec2 dock = landmark_or(req, "DockingArea", {62, 118});
  const Vec2 home = landmark_or(req, "PortDock", {20, 20});
  const Vec2 staging = crane + Vec2{-16, -14};
  const Vec2 dock_hold = dock + Vec2{0, -14};

  MissionPlan plan;
  plan.mission_id = "joint-crane-and-docking";
  auto s0 = make_step(0, ActionKind::Navigate, Robot::USV);
  set_point(s0, staging);
  auto s1 = make_step(1, ActionKind::Takeoff, Robot::UAV);
  s1.theta.geometry = PointParams{std::nullopt, 15.0};
  s1.theta.from_deck = true;
  // The UAV orbits the crane while the USV repositions toward the dock.
  auto s2 = make_step(2, ActionKind::Survey, Robot::UAV);
  s2.theta.geometry = OrbitParams{crane, 12.0, 15.0};
  auto s3 = make_step(3, ActionKind::Navigate, Robot::USV);
  set_point(s3, dock_hold);
  s3.preconditions = {1};
  auto s4 = make_step(4, ActionKind::Inspect, Robot::USV);
  set_point(s4, dock_hold);
  s4.theta.dwell_s = 2.0;
  s4.queries = {"Is there a sailboat in the docking station?"};
  s4.preconditions = {3};
  auto s5 = make_step(5, ActionKind::FlyTo, Robot::UAV);
  set_point(s5, dock_hold, 15.0);
  s5.preconditions = {2, 3};
  auto s6 = make_step(6, ActionKind::LandOnUSV, Robot::UAV);
  s6.preconditions = {4, 5};
  auto s7 = make_step(7, ActionKind::GoHome, Robot::USV);
  set_point(s7, home);
  s7.preconditions = {6};
  plan.steps = {s0, s1, s2, s3, s4, s5, s6, s7};
  return plan;
}

MissionPlan fallback_plan(const MissionRequest& req) {
  const Bounds3& b = req.environment.bounds;
  const Vec2 center{(b.min.x + b.max.x) * 0.5, (b.min.y + b.max.y) * 0.5};
  const Vec2 home = landmark_or(req, "PortDock", {20, 20});

  MissionPlan plan;
  plan.mission_id = "general-patrol";
  auto s0 = make_step(0, ActionKind::Navigate, Robot::USV);
  set_point(s0, center);
  auto s1 = make_step(1, ActionKind::Inspect, Robot::USV);
  set_point(s1, center);
  s1.theta.dwell_s = 2.0;
  s1.queries = {"Is there any boat in this port scene?"};
  auto s2 = make_step(2, ActionKind::GoHome, Robot::USV);
  set_point(s2, home);
  plan.steps = {s0, s1, s2};
  return plan;
}

MissionPlan cyclic_plan() {
  MissionPlan plan;
  plan.mission_id = "cyclic";
  auto s0 = make_step(0, ActionKind::Navigate, Robot::USV);
  set_point(s0, {10, 10});
  s0.preconditions = {1};
  auto s1 = make_step(1, ActionKind::GoHome, Robot::USV);
  set_point(s1, {5, 5});
  s1.preconditions = {0};
  plan.steps = {s0, s1};
  return plan;
}

}  // namespace

Result<PlanResponse, ClientError> StubPlanner::plan(const MissionRequest& request) {
  if (options_.force_cyclic) {
    return PlanResponse{serialize_plan(cyclic_plan()), 0.0};
  }

  const std::size_t marker = request.instruction.find(kResumeMarker);
  if (marker != std::string::npos) {
    // Replanning request: the remaining objectives arrive as an embedded
    // plan document after the marker; re-emit them as the fresh plan.
    std::string doc = request.instruction.substr(marker + std::string(kResumeMarker).size());
    return PlanResponse{std::move(doc), 0.0};
  }

  const std::string text = lower(request.instruction);
  const auto has = [&](const char* k) { return text.find(k) != std::string::npos; };

  MissionPlan plan;
  if (has("joint") || (has("crane") && (has("dock") || has("docking")))) {
    plan = joint_plan(request);
  } else if (has("container") && (has("dock") || has("docking"))) {
    plan = dock_container_plan(request);
  } else if (has("crane") || has("loading area")) {
    plan = crane_plan(request);
  } else if (has("container")) {
    plan = container_plan(request);
  } else if (has("dock") || has("sailboat")) {
    plan = docking_plan(request);
  } else {
    plan = fallback_plan(request);
  }
  return PlanResponse{serialize_plan(plan), 0.0};
}

// ---------------------------------------------------------------------------
// Stub inspector: ground-truth answers from the scene observation.

namespace {

const VisibleEntity* find_landmark_entity(const SceneObservation& obs,
                                          const std::string& query) {
  static const std::array<const char*, 4> anchors{"crane", "container", "dock",
                                                  "pier"};
  const std::string q = lower(query);
  for (const char* a : anchors) {
    if (q.find(a) == std::string::npos) continue;
    for (const VisibleEntity& e : obs.visible_entities) {
      if (lower(e.label).find(a) != std::string::npos) return &e;
    }
  }
  return nullptr;
}

std::string side_word(double relative_bearing) {
  if (std::abs(relative_bearing) < 0.05) return "directly in line with";
  return relative_bearing > 0.0 ? "on the left side of" : "on the right side of";
}

std::string bearing_word(double bearing) {
  if (std::abs(bearing) < 0.1) return "ahead";
  return bearing > 0.0 ? "to the left" : "to the right";
}

std::string format_range(double range) {
  std::ostringstream os;
  os << std::fixed;
  os.precision(1);
  os << range;
  return os.str();
}

/// Phrase describing where `e` sits, anchored to a query landmark when one
/// is visible.
std::string locate_phrase(const SceneObservation& obs, const VisibleEntity& e,
                          const std::string& query) {
  if (const VisibleEntity* lm = find_landmark_entity(obs, query);
      lm && lm->label != e.label) {
    return side_word(wrap_angle(e.bearing - lm->bearing)) + " the " + lm->label;
  }
  return bearing_word(e.bearing) + ", " + format_range(e.range) + " m away";
}

}  // namespace

std::string answer_query(const SceneObservation& obs, const std::string& query) {
  const auto classes = detail::classify_query(query);
  if (classes.empty()) return "Unable to classify the query.";

  for (const detail::EntityClass* c : classes) {
    for (const VisibleEntity& e : obs.visible_entities) {
      if (!detail::label_matches(e.label, *c)) continue;
      return "Yes, " + e.label + " " + locate_phrase(obs, e, query) + ".";
    }
  }
  std::string names;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    names += (i ? " or " : "") + std::string(classes[i]->name);
  }
  return "No, no " + names + " visible.";
}

InspectionReport stub_inspect(const SceneObservation& obs,
                              const std::vector<std::string>& queries,
                              const std::string& context) {
  InspectionReport report;
  report.prompt = context;
  report.tick = obs.frame_id;
  report.robot = obs.observer;
  report.pose = obs.pose;

  if (obs.visible_entities.empty()) {
    report.basic = "No entities visible from the " +
                   std::string(to_string(obs.observer)) + " camera.";
  } else {
    std::ostringstream basic;
    basic << obs.visible_entities.size() << " entities visible from the "
          << to_string(obs.observer) << " camera:";
    for (const VisibleEntity& e : obs.visible_entities) basic << " " << e.label;
    basic << ".";
    report.basic = basic.str();
  }

  std::ostringstream detailed;
  for (const VisibleEntity& e : obs.visible_entities) {
    detailed << "- " << e.label << " at " << format_range(e.range) << " m, "
             << bearing_word(e.bearing) << ".\n";
  }
  for (const std::string& q : queries) {
    detailed << "Q: " << q << " A: " << answer_query(obs, q) << "\n";
  }
  report.detailed = detailed.str();

  // Concerns: query-matched entities, excluding structural anchors. One
  // concern per (query, entity) even when several classes match it.
  for (const std::string& q : queries) {
    std::set<std::string> flagged;
    for (const detail::EntityClass* c : detail::classify_query(q)) {
      if (c->structural) continue;
      for (const VisibleEntity& e : obs.visible_entities) {
        if (!detail::label_matches(e.label, *c)) continue;
        if (!flagged.insert(e.label).second) continue;
        report.concerns.emplace_back(
            std::string(c->name) + " (" + e.label + ") " +
                locate_phrase(obs, e, q),
            Severity::Warning);
      }
    }
  }
  return report;
}

}  // namespace portmission
