#include "portmission/plan.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <sstream>

namespace portmission {

using nlohmann::json;

const char* to_string(ActionKind a) {
  switch (a) {
    case ActionKind::Takeoff: return "Takeoff";
    case ActionKind::FlyTo: return "FlyTo";
    case ActionKind::Survey: return "Survey";
    case ActionKind::Record: return "Record";
    case ActionKind::Hover: return "Hover";
    case ActionKind::Navigate: return "Navigate";
    case ActionKind::Dock: return "Dock";
    case ActionKind::LandOnUSV: return "LandOnUSV";
    case ActionKind::Inspect: return "Inspect";
    case ActionKind::Report: return "Report";
    case ActionKind::GoHome: return "GoHome";
  }
  return "?";
}

const char* to_string(Robot r) { return r == Robot::USV ? "USV" : "UAV"; }

std::optional<ActionKind> action_from_string(std::string_view s) {
  for (ActionKind a : kAllActions) {
    if (s == to_string(a)) return a;
  }
  return std::nullopt;
}

std::optional<Robot> robot_from_string(std::string_view s) {
  if (s == "USV") return Robot::USV;
  if (s == "UAV") return Robot::UAV;
  return std::nullopt;
}

const char* to_string(ParseErrorKind k) {
  switch (k) {
    case ParseErrorKind::MalformedDocument: return "MalformedDocument";
    case ParseErrorKind::UnknownAction: return "UnknownAction";
    case ParseErrorKind::RobotMismatch: return "RobotMismatch";
    case ParseErrorKind::MissingField: return "MissingField";
    case ParseErrorKind::DanglingPrecondition: return "DanglingPrecondition";
  }
  return "?";
}

namespace {

bool uav_only(ActionKind a) {
  return a == ActionKind::Takeoff || a == ActionKind::FlyTo ||
         a == ActionKind::LandOnUSV;
}

bool usv_only(ActionKind a) {
  return a == ActionKind::Navigate || a == ActionKind::Dock ||
         a == ActionKind::GoHome;
}

ParseError err(ParseErrorKind kind, std::string reason, std::size_t offset = 0) {
  return ParseError{kind, offset, std::move(reason)};
}

Result<Vec2, ParseError> parse_vec2(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    return err(ParseErrorKind::MalformedDocument, what + " must be [x, y]");
  }
  return Vec2{j[0].get<double>(), j[1].get<double>()};
}

Result<ThetaParams, ParseError> parse_theta(const json& step, int id,
                                            ActionKind action) {
  ThetaParams theta;
  const json params = step.contains("params") ? step.at("params")
                                              : json::object();
  if (!params.is_object()) {
    return err(ParseErrorKind::MalformedDocument,
               "step " + std::to_string(id) + ": params must be an object");
  }

  std::string pattern = "Point";
  if (params.contains("pattern")) {
    if (!params.at("pattern").is_string()) {
      return err(ParseErrorKind::MalformedDocument,
                 "step " + std::to_string(id) + ": pattern must be a string");
    }
    pattern = params.at("pattern").get<std::string>();
  }

  if (pattern == "Point") {
    PointParams p;
    if (params.contains("target")) {
      auto v = parse_vec2(params.at("target"), "target");
      if (!v) return v.error();
      p.target = v.value();
    }
    if (params.contains("altitude")) p.altitude = params.at("altitude").get<double>();
    theta.geometry = p;
  } else if (pattern == "Orbit360") {
    OrbitParams o;
    if (!params.contains("center")) {
      return err(ParseErrorKind::MissingField,
                 "step " + std::to_string(id) + ": Orbit360 requires center");
    }
    auto c = parse_vec2(params.at("center"), "center");
    if (!c) return c.error();
    o.center = c.value();
    if (!params.contains("radius")) {
      return err(ParseErrorKind::MissingField,
                 "step " + std::to_string(id) + ": Orbit360 requires radius");
    }
    o.radius = params.at("radius").get<double>();
    if (params.contains("altitude")) o.altitude = params.at("altitude").get<double>();
    theta.geometry = o;
  } else if (pattern == "Rectangle") {
    RectParams r;
    if (!params.contains("vertices") || !params.at("vertices").is_array() ||
        params.at("vertices").size() != 4) {
      return err(ParseErrorKind::MalformedDocument,
                 "step " + std::to_string(id) +
                     ": Rectangle requires exactly 4 vertices");
    }
    for (std::size_t i = 0; i < 4; ++i) {
      auto v = parse_vec2(params.at("vertices")[i], "vertex");
      if (!v) return v.error();
      r.vertices[i] = v.value();
    }
    if (params.contains("altitude")) r.altitude = params.at("altitude").get<double>();
    theta.geometry = r;
  } else {
    return err(ParseErrorKind::MalformedDocument,
               "step " + std::to_string(id) + ": unknown pattern '" + pattern +
                   "'");
  }

  if (params.contains("dwell")) theta.dwell_s = params.at("dwell").get<double>();
  if (params.contains("deck")) theta.from_deck = params.at("deck").get<bool>();

  if (action == ActionKind::Survey && theta.pattern() == PatternTag::Orbit360 &&
      std::get<OrbitParams>(theta.geometry).radius <= 0.0) {
    return err(ParseErrorKind::MalformedDocument,
               "step " + std::to_string(id) + ": orbit radius must be > 0");
  }
  return theta;
}

json theta_to_json(const ThetaParams& theta) {
  json params = json::object();
  switch (theta.pattern()) {
    case PatternTag::Point: {
      const auto& p = std::get<PointParams>(theta.geometry);
      if (p.target) params["target"] = {p.target->x, p.target->y};
      if (p.altitude != 0.0) params["altitude"] = p.altitude;
      break;
    }
    case PatternTag::Orbit360: {
      const auto& o = std::get<OrbitParams>(theta.geometry);
      params["pattern"] = "Orbit360";
      params["center"] = {o.center.x, o.center.y};
      params["radius"] = o.radius;
      if (o.altitude != 0.0) params["altitude"] = o.altitude;
      break;
    }
    case PatternTag::Rectangle: {
      const auto& r = std::get<RectParams>(theta.geometry);
      params["pattern"] = "Rectangle";
      json verts = json::array();
      for (const Vec2& v : r.vertices) verts.push_back({v.x, v.y});
      params["vertices"] = verts;
      if (r.altitude != 0.0) params["altitude"] = r.altitude;
      break;
    }
  }
  if (theta.dwell_s != 0.0) params["dwell"] = theta.dwell_s;
  if (theta.from_deck) params["deck"] = true;
  return params;
}

}  // namespace

Result<MissionPlan, ParseError> parse_plan(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    return err(ParseErrorKind::MalformedDocument, e.what(), e.byte);
  }
  if (!doc.is_object()) {
    return err(ParseErrorKind::MalformedDocument, "top level must be an object");
  }
  if (!doc.contains("mission_id") || !doc.at("mission_id").is_string()) {
    return err(ParseErrorKind::MissingField, "mission_id");
  }
  if (!doc.contains("steps") || !doc.at("steps").is_array()) {
    return err(ParseErrorKind::MissingField, "steps");
  }

  MissionPlan plan;
  plan.mission_id = doc.at("mission_id").get<std::string>();
  const json& steps = doc.at("steps");
  const int n = static_cast<int>(steps.size());

  for (int i = 0; i < n; ++i) {
    const json& js = steps[i];
    if (!js.is_object()) {
      return err(ParseErrorKind::MalformedDocument,
                 "step " + std::to_string(i) + " must be an object");
    }
    SymbolicAction step;

    if (!js.contains("id") || !js.at("id").is_number_integer()) {
      return err(ParseErrorKind::MissingField,
                 "step " + std::to_string(i) + ": id");
    }
    step.id = js.at("id").get<int>();
    if (step.id != i) {
      return err(ParseErrorKind::MalformedDocument,
                 "step ids must be 0..N-1 in listed order (step " +
                     std::to_string(i) + " has id " + std::to_string(step.id) +
                     ")");
    }

    if (!js.contains("action") || !js.at("action").is_string()) {
      return err(ParseErrorKind::MissingField,
                 "step " + std::to_string(i) + ": action");
    }
    const std::string action_name = js.at("action").get<std::string>();
    const auto action = action_from_string(action_name);
    if (!action) {
      return err(ParseErrorKind::UnknownAction,
                 "step " + std::to_string(i) + ": unknown action '" +
                     action_name + "'");
    }
    step.action = *action;

    if (!js.contains("robot") || !js.at("robot").is_string()) {
      return err(ParseErrorKind::MissingField,
                 "step " + std::to_string(i) + ": robot");
    }
    const auto robot = robot_from_string(js.at("robot").get<std::string>());
    if (!robot) {
      return err(ParseErrorKind::MalformedDocument,
                 "step " + std::to_string(i) + ": robot must be USV or UAV");
    }
    step.robot = *robot;

    if (uav_only(step.action) && step.robot != Robot::UAV) {
      return err(ParseErrorKind::RobotMismatch,
                 "step " + std::to_string(i) + ": " + to_string(step.action) +
                     " is a UAV action");
    }
    if (usv_only(step.action) && step.robot != Robot::USV) {
      return err(ParseErrorKind::RobotMismatch,
                 "step " + std::to_string(i) + ": " + to_string(step.action) +
                     " is a USV action");
    }

    try {
      auto theta = parse_theta(js, i, step.action);
      if (!theta) return theta.error();
      step.theta = theta.value();

      if (js.contains("queries")) {
        if (!js.at("queries").is_array()) {
          return err(ParseErrorKind::MalformedDocument,
                     "step " + std::to_string(i) + ": queries must be an array");
        }
        for (const json& q : js.at("queries")) {
          step.queries.push_back(q.get<std::string>());
        }
      }
      if (js.contains("preconditions")) {
        if (!js.at("preconditions").is_array()) {
          return err(ParseErrorKind::MalformedDocument,
                     "step " + std::to_string(i) +
                         ": preconditions must be an array");
        }
        for (const json& p : js.at("preconditions")) {
          step.preconditions.insert(p.get<int>());
        }
      }
    } catch (const json::exception& e) {
      return err(ParseErrorKind::MalformedDocument,
                 "step " + std::to_string(i) + ": " + e.what());
    }

    if (step.action == ActionKind::Inspect && step.queries.empty()) {
      return err(ParseErrorKind::MissingField,
                 "step " + std::to_string(i) + ": Inspect requires queries");
    }
    for (int p : step.preconditions) {
      if (p == step.id) {
        return err(ParseErrorKind::DanglingPrecondition,
                   "step " + std::to_string(i) + " references itself");
      }
      if (p < 0 || p >= n) {
        return err(ParseErrorKind::DanglingPrecondition,
                   "step " + std::to_string(i) + " references missing step " +
                       std::to_string(p));
      }
    }
    plan.steps.push_back(std::move(step));
  }
  return plan;
}

std::string serialize_plan(const MissionPlan& plan) {
  json doc;
  doc["mission_id"] = plan.mission_id;
  json steps = json::array();
  for (const SymbolicAction& s : plan.steps) {
    json js;
    js["id"] = s.id;
    js["action"] = to_string(s.action);
    js["robot"] = to_string(s.robot);
    js["params"] = theta_to_json(s.theta);
    js["queries"] = s.queries;
    js["preconditions"] = s.preconditions;
    steps.push_back(js);
  }
  doc["steps"] = steps;
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

std::optional<Vec3> EnvDescription::landmark(std::string_view name) const {
  for (const NamedLandmark& lm : landmarks) {
    if (lm.name == name) return lm.position;
  }
  return std::nullopt;
}

Constraints parse_constraints(const std::vector<std::string>& knowledge) {
  Constraints out;
  for (const std::string& line : knowledge) {
    const std::size_t colon = line.find(':');
    if (colon == std::string::npos) {
      out.advisory.push_back(line);
      continue;
    }
    const std::string key = line.substr(0, colon);
    const std::string value = line.substr(colon + 1);
    try {
      if (key == "max_altitude") {
        out.max_altitude = json::parse(value).get<double>();
      } else if (key == "no_fly_zone" || key == "usv_restricted") {
        Polygon poly;
        for (const json& v : json::parse(value)) {
          poly.push_back({v[0].get<double>(), v[1].get<double>()});
        }
        (key == "no_fly_zone" ? out.no_fly_zones : out.usv_restricted)
            .push_back(std::move(poly));
      } else {
        out.advisory.push_back(line);
      }
    } catch (const json::exception&) {
      out.advisory.push_back(line);
    }
  }
  return out;
}

Result<MissionRequest, ParseError> parse_mission_request(
    std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    return err(ParseErrorKind::MalformedDocument, e.what(), e.byte);
  }

  MissionRequest req;
  try {
    if (!doc.contains("instruction") || !doc.at("instruction").is_string()) {
      return err(ParseErrorKind::MissingField, "instruction");
    }
    req.instruction = doc.at("instruction").get<std::string>();
    if (req.instruction.empty()) {
      return err(ParseErrorKind::MalformedDocument, "instruction is empty");
    }

    const json env = doc.value("environment", json::object());
    req.environment.summary = env.value("summary", "");
    if (env.contains("bounds")) {
      const json& b = env.at("bounds");
      req.environment.bounds.min = {b.at("min")[0].get<double>(),
                                    b.at("min")[1].get<double>(),
                                    b.at("min")[2].get<double>()};
      req.environment.bounds.max = {b.at("max")[0].get<double>(),
                                    b.at("max")[1].get<double>(),
                                    b.at("max")[2].get<double>()};
    }
    const json landmarks = env.value("landmarks", json::object());
    for (const auto& [name, pos] : landmarks.items()) {
      Vec3 p{pos[0].get<double>(), pos[1].get<double>(),
             pos.size() > 2 ? pos[2].get<double>() : 0.0};
      req.environment.landmarks.push_back({name, p});
    }

    for (const json& k : doc.value("knowledge", json::array())) {
      req.knowledge.push_back(k.get<std::string>());
    }

    if (doc.contains("allowed_actions")) {
      for (const json& a : doc.at("allowed_actions")) {
        const auto kind = action_from_string(a.get<std::string>());
        if (!kind) {
          return err(ParseErrorKind::UnknownAction,
                     "allowed_actions: unknown action '" +
                         a.get<std::string>() + "'");
        }
        req.allowed_actions.insert(*kind);
      }
    } else {
      req.allowed_actions.insert(kAllActions.begin(), kAllActions.end());
    }
  } catch (const json::exception& e) {
    return err(ParseErrorKind::MalformedDocument, e.what());
  }

  const Constraints c = parse_constraints(req.knowledge);
  if (c.max_altitude <= 0.0) {
    return err(ParseErrorKind::MalformedDocument, "max_altitude must be > 0");
  }
  for (const Polygon& poly : c.no_fly_zones) {
    if (poly.size() < 3) {
      return err(ParseErrorKind::MalformedDocument,
                 "no_fly_zone needs at least 3 vertices");
    }
    for (const Vec2& v : poly) {
      if (!req.environment.bounds.contains_xy(v)) {
        return err(ParseErrorKind::MalformedDocument,
                   "no_fly_zone vertex outside workspace bounds");
      }
    }
  }
  return req;
}

std::string serialize_mission_request(const MissionRequest& request) {
  json doc;
  doc["instruction"] = request.instruction;
  json env;
  env["summary"] = request.environment.summary;
  env["bounds"] = {
      {"min", {request.environment.bounds.min.x, request.environment.bounds.min.y,
               request.environment.bounds.min.z}},
      {"max", {request.environment.bounds.max.x, request.environment.bounds.max.y,
               request.environment.bounds.max.z}}};
  json lms = json::object();
  for (const NamedLandmark& lm : request.environment.landmarks) {
    lms[lm.name] = {lm.position.x, lm.position.y, lm.position.z};
  }
  env["landmarks"] = lms;
  doc["environment"] = env;
  doc["knowledge"] = request.knowledge;
  json actions = json::array();
  for (ActionKind a : request.allowed_actions) actions.push_back(to_string(a));
  doc["allowed_actions"] = actions;
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::AltitudeExceeded: return "AltitudeExceeded";
    case ViolationKind::InsideNoFlyZone: return "InsideNoFlyZone";
    case ViolationKind::UsvRestrictedZone: return "UsvRestrictedZone";
    case ViolationKind::OutsideWorkspace: return "OutsideWorkspace";
    case ViolationKind::MissingCarrierPositioning:
      return "MissingCarrierPositioning";
    case ViolationKind::DisallowedAction: return "DisallowedAction";
  }
  return "?";
}

namespace {

std::vector<Vec2> spatial_points(const ThetaParams& theta) {
  switch (theta.pattern()) {
    case PatternTag::Point: {
      const auto& p = std::get<PointParams>(theta.geometry);
      if (p.target) return {*p.target};
      return {};
    }
    case PatternTag::Orbit360: {
      const auto& o = std::get<OrbitParams>(theta.geometry);
      return {o.center,
              {o.center.x + o.radius, o.center.y},
              {o.center.x - o.radius, o.center.y},
              {o.center.x, o.center.y + o.radius},
              {o.center.x, o.center.y - o.radius}};
    }
    case PatternTag::Rectangle: {
      const auto& r = std::get<RectParams>(theta.geometry);
      return {r.vertices.begin(), r.vertices.end()};
    }
  }
  return {};
}

double step_altitude(const ThetaParams& theta) {
  switch (theta.pattern()) {
    case PatternTag::Point: return std::get<PointParams>(theta.geometry).altitude;
    case PatternTag::Orbit360: return std::get<OrbitParams>(theta.geometry).altitude;
    case PatternTag::Rectangle: return std::get<RectParams>(theta.geometry).altitude;
  }
  return 0.0;
}

}  // namespace

ValidationReport validate_plan(const MissionPlan& plan,
                               const MissionRequest& request) {
  ValidationReport report;
  const Constraints constraints = parse_constraints(request.knowledge);

  for (const SymbolicAction& step : plan.steps) {
    if (!request.allowed_actions.empty() &&
        !request.allowed_actions.count(step.action)) {
      report.violations.push_back({ViolationKind::DisallowedAction, step.id,
                                   std::string(to_string(step.action)) +
                                       " not in the allowed action space"});
    }

    if (step.robot == Robot::UAV &&
        step_altitude(step.theta) > constraints.max_altitude) {
      report.violations.push_back(
          {ViolationKind::AltitudeExceeded, step.id,
           "altitude " + std::to_string(step_altitude(step.theta)) +
               " exceeds max " + std::to_string(constraints.max_altitude)});
    }

    for (const Vec2& p : spatial_points(step.theta)) {
      if (!request.environment.bounds.contains_xy(p)) {
        report.violations.push_back({ViolationKind::OutsideWorkspace, step.id,
                                     "waypoint outside workspace bounds"});
        continue;
      }
      if (step.robot == Robot::UAV) {
        for (const Polygon& zone : constraints.no_fly_zones) {
          if (point_in_polygon(p, zone)) {
            report.violations.push_back({ViolationKind::InsideNoFlyZone,
                                         step.id, "waypoint inside no-fly zone"});
          }
        }
      } else {
        for (const Polygon& zone : constraints.usv_restricted) {
          if (point_in_polygon(p, zone)) {
            report.violations.push_back({ViolationKind::UsvRestrictedZone,
                                         step.id,
                                         "target inside USV-restricted zone"});
          }
        }
      }
    }

    if (step.action == ActionKind::Takeoff && step.theta.from_deck) {
      const bool positioned = std::any_of(
          plan.steps.begin(), plan.steps.end(), [&](const SymbolicAction& s) {
            return s.id < step.id && s.robot == Robot::USV &&
                   s.action == ActionKind::Navigate;
          });
      if (!positioned) {
        report.violations.push_back(
            {ViolationKind::MissingCarrierPositioning, step.id,
             "deck takeoff without a prior USV Navigate"});
      }
    }
  }
  return report;
}

std::string serialize_validation_report(const ValidationReport& report) {
  json doc;
  doc["admissible"] = report.admissible();
  json violations = json::array();
  for (const Violation& v : report.violations) {
    violations.push_back({{"kind", to_string(v.kind)},
                          {"step", v.step_id},
                          {"detail", v.detail}});
  }
  doc["violations"] = violations;
  return doc.dump(2) + "\n";
}

}  // namespace portmission
