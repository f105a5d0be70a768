#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "portmission/geometry.hpp"
#include "portmission/result.hpp"

namespace portmission {

enum class ActionKind {
  Takeoff,
  FlyTo,
  Survey,
  Record,
  Hover,
  Navigate,
  Dock,
  LandOnUSV,
  Inspect,
  Report,
  GoHome,
};
inline constexpr std::array<ActionKind, 11> kAllActions = {
    ActionKind::Takeoff, ActionKind::FlyTo,  ActionKind::Survey,
    ActionKind::Record,  ActionKind::Hover,  ActionKind::Navigate,
    ActionKind::Dock,    ActionKind::LandOnUSV, ActionKind::Inspect,
    ActionKind::Report,  ActionKind::GoHome};

enum class Robot { USV, UAV };

const char* to_string(ActionKind a);
const char* to_string(Robot r);
std::optional<ActionKind> action_from_string(std::string_view s);
std::optional<Robot> robot_from_string(std::string_view s);

enum class PatternTag { Point, Orbit360, Rectangle };

struct PointParams {
  std::optional<Vec2> target;  // absent for deck-relative actions
  double altitude = 0.0;
  bool operator==(const PointParams&) const = default;
};

struct OrbitParams {
  Vec2 center;
  double radius = 0.0;
  double altitude = 0.0;
  bool operator==(const OrbitParams&) const = default;
};

struct RectParams {
  std::array<Vec2, 4> vertices{};
  double altitude = 0.0;
  bool operator==(const RectParams&) const = default;
};

/// Geometric/temporal action parameters; the variant index is the pattern tag.
struct ThetaParams {
  std::variant<PointParams, OrbitParams, RectParams> geometry;
  double dwell_s = 0.0;
  bool from_deck = false;  // Takeoff launches from the USV deck

  PatternTag pattern() const {
    return static_cast<PatternTag>(geometry.index());
  }
  bool operator==(const ThetaParams&) const = default;
};

struct SymbolicAction {
  int id = 0;
  ActionKind action = ActionKind::Navigate;
  Robot robot = Robot::USV;
  ThetaParams theta;
  std::vector<std::string> queries;  // sigma
  std::set<int> preconditions;

  bool operator==(const SymbolicAction&) const = default;
};

struct MissionPlan {
  std::string mission_id;
  std::vector<SymbolicAction> steps;

  bool operator==(const MissionPlan&) const = default;
};

enum class ParseErrorKind {
  MalformedDocument,
  UnknownAction,
  RobotMismatch,
  MissingField,
  DanglingPrecondition,
};

struct ParseError {
  ParseErrorKind kind = ParseErrorKind::MalformedDocument;
  std::size_t byte_offset = 0;
  std::string reason;
};

const char* to_string(ParseErrorKind k);

Result<MissionPlan, ParseError> parse_plan(std::string_view document);
std::string serialize_plan(const MissionPlan& plan);

// ---------------------------------------------------------------------------
// Mission request: instruction, environment, operational knowledge.

struct NamedLandmark {
  std::string name;
  Vec3 position;
  bool operator==(const NamedLandmark&) const = default;
};

struct EnvDescription {
  std::string summary;
  Bounds3 bounds;
  std::vector<NamedLandmark> landmarks;

  std::optional<Vec3> landmark(std::string_view name) const;
  bool operator==(const EnvDescription&) const = default;
};

struct MissionRequest {
  std::string instruction;
  EnvDescription environment;
  std::vector<std::string> knowledge;
  std::set<ActionKind> allowed_actions;  // defaults to the full action space

  bool operator==(const MissionRequest&) const = default;
};

/// Structured view of the knowledge strings. Lines of the form
/// "key: value" are parsed (max_altitude, no_fly_zone, usv_restricted);
/// anything else is kept as advisory text.
struct Constraints {
  std::vector<Polygon> no_fly_zones;
  std::vector<Polygon> usv_restricted;
  double max_altitude = 20.0;
  std::vector<std::string> advisory;
};

Constraints parse_constraints(const std::vector<std::string>& knowledge);

Result<MissionRequest, ParseError> parse_mission_request(std::string_view document);
std::string serialize_mission_request(const MissionRequest& request);

// ---------------------------------------------------------------------------
// Plan admissibility against a request. Violations are data, not failures.

enum class ViolationKind {
  AltitudeExceeded,
  InsideNoFlyZone,
  UsvRestrictedZone,
  OutsideWorkspace,
  MissingCarrierPositioning,
  DisallowedAction,
};

const char* to_string(ViolationKind k);

struct Violation {
  ViolationKind kind;
  int step_id = -1;
  std::string detail;
  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool admissible() const { return violations.empty(); }
};

ValidationReport validate_plan(const MissionPlan& plan,
                               const MissionRequest& request);
std::string serialize_validation_report(const ValidationReport& report);

}  // namespace portmission
