#pragma once

#include <memory>
#include <string>

#include "portmission/control.hpp"
#include "portmission/plan.hpp"
#include "portmission/result.hpp"
#include "portmission/world.hpp"

namespace portmission {

enum class ExecPhase { Running, Done, Failed };

struct ExecTick {
  ExecPhase phase = ExecPhase::Running;
  UsvCommand usv_cmd;
  UavCommand uav_cmd;
  bool release_deck = false;  // Takeoff lifting off: clear uav_on_deck
  bool touch_down = false;    // LandOnUSV finished: set uav_on_deck
  std::string fail_reason;
};

/// Drives one symbolic action to completion, one control tick at a time.
/// Owns the controller state for the step; mutates nothing shared.
class ActionExecutor {
 public:
  static Result<std::unique_ptr<ActionExecutor>, std::string> create(
      const SymbolicAction& step, const WorldState& world,
      const ControlConfig& cfg);

  ExecTick tick(const WorldState& world);

  const SymbolicAction& step() const { return step_; }
  Robot robot() const { return step_.robot; }

 private:
  ActionExecutor(SymbolicAction step, const ControlConfig& cfg)
      : step_(std::move(step)), cfg_(cfg) {}

  ExecTick tick_usv(const WorldState& world);
  ExecTick tick_uav(const WorldState& world);

  SymbolicAction step_;
  ControlConfig cfg_;

  UsvTracker tracker_;
  UavGuidance guidance_;
  GuidanceTask task_{PointTask{}};
  bool task_ready_ = false;
  long dwell_ticks_ = 0;   // remaining hold time once in position
  bool in_position_ = false;
  bool instantaneous_ = false;
};

/// Hover/station-keeping command for an idle airborne UAV.
UavCommand uav_hold_command(const UavState& state, const ControlConfig& cfg);

/// Braking command for an idle USV.
UsvCommand usv_hold_command(const UsvState& state, const ControlConfig& cfg);

}  // namespace portmission
