#pragma once

#include <string>

#include "portmission/coordinator.hpp"

namespace portmission {

/// Control-center aggregate: everything the run produced, merged with tick
/// timestamps into one reviewable document.
struct FinalReport {
  std::string mission_id;
  MissionStatus status = MissionStatus::Failed;
  int replans = 0;
  long duration_ticks = 0;
  std::vector<TimelineEntry> timeline;
  std::vector<InspectionReport> inspections;
  std::vector<Alert> alerts;
  int steps_completed = 0;
  int steps_failed = 0;
};

/// Lossless merge of the outcome: every timeline entry, inspection and alert
/// appears exactly once.
FinalReport aggregate_report(const MissionOutcome& outcome,
                             const std::string& mission_id);

std::string report_to_json(const FinalReport& report);
std::string report_to_text(const FinalReport& report);

}  // namespace portmission
