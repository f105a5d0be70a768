#include "portmission/report.hpp"

#include <nlohmann/json.hpp>

#include <sstream>

namespace portmission {

using nlohmann::json;

FinalReport aggregate_report(const MissionOutcome& outcome,
                             const std::string& mission_id) {
  FinalReport report;
  report.mission_id = mission_id;
  report.status = outcome.status;
  report.replans = outcome.replans;
  report.duration_ticks = outcome.final_tick;
  report.timeline = outcome.timeline;
  report.inspections = outcome.inspections;
  report.alerts = outcome.alerts;
  for (const TimelineEntry& e : outcome.timeline) {
    if (e.result == StepResultKind::Completed) ++report.steps_completed;
    if (e.result == StepResultKind::Failed) ++report.steps_failed;
  }
  return report;
}

std::string report_to_json(const FinalReport& report) {
  json doc;
  doc["mission_id"] = report.mission_id;
  doc["status"] = to_string(report.status);
  doc["replans"] = report.replans;
  doc["duration_ticks"] = report.duration_ticks;
  doc["steps_completed"] = report.steps_completed;
  doc["steps_failed"] = report.steps_failed;

  json timeline = json::array();
  for (const TimelineEntry& e : report.timeline) {
    timeline.push_back({{"gen", e.generation},
                        {"step", e.step_id},
                        {"action", to_string(e.action)},
                        {"robot", to_string(e.robot)},
                        {"start", e.start_tick},
                        {"end", e.end_tick},
                        {"result", to_string(e.result)},
                        {"detail", e.detail},
                        {"safe_return", e.safe_return}});
  }
  doc["timeline"] = timeline;

  json inspections = json::array();
  for (const InspectionReport& r : report.inspections) {
    json concerns = json::array();
    for (const auto& [text, severity] : r.concerns) {
      concerns.push_back({{"text", text}, {"severity", to_string(severity)}});
    }
    inspections.push_back({{"prompt", r.prompt},
                           {"basic", r.basic},
                           {"detailed", r.detailed},
                           {"concerns", concerns},
                           {"tick", r.tick},
                           {"robot", to_string(r.robot)},
                           {"pose", {r.pose.x, r.pose.y, r.pose.z}}});
  }
  doc["inspections"] = inspections;

  json alerts = json::array();
  for (const Alert& a : report.alerts) {
    alerts.push_back({{"tick", a.tick}, {"step", a.step_id}, {"text", a.text}});
  }
  doc["alerts"] = alerts;
  return doc.dump(2) + "\n";
}

std::string report_to_text(const FinalReport& report) {
  std::ostringstream os;
  os << "mission " << report.mission_id << ": " << to_string(report.status)
     << " after " << report.duration_ticks << " ticks, " << report.replans
     << " replan(s)\n";
  os << "steps completed " << report.steps_completed << ", failed "
     << report.steps_failed << "\n\n";

  os << "timeline:\n";
  for (const TimelineEntry& e : report.timeline) {
    os << "  [" << e.start_tick << " .. " << e.end_tick << "] gen "
       << e.generation << " step " << e.step_id << " "
       << to_string(e.action) << "/" << to_string(e.robot) << " -> "
       << to_string(e.result);
    if (e.safe_return) os << " (safe return)";
    if (!e.detail.empty()) os << " (" << e.detail << ")";
    os << "\n";
  }

  os << "\ninspections:\n";
  if (report.inspections.empty()) os << "  none\n";
  for (const InspectionReport& r : report.inspections) {
    os << "  tick " << r.tick << " " << to_string(r.robot) << ": " << r.basic
       << "\n";
    for (const auto& [text, severity] : r.concerns) {
      os << "    concern [" << to_string(severity) << "] " << text << "\n";
    }
  }

  os << "\nalerts:\n";
  if (report.alerts.empty()) os << "  none\n";
  for (const Alert& a : report.alerts) {
    os << "  tick " << a.tick << " step " << a.step_id << ": " << a.text
       << "\n";
  }
  return os.str();
}

}  // namespace portmission
