#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "portmission/plan.hpp"
#include "portmission/result.hpp"

namespace portmission {

/// Reference to a step by what it does rather than by raw id, so rubrics
/// survive renumbering: "FlyTo:UAV#2" is the second listed UAV FlyTo.
struct LabelRef {
  ActionKind action = ActionKind::Navigate;
  Robot robot = Robot::USV;
  int ordinal = 1;  // 1-based occurrence among steps with this action+robot

  bool operator==(const LabelRef&) const = default;
};

std::string format_label(const LabelRef& ref);
Result<LabelRef, ParseError> parse_label(std::string_view text);

struct ScoringRubric {
  std::vector<std::pair<LabelRef, LabelRef>> precedence_pairs;
  std::vector<std::pair<LabelRef, LabelRef>> precondition_edges;

  bool empty() const {
    return precedence_pairs.empty() && precondition_edges.empty();
  }
};

Result<ScoringRubric, ParseError> parse_rubric(std::string_view document);
std::string serialize_rubric(const ScoringRubric& rubric);

/// Builds the rubric that demands exactly the plan's own listed order and
/// precondition edges (used to generate golden rubrics).
ScoringRubric rubric_from_plan(const MissionPlan& plan);

struct PlanScore {
  double json_validity = 0.0;  // 0 or 20
  double ordering = 0.0;       // 0..40
  double preconditions = 0.0;  // 0..40
  double total = 0.0;
};

enum class ScoreError { EmptyRubric };

/// Half-up rounding to one decimal, the presentation precision of all scores.
double round_one_decimal(double x);

/// json_validity gates everything: an unparseable document scores 0 overall.
/// ordering = 40 * satisfied precedence pairs / rubric pairs;
/// preconditions = 40 * matched precondition edges / rubric edges.
Result<PlanScore, ScoreError> score_plan(std::string_view document,
                                         const ScoringRubric& rubric);

std::string serialize_score(const PlanScore& score);

}  // namespace portmission
