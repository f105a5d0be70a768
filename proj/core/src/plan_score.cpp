#include "portmission/plan_score.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <map>

namespace portmission {

using nlohmann::json;

std::string format_label(const LabelRef& ref) {
  std::string s = std::string(to_string(ref.action)) + ":" + to_string(ref.robot);
  if (ref.ordinal != 1) s += "#" + std::to_string(ref.ordinal);
  return s;
}

Result<LabelRef, ParseError> parse_label(std::string_view text) {
  LabelRef ref;
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos) {
    return ParseError{ParseErrorKind::MalformedDocument, 0,
                      "label must be Action:Robot[#ordinal]"};
  }
  const auto action = action_from_string(text.substr(0, colon));
  if (!action) {
    return ParseError{ParseErrorKind::UnknownAction, 0,
                      "label action '" + std::string(text.substr(0, colon)) +
                          "'"};
  }
  ref.action = *action;

  std::string_view rest = text.substr(colon + 1);
  const std::size_t hash = rest.find('#');
  std::string_view robot_part = rest;
  if (hash != std::string_view::npos) {
    robot_part = rest.substr(0, hash);
    const std::string ord(rest.substr(hash + 1));
    try {
      ref.ordinal = std::stoi(ord);
    } catch (const std::exception&) {
      return ParseError{ParseErrorKind::MalformedDocument, 0,
                        "label ordinal '" + ord + "'"};
    }
    if (ref.ordinal < 1) {
      return ParseError{ParseErrorKind::MalformedDocument, 0,
                        "label ordinal must be >= 1"};
    }
  }
  const auto robot = robot_from_string(robot_part);
  if (!robot) {
    return ParseError{ParseErrorKind::MalformedDocument, 0,
                      "label robot '" + std::string(robot_part) + "'"};
  }
  ref.robot = *robot;
  return ref;
}

namespace {

Result<std::vector<std::pair<LabelRef, LabelRef>>, ParseError> parse_pairs(
    const json& arr, const char* what) {
  std::vector<std::pair<LabelRef, LabelRef>> out;
  if (!arr.is_array()) {
    return ParseError{ParseErrorKind::MalformedDocument, 0,
                      std::string(what) + " must be an array"};
  }
  for (const json& item : arr) {
    if (!item.is_array() || item.size() != 2) {
      return ParseError{ParseErrorKind::MalformedDocument, 0,
                        std::string(what) + " entries must be [before, after]"};
    }
    auto a = parse_label(item[0].get<std::string>());
    if (!a) return a.error();
    auto b = parse_label(item[1].get<std::string>());
    if (!b) return b.error();
    out.emplace_back(a.value(), b.value());
  }
  return out;
}

}  // namespace

Result<ScoringRubric, ParseError> parse_rubric(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    return ParseError{ParseErrorKind::MalformedDocument, e.byte, e.what()};
  }
  ScoringRubric rubric;
  try {
    auto pairs = parse_pairs(doc.value("precedence_pairs", json::array()),
                             "precedence_pairs");
    if (!pairs) return pairs.error();
    rubric.precedence_pairs = std::move(pairs.value());
    auto edges = parse_pairs(doc.value("precondition_edges", json::array()),
                             "precondition_edges");
    if (!edges) return edges.error();
    rubric.precondition_edges = std::move(edges.value());
  } catch (const json::exception& e) {
    return ParseError{ParseErrorKind::MalformedDocument, 0, e.what()};
  }
  return rubric;
}

std::string serialize_rubric(const ScoringRubric& rubric) {
  json doc;
  json pairs = json::array();
  for (const auto& [a, b] : rubric.precedence_pairs) {
    pairs.push_back({format_label(a), format_label(b)});
  }
  doc["precedence_pairs"] = pairs;
  json edges = json::array();
  for (const auto& [a, b] : rubric.precondition_edges) {
    edges.push_back({format_label(a), format_label(b)});
  }
  doc["precondition_edges"] = edges;
  return doc.dump(2) + "\n";
}

namespace {

/// Listed position of the step each label resolves to, or -1.
std::vector<int> resolve_labels(const MissionPlan& plan,
                                const std::vector<LabelRef>& labels) {
  std::vector<int> positions(labels.size(), -1);
  for (std::size_t li = 0; li < labels.size(); ++li) {
    int seen = 0;
    for (std::size_t pos = 0; pos < plan.steps.size(); ++pos) {
      const SymbolicAction& s = plan.steps[pos];
      if (s.action == labels[li].action && s.robot == labels[li].robot) {
        ++seen;
        if (seen == labels[li].ordinal) {
          positions[li] = static_cast<int>(pos);
          break;
        }
      }
    }
  }
  return positions;
}

LabelRef label_of(const MissionPlan& plan, std::size_t pos) {
  LabelRef ref{plan.steps[pos].action, plan.steps[pos].robot, 1};
  for (std::size_t i = 0; i < pos; ++i) {
    if (plan.steps[i].action == ref.action && plan.steps[i].robot == ref.robot) {
      ++ref.ordinal;
    }
  }
  return ref;
}

}  // namespace

ScoringRubric rubric_from_plan(const MissionPlan& plan) {
  ScoringRubric rubric;
  for (std::size_t i = 0; i + 1 < plan.steps.size(); ++i) {
    rubric.precedence_pairs.emplace_back(label_of(plan, i), label_of(plan, i + 1));
  }
  for (std::size_t j = 0; j < plan.steps.size(); ++j) {
    for (int p : plan.steps[j].preconditions) {
      rubric.precondition_edges.emplace_back(
          label_of(plan, static_cast<std::size_t>(p)), label_of(plan, j));
    }
  }
  return rubric;
}

double round_one_decimal(double x) {
  return std::floor(x * 10.0 + 0.5) / 10.0;
}

Result<PlanScore, ScoreError> score_plan(std::string_view document,
                                         const ScoringRubric& rubric) {
  if (rubric.empty()) return ScoreError::EmptyRubric;

  PlanScore score;
  const auto parsed = parse_plan(document);
  if (!parsed) return score;  // all components gate on a valid document
  const MissionPlan& plan = parsed.value();
  score.json_validity = 20.0;

  // Resolve every distinct label once.
  std::vector<LabelRef> labels;
  const auto intern = [&labels](const LabelRef& ref) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == ref) return i;
    }
    labels.push_back(ref);
    return labels.size() - 1;
  };
  std::vector<std::pair<std::size_t, std::size_t>> pair_idx;
  for (const auto& [a, b] : rubric.precedence_pairs) {
    pair_idx.emplace_back(intern(a), intern(b));
  }
  std::vector<std::pair<std::size_t, std::size_t>> edge_idx;
  for (const auto& [a, b] : rubric.precondition_edges) {
    edge_idx.emplace_back(intern(a), intern(b));
  }
  const std::vector<int> pos = resolve_labels(plan, labels);

  if (!rubric.precedence_pairs.empty()) {
    int satisfied = 0;
    for (const auto& [a, b] : pair_idx) {
      if (pos[a] >= 0 && pos[b] >= 0 && pos[a] < pos[b]) ++satisfied;
    }
    score.ordering = round_one_decimal(
        40.0 * satisfied / static_cast<double>(pair_idx.size()));
  } else {
    score.ordering = 40.0;  // vacuously satisfied
  }

  if (!rubric.precondition_edges.empty()) {
    int matched = 0;
    for (const auto& [a, b] : edge_idx) {
      if (pos[a] >= 0 && pos[b] >= 0 &&
          plan.steps[pos[b]].preconditions.count(plan.steps[pos[a]].id)) {
        ++matched;
      }
    }
    score.preconditions = round_one_decimal(
        40.0 * matched / static_cast<double>(edge_idx.size()));
  } else {
    score.preconditions = 40.0;
  }

  score.total = round_one_decimal(score.json_validity + score.ordering +
                                  score.preconditions);
  return score;
}

std::string serialize_score(const PlanScore& score) {
  json doc;
  doc["json_validity"] = score.json_validity;
  doc["ordering"] = score.ordering;
  doc["preconditions"] = score.preconditions;
  doc["total"] = score.total;
  return doc.dump(2) + "\n";
}

}  // namespace portmission
