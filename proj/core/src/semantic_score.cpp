#include <algorithm>
#include <array>

#include "portmission/clients.hpp"
#include "query_classes.hpp"

namespace portmission {

namespace {

const std::array<const char*, 24>& detail_tokens() {
  static const std::array<const char*, 24> tokens{
      "left",  "right",   "near",  "beside", "side",    "behind",
      "front", "next to", "ahead", "astern", "close",   "adjacent",
      "pier",  "dock",    "crane", "container", "deck", "meter",
      " m ",   "m away",  "north", "south",  "east",    "west"};
  return tokens;
}

}  // namespace

Result<double, SemanticError> score_semantic(const std::string& answer,
                                             const SceneObservation& truth,
                                             const std::string& query) {
  const auto classes = detail::classify_query(query);
  if (classes.empty()) return SemanticError::UnclassifiableQuery;

  const bool truth_present = std::any_of(
      truth.visible_entities.begin(), truth.visible_entities.end(),
      [&](const VisibleEntity& e) {
        return std::any_of(classes.begin(), classes.end(),
                           [&](const detail::EntityClass* c) {
                             return detail::label_matches(e.label, *c);
                           });
      });

  // Answer polarity: the first yes/no word decides; with neither, mention of
  // a queried entity keyword counts as affirmative.
  const std::string a = detail::lower_copy(answer);
  bool affirmative = false;
  bool polarity_found = false;
  for (const std::string& w : detail::split_words(a)) {
    if (w == "yes") {
      affirmative = true;
      polarity_found = true;
      break;
    }
    if (w == "no" || w == "none" || w == "nothing" || w == "not") {
      affirmative = false;
      polarity_found = true;
      break;
    }
  }
  if (!polarity_found) {
    for (const detail::EntityClass* c : classes) {
      for (const char* k : c->keywords) {
        if (a.find(k) != std::string::npos) affirmative = true;
      }
    }
  }

  if (affirmative != truth_present) return 0.0;

  const bool has_detail = std::any_of(
      detail_tokens().begin(), detail_tokens().end(),
      [&](const char* t) { return a.find(t) != std::string::npos; });
  return has_detail ? 1.0 : 0.5;
}

}  // namespace portmission
