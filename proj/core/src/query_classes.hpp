#pragma once

// Shared query/entity classification for the stub inspector and the
// semantic scorer. Subject classes drive answer polarity and concerns;
// structural classes (crane, container) only matter when a query has no
// subject, since they usually name the inspection location.

#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <vector>

namespace portmission::detail {

struct EntityClass {
  const char* name;
  std::vector<const char*> keywords;
  bool structural = false;
};

inline const std::array<EntityClass, 6>& entity_classes() {
  static const std::array<EntityClass, 6> classes{{
      {"human", {"human", "person", "people", "personnel", "worker"}, false},
      {"vehicle", {"vehicle", "truck", "forklift", "car"}, false},
      {"sailboat", {"sailboat"}, false},
      {"boat", {"boat", "vessel", "ship"}, false},
      {"container", {"container"}, true},
      {"crane", {"crane"}, true},
  }};
  return classes;
}

inline std::string lower_copy(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

inline std::vector<std::string> split_words(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : lower_copy(text)) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cur += c;
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

/// Word-prefix matching ("sailboats" hits sailboat, not the generic boat
/// class). Subject classes win; structural classes apply only when no
/// subject matched.
inline std::vector<const EntityClass*> classify_query(const std::string& query) {
  const std::vector<std::string> ws = split_words(query);
  const auto matches = [&ws](const EntityClass& c) {
    for (const char* k : c.keywords) {
      for (const std::string& w : ws) {
        if (w.rfind(k, 0) == 0) return true;
      }
    }
    return false;
  };
  std::vector<const EntityClass*> out;
  for (const EntityClass& c : entity_classes()) {
    if (!c.structural && matches(c)) out.push_back(&c);
  }
  if (out.empty()) {
    for (const EntityClass& c : entity_classes()) {
      if (c.structural && matches(c)) out.push_back(&c);
    }
  }
  return out;
}

/// Labels match by substring so "cargo_vessel" falls under boat.
inline bool label_matches(const std::string& label, const EntityClass& c) {
  const std::string l = lower_copy(label);
  return std::any_of(c.keywords.begin(), c.keywords.end(), [&](const char* k) {
    return l.find(k) != std::string::npos;
  });
}

}  // namespace portmission::detail
