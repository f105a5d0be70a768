#include <fstream>
#include <sstream>

#include "portmission/clients.hpp"

namespace portmission {

namespace {

std::string render_landmarks(const MissionRequest& req) {
  std::ostringstream os;
  for (const NamedLandmark& lm : req.environment.landmarks) {
    os << "- " << lm.name << " at (" << lm.position.x << ", " << lm.position.y
       << ")\n";
  }
  if (req.environment.landmarks.empty()) os << "- none\n";
  return os.str();
}

std::string render_constraints(const MissionRequest& req) {
  std::ostringstream os;
  for (const std::string& k : req.knowledge) os << "- " << k << "\n";
  if (req.knowledge.empty()) os << "- none\n";
  return os.str();
}

std::string render_action_space(const MissionRequest& req) {
  std::ostringstream os;
  bool first = true;
  for (ActionKind a : req.allowed_actions) {
    os << (first ? "" : ", ") << to_string(a);
    first = false;
  }
  return os.str();
}

std::string render_workspace(const MissionRequest& req) {
  const Bounds3& b = req.environment.bounds;
  std::ostringstream os;
  os << "x in [" << b.min.x << ", " << b.max.x << "] m, y in [" << b.min.y
     << ", " << b.max.y << "] m, altitude up to " << b.max.z << " m";
  return os.str();
}

void replace_all(std::string& text, const std::string& key,
                 const std::string& value) {
  std::size_t at = 0;
  while ((at = text.find(key, at)) != std::string::npos) {
    text.replace(at, key.size(), value);
    at += value.size();
  }
}

}  // namespace

Result<PromptBundle, PromptError> assemble_prompt_text(
    const MissionRequest& request, const std::string& template_text) {
  std::string system = template_text;
  replace_all(system, "{{landmarks}}", render_landmarks(request));
  replace_all(system, "{{constraints}}", render_constraints(request));
  replace_all(system, "{{action_space}}", render_action_space(request));
  replace_all(system, "{{workspace}}", render_workspace(request));
  replace_all(system, "{{environment_summary}}", request.environment.summary);

  const std::size_t open = system.find("{{");
  if (open != std::string::npos) {
    const std::size_t close = system.find("}}", open);
    const std::string key =
        close == std::string::npos
            ? system.substr(open)
            : system.substr(open, close - open + 2);
    return PromptError{PromptErrorKind::MissingPlaceholder,
                       "unresolved placeholder " + key};
  }

  PromptBundle bundle;
  bundle.system_prompt = std::move(system);
  // No special syntax: the mission instruction passes through verbatim.
  bundle.user_prompt = request.instruction;
  return bundle;
}

Result<PromptBundle, PromptError> assemble_prompt(
    const MissionRequest& request, const std::filesystem::path& template_file) {
  std::ifstream in(template_file);
  if (!in) {
    return PromptError{PromptErrorKind::TemplateNotFound,
                       template_file.string()};
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return assemble_prompt_text(request, buf.str());
}

}  // namespace portmission
