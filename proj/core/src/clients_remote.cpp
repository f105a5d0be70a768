#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "portmission/clients.hpp"

namespace portmission {

using nlohmann::json;

namespace {

struct SplitUrl {
  std::string base;  // scheme://host:port
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const std::size_t scheme = url.find("://");
  const std::size_t path_at =
      url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (path_at == std::string::npos) return {url, "/"};
  return {url.substr(0, path_at), url.substr(path_at)};
}

Result<std::string, ClientError> post_chat(const RemoteConfig& cfg,
                                           const std::string& token,
                                           const json& body) {
  const SplitUrl url = split_url(cfg.endpoint);
  httplib::Client client(url.base);
  client.set_connection_timeout(std::chrono::milliseconds(
      static_cast<int>(cfg.timeout_s * 1000)));
  client.set_read_timeout(std::chrono::milliseconds(
      static_cast<int>(cfg.timeout_s * 1000)));

  httplib::Headers headers{{"Authorization", "Bearer " + token}};
  ClientError last{ClientErrorKind::Timeout, 0, "no attempt made"};
  for (int attempt = 0; attempt <= cfg.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(250 * (1 << (attempt - 1))));
    }
    auto res = client.Post(url.path, headers, body.dump(), "application/json");
    if (!res) {
      last = {ClientErrorKind::Timeout, 0, "transport failure"};
      continue;
    }
    if (res->status != 200) {
      last = {ClientErrorKind::HttpStatus, res->status,
              "http status " + std::to_string(res->status)};
      // 4xx responses will not improve on retry.
      if (res->status >= 400 && res->status < 500) return last;
      continue;
    }
    return res->body;
  }
  return last;
}

Result<std::string, ClientError> extract_content(const std::string& body) {
  try {
    const json doc = json::parse(body);
    return doc.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    return ClientError{ClientErrorKind::HttpStatus, 200,
                       std::string("unexpected response shape: ") + e.what()};
  }
}

}  // namespace

Result<PlanResponse, ClientError> remote_plan(const RemoteConfig& cfg,
                                              const PromptBundle& bundle) {
  const char* token = std::getenv(cfg.auth_env.c_str());
  if (token == nullptr || *token == '\0') {
    return ClientError{ClientErrorKind::AuthMissing, 0,
                       "environment variable " + cfg.auth_env + " not set"};
  }

  json body;
  body["model"] = cfg.model;
  body["messages"] = {{{"role", "system"}, {"content", bundle.system_prompt}},
                      {{"role", "user"}, {"content", bundle.user_prompt}}};

  const auto t0 = std::chrono::steady_clock::now();
  auto raw = post_chat(cfg, token, body);
  const auto t1 = std::chrono::steady_clock::now();
  if (!raw) return raw.error();

  auto content = extract_content(raw.value());
  if (!content) return content.error();

  PlanResponse resp;
  resp.document = std::move(content.value());
  resp.latency_s = std::chrono::duration<double>(t1 - t0).count();
  return resp;
}

Result<PlanResponse, ClientError> RemotePlanner::plan(const MissionRequest& request) {
  auto bundle = assemble_prompt(request, config_.prompt_template);
  if (!bundle) {
    return ClientError{ClientErrorKind::HttpStatus, 0,
                       "prompt assembly failed: " + bundle.error().detail};
  }
  return remote_plan(config_, bundle.value());
}

Result<InspectionResponse, ClientError> RemoteInspector::inspect(
    const SceneObservation& observation, const std::vector<std::string>& queries,
    const std::string& context) {
  const char* token = std::getenv(config_.auth_env.c_str());
  if (token == nullptr || *token == '\0') {
    return ClientError{ClientErrorKind::AuthMissing, 0,
                       "environment variable " + config_.auth_env + " not set"};
  }

  // The observation stands in for the camera frame: serialise what the
  // camera sees and let the remote model reason over it.
  json scene = json::array();
  for (const VisibleEntity& e : observation.visible_entities) {
    scene.push_back({{"label", e.label}, {"range_m", e.range},
                     {"bearing_rad", e.bearing}});
  }
  json user;
  user["scene"] = scene;
  user["queries"] = queries;

  json body;
  body["model"] = config_.model;
  body["messages"] = {{{"role", "system"}, {"content", context}},
                      {{"role", "user"}, {"content", user.dump()}}};

  const auto t0 = std::chrono::steady_clock::now();
  auto raw = post_chat(config_, token, body);
  const auto t1 = std::chrono::steady_clock::now();
  if (!raw) {
    ClientError e = raw.error();
    e.kind = ClientErrorKind::InspectorUnavailable;
    return e;
  }
  auto content = extract_content(raw.value());
  if (!content) return content.error();

  InspectionResponse resp;
  resp.report.prompt = context;
  resp.report.basic = content.value();
  resp.report.detailed = content.value();
  resp.report.tick = observation.frame_id;
  resp.report.robot = observation.observer;
  resp.report.pose = observation.pose;
  resp.latency_s = std::chrono::duration<double>(t1 - t0).count();
  return resp;
}

}  // namespace portmission
