#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "portmission/plan.hpp"
#include "portmission/result.hpp"
#include "portmission/world.hpp"

namespace portmission {

// ---------------------------------------------------------------------------
// Prompt assembly (system prompt template + verbatim mission instruction).

struct PromptBundle {
  std::string system_prompt;
  std::string user_prompt;
};

enum class PromptErrorKind { TemplateNotFound, MissingPlaceholder };

struct PromptError {
  PromptErrorKind kind;
  std::string detail;
};

/// Substitutes {{landmarks}}, {{constraints}}, {{action_space}},
/// {{workspace}} and {{environment_summary}} into the template. Any
/// unresolved {{placeholder}} left afterwards is an error.
Result<PromptBundle, PromptError> assemble_prompt(
    const MissionRequest& request, const std::filesystem::path& template_file);

Result<PromptBundle, PromptError> assemble_prompt_text(
    const MissionRequest& request, const std::string& template_text);

// ---------------------------------------------------------------------------
// Client contracts.

enum class ClientErrorKind {
  Timeout,
  HttpStatus,
  AuthMissing,
  InspectorUnavailable,
  BudgetExhausted,
  InvalidPlanReturned,
  TranscriptExhausted,
};

struct ClientError {
  ClientErrorKind kind;
  int http_status = 0;
  std::string detail;
};

const char* to_string(ClientErrorKind k);

struct PlanResponse {
  std::string document;
  double latency_s = 0.0;
};

class PlannerClient {
 public:
  virtual ~PlannerClient() = default;
  virtual Result<PlanResponse, ClientError> plan(const MissionRequest& request) = 0;
  virtual std::string label() const = 0;
};

enum class Severity { Note, Warning, Critical };
const char* to_string(Severity s);

/// Structured inspection report: contextual prompt, scene summary, detailed
/// analysis, and the concern list.
struct InspectionReport {
  std::string prompt;
  std::string basic;
  std::string detailed;
  std::vector<std::pair<std::string, Severity>> concerns;
  long tick = 0;
  Robot robot = Robot::UAV;
  Vec3 pose;
};

struct InspectionResponse {
  InspectionReport report;
  double latency_s = 0.0;
};

class InspectorClient {
 public:
  virtual ~InspectorClient() = default;
  virtual Result<InspectionResponse, ClientError> inspect(
      const SceneObservation& observation,
      const std::vector<std::string>& queries, const std::string& context) = 0;
  virtual std::string label() const = 0;
};

// ---------------------------------------------------------------------------
// Deterministic offline stubs.

class StubPlanner : public PlannerClient {
 public:
  struct Options {
    bool force_cyclic = false;  // test hook: emit a plan the graph must reject
  };
  StubPlanner() = default;
  explicit StubPlanner(Options options) : options_(options) {}

  Result<PlanResponse, ClientError> plan(const MissionRequest& request) override;
  std::string label() const override { return "stub"; }

 private:
  Options options_;
};

/// Ground-truth answer synthesis for one query against an observation.
std::string answer_query(const SceneObservation& observation,
                         const std::string& query);

/// basic = entity-count summary, detailed = per-entity range/bearing lines
/// plus per-query answers, concerns = query-matched entities with
/// side-of-landmark phrasing.
InspectionReport stub_inspect(const SceneObservation& observation,
                              const std::vector<std::string>& queries,
                              const std::string& context);

class StubInspector : public InspectorClient {
 public:
  Result<InspectionResponse, ClientError> inspect(
      const SceneObservation& observation,
      const std::vector<std::string>& queries,
      const std::string& context) override {
    return InspectionResponse{stub_inspect(observation, queries, context), 0.0};
  }
  std::string label() const override { return "stub"; }
};

// ---------------------------------------------------------------------------
// Remote chat-completion clients. The auth token is read from the
// environment at call time and never logged.

struct RemoteConfig {
  std::string endpoint;     // e.g. http://127.0.0.1:8089/v1/chat/completions
  std::string model;
  std::string auth_env = "PORTMISSION_API_KEY";
  double timeout_s = 30.0;
  int retries = 2;
  std::filesystem::path prompt_template;
};

/// Environment variable names for remote configuration.
inline constexpr const char* kEndpointEnv = "PORTMISSION_ENDPOINT";
inline constexpr const char* kModelEnv = "PORTMISSION_MODEL";
inline constexpr const char* kAuthEnv = "PORTMISSION_API_KEY";

class RemotePlanner : public PlannerClient {
 public:
  explicit RemotePlanner(RemoteConfig config) : config_(std::move(config)) {}
  Result<PlanResponse, ClientError> plan(const MissionRequest& request) override;
  std::string label() const override { return config_.model; }

 private:
  RemoteConfig config_;
};

/// Sends one chat-completion request (system + user message) and measures
/// wall-clock latency; retries with exponential backoff.
Result<PlanResponse, ClientError> remote_plan(const RemoteConfig& config,
                                              const PromptBundle& bundle);

class RemoteInspector : public InspectorClient {
 public:
  explicit RemoteInspector(RemoteConfig config) : config_(std::move(config)) {}
  Result<InspectionResponse, ClientError> inspect(
      const SceneObservation& observation,
      const std::vector<std::string>& queries,
      const std::string& context) override;
  std::string label() const override { return config_.model; }

 private:
  RemoteConfig config_;
};

// ---------------------------------------------------------------------------
// Semantic correctness grading of an inspector answer against ground truth.

enum class SemanticError { UnclassifiableQuery };

/// 1 for correct polarity with a spatial/contextual detail token, 0.5 for
/// correct polarity alone, 0 for wrong polarity.
Result<double, SemanticError> score_semantic(const std::string& answer,
                                             const SceneObservation& ground_truth,
                                             const std::string& query);

}  // namespace portmission
