#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "portmission/clients.hpp"

namespace portmission {

/// One recorded planner call. An empty request_hash acts as a wildcard so
/// hand-built fixtures stay valid when the prompt template evolves; live
/// recordings always carry the real hash.
struct TranscriptRecord {
  std::string request_hash;
  std::string response;
  double latency_s = 0.0;
};

/// FNV-1a 64-bit over system + user prompt, hex encoded.
std::string request_hash(const PromptBundle& bundle);
std::uint64_t fnv1a(std::string_view data);

Result<std::vector<TranscriptRecord>, ParseError> read_transcript(
    const std::filesystem::path& file);
void write_transcript(const std::filesystem::path& file,
                      const std::vector<TranscriptRecord>& records);

/// Replays recorded responses in order; a non-empty record hash must match
/// the live request hash.
class TranscriptPlayer : public PlannerClient {
 public:
  TranscriptPlayer(std::string model_label, std::vector<TranscriptRecord> records,
                   std::filesystem::path prompt_template);

  Result<PlanResponse, ClientError> plan(const MissionRequest& request) override;
  std::string label() const override { return label_; }

 private:
  std::string label_;
  std::vector<TranscriptRecord> records_;
  std::size_t cursor_ = 0;
  std::filesystem::path prompt_template_;
};

/// Wraps another planner and appends every exchange to a transcript file.
class RecordingPlanner : public PlannerClient {
 public:
  RecordingPlanner(PlannerClient& inner, std::filesystem::path sink,
                   std::filesystem::path prompt_template);

  Result<PlanResponse, ClientError> plan(const MissionRequest& request) override;
  std::string label() const override { return inner_.label(); }

 private:
  PlannerClient& inner_;
  std::filesystem::path sink_;
  std::filesystem::path prompt_template_;
};

}  // namespace portmission
