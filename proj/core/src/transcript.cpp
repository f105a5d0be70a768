#include "portmission/transcript.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace portmission {

using nlohmann::json;

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string request_hash(const PromptBundle& bundle) {
  const std::uint64_t h = fnv1a(bundle.system_prompt + "\x1f" + bundle.user_prompt);
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

Result<std::vector<TranscriptRecord>, ParseError> read_transcript(
    const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    return ParseError{ParseErrorKind::MalformedDocument, 0,
                      "cannot open transcript " + file.string()};
  }
  std::vector<TranscriptRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      records.push_back({j.value("request_hash", ""),
                         j.at("response").get<std::string>(),
                         j.value("latency_s", 0.0)});
    } catch (const json::exception& e) {
      return ParseError{ParseErrorKind::MalformedDocument, 0,
                        "transcript line: " + std::string(e.what())};
    }
  }
  return records;
}

void write_transcript(const std::filesystem::path& file,
                      const std::vector<TranscriptRecord>& records) {
  std::ofstream out(file);
  for (const TranscriptRecord& r : records) {
    json j;
    j["request_hash"] = r.request_hash;
    j["response"] = r.response;
    j["latency_s"] = r.latency_s;
    out << j.dump() << "\n";
  }
}

TranscriptPlayer::TranscriptPlayer(std::string model_label,
                                   std::vector<TranscriptRecord> records,
                                   std::filesystem::path prompt_template)
    : label_(std::move(model_label)),
      records_(std::move(records)),
      prompt_template_(std::move(prompt_template)) {}

Result<PlanResponse, ClientError> TranscriptPlayer::plan(
    const MissionRequest& request) {
  if (cursor_ >= records_.size()) {
    return ClientError{ClientErrorKind::TranscriptExhausted, 0,
                       "no transcript record left for " + label_};
  }
  const TranscriptRecord& rec = records_[cursor_++];
  if (!rec.request_hash.empty()) {
    auto bundle = assemble_prompt(request, prompt_template_);
    if (!bundle || request_hash(bundle.value()) != rec.request_hash) {
      return ClientError{ClientErrorKind::TranscriptExhausted, 0,
                         "transcript hash mismatch (stale fixture?)"};
    }
  }
  return PlanResponse{rec.response, rec.latency_s};
}

RecordingPlanner::RecordingPlanner(PlannerClient& inner,
                                   std::filesystem::path sink,
                                   std::filesystem::path prompt_template)
    : inner_(inner), sink_(std::move(sink)),
      prompt_template_(std::move(prompt_template)) {}

Result<PlanResponse, ClientError> RecordingPlanner::plan(
    const MissionRequest& request) {
  auto result = inner_.plan(request);
  if (!result) return result;

  std::string hash;
  if (auto bundle = assemble_prompt(request, prompt_template_)) {
    hash = request_hash(bundle.value());
  }
  std::ofstream out(sink_, std::ios::app);
  json j;
  j["request_hash"] = hash;
  j["response"] = result.value().document;
  j["latency_s"] = result.value().latency_s;
  out << j.dump() << "\n";
  return result;
}

}  // namespace portmission
