#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <thread>

#include "helpers.hpp"
#include "portmission/clients.hpp"
#include "portmission/depgraph.hpp"
#include "portmission/transcript.hpp"

using namespace portmission;
using namespace pmtest;

namespace {

SceneObservation crane_scene() {
  // Crafted ground truth: observer hovering south of a crane, truck slightly
  // left of it in the camera frame.
  SceneObservation obs;
  obs.observer = Robot::UAV;
  obs.pose = {104.5, 77, 15};
  obs.yaw = 1.8;
  obs.frame_id = 420;
  obs.visible_entities = {
      {"crane", 14.6, 0.0},
      {"truck", 15.2, 0.25},  // positive bearing offset: left of the crane
      {"sailboat", 53.0, 0.62},
  };
  return obs;
}

}  // namespace

TEST_CASE("assembled prompt carries all 11 action names and the instruction verbatim") {
  const WorldState world = default_port_world();
  const MissionRequest req =
      parse_mission_request(slurp(asset_path("missions/crane_inspection.json")))
          .value();
  const auto bundle =
      assemble_prompt(req, asset_path("templates/planner_system_prompt.txt"));
  REQUIRE(bundle.ok());
  for (ActionKind a : kAllActions) {
    CHECK(bundle.value().system_prompt.find(to_string(a)) != std::string::npos);
  }
  CHECK(bundle.value().user_prompt == req.instruction);
  // The response-format section survives substitution verbatim.
  CHECK(bundle.value().system_prompt.find("RESPONSE FORMAT") != std::string::npos);
  CHECK(bundle.value().system_prompt.find("\"mission_id\"") != std::string::npos);
  (void)world;
}

TEST_CASE("unresolved placeholders are errors") {
  const WorldState world = open_water_world();
  const MissionRequest req = basic_request(world, "inspect");
  const auto bundle = assemble_prompt_text(req, "hello {{unknown_key}}");
  REQUIRE_FALSE(bundle.ok());
  CHECK(bundle.error().kind == PromptErrorKind::MissingPlaceholder);

  const auto missing = assemble_prompt(req, "/nonexistent/template.txt");
  REQUIRE_FALSE(missing.ok());
  CHECK(missing.error().kind == PromptErrorKind::TemplateNotFound);
}

TEST_CASE("stub planner is deterministic and landmark-driven") {
  const WorldState world = default_port_world();
  const MissionRequest req =
      parse_mission_request(slurp(asset_path("missions/crane_inspection.json")))
          .value();
  StubPlanner stub;
  const auto a = stub.plan(req);
  const auto b = stub.plan(req);
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  CHECK(a.value().document == b.value().document);
  CHECK(a.value().latency_s == 0.0);

  const auto plan = parse_plan(a.value().document);
  REQUIRE(plan.ok());
  CHECK(plan.value().steps.size() == 7);
}

TEST_CASE("force_cyclic stub output is rejected by the graph") {
  StubPlanner::Options options;
  options.force_cyclic = true;
  StubPlanner stub(options);
  const WorldState world = open_water_world();
  const auto resp = stub.plan(basic_request(world, "anything"));
  REQUIRE(resp.ok());
  const auto plan = parse_plan(resp.value().document);
  REQUIRE(plan.ok());
  const auto graph = build_graph(plan.value());
  REQUIRE_FALSE(graph.ok());
  CHECK(graph.error().kind == GraphErrorKind::Cycle);
}

TEST_CASE("stub inspection: truck left of the crane") {
  const SceneObservation obs = crane_scene();
  const InspectionReport report = stub_inspect(
      obs, {"Is there any human or vehicle near the crane?"}, "inspect crane");
  CHECK(report.prompt == "inspect crane");
  CHECK(report.basic.find("3 entities") != std::string::npos);
  REQUIRE(report.concerns.size() == 1);
  CHECK(report.concerns[0].first.find("vehicle") != std::string::npos);
  CHECK(report.concerns[0].first.find("truck") != std::string::npos);
  CHECK(report.concerns[0].first.find("left side of the crane") !=
        std::string::npos);
  CHECK(report.tick == 420);

  const std::string answer =
      answer_query(obs, "Is there any vehicle near the crane?");
  CHECK(answer.find("Yes, truck") == 0);
  CHECK(answer.find("left side of the crane") != std::string::npos);
}

TEST_CASE("stub inspection over empty water") {
  SceneObservation obs;
  obs.observer = Robot::UAV;
  obs.pose = {10, 10, 12};
  const InspectionReport report =
      stub_inspect(obs, {"Is there any vehicle visible?"}, "ctx");
  CHECK(report.concerns.empty());
  CHECK(report.basic.find("No entities visible") != std::string::npos);
  CHECK(answer_query(obs, "Is there any vehicle visible?").find("No") == 0);
}

TEST_CASE("stub inspection lists both sailboats with bearings") {
  SceneObservation obs;
  obs.observer = Robot::USV;
  obs.pose = {20, 20, 1};
  obs.visible_entities = {{"sailboat_a", 18.0, 0.4}, {"sailboat_b", 25.0, -0.3}};
  const InspectionReport report =
      stub_inspect(obs, {"Are there sailboats in the docking area?"}, "ctx");
  CHECK(report.detailed.find("sailboat_a") != std::string::npos);
  CHECK(report.detailed.find("sailboat_b") != std::string::npos);
  CHECK(report.concerns.size() == 2);
}

TEST_CASE("semantic scorer returns the three rubric levels exactly") {
  const SceneObservation truth = crane_scene();
  CHECK(score_semantic("Yes, a truck near the pier.", truth,
                       "Is there any vehicle near the crane?")
            .value() == 1.0);
  CHECK(score_semantic("Yes.", truth, "Is there any vehicle near the crane?")
            .value() == 0.5);

  SceneObservation no_human = truth;  // crane/truck/sailboat, no people
  CHECK(score_semantic("Yes, a person.", no_human,
                       "Is there any human in the crane loading area?")
            .value() == 0.0);

  CHECK(score_semantic("No.", no_human,
                       "Is there any human in the crane loading area?")
            .value() == 0.5);

  const auto err = score_semantic("Yes.", truth, "How is the weather today?");
  REQUIRE_FALSE(err.ok());
  CHECK(err.error() == SemanticError::UnclassifiableQuery);
}

TEST_CASE("stub answers grade 1.0 against their own observation") {
  const SceneObservation obs = crane_scene();
  const std::string query = "Is there any vehicle near the crane?";
  CHECK(score_semantic(answer_query(obs, query), obs, query).value() == 1.0);
}

// ---------------------------------------------------------------------------

TEST_CASE("remote planner round-trips through a loopback mock server") {
  const std::string canned =
      slurp(asset_path("plans/crane_inspection_golden.json"));

  httplib::Server server;
  server.Post("/v1/chat/completions",
              [&](const httplib::Request& req, httplib::Response& res) {
                CHECK(req.get_header_value("Authorization") ==
                      "Bearer test-key");
                nlohmann::json body = nlohmann::json::parse(req.body);
                CHECK(body.at("messages").size() == 2);
                nlohmann::json reply{
                    {"choices",
                     {{{"message",
                        {{"role", "assistant"}, {"content", canned}}}}}}};
                res.set_content(reply.dump(), "application/json");
              });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  setenv("PM_TEST_KEY", "test-key", 1);
  RemoteConfig cfg;
  cfg.endpoint = "http://127.0.0.1:" + std::to_string(port) +
                 "/v1/chat/completions";
  cfg.model = "mock-model";
  cfg.auth_env = "PM_TEST_KEY";
  cfg.timeout_s = 5.0;
  cfg.retries = 0;

  PromptBundle bundle{"system", "user"};
  const auto resp = remote_plan(cfg, bundle);
  REQUIRE(resp.ok());
  CHECK(resp.value().document == canned);
  CHECK(resp.value().latency_s > 0.0);

  server.stop();
  worker.join();
}

TEST_CASE("unreachable endpoint with zero retries times out") {
  setenv("PM_TEST_KEY", "test-key", 1);
  RemoteConfig cfg;
  cfg.endpoint = "http://127.0.0.1:9/v1/chat/completions";  // discard port
  cfg.model = "mock";
  cfg.auth_env = "PM_TEST_KEY";
  cfg.timeout_s = 0.5;
  cfg.retries = 0;
  const auto resp = remote_plan(cfg, {"s", "u"});
  REQUIRE_FALSE(resp.ok());
  CHECK(resp.error().kind == ClientErrorKind::Timeout);
}

TEST_CASE("missing auth variable fails before any network I/O") {
  unsetenv("PM_TEST_MISSING_KEY");
  RemoteConfig cfg;
  cfg.endpoint = "http://127.0.0.1:9/v1/chat/completions";
  cfg.model = "mock";
  cfg.auth_env = "PM_TEST_MISSING_KEY";
  const auto resp = remote_plan(cfg, {"s", "u"});
  REQUIRE_FALSE(resp.ok());
  CHECK(resp.error().kind == ClientErrorKind::AuthMissing);
}

// ---------------------------------------------------------------------------

TEST_CASE("transcripts round-trip and replay in order") {
  const auto dir = std::filesystem::temp_directory_path() / "pm_transcripts";
  std::filesystem::create_directories(dir);
  const auto file = dir / "t.jsonl";

  const std::vector<TranscriptRecord> records{{"", "doc-one", 0.8},
                                              {"", "doc-two", 1.2}};
  write_transcript(file, records);
  const auto back = read_transcript(file);
  REQUIRE(back.ok());
  REQUIRE(back.value().size() == 2);
  CHECK(back.value()[0].response == "doc-one");
  CHECK(back.value()[1].latency_s == doctest::Approx(1.2));

  TranscriptPlayer player("fixture", back.value(), "");
  const WorldState world = open_water_world();
  const MissionRequest req = basic_request(world, "anything");
  CHECK(player.plan(req).value().document == "doc-one");
  CHECK(player.plan(req).value().document == "doc-two");
  const auto exhausted = player.plan(req);
  REQUIRE_FALSE(exhausted.ok());
  CHECK(exhausted.error().kind == ClientErrorKind::TranscriptExhausted);
}

TEST_CASE("player verifies non-empty hashes against the live prompt") {
  const WorldState world = default_port_world();
  const MissionRequest req =
      parse_mission_request(slurp(asset_path("missions/crane_inspection.json")))
          .value();
  const std::string tmpl = asset_path("templates/planner_system_prompt.txt");
  const auto bundle = assemble_prompt(req, tmpl);
  REQUIRE(bundle.ok());

  TranscriptPlayer good("m", {{request_hash(bundle.value()), "ok-doc", 0.1}}, tmpl);
  CHECK(good.plan(req).value().document == "ok-doc");

  TranscriptPlayer stale("m", {{"deadbeef", "stale-doc", 0.1}}, tmpl);
  CHECK_FALSE(stale.plan(req).ok());
}

TEST_CASE("recording wrapper appends replayable records") {
  const auto dir = std::filesystem::temp_directory_path() / "pm_transcripts";
  std::filesystem::create_directories(dir);
  const auto file = dir / "rec.jsonl";
  std::filesystem::remove(file);

  const WorldState world = default_port_world();
  const MissionRequest req =
      parse_mission_request(slurp(asset_path("missions/crane_inspection.json")))
          .value();
  const std::string tmpl = asset_path("templates/planner_system_prompt.txt");

  StubPlanner stub;
  RecordingPlanner recorder(stub, file, tmpl);
  const auto live = recorder.plan(req);
  REQUIRE(live.ok());

  const auto records = read_transcript(file);
  REQUIRE(records.ok());
  REQUIRE(records.value().size() == 1);
  CHECK_FALSE(records.value()[0].request_hash.empty());

  TranscriptPlayer player("stub", records.value(), tmpl);
  CHECK(player.plan(req).value().document == live.value().document);
}
