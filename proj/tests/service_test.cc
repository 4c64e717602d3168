// Copyright 2026 The Campaign MPE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "campaign/service.h"

#include <gtest/gtest.h>

#include <cmath>
#include <httplib.h>
#include <json.hpp>
#include <thread>

#include "campaign/state_space.h"
#include "fixtures.h"

namespace campaign {
namespace {

using json = nlohmann::json;

class ServiceTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    Scenario s = testing::bundled("fig1");
    Solution sol = accelerated_vi(s.campaign, 1e-3);
    service_ = new CampaignService(std::move(s), std::move(sol));
  }
  static void TearDownTestSuite() { delete service_; }

  static json call(const std::string& method, const std::string& path, const json& body,
                   int expected_status) {
    const HttpResponse r = service_->handle(method, path, body.is_null() ? "" : body.dump());
    EXPECT_EQ(r.status, expected_status) << method << " " << path << " -> " << r.body;
    json out = json::parse(r.body);
    EXPECT_EQ(out["digest"], service_->digest());
    return out;
  }

  static std::string new_session(int human, std::uint64_t seed) {
    return call("POST", "/session", {{"human_player", human}, {"seed", seed}}, 201)["id"];
  }

  static CampaignService* service_;
};
CampaignService* ServiceTest::service_ = nullptr;

TEST_F(ServiceTest, StateSummary) {
  const json out = call("GET", "/state", nullptr, 200);
  EXPECT_EQ(out["initial_state"], "221211");
  EXPECT_EQ(out["objectives"].size(), 6u);
  EXPECT_EQ(out["commanders"].size(), 2u);
  EXPECT_EQ(out["num_states"], 64u);
}

TEST_F(ServiceTest, ValueMatchesSolutionExactly) {
  const Campaign& c = service_->scenario().campaign;
  const StateSpace space(c);
  for (std::size_t i = 0; i < space.size(); ++i) {
    const std::string s = space.decode(i).to_string();
    const json out = call("GET", "/value/" + s, nullptr, 200);
    EXPECT_EQ(out["value"].get<double>(), service_->solution().values[i]);
    for (const char* p : {"player1", "player2"}) {
      double sum = 0.0;
      for (const json& row : out[p]) sum += row["probability"].get<double>();
      EXPECT_NEAR(sum, 1.0, 1e-9);
    }
  }
}

TEST_F(ServiceTest, ValueErrors) {
  EXPECT_EQ(call("GET", "/value/12", nullptr, 404)["code"], "unachievable_state");
  EXPECT_EQ(call("GET", "/value/abc", nullptr, 400)["code"], "bad_state");
  EXPECT_EQ(call("GET", "/nowhere", nullptr, 404)["code"], "not_found");
}

TEST_F(ServiceTest, SessionCreation) {
  const json out = call("POST", "/session", {{"human_player", 2}, {"state", "111111"}}, 201);
  EXPECT_EQ(out["human_player"], 2);
  EXPECT_EQ(out["state"], "111111");
  EXPECT_EQ(out["stage"], 0);
  EXPECT_EQ(call("POST", "/session", {{"scenario", "sha256:00"}}, 409)["code"],
            "scenario_mismatch");
  call("POST", "/session", {{"scenario", service_->digest()}}, 201);
  EXPECT_EQ(call("POST", "/session", {{"state", "21111"}}, 404)["code"], "unachievable_state");
  EXPECT_EQ(call("POST", "/session", {{"state", "2x1111"}}, 400)["code"], "bad_state");
  EXPECT_EQ(call("POST", "/session", {{"human_player", 3}}, 400)["code"], "bad_request");
  EXPECT_EQ(call("GET", "/session/nope", nullptr, 404)["code"], "unknown_session");
}

TEST_F(ServiceTest, IllegalOrdersLeaveStateUnchanged) {
  const std::string id = new_session(1, 5);
  const json before = call("GET", "/session/" + id, nullptr, 200);
  // Objective 1 sits behind the Player-2-held objective 0.
  json r = call("POST", "/session/" + id + "/action",
                {{"orders", {{0, "attack", 1}, {1, "none", nullptr}}}}, 422);
  EXPECT_EQ(r["code"], "infeasible_action");
  EXPECT_EQ(r["constraint"], "no_open_loc");
  EXPECT_FALSE(r["message"].get<std::string>().empty());
  r = call("POST", "/session/" + id + "/action",
           {{"orders", {{1, "attack", 2}, {1, "none", nullptr}}}}, 422);
  EXPECT_EQ(r["constraint"], "multiple_orders_for_commander");
  r = call("POST", "/session/" + id + "/action", {{"orders", {{0, "reinforce", 0}}}}, 422);
  EXPECT_EQ(r["constraint"], "wrong_owner");
  const json after = call("GET", "/session/" + id, nullptr, 200);
  EXPECT_EQ(after["state"], before["state"]);
  EXPECT_EQ(after["stage"], 0);
  EXPECT_EQ(after["rng_draws"], before["rng_draws"]);
}

// Same seed, same requests: identical outcome stream. Every exposed state is
// achievable and the loss bookkeeping matches a recomputation from history.
TEST_F(ServiceTest, ReplayAndBookkeeping) {
  const Campaign& c = service_->scenario().campaign;
  std::vector<json> streams[2];
  for (int run = 0; run < 2; ++run) {
    const std::string id = new_session(1, 2024);
    for (int t = 0; t < 12; ++t) {
      const json hint = call("POST", "/session/" + id + "/hint", nullptr, 200);
      const json orders = hint["strategy"][0]["orders"];
      json step = call("POST", "/session/" + id + "/action", {{"orders", orders}}, 200);
      EXPECT_TRUE(is_achievable(c, CampaignState::from_string(step["next_state"].get<std::string>())));
      step.erase("id");
      streams[run].push_back(step);
    }
    const json view = call("GET", "/session/" + id, nullptr, 200);
    double acc = 0.0;
    double g = 1.0;
    std::string prev = "221211";
    for (const json& h : view["history"]) {
      EXPECT_EQ(h["state"], prev);
      const double loss = stage_loss(c, CampaignState::from_string(h["state"].get<std::string>()));
      EXPECT_EQ(h["stage_loss"].get<double>(), loss);
      acc += g * loss;
      g *= c.discount();
      prev = h["next_state"];
    }
    EXPECT_EQ(view["state"], prev);
    EXPECT_EQ(view["accumulated_discounted_loss"].get<double>(), acc);
  }
  EXPECT_EQ(streams[0], streams[1]);
}

TEST_F(ServiceTest, ActionResponseShape) {
  const std::string id = new_session(2, 1);
  const json r = call("POST", "/session/" + id + "/action",
                      {{"orders", {{0, "reinforce", 1}, {1, "attack", 2}}}}, 200);
  for (const char* key : {"previous_state", "opponent_action", "battle_results", "next_state",
                          "stage_loss", "accumulated_discounted_loss", "value_before",
                          "value_after"}) {
    EXPECT_TRUE(r.contains(key)) << key;
  }
  EXPECT_EQ(r["previous_state"], "221211");
  for (const json& b : r["battle_results"]) {
    const double p = b["success_probability"];
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
  }
}

// Longer axes have unreachable patterns; a session cannot start there.
TEST(ServiceUnachievable, SessionRejectsUnreachableState) {
  Scenario s = testing::bundled("campaign06");
  Solution sol = accelerated_vi(s.campaign, 1e-3);
  CampaignService svc(std::move(s), std::move(sol));
  const HttpResponse r = svc.handle("POST", "/session", R"({"state": "112111"})");
  EXPECT_EQ(r.status, 404);
  EXPECT_EQ(json::parse(r.body)["code"], "unachievable_state");
}

TEST(ServiceAbsorbing, IdleSidesKeepStateAndAccrueLoss) {
  Scenario s{testing::line_campaign({1, 2}, {{0}, {1}}, 0.9, 0.0, 0.5),
             CampaignState::from_string("212"), "absorbing"};
  Solution sol = accelerated_vi(s.campaign, 1e-3);
  CampaignService svc(std::move(s), std::move(sol));
  const json v = json::parse(svc.handle("GET", "/value/222", "").body);
  EXPECT_NEAR(v["value"].get<double>(), 30.0, 5e-4);
  const json created = json::parse(svc.handle("POST", "/session", "{}").body);
  const std::string id = created["id"];
  const HttpResponse r = svc.handle("POST", "/session/" + id + "/action",
                                    R"({"orders": [[0, "none", null], [1, "attack", 2]]})");
  ASSERT_EQ(r.status, 200) << r.body;
  const json out = json::parse(r.body);
  EXPECT_EQ(out["next_state"], "212");
  EXPECT_EQ(out["stage_loss"], 2.0);
}

TEST_F(ServiceTest, ConcurrentSessions) {
  std::vector<std::thread> pool;
  std::vector<int> failures(4, 0);
  for (int w = 0; w < 4; ++w) {
    pool.emplace_back([&, w] {
      const HttpResponse c = service_->handle("POST", "/session", R"({"seed": 7})");
      const std::string id = json::parse(c.body)["id"];
      for (int t = 0; t < 20; ++t) {
        const HttpResponse h = service_->handle("POST", "/session/" + id + "/hint", "");
        const json orders = json::parse(h.body)["strategy"][0]["orders"];
        const HttpResponse a = service_->handle("POST", "/session/" + id + "/action",
                                                json{{"orders", orders}}.dump());
        if (a.status != 200) ++failures[w];
      }
    });
  }
  for (auto& t : pool) t.join();
  EXPECT_EQ(failures, std::vector<int>(4, 0));
}

TEST_F(ServiceTest, OverHttp) {
  HttpServer server(*service_);
  const int port = server.bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  server.start();
  httplib::Client client("127.0.0.1", port);
  auto state = client.Get("/state");
  ASSERT_TRUE(state);
  EXPECT_EQ(state->status, 200);
  EXPECT_EQ(json::parse(state->body)["digest"], service_->digest());
  auto created = client.Post("/session", R"({"human_player": 1, "seed": 3})", "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  const std::string id = json::parse(created->body)["id"];
  auto bad = client.Post(("/session/" + id + "/action").c_str(),
                         R"({"orders": [[0, "attack", 1]]})", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 422);
  EXPECT_EQ(json::parse(bad->body)["constraint"], "no_open_loc");
  auto missing = client.Get("/value/1");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  server.stop();
}

}  // namespace
}  // namespace campaign
