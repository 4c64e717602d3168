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

#include "campaign/scenario_io.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <json.hpp>
#include <unistd.h>

#include "campaign/state_space.h"
#include "fixtures.h"

namespace campaign {
namespace {

using json = nlohmann::json;

// Two objectives on two axes, one commander. Line numbers matter below.
std::string small_scenario(const std::string& axis1_objectives = "[1]",
                           const std::string& discount_line = "  \"discount\": 0.9,") {
  return std::string("{\n") +                                                      // 1
         "  \"schema_version\": \"campaign-mpe/1\",\n" +                           // 2
         discount_line + "\n" +                                                    // 3
         "  \"objectives\": [\n" +                                                 // 4
         "    {\"id\": 0, \"label\": \"a\", \"loss\": 1},\n" +                     // 5
         "    {\"id\": 1, \"label\": \"b\", \"loss\": 2}\n" +                      // 6
         "  ],\n" +                                                                // 7
         "  \"axes\": [\n" +                                                       // 8
         "    {\"id\": 0, \"objectives\": [0]},\n" +                               // 9
         "    {\"id\": 1, \"objectives\": " + axis1_objectives + "}\n" +           // 10
         "  ],\n" +                                                                // 11
         "  \"commanders\": [{\"id\": 0, \"axes\": [0, 1]}],\n" +                  // 12
         "  \"probability_model\": {\n" +                                          // 13
         "    \"initial_attack\": {\"player1\": [0.3, 0.3], \"player2\": [0.2, 0.2]},\n" +
         "    \"initial_reinforce\": {\"player1\": [0.4, 0.4], \"player2\": [0.5, 0.5]}\n" +
         "  },\n" +                                                                // 16
         "  \"initial_state\": \"12\"\n" +                                         // 17
         "}\n";
}

TEST(ScenarioIo, ParsesMinimalScenario) {
  const Scenario s = parse_scenario(small_scenario());
  EXPECT_EQ(s.campaign.num_objectives(), 2u);
  EXPECT_EQ(s.campaign.loss(1), 2.0);
  EXPECT_EQ(s.campaign.discount(), 0.9);
  EXPECT_EQ(s.initial_state.to_string(), "12");
  EXPECT_EQ(s.campaign.probabilities().initial_reinforce(Player::kTwo, 0), 0.5);
}

TEST(ScenarioIo, RejectsObjectiveOnTwoAxesWithLine) {
  try {
    parse_scenario(small_scenario("[1, 0]"), "twice.json");
    FAIL() << "expected ScenarioError";
  } catch (const ScenarioError& e) {
    EXPECT_EQ(e.line(), 10u);
    EXPECT_EQ(e.pointer(), "/axes/1/objectives/1");
    EXPECT_EQ(e.source(), "twice.json");
    EXPECT_NE(std::string(e.what()).find("twice.json:10:"), std::string::npos);
    EXPECT_NE(e.detail().find("appears in axis 0 and axis 1"), std::string::npos) << e.detail();
  }
}

TEST(ScenarioIo, SyntaxErrorLine) {
  try {
    parse_scenario(small_scenario("[1]", "  \"discount\": 0.9"), "broken.json");
    FAIL() << "expected ScenarioError";
  } catch (const ScenarioError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
}

TEST(ScenarioIo, SemanticErrors) {
  auto error_of = [](const std::string& text) -> std::string {
    try {
      parse_scenario(text);
    } catch (const ScenarioError& e) {
      return e.pointer();
    }
    return "none";
  };
  EXPECT_EQ(error_of(small_scenario("[1]", "  \"discount\": 1.0,")), "/discount");
  EXPECT_EQ(error_of(small_scenario("[7]")), "/axes/1/objectives/0");
  EXPECT_EQ(error_of(small_scenario("[]")), "/axes/1/objectives");
  std::string bad_state = small_scenario();
  bad_state.replace(bad_state.find("\"12\""), 4, "\"123\"");
  EXPECT_EQ(error_of(bad_state), "/initial_state");
  std::string bad_version = small_scenario();
  bad_version.replace(bad_version.find("campaign-mpe/1"), 14, "campaign-mpe/9");
  EXPECT_EQ(error_of(bad_version), "/schema_version");
  std::string bad_prob = small_scenario();
  bad_prob.replace(bad_prob.find("[0.3, 0.3]"), 10, "[0.3, 1.3]");
  EXPECT_EQ(error_of(bad_prob), "/probability_model/initial_attack/player1/1");
}

TEST(ScenarioIo, UnachievableInitialStateRejected) {
  // The second axis reads 2111, which matches none of the axis patterns.
  Scenario s = testing::bundled("campaign06");
  json doc = json::parse(scenario_to_json(s));
  doc["initial_state"] = "112111";
  try {
    parse_scenario(doc.dump(2));
    FAIL();
  } catch (const ScenarioError& e) {
    EXPECT_EQ(e.pointer(), "/initial_state");
  }
}

TEST(ScenarioIo, BundledRoundTripAndDigest) {
  for (const char* name : {"fig1", "campaign06", "campaign10", "campaign14", "campaign18",
                           "campaign22", "counterexample"}) {
    const Scenario s = testing::bundled(name);
    const std::string text = scenario_to_json(s);
    const Scenario again = parse_scenario(text);
    EXPECT_EQ(scenario_to_json(again), text) << name;
    EXPECT_EQ(scenario_digest(again), scenario_digest(s)) << name;
    EXPECT_EQ(scenario_digest(s).rfind("sha256:", 0), 0u);
    EXPECT_EQ(scenario_digest(s).size(), 7u + 64u);
  }
  Scenario a = testing::bundled("fig1");
  json doc = json::parse(scenario_to_json(a));
  doc["objectives"][0]["loss"] = 1.25;
  EXPECT_NE(scenario_digest(parse_scenario(doc.dump())), scenario_digest(a));
}

TEST(ScenarioIo, AxisCodeTable) {
  const Scenario s = parse_scenario(small_scenario());
  const auto table = axis_code_table(s.campaign);
  ASSERT_EQ(table.size(), 2u);
  EXPECT_EQ(table[0], (std::vector<std::string>{"c1", "c2"}));
  const Scenario fig = testing::bundled("campaign06");
  const auto t6 = axis_code_table(fig.campaign);
  const std::size_t n = fig.campaign.axes()[0].objectives.size();
  ASSERT_EQ(t6[0].size(), 2 * n);
  EXPECT_EQ(t6[0][2], "pf(1)");
  EXPECT_EQ(t6[0][n + 1], "sf(1)");
}

class SolutionFiles : public ::testing::Test {
 protected:
  SolutionFiles()
      : scenario_(testing::bundled("fig1")), solution_(accelerated_vi(scenario_.campaign, 1e-3)) {}

  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("campaign_io_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  Scenario scenario_;
  Solution solution_;
  std::filesystem::path dir_;
};

TEST_F(SolutionFiles, RoundTripIsExactAndByteStable) {
  const auto path = dir_ / "fig1.solution.json";
  save_solution(scenario_, solution_, path);
  const SolutionFile loaded = load_solution(path, scenario_);
  EXPECT_EQ(loaded.digest, scenario_digest(scenario_));
  EXPECT_EQ(loaded.solution.values.values, solution_.values.values);
  EXPECT_EQ(loaded.solution.policy.player1, solution_.policy.player1);
  EXPECT_EQ(loaded.solution.policy.player2, solution_.policy.player2);
  EXPECT_EQ(loaded.solution.report.iterations, solution_.report.iterations);
  EXPECT_EQ(loaded.solution.report.algorithm, Algorithm::kAccelerated);
  EXPECT_EQ(solution_to_json(scenario_, loaded.solution), read_text_file(path));
  // Same inputs, same bytes.
  const Solution again = accelerated_vi(scenario_.campaign, 1e-3);
  EXPECT_EQ(solution_to_json(scenario_, again), read_text_file(path));
}

TEST_F(SolutionFiles, LayoutFields) {
  const json doc = json::parse(solution_to_json(scenario_, solution_));
  EXPECT_EQ(doc["schema_version"], "campaign-mpe/1");
  EXPECT_EQ(doc["kind"], "solution");
  EXPECT_EQ(doc["gamma"], 0.9);
  EXPECT_EQ(doc["epsilon"], 1e-3);
  EXPECT_EQ(doc["values"].size(), StateSpace(scenario_.campaign).size());
  const json& first = doc["strategies"][0];
  EXPECT_EQ(first["state"], StateSpace(scenario_.campaign).decode(0).to_string());
  for (const json& row : first["player1"]) {
    EXPECT_GT(row["probability"].get<double>(), 0.0);
    EXPECT_EQ(row["orders"].size(), scenario_.campaign.num_commanders());
  }
}

TEST_F(SolutionFiles, DigestMismatchRejected) {
  const std::string text = solution_to_json(scenario_, solution_);
  json doc = json::parse(scenario_to_json(scenario_));
  doc["objectives"][1]["loss"] = 9.0;
  const Scenario other = parse_scenario(doc.dump());
  try {
    parse_solution(text, other, "sol.json");
    FAIL();
  } catch (const ScenarioError& e) {
    EXPECT_EQ(e.pointer(), "/scenario_digest");
    EXPECT_GT(e.line(), 0u);
  }
}

TEST_F(SolutionFiles, TamperedStrategyRejected) {
  json doc = json::parse(solution_to_json(scenario_, solution_));
  doc["strategies"][0]["player1"][0]["probability"] = 0.25;
  EXPECT_THROW(parse_solution(doc.dump(1), scenario_), ScenarioError);
  json doc2 = json::parse(solution_to_json(scenario_, solution_));
  doc2["values"].erase(doc2["values"].begin());
  EXPECT_THROW(parse_solution(doc2.dump(1), scenario_), ScenarioError);
}

TEST_F(SolutionFiles, ReportMentionsValuesAndStatistics) {
  const std::string text = report(scenario_, solution_, {scenario_.initial_state});
  EXPECT_NE(text.find(scenario_.initial_state.to_string()), std::string::npos);
  EXPECT_NE(text.find("Strategy of player 1"), std::string::npos);
  EXPECT_NE(text.find("iterations"), std::string::npos);
}

TEST(ScenarioIo, DescribeOrder) {
  const Scenario s = parse_scenario(small_scenario());
  EXPECT_EQ(describe_order(s.campaign, 0, Order::attack(1)), "C0: attack o1 (b)");
  EXPECT_EQ(describe_order(s.campaign, 0, Order::none()), "C0: none");
}

TEST(ScenarioIo, MissingFile) {
  EXPECT_THROW(load_scenario("/nonexistent/scenario.json"), std::runtime_error);
}

}  // namespace
}  // namespace campaign
