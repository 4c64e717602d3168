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

#ifndef CAMPAIGN_SCENARIO_IO_H_
#define CAMPAIGN_SCENARIO_IO_H_

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "campaign/campaign.h"
#include "campaign/solver.h"

namespace campaign {

inline constexpr std::string_view kSchemaVersion = "campaign-mpe/1";

// Parse or validation failure with its location in the source text.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string source, std::size_t line, std::string pointer, std::string message);

  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }  // 1-based; 0 when unknown
  const std::string& pointer() const { return pointer_; }  // JSON pointer
  const std::string& detail() const { return detail_; }

 private:
  std::string source_;
  std::size_t line_;
  std::string pointer_;
  std::string detail_;
};

struct Scenario {
  Campaign campaign;
  CampaignState initial_state;
  std::string name;  // optional
};

// Parses and validates a scenario: referential integrity, partition and
// responsibility checks, probability ranges and an achievable initial
// state. Assumptions 1-2 are not required here (see validate_assumptions).
Scenario parse_scenario(std::string_view text, const std::string& source = "<memory>");
Scenario load_scenario(const std::filesystem::path& path);

// Canonical text: sorted keys, shortest round-trip numbers, two-space indent.
std::string scenario_to_json(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

// "sha256:" + hex digest of the compact canonical form.
std::string scenario_digest(const Scenario& scenario);

// Axis-code legend per axis, e.g. {"c1", "c2", "pf(1)", ..., "sf(1)", ...}.
std::vector<std::vector<std::string>> axis_code_table(const Campaign& campaign);

struct SolutionFile {
  std::string digest;
  Solution solution;  // wallclock and per-state counters are not persisted
};

// Byte-stable for identical inputs.
std::string solution_to_json(const Scenario& scenario, const Solution& solution);
void save_solution(const Scenario& scenario, const Solution& solution,
                   const std::filesystem::path& path);

// Verifies the digest and axis-code table against `scenario` and maps each
// stored action back onto reduced_actions; throws ScenarioError otherwise.
SolutionFile parse_solution(std::string_view text, const Scenario& scenario,
                            const std::string& source = "<memory>");
SolutionFile load_solution(const std::filesystem::path& path, const Scenario& scenario);

// Human-readable tables: values at `states`, their non-zero strategy rows
// for both players, and solve statistics.
std::string report(const Scenario& scenario, const Solution& solution,
                   const std::vector<CampaignState>& states);

// Order rendered with objective labels, e.g. "C0: attack o3 (Bridge)".
std::string describe_order(const Campaign& campaign, CommanderId commander, const Order& order);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace campaign

#endif  // CAMPAIGN_SCENARIO_IO_H_
