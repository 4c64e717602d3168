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

#ifndef CAMPAIGN_TESTS_FIXTURES_H_
#define CAMPAIGN_TESTS_FIXTURES_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "campaign/campaign.h"
#include "campaign/scenario_io.h"

namespace campaign::testing {

// Campaign with axes of the given lengths, objectives numbered axis by axis,
// constant probabilities and unit losses unless `losses` is given.
Campaign line_campaign(const std::vector<int>& axis_lengths,
                       const std::vector<std::vector<AxisId>>& commander_axes, double discount,
                       double attack, double reinforce, std::vector<double> losses = {});

// Same structure with a different discount.
Campaign with_discount(const Campaign& campaign, double discount);

struct RandomShape {
  int max_objectives = 12;
  int max_axes = 3;
  int max_axis_length = 4;
};

// Random campaign whose probability model passes validate_assumptions.
// Models are drawn until one validates, so the result is a function of the
// seed only.
Campaign random_valid_campaign(std::uint64_t seed, const RandomShape& shape = {});

std::filesystem::path scenario_path(const std::string& name);
Scenario bundled(const std::string& name);

// True when every axis is a pure front.
bool is_pure_front_state(const Campaign& campaign, const CampaignState& state);

}  // namespace campaign::testing

#endif  // CAMPAIGN_TESTS_FIXTURES_H_
