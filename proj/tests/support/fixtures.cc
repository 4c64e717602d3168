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

#include "fixtures.h"

#include <algorithm>
#include <numeric>
#include <random>

#include "campaign/transitions.h"

namespace campaign::testing {

Campaign line_campaign(const std::vector<int>& axis_lengths,
                       const std::vector<std::vector<AxisId>>& commander_axes, double discount,
                       double attack, double reinforce, std::vector<double> losses) {
  const int n = std::accumulate(axis_lengths.begin(), axis_lengths.end(), 0);
  if (losses.empty()) losses.assign(n, 1.0);
  std::vector<Objective> objectives;
  for (int o = 0; o < n; ++o) objectives.push_back({o, losses[o], "o" + std::to_string(o)});
  std::vector<Axis> axes;
  int next = 0;
  for (std::size_t x = 0; x < axis_lengths.size(); ++x) {
    Axis axis{static_cast<AxisId>(x), {}};
    for (int i = 0; i < axis_lengths[x]; ++i) axis.objectives.push_back(next++);
    axes.push_back(axis);
  }
  std::vector<Commander> commanders;
  for (std::size_t c = 0; c < commander_axes.size(); ++c) {
    commanders.push_back({static_cast<CommanderId>(c), commander_axes[c]});
  }
  return Campaign(objectives, axes, commanders, discount,
                  ProbabilityModel(static_cast<std::size_t>(n), attack, reinforce));
}

Campaign with_discount(const Campaign& campaign, double discount) {
  return Campaign(campaign.objectives(), campaign.axes(), campaign.commanders(), discount,
                  campaign.probabilities());
}

namespace {

Campaign draw_campaign(std::mt19937_64& gen, const RandomShape& shape) {
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  };
  auto integer = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); };

  const int num_axes = integer(1, shape.max_axes);
  std::vector<int> lengths;
  int total = 0;
  for (int x = 0; x < num_axes; ++x) {
    const int room = shape.max_objectives - total - (num_axes - x - 1);
    const int len = integer(1, std::min(shape.max_axis_length, room));
    lengths.push_back(len);
    total += len;
  }
  // Axes dealt to commanders in order, at least one axis each.
  const int num_commanders = integer(1, num_axes);
  std::vector<std::vector<AxisId>> owners(num_commanders);
  for (int x = 0; x < num_axes; ++x) {
    const int c = x < num_commanders ? x : integer(0, num_commanders - 1);
    owners[c].push_back(x);
  }
  std::vector<double> losses;
  for (int o = 0; o < total; ++o) losses.push_back(0.5 * integer(1, 6));

  ProbabilityModel model(static_cast<std::size_t>(total), 0.0, 0.0);
  for (Player p : {Player::kOne, Player::kTwo}) {
    for (ObjectiveId o = 0; o < total; ++o) {
      model.set_initial_attack(p, o, uniform(0.05, 0.35));
      model.set_initial_reinforce(p, o, uniform(0.1, 0.5));
      const int entries = integer(0, 2);
      for (int e = 0; e < entries; ++e) {
        ImprovementEntry entry;
        entry.player = p;
        entry.target = o;
        entry.kind = integer(0, 1) == 0 ? BattleKind::kAttack : BattleKind::kReinforce;
        const int size = integer(1, std::min(3, total));
        for (int k = 0; k < size; ++k) {
          const int o2 = integer(0, total - 1);
          if (o2 != o) entry.condition.push_back(o2);
        }
        if (entry.condition.empty()) continue;
        std::sort(entry.condition.begin(), entry.condition.end());
        entry.condition.erase(std::unique(entry.condition.begin(), entry.condition.end()),
                              entry.condition.end());
        entry.boost = uniform(0.02, 0.2);
        model.add_improvement(entry);
      }
    }
  }
  Campaign shell = line_campaign(lengths, owners, uniform(0.55, 0.95), 0.0, 0.0, losses);
  return Campaign(shell.objectives(), shell.axes(), shell.commanders(), shell.discount(), model);
}

}  // namespace

Campaign random_valid_campaign(std::uint64_t seed, const RandomShape& shape) {
  std::mt19937_64 gen(seed);
  for (;;) {
    Campaign c = draw_campaign(gen, shape);
    if (validate_assumptions(c).ok()) return c;
  }
}

std::filesystem::path scenario_path(const std::string& name) {
  return std::filesystem::path(CAMPAIGN_SCENARIO_DIR) / (name + ".json");
}

Scenario bundled(const std::string& name) { return load_scenario(scenario_path(name)); }

bool is_pure_front_state(const Campaign& campaign, const CampaignState& state) {
  return std::all_of(campaign.axes().begin(), campaign.axes().end(), [&](const Axis& axis) {
    return classify_axis(axis, state).kind == AxisType::Kind::kPureFront;
  });
}

}  // namespace campaign::testing
