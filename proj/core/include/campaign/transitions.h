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

#ifndef CAMPAIGN_TRANSITIONS_H_
#define CAMPAIGN_TRANSITIONS_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "campaign/campaign.h"
#include "campaign/probability_model.h"
#include "campaign/state.h"

namespace campaign {

// alpha: probability that an attack by `player` on `objective` succeeds when
// the defender does not reinforce. Equals 1 when `player` already holds it.
double attack_success_prob(const ProbabilityModel& model, Player player, ObjectiveId objective,
                           const CampaignState& state);

// rho: probability that a reinforcement by `player` thwarts an otherwise
// successful attack. Equals 0 when the opponent holds the objective.
double reinforce_success_prob(const ProbabilityModel& model, Player player,
                              ObjectiveId objective, const CampaignState& state);

// Probability that Player 1 controls `objective` next stage given both
// players' order kinds on it.
double battle_outcome_prob(const ProbabilityModel& model, const CampaignState& state,
                           ObjectiveId objective, OrderKind order1, OrderKind order2);

// An objective attacked this stage.
struct Battle {
  ObjectiveId objective = 0;
  Player attacker = Player::kOne;
  bool reinforced = false;
  double success = 0.0;  // probability that control flips
};

// Battles in objective-id order. Both actions must be feasible at `state`.
std::vector<Battle> battles(const Campaign& campaign, const CampaignState& state,
                            const ActionProfile& a1, const ActionProfile& a2);

struct SuccessorDistribution {
  std::vector<std::pair<CampaignState, double>> outcomes;

  double total() const;
  // Probability of `state`, 0 if absent.
  double probability_of(const CampaignState& state) const;
};

// Joint distribution over next states. Only battles with a success
// probability strictly inside (0, 1) branch; outcomes carry positive mass.
SuccessorDistribution successor_distribution(const Campaign& campaign, const CampaignState& state,
                                             const ActionProfile& a1, const ActionProfile& a2);

// Allocation-free variant: calls fn(player_two_mask, probability) per outcome.
template <typename Fn>
void for_each_successor(std::span<const Battle> fights, std::uint64_t base_mask, Fn&& fn) {
  std::uint64_t sure_flips = 0;
  std::uint64_t branch_bits[CampaignState::kMaxObjectives];
  double branch_p[CampaignState::kMaxObjectives];
  int k = 0;
  for (const Battle& b : fights) {
    const std::uint64_t bit = std::uint64_t{1} << b.objective;
    if (b.success >= 1.0) {
      sure_flips |= bit;
    } else if (b.success > 0.0) {
      branch_bits[k] = bit;
      branch_p[k] = b.success;
      ++k;
    }
  }
  const std::uint64_t base = base_mask ^ sure_flips;
  const std::uint64_t outcomes = std::uint64_t{1} << k;
  for (std::uint64_t pattern = 0; pattern < outcomes; ++pattern) {
    std::uint64_t mask = base;
    double p = 1.0;
    for (int j = 0; j < k; ++j) {
      if ((pattern >> j) & 1U) {
        mask ^= branch_bits[j];
        p *= branch_p[j];
      } else {
        p *= 1.0 - branch_p[j];
      }
    }
    fn(mask, p);
  }
}

enum class Severity : std::uint8_t { kWarning, kError };

struct AssumptionViolation {
  int assumption = 0;  // 1 = monotone probabilities, 2 = defence advantage
  Severity severity = Severity::kError;
  Player player = Player::kOne;
  ObjectiveId objective = 0;
  CampaignState state;
  CampaignState other;
  std::string quantity;  // e.g. "alpha1", "rho2", "hold-vs-gain"
  double lhs = 0.0;
  double rhs = 0.0;

  std::string describe() const;
};

struct ValidationOptions {
  enum class Mode : std::uint8_t { kExhaustive, kSampled };
  Mode mode = Mode::kExhaustive;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  double tolerance = 1e-12;
  std::size_t max_recorded = 200;
};

struct AssumptionReport {
  std::vector<AssumptionViolation> violations;  // first max_recorded only
  std::size_t assumption1_errors = 0;
  std::size_t assumption2_errors = 0;
  std::size_t warnings = 0;
  std::size_t states_checked = 0;
  std::size_t pairs_checked = 0;
  // Strict positivity conditions under which every equilibrium uses only
  // front actions (positive losses, positive attack odds, rho in (0,1)).
  bool strictness_holds = true;
  std::vector<std::string> strictness_failures;  // first few only

  bool assumption1_ok() const { return assumption1_errors == 0; }
  bool assumption2_ok() const { return assumption2_errors == 0; }
  bool ok() const { return assumption1_ok() && assumption2_ok(); }
};

// Checks the monotonicity (1) and defence-advantage (2) assumptions on
// achievable states and single-objective flips between achievable states.
AssumptionReport validate_assumptions(const Campaign& campaign,
                                      const ValidationOptions& options = {});

}  // namespace campaign

#endif  // CAMPAIGN_TRANSITIONS_H_
