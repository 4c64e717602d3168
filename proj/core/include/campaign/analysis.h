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

#ifndef CAMPAIGN_ANALYSIS_H_
#define CAMPAIGN_ANALYSIS_H_

#include <cstdint>
#include <vector>

#include "campaign/campaign.h"
#include "campaign/random.h"
#include "campaign/solver.h"

namespace campaign {

// A comparable pair s ⪯ s' with
//   V(s') - V(s) < Σ_o ℓ_o [s'_o = 2, s_o = 1] - tolerance.
struct IsotonicityViolation {
  std::size_t lower = 0;  // state index of s
  std::size_t upper = 0;  // state index of s'
  double gap = 0.0;       // V(s') - V(s)
  double bound = 0.0;     // loss of the objectives Player 2 gained
  double slack() const { return gap - bound; }
};

struct IsotonicityOptions {
  double tolerance = 1e-9;
  // All comparable pairs up to this many states; single flips plus sampled
  // chains above it.
  std::size_t exhaustive_limit = 20000;
  std::size_t chain_samples = 100000;
  std::uint64_t seed = 0;
  std::size_t max_recorded = 1000;
};

struct IsotonicityReport {
  std::vector<IsotonicityViolation> violations;  // first max_recorded, worst first
  std::size_t violation_count = 0;
  std::size_t pairs_checked = 0;
  bool exhaustive = true;
  double worst_slack = 0.0;

  bool ok() const { return violation_count == 0; }
};

IsotonicityReport check_isotonicity(const Campaign& campaign, const ValueFunction& values,
                                    const IsotonicityOptions& options = {});

struct CertificationReport {
  double epsilon_claimed = 0.0;
  // max_s V_profile(s) - V_best(s) when Player 1 deviates (it minimizes).
  double max_deviation_gain_p1 = 0.0;
  // max_s V_best(s) - V_profile(s) when Player 2 deviates.
  double max_deviation_gain_p2 = 0.0;
  std::size_t worst_state = 0;
  Player worst_player = Player::kOne;
  std::size_t best_response_iterations = 0;

  bool certified() const {
    return max_deviation_gain_p1 <= epsilon_claimed && max_deviation_gain_p2 <= epsilon_claimed;
  }
};

struct CertificationOptions {
  double tolerance = 1e-9;
  std::size_t workers = 0;
  std::size_t max_iterations = 100000;
};

// Best responses over the full feasible action space against the other
// player's fixed strategy, each solved by value iteration.
CertificationReport certify_epsilon_mpe(const Campaign& campaign, const PolicyProfile& profile,
                                        double epsilon, const CertificationOptions& options = {});

// Optimal value of `responder` against the other player's fixed policy, over
// the full feasible action space.
ValueFunction best_response_value(const Campaign& campaign, const PolicyProfile& profile,
                                  Player responder, const CertificationOptions& options = {});

// Value of the stationary profile: V = L + γ P_π V by iteration until the
// step falls below `tolerance`.
ValueFunction evaluate_policy(const Campaign& campaign, const PolicyProfile& profile,
                              double tolerance = 1e-10, std::size_t workers = 0);

// Next state drawn battle by battle in objective order, one uniform per
// battle that can go either way.
CampaignState sample_transition(const Campaign& campaign, const CampaignState& state,
                                const ActionProfile& a1, const ActionProfile& a2, Rng& rng);

struct Trajectory {
  std::vector<CampaignState> states;      // s_0 .. s_H
  std::vector<std::size_t> actions_p1;    // reduced-action index per stage
  std::vector<std::size_t> actions_p2;
  std::vector<double> stage_losses;       // L(s_t) per stage
  double discounted_loss = 0.0;           // Σ_t γ^t L(s_t), t < H
};

// Smallest H with γ^H Σℓ / (1-γ) <= tail (at least 1).
std::size_t default_horizon(const Campaign& campaign, double tail = 1e-6);

// Both players sample from `profile`. horizon 0 selects default_horizon.
Trajectory simulate(const Campaign& campaign, const PolicyProfile& profile,
                    const CampaignState& start, std::size_t horizon, std::uint64_t seed);

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t episodes = 0;
};

// Independent episodes, episode i seeded from (seed, i), so the estimate does
// not depend on the worker count.
MonteCarloEstimate monte_carlo(const Campaign& campaign, const PolicyProfile& profile,
                               const CampaignState& start, std::size_t episodes,
                               std::uint64_t seed, std::size_t horizon = 0,
                               std::size_t workers = 0);

}  // namespace campaign

#endif  // CAMPAIGN_ANALYSIS_H_
