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

#ifndef CAMPAIGN_SOLVER_H_
#define CAMPAIGN_SOLVER_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "campaign/campaign.h"
#include "campaign/matrix_game.h"
#include "campaign/state_space.h"

namespace campaign {

// Dense values indexed by achievable-state index.
struct ValueFunction {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }

  // Sup-norm distance; sizes must match.
  double sup_distance(const ValueFunction& other) const;
};

// V(s) = L(s) for every achievable state.
ValueFunction stage_loss_values(const Campaign& campaign);

// Stationary mixed strategies over reduced actions (canonical order) for both
// players, per achievable state.
struct PolicyProfile {
  std::vector<std::vector<double>> player1;
  std::vector<std::vector<double>> player2;

  const std::vector<double>& strategy(Player p, std::size_t state) const {
    return p == Player::kOne ? player1[state] : player2[state];
  }
  std::vector<double>& strategy(Player p, std::size_t state) {
    return p == Player::kOne ? player1[state] : player2[state];
  }
  std::size_t num_states() const { return player1.size(); }
};

enum class Algorithm : std::uint8_t { kShapley, kAccelerated };

std::string to_string(Algorithm algo);
// "vi" or "avi".
Algorithm algorithm_from_string(const std::string& text);

struct SolveOptions {
  Algorithm algorithm = Algorithm::kAccelerated;
  double epsilon = 1e-3;
  // 0 selects std::thread::hardware_concurrency().
  std::size_t workers = 0;
  // Saddle/dominance tolerance for the accelerated matrix-game solve.
  double game_tolerance = kDefaultDominanceTolerance;
  // Probabilities below this are dropped from reported strategies.
  double truncation = 1e-9;
  // Debug: audit the single-flip isotonicity bound after every iteration.
  bool audit_isotonicity = false;
  // Extra iterations allowed beyond iteration_bound before giving up.
  std::size_t iteration_margin = 50;
};

struct SolveReport {
  Algorithm algorithm = Algorithm::kAccelerated;
  std::size_t iterations = 0;
  double final_sup_delta = 0.0;
  double epsilon = 0.0;
  double wallclock_seconds = 0.0;
  std::size_t num_states = 0;
  std::size_t max_actions_p1 = 0;
  std::size_t max_actions_p2 = 0;

  // Totals over all iterations and states.
  std::size_t pure_saddle_hits = 0;
  std::size_t lp_solves = 0;
  std::size_t rows_eliminated = 0;
  std::size_t cols_eliminated = 0;
  // Per-state totals over all iterations.
  std::vector<std::uint32_t> state_pure_hits;
  std::vector<std::uint32_t> state_lp_solves;
  std::vector<std::uint32_t> state_eliminations;

  // Filled when SolveOptions::audit_isotonicity is set.
  std::size_t isotonicity_violations = 0;
  double worst_isotonicity_slack = 0.0;
};

struct Solution {
  ValueFunction values;
  PolicyProfile policy;
  SolveReport report;
};

class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Stage game at one state: R(a1, a2) = L(s) + γ Σ P(s'|s,a1,a2) V(s').
struct StageMatrix {
  PayoffMatrix payoff;
  std::vector<ActionProfile> rows;  // Player 1's reduced actions
  std::vector<ActionProfile> cols;  // Player 2's reduced actions
};

StageMatrix payoff_matrix(const Campaign& campaign, const ValueFunction& values,
                          const CampaignState& state);

// One synchronous application of the minimax Bellman operator.
ValueFunction apply_bellman(const Campaign& campaign, const ValueFunction& values,
                            std::size_t workers = 0);

// Number of iterations after which the stopping rule is guaranteed to fire:
// ceil((log(ε(1-γ)^2) - log(2 Σℓ)) / log γ), and 0 when Σℓ = 0.
std::size_t iteration_bound(const Campaign& campaign, double epsilon);

// Value iteration from V0 = L, stopping once the sup-norm step is at most
// ε(1-γ)/(2γ). Returned values are within ε/2 of the optimum and the policy
// (solved on the previous iterate) is an ε-equilibrium.
// Throws NonConvergenceError past iteration_bound + margin.
Solution solve(const Campaign& campaign, const SolveOptions& options);

Solution shapley_vi(const Campaign& campaign, double epsilon);
Solution accelerated_vi(const Campaign& campaign, double epsilon);

}  // namespace campaign

#endif  // CAMPAIGN_SOLVER_H_
