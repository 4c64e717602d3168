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

#include "campaign/solver.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "stage_kernel.h"

namespace campaign {

double ValueFunction::sup_distance(const ValueFunction& other) const {
  if (other.size() != size()) throw std::invalid_argument("value functions differ in size");
  double d = 0.0;
  for (std::size_t i = 0; i < size(); ++i) d = std::max(d, std::abs(values[i] - other.values[i]));
  return d;
}

ValueFunction stage_loss_values(const Campaign& campaign) {
  const StateSpace space(campaign);
  ValueFunction v;
  v.values.resize(space.size());
  for (std::size_t s = 0; s < space.size(); ++s) v[s] = stage_loss(campaign, space.decode(s));
  return v;
}

std::string to_string(Algorithm algo) {
  return algo == Algorithm::kShapley ? "vi" : "avi";
}

Algorithm algorithm_from_string(const std::string& text) {
  if (text == "vi" || text == "shapley") return Algorithm::kShapley;
  if (text == "avi" || text == "accelerated") return Algorithm::kAccelerated;
  throw std::invalid_argument("unknown algorithm '" + text + "' (expected vi or avi)");
}

StageMatrix payoff_matrix(const Campaign& campaign, const ValueFunction& values,
                          const CampaignState& state) {
  const StateSpace space(campaign);
  if (values.size() != space.size()) throw std::invalid_argument("value function size mismatch");
  StageMatrix out;
  out.rows = reduced_actions(campaign, state, Player::kOne);
  out.cols = reduced_actions(campaign, state, Player::kTwo);
  detail::StageKernel kernel(campaign, space);
  kernel.load(space.encode(state));
  kernel.stage_matrix(reduced_commander_options(campaign, state, Player::kOne),
                      reduced_commander_options(campaign, state, Player::kTwo), values.values,
                      out.payoff);
  return out;
}

std::size_t iteration_bound(const Campaign& campaign, double epsilon) {
  const double total = campaign.total_loss();
  if (total <= 0.0) return 0;
  const double g = campaign.discount();
  const double t = (std::log(epsilon * (1.0 - g) * (1.0 - g)) - std::log(2.0 * total)) /
                   std::log(g);
  return t <= 0.0 ? 0 : static_cast<std::size_t>(std::ceil(t));
}

namespace {

// Drops tiny probabilities and renormalizes.
void truncate(std::vector<double>& p, double threshold) {
  double sum = 0.0;
  for (double& x : p) {
    if (x < threshold) x = 0.0;
    sum += x;
  }
  if (sum <= 0.0) return;
  for (double& x : p) x /= sum;
}

struct StateStats {
  bool pure = false;
  bool lp = false;
  std::uint32_t eliminated = 0;
  std::size_t eliminated_rows = 0;
  std::size_t eliminated_cols = 0;
};

// Shared machinery of the value-iteration variants.
class Engine {
 public:
  Engine(const Campaign& campaign, const SolveOptions& options)
      : campaign_(campaign),
        options_(options),
        space_(campaign),
        rows_(detail::build_action_table(campaign, space_, Player::kOne,
                                         detail::ActionScope::kReduced)),
        cols_(detail::build_action_table(campaign, space_, Player::kTwo,
                                         detail::ActionScope::kReduced)),
        workers_(detail::resolve_workers(options.workers)) {
    options1_.reserve(space_.size());
    options2_.reserve(space_.size());
    for (std::size_t s = 0; s < space_.size(); ++s) {
      const CampaignState state = space_.decode(s);
      options1_.push_back(reduced_commander_options(campaign, state, Player::kOne));
      options2_.push_back(reduced_commander_options(campaign, state, Player::kTwo));
    }
  }

  const StateSpace& space() const { return space_; }
  std::size_t max_rows() const { return rows_.max_count(); }
  std::size_t max_cols() const { return cols_.max_count(); }

  // next = T(current); fills policy and per-state stats when non-null.
  void sweep(const std::vector<double>& current, std::vector<double>& next,
             PolicyProfile* policy, std::vector<StateStats>* stats) const {
    const std::size_t n = space_.size();
    next.resize(n);
    detail::parallel_for(n, workers_, [&](std::size_t begin, std::size_t end, std::size_t) {
      detail::StageKernel kernel(campaign_, space_);
      PayoffMatrix R;
      for (std::size_t s = begin; s < end; ++s) {
        kernel.load(s);
        kernel.stage_matrix(options1_[s], options2_[s], current, R);
        GameSolution g = options_.algorithm == Algorithm::kAccelerated
                             ? azs(R, options_.game_tolerance)
                             : solve_lp(R);
        next[s] = g.value;
        if (stats != nullptr) {
          StateStats& st = (*stats)[s];
          st.pure = g.pure;
          st.lp = options_.algorithm == Algorithm::kShapley || g.used_lp;
          st.eliminated = static_cast<std::uint32_t>(g.rows_eliminated + g.cols_eliminated);
          st.eliminated_rows = g.rows_eliminated;
          st.eliminated_cols = g.cols_eliminated;
        }
        if (policy != nullptr) {
          truncate(g.row_strategy, options_.truncation);
          truncate(g.col_strategy, options_.truncation);
          policy->player1[s] = std::move(g.row_strategy);
          policy->player2[s] = std::move(g.col_strategy);
        }
      }
    });
  }

 private:
  const Campaign& campaign_;
  const SolveOptions& options_;
  StateSpace space_;
  detail::ActionTable rows_;
  detail::ActionTable cols_;
  std::vector<std::vector<std::vector<Order>>> options1_;
  std::vector<std::vector<std::vector<Order>>> options2_;
  std::size_t workers_;
};

// Single-flip check of V(s') - V(s) >= ℓ_o for s' = s with o taken by Player 2.
void audit_isotonicity(const Campaign& campaign, const StateSpace& space,
                       const std::vector<double>& v, SolveReport& report) {
  for (std::size_t s = 0; s < space.size(); ++s) {
    const CampaignState state = space.decode(s);
    for (ObjectiveId o = 0; o < static_cast<ObjectiveId>(campaign.num_objectives()); ++o) {
      if (state.owner(o) != Player::kOne) continue;
      CampaignState upper = state;
      upper.flip(o);
      const std::int64_t u = space.try_encode(upper);
      if (u < 0) continue;
      const double slack = v[static_cast<std::size_t>(u)] - v[s] - campaign.loss(o);
      if (slack < -1e-9) {
        ++report.isotonicity_violations;
        report.worst_isotonicity_slack = std::min(report.worst_isotonicity_slack, slack);
      }
    }
  }
}

}  // namespace

ValueFunction apply_bellman(const Campaign& campaign, const ValueFunction& values,
                            std::size_t workers) {
  SolveOptions options;
  options.workers = workers;
  Engine engine(campaign, options);
  if (values.size() != engine.space().size()) {
    throw std::invalid_argument("value function size mismatch");
  }
  ValueFunction out;
  engine.sweep(values.values, out.values, nullptr, nullptr);
  return out;
}

Solution solve(const Campaign& campaign, const SolveOptions& options) {
  if (!(options.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  Engine engine(campaign, options);
  const std::size_t n = engine.space().size();
  const double g = campaign.discount();
  const double threshold = options.epsilon * (1.0 - g) / (2.0 * g);
  const std::size_t cap = std::max<std::size_t>(iteration_bound(campaign, options.epsilon), 1) +
                          options.iteration_margin;

  Solution sol;
  SolveReport& rep = sol.report;
  rep.algorithm = options.algorithm;
  rep.epsilon = options.epsilon;
  rep.num_states = n;
  rep.max_actions_p1 = engine.max_rows();
  rep.max_actions_p2 = engine.max_cols();
  rep.state_pure_hits.assign(n, 0);
  rep.state_lp_solves.assign(n, 0);
  rep.state_eliminations.assign(n, 0);

  std::vector<double> current = stage_loss_values(campaign).values;
  std::vector<double> next;
  sol.policy.player1.resize(n);
  sol.policy.player2.resize(n);
  std::vector<StateStats> stats(n);

  while (true) {
    engine.sweep(current, next, &sol.policy, &stats);
    ++rep.iterations;
    for (std::size_t s = 0; s < n; ++s) {
      rep.state_pure_hits[s] += stats[s].pure ? 1 : 0;
      rep.state_lp_solves[s] += stats[s].lp ? 1 : 0;
      rep.state_eliminations[s] += stats[s].eliminated;
      rep.pure_saddle_hits += stats[s].pure ? 1 : 0;
      rep.lp_solves += stats[s].lp ? 1 : 0;
      rep.rows_eliminated += stats[s].eliminated_rows;
      rep.cols_eliminated += stats[s].eliminated_cols;
    }
    double delta = 0.0;
    for (std::size_t s = 0; s < n; ++s) delta = std::max(delta, std::abs(next[s] - current[s]));
    rep.final_sup_delta = delta;
    current.swap(next);
    if (options.audit_isotonicity) audit_isotonicity(campaign, engine.space(), current, rep);
    if (delta <= threshold) break;
    if (rep.iterations >= cap) {
      throw NonConvergenceError("value iteration did not converge within " +
                                std::to_string(cap) + " iterations (last step " +
                                std::to_string(delta) + ")");
    }
  }
  sol.values.values = std::move(current);
  rep.wallclock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sol;
}

Solution shapley_vi(const Campaign& campaign, double epsilon) {
  SolveOptions options;
  options.algorithm = Algorithm::kShapley;
  options.epsilon = epsilon;
  return solve(campaign, options);
}

Solution accelerated_vi(const Campaign& campaign, double epsilon) {
  SolveOptions options;
  options.algorithm = Algorithm::kAccelerated;
  options.epsilon = epsilon;
  return solve(campaign, options);
}

}  // namespace campaign
