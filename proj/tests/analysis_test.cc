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

#include "campaign/analysis.h"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "campaign/state_space.h"
#include "campaign/transitions.h"
#include "fixtures.h"

namespace campaign {
namespace {

// Player 1's optimal value against Player 2's fixed strategy over the full
// action space, by plain value iteration on explicit successor lists.
std::vector<double> oracle_best_response_p1(const Campaign& c, const PolicyProfile& profile) {
  const StateSpace space(c);
  const std::size_t n = space.size();
  struct Choice {
    std::vector<std::vector<std::pair<std::size_t, double>>> rows;  // per own action
  };
  std::vector<Choice> model(n);
  std::vector<double> loss(n);
  for (std::size_t i = 0; i < n; ++i) {
    const CampaignState s = space.decode(i);
    loss[i] = stage_loss(c, s);
    const auto mine = feasible_actions_full(c, s, Player::kOne);
    const auto theirs = reduced_actions(c, s, Player::kTwo);
    for (const auto& a1 : mine) {
      std::map<std::size_t, double> row;
      for (std::size_t j = 0; j < theirs.size(); ++j) {
        const double q = profile.player2[i][j];
        if (q <= 0.0) continue;
        for (const auto& [next, p] : successor_distribution(c, s, a1, theirs[j]).outcomes) {
          row[space.encode(next)] += q * p;
        }
      }
      model[i].rows.emplace_back(row.begin(), row.end());
    }
  }
  std::vector<double> v(n, 0.0);
  for (int it = 0; it < 2000; ++it) {
    std::vector<double> next(n);
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = 1e300;
      for (const auto& row : model[i].rows) {
        double ev = 0.0;
        for (const auto& [k, p] : row) ev += p * v[k];
        best = std::min(best, loss[i] + c.discount() * ev);
      }
      next[i] = best;
      delta = std::max(delta, std::abs(best - v[i]));
    }
    v.swap(next);
    if (delta < 1e-13) break;
  }
  return v;
}

// (I - γ P_π) V = L solved directly.
std::vector<double> oracle_policy_value(const Campaign& c, const PolicyProfile& profile) {
  const StateSpace space(c);
  const std::size_t n = space.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const CampaignState s = space.decode(i);
    const auto r1 = reduced_actions(c, s, Player::kOne);
    const auto r2 = reduced_actions(c, s, Player::kTwo);
    a[i][i] += 1.0;
    a[i][n] = stage_loss(c, s);
    for (std::size_t x = 0; x < r1.size(); ++x) {
      for (std::size_t y = 0; y < r2.size(); ++y) {
        const double q = profile.player1[i][x] * profile.player2[i][y];
        if (q <= 0.0) continue;
        for (const auto& [next, p] : successor_distribution(c, s, r1[x], r2[y]).outcomes) {
          a[i][space.encode(next)] -= c.discount() * q * p;
        }
      }
    }
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    std::swap(a[piv], a[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0.0) continue;
      const double f = a[r][col] / a[col][col];
      for (std::size_t k = col; k <= n; ++k) a[r][k] -= f * a[col][k];
    }
  }
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a[i][n] / a[i][i];
  return v;
}

class FigOne : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    campaign_ = new Campaign(testing::bundled("fig1").campaign);
    solution_ = new Solution(accelerated_vi(*campaign_, 1e-3));
  }
  static void TearDownTestSuite() {
    delete solution_;
    delete campaign_;
  }
  static Campaign* campaign_;
  static Solution* solution_;
};
Campaign* FigOne::campaign_ = nullptr;
Solution* FigOne::solution_ = nullptr;

TEST_F(FigOne, EvaluatePolicyMatchesLinearSolve) {
  const ValueFunction v = evaluate_policy(*campaign_, solution_->policy);
  const auto oracle = oracle_policy_value(*campaign_, solution_->policy);
  for (std::size_t i = 0; i < oracle.size(); ++i) EXPECT_NEAR(v[i], oracle[i], 1e-8);
  // Equilibrium play is worth the game value up to the tolerance.
  EXPECT_LE(v.sup_distance(solution_->values), 1e-3);
}

TEST_F(FigOne, BestResponseMatchesOracle) {
  const ValueFunction br = best_response_value(*campaign_, solution_->policy, Player::kOne);
  const auto oracle = oracle_best_response_p1(*campaign_, solution_->policy);
  for (std::size_t i = 0; i < oracle.size(); ++i) EXPECT_NEAR(br[i], oracle[i], 1e-8);
}

TEST_F(FigOne, CertifiesEquilibrium) {
  const CertificationReport rep = certify_epsilon_mpe(*campaign_, solution_->policy, 1e-3);
  EXPECT_TRUE(rep.certified());
  EXPECT_LE(rep.max_deviation_gain_p1, 1e-3);
  EXPECT_LE(rep.max_deviation_gain_p2, 1e-3);
  EXPECT_GT(rep.best_response_iterations, 0u);
}

// A pure action swapped in for Player 2 everywhere lets Player 1 gain.
TEST_F(FigOne, CorruptedPolicyIsRejected) {
  PolicyProfile bad = solution_->policy;
  for (auto& st : bad.player2) {
    std::fill(st.begin(), st.end(), 0.0);
    st.back() = 1.0;
  }
  const CertificationReport rep = certify_epsilon_mpe(*campaign_, bad, 1e-3);
  EXPECT_FALSE(rep.certified());
  EXPECT_GT(std::max(rep.max_deviation_gain_p1, rep.max_deviation_gain_p2), 1e-3);
}

TEST_F(FigOne, MonteCarloWithinStandardErrors) {
  const StateSpace space(*campaign_);
  const CampaignState start = CampaignState::from_string("221211");
  const ValueFunction v = evaluate_policy(*campaign_, solution_->policy);
  const MonteCarloEstimate est = monte_carlo(*campaign_, solution_->policy, start, 20000, 4);
  EXPECT_EQ(est.episodes, 20000u);
  EXPECT_GT(est.standard_error, 0.0);
  EXPECT_LE(std::abs(est.mean - v[space.encode(start)]), 3.0 * est.standard_error);
  // Episode seeds do not depend on how work is split.
  const MonteCarloEstimate one = monte_carlo(*campaign_, solution_->policy, start, 500, 9, 0, 1);
  const MonteCarloEstimate three = monte_carlo(*campaign_, solution_->policy, start, 500, 9, 0, 3);
  EXPECT_EQ(one.mean, three.mean);
  EXPECT_EQ(one.standard_error, three.standard_error);
}

TEST_F(FigOne, SimulateIsReproducible) {
  const CampaignState start = CampaignState::from_string("221211");
  const Trajectory a = simulate(*campaign_, solution_->policy, start, 40, 123);
  const Trajectory b = simulate(*campaign_, solution_->policy, start, 40, 123);
  EXPECT_EQ(a.states, b.states);
  EXPECT_EQ(a.actions_p1, b.actions_p1);
  EXPECT_EQ(a.discounted_loss, b.discounted_loss);
  ASSERT_EQ(a.states.size(), 41u);
  ASSERT_EQ(a.stage_losses.size(), 40u);
  double total = 0.0;
  double g = 1.0;
  for (std::size_t t = 0; t < 40; ++t) {
    EXPECT_EQ(a.stage_losses[t], stage_loss(*campaign_, a.states[t]));
    EXPECT_TRUE(is_achievable(*campaign_, a.states[t]));
    total += g * a.stage_losses[t];
    g *= campaign_->discount();
  }
  EXPECT_NEAR(a.discounted_loss, total, 1e-12);
}

TEST(Simulation, SampledTransitionFrequencies) {
  const Campaign c = testing::bundled("fig1").campaign;
  const auto s = CampaignState::from_string("221211");
  const ActionProfile a1{{Order::attack(0), Order::attack(3)}};
  const ActionProfile a2{{Order::reinforce(0), Order::attack(5)}};
  const auto dist = successor_distribution(c, s, a1, a2);
  std::map<std::uint64_t, int> counts;
  Rng rng(17);
  const int draws = 200000;
  for (int i = 0; i < draws; ++i) ++counts[sample_transition(c, s, a1, a2, rng).player_two_mask()];
  for (const auto& [next, p] : dist.outcomes) {
    const double freq = static_cast<double>(counts[next.player_two_mask()]) / draws;
    EXPECT_NEAR(freq, p, 5.0 * std::sqrt(p * (1 - p) / draws) + 1e-9) << next.to_string();
  }
}

TEST(Simulation, DefaultHorizon) {
  const Campaign c = testing::bundled("fig1").campaign;
  const std::size_t h = default_horizon(c);
  const double g = c.discount();
  const double scale = c.total_loss() / (1 - g);
  EXPECT_LE(std::pow(g, static_cast<double>(h)) * scale, 1e-6);
  EXPECT_GT(std::pow(g, static_cast<double>(h - 1)) * scale, 1e-6);
}

TEST(Isotonicity, CounterexampleViolates) {
  const Campaign c = testing::bundled("counterexample").campaign;
  const Solution sol = accelerated_vi(c, 1e-3);
  const StateSpace space(c);
  const double lo = sol.values[space.encode(CampaignState::from_string("112"))];
  const double hi = sol.values[space.encode(CampaignState::from_string("212"))];
  EXPECT_GE(lo, 19.0 - 1e-3);
  EXPECT_LE(hi, 11.0 + 1e-3);
  const IsotonicityReport rep = check_isotonicity(c, sol.values);
  EXPECT_TRUE(rep.exhaustive);
  EXPECT_GE(rep.violation_count, 1u);
  bool found = false;
  for (const auto& v : rep.violations) {
    found = found || (v.lower == space.encode(CampaignState::from_string("112")) &&
                      v.upper == space.encode(CampaignState::from_string("212")));
    EXPECT_LT(v.slack(), 0.0);
  }
  EXPECT_TRUE(found);
  // Worst first.
  for (std::size_t i = 1; i < rep.violations.size(); ++i) {
    EXPECT_LE(rep.violations[i - 1].slack(), rep.violations[i].slack());
  }
}

TEST(Isotonicity, ValidCampaignsHaveNone) {
  for (std::uint64_t seed : {40, 41, 42}) {
    const Campaign c = testing::random_valid_campaign(seed, {10, 3, 4});
    const Solution sol = accelerated_vi(c, 1e-6);
    IsotonicityOptions opts;
    opts.tolerance = 1e-7;
    EXPECT_TRUE(check_isotonicity(c, sol.values, opts).ok()) << seed;
  }
}

// Exhaustive counting against a direct double loop over comparable pairs.
TEST(Isotonicity, ExhaustiveCountMatchesDirectLoop) {
  const Campaign c = testing::bundled("fig1").campaign;
  const StateSpace space(c);
  std::mt19937_64 gen(3);
  std::normal_distribution<double> noise(0.0, 2.0);
  ValueFunction v;
  std::vector<CampaignState> states;
  for (std::size_t i = 0; i < space.size(); ++i) {
    states.push_back(space.decode(i));
    v.values.push_back(3.0 * stage_loss(c, states.back()) + noise(gen));
  }
  std::size_t expected = 0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = 0; j < states.size(); ++j) {
      if (i == j || !states[i].precedes(states[j])) continue;
      ++pairs;
      const double bound = stage_loss(c, states[j]) - stage_loss(c, states[i]);
      if (v[j] - v[i] < bound - 1e-9) ++expected;
    }
  }
  const IsotonicityReport rep = check_isotonicity(c, v);
  EXPECT_TRUE(rep.exhaustive);
  EXPECT_EQ(rep.pairs_checked, pairs);
  EXPECT_EQ(rep.violation_count, expected);
  EXPECT_GT(expected, 0u);
}

TEST(Isotonicity, SampledModeOnLargeSpaces) {
  const Campaign c = testing::bundled("campaign10").campaign;
  ValueFunction v = stage_loss_values(c);
  IsotonicityOptions opts;
  opts.exhaustive_limit = 10;
  opts.chain_samples = 500;
  const IsotonicityReport rep = check_isotonicity(c, v, opts);
  EXPECT_FALSE(rep.exhaustive);
  EXPECT_TRUE(rep.ok());
  v.values[3] -= 10.0;
  EXPECT_FALSE(check_isotonicity(c, v, opts).ok());
}

}  // namespace
}  // namespace campaign
