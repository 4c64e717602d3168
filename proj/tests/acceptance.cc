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

// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.
// Criteria listed in kDocumentedConflicts cannot be met as worded; they are
// still evaluated and printed, but do not fail the run.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "campaign/analysis.h"
#include "campaign/campaign.h"
#include "campaign/scenario_io.h"
#include "campaign/solver.h"
#include "campaign/state_space.h"
#include "campaign/transitions.h"
#include "fixtures.h"

namespace {

using namespace campaign;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

const std::set<int> kDocumentedConflicts = {2};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Outcome battle_chain() {
  ProbabilityModel m(1, 0.0, 0.0);
  m.set_initial_attack(Player::kOne, 0, 0.7);
  m.set_initial_reinforce(Player::kTwo, 0, 0.4);
  const auto s = CampaignState::from_string("2");
  const auto t0 = Clock::now();
  const double open = battle_outcome_prob(m, s, 0, OrderKind::kAttack, OrderKind::kNone);
  const double held = battle_outcome_prob(m, s, 0, OrderKind::kAttack, OrderKind::kReinforce);
  const double dt = seconds_since(t0);
  const bool ok = open == 0.7 && held == 0.7 * (1.0 - 0.4) && std::abs(held - 0.42) < 1e-15 &&
                  dt < 1e-3;
  return {ok, fmt("unreinforced %.17g, reinforced %.17g, %.1f us", open, held, dt * 1e6)};
}

Outcome improvement_example() {
  ProbabilityModel m(22, 0.0, 0.0);
  m.set_initial_attack(Player::kOne, 8, 0.20);
  m.add_improvement({Player::kOne, 8, BattleKind::kAttack, {11}, 0.20});
  m.add_improvement({Player::kOne, 8, BattleKind::kAttack, {16}, 0.10});
  m.add_improvement({Player::kOne, 8, BattleKind::kAttack, {7, 10, 11}, 0.15});
  m.add_improvement({Player::kOne, 8, BattleKind::kAttack, {6, 10, 15, 19}, 0.05});
  const auto s = CampaignState::from_string("1122111121112211121112");
  const double alpha = attack_success_prob(m, Player::kOne, 8, s);
  const double product = 1.0 - 0.8 * 0.8 * 0.9 * 0.85 * 0.95;
  const bool formula = std::abs(alpha - product) <= 1e-12;
  const bool literal = std::abs(alpha - 0.535) <= 1e-12;
  return {literal,
          fmt("alpha %.12f; matches the product formula: %s; equals 0.535 to 3 decimals: %s; "
              "|alpha - 0.535| = %.2e exceeds 1e-12",
              alpha, formula ? "yes" : "no",
              std::round(alpha * 1000) / 1000 == 0.535 ? "yes" : "no", std::abs(alpha - 0.535))};
}

Outcome state_counts() {
  struct Case {
    std::vector<int> lengths;
    std::size_t expected;
  };
  const std::vector<Case> cases{{{5, 5, 5, 5, 5}, 100000}, {{4, 4, 4, 5, 5}, 51200},
                                {{4, 4, 5, 5}, 6400},      {{3, 3, 4, 4}, 2304},
                                {{2, 4, 4}, 256}};
  bool ok = true;
  std::string detail;
  double worst = 0.0;
  for (const Case& k : cases) {
    std::vector<std::vector<AxisId>> cmd;
    for (std::size_t x = 0; x < k.lengths.size(); ++x) cmd.push_back({static_cast<AxisId>(x)});
    const Campaign c = testing::line_campaign(k.lengths, cmd, 0.9, 0.3, 0.3);
    const auto t0 = Clock::now();
    const auto states = enumerate_achievable_states(c);
    worst = std::max(worst, seconds_since(t0));
    ok = ok && states.size() == k.expected;
    detail += std::to_string(states.size()) + " ";
  }
  const double reduction = 1.0 - 100000.0 / 33554432.0;
  ok = ok && reduction >= 0.997 && worst < 5.0;
  return {ok, detail + fmt("states; reduction %.4f; slowest enumeration %.3f s", reduction, worst)};
}

Outcome action_counts() {
  const Scenario sc = testing::bundled("campaign22");
  const Campaign& c = sc.campaign;
  const StateSpace space(c);
  std::size_t max1 = 0;
  std::size_t max2 = 0;
  std::size_t at_pf = 0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const CampaignState s = space.decode(i);
    const std::size_t n1 = reduced_action_count(c, s, Player::kOne);
    max1 = std::max(max1, n1);
    max2 = std::max(max2, reduced_action_count(c, s, Player::kTwo));
    if (testing::is_pure_front_state(c, s)) at_pf = std::max(at_pf, n1);
  }
  const bool ok = c.num_commanders() == 3 && at_pf == 32 && max1 == 32 && max2 == 32;
  return {ok, fmt("all-pure-front %zu, max over states %zu / %zu", at_pf, max1, max2)};
}

Outcome counterexample() {
  const Scenario sc = testing::bundled("counterexample");
  const auto t0 = Clock::now();
  const double eps = 1e-3;
  const Solution sol = accelerated_vi(sc.campaign, eps);
  const StateSpace space(sc.campaign);
  const double lo = sol.values[space.encode(CampaignState::from_string("112"))];
  const double hi = sol.values[space.encode(CampaignState::from_string("212"))];
  const IsotonicityReport rep = check_isotonicity(sc.campaign, sol.values);
  const double dt = seconds_since(t0);
  const Solution low = accelerated_vi(testing::with_discount(sc.campaign, 0.4), eps);
  const IsotonicityReport rep4 =
      check_isotonicity(testing::with_discount(sc.campaign, 0.4), low.values);
  const bool ok = lo >= 19 - eps && hi <= 11 + eps && rep.violation_count >= 1 && dt < 1.0;
  return {ok, fmt("V(112) %.6f, V(212) %.6f, %zu violations, %.3f s; at discount 0.4: %zu",
                  lo, hi, rep.violation_count, dt, rep4.violation_count)};
}

Outcome theorem_audit() {
  const auto t0 = Clock::now();
  std::size_t violations = 0;
  std::size_t objectives = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Campaign c = testing::random_valid_campaign(1000 + seed, {12, 3, 4});
    if (!validate_assumptions(c).ok()) return {false, "generator produced an invalid model"};
    objectives = std::max(objectives, c.num_objectives());
    const Solution sol = accelerated_vi(c, 1e-6);
    IsotonicityOptions opts;
    opts.tolerance = 1e-7;
    const IsotonicityReport rep = check_isotonicity(c, sol.values, opts);
    violations += rep.violation_count;
    worst = std::min(worst, rep.worst_slack);
  }
  const double dt = seconds_since(t0);
  return {violations == 0 && dt < 600,
          fmt("20 campaigns (up to %zu objectives), %zu violations, %.1f s", objectives,
              violations, dt)};
}

Outcome vi_equals_avi() {
  bool ok = true;
  std::string detail;
  for (const char* name : {"campaign06", "campaign10"}) {
    const Campaign c = testing::bundled(name).campaign;
    const Solution vi = shapley_vi(c, 1e-3);
    const Solution avi = accelerated_vi(c, 1e-3);
    const double d = vi.values.sup_distance(avi.values);
    ok = ok && d <= 1e-8 && vi.report.iterations == avi.report.iterations;
    detail += fmt("%s: |dV| %.1e, iterations %zu/%zu; ", name, d, vi.report.iterations,
                  avi.report.iterations);
  }
  return {ok, detail};
}

Outcome pure_equilibria() {
  bool ok = true;
  std::size_t lp = 0;
  for (int n = 1; n <= 6; ++n) {
    const Campaign c = testing::line_campaign({n}, {{0}}, 0.9, 0.35, 0.45);
    const Solution sol = accelerated_vi(c, 1e-3);
    lp += sol.report.lp_solves;
    ok = ok && sol.report.lp_solves == 0 &&
         sol.report.pure_saddle_hits == sol.report.iterations * sol.values.size();
  }
  return {ok, fmt("axis lengths 1..6, LP solves %zu", lp)};
}

Outcome certification(std::vector<Solution>& keep) {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (const char* name : {"campaign06", "campaign10", "campaign14"}) {
    const Campaign c = testing::bundled(name).campaign;
    Solution sol = accelerated_vi(c, 1e-3);
    const CertificationReport rep = certify_epsilon_mpe(c, sol.policy, 1e-3);
    ok = ok && rep.max_deviation_gain_p1 <= 1e-3 && rep.max_deviation_gain_p2 <= 1e-3;
    detail += fmt("%s: %.1e/%.1e; ", name, rep.max_deviation_gain_p1, rep.max_deviation_gain_p2);
    keep.push_back(std::move(sol));
  }
  const double dt = seconds_since(t0);
  return {ok && dt < 300, detail + fmt("%.1f s", dt)};
}

Outcome absorbing() {
  const Campaign c = testing::line_campaign({1, 2}, {{0}, {1}}, 0.9, 0.0, 0.5);
  const double eps = 1e-3;
  const Solution sol = accelerated_vi(c, eps);
  const double v = sol.values[StateSpace(c).encode(CampaignState(3, Player::kTwo))];
  return {c.total_loss() == 3.0 && std::abs(v - 30.0) <= eps / 2, fmt("V %.9f", v)};
}

Outcome iteration_bounds() {
  long double tail = 2.0L * 10.0 / (0.1L * 0.1L);
  std::size_t scalar = 0;
  while (tail > 0.001L) {
    tail *= 0.9L;
    ++scalar;
  }
  const Campaign ten = testing::line_campaign({5, 5}, {{0}, {1}}, 0.9, 0.2, 0.3);
  bool ok = scalar == 138 && iteration_bound(ten, 0.001) == 138;
  std::string detail = fmt("example %zu (scalar %zu); ", iteration_bound(ten, 0.001), scalar);
  for (const char* name : {"fig1", "counterexample", "campaign06", "campaign10", "campaign14",
                           "campaign18", "campaign22"}) {
    const Campaign c = testing::bundled(name).campaign;
    const Solution sol = shapley_vi(c, 1e-3);
    const std::size_t bound = iteration_bound(c, 1e-3);
    ok = ok && sol.report.iterations <= bound;
    detail += fmt("%s %zu<=%zu ", name, sol.report.iterations, bound);
  }
  return {ok, detail};
}

Outcome contraction() {
  const Campaign c = testing::bundled("campaign06").campaign;
  const StateSpace space(c);
  std::mt19937_64 gen(2026);
  std::uniform_real_distribution<double> u(-200.0, 200.0);
  double worst = -1e300;
  for (int t = 0; t < 100; ++t) {
    ValueFunction v;
    ValueFunction w;
    for (std::size_t i = 0; i < space.size(); ++i) {
      v.values.push_back(u(gen));
      w.values.push_back(u(gen));
    }
    const double lhs = apply_bellman(c, v).sup_distance(apply_bellman(c, w));
    worst = std::max(worst, lhs - 0.9 * v.sup_distance(w));
  }
  return {c.discount() == 0.9 && worst <= 1e-12,
          fmt("max |TV-TW| - 0.9 |V-W| = %.3e over 100 pairs", worst)};
}

Outcome monte_carlo_check(const Solution& sol10) {
  const Scenario sc = testing::bundled("campaign10");
  const StateSpace space(sc.campaign);
  const ValueFunction exact = evaluate_policy(sc.campaign, sol10.policy);
  const double v = exact[space.encode(sc.initial_state)];
  const MonteCarloEstimate est = monte_carlo(sc.campaign, sol10.policy, sc.initial_state, 100000, 7);
  const double z = (est.mean - v) / est.standard_error;
  return {std::abs(z) <= 3.0,
          fmt("mean %.4f +- %.4f, policy value %.4f, z %.2f", est.mean, est.standard_error, v, z)};
}

}  // namespace

int main() {
  std::vector<Solution> certified;
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, battle_chain},
      {2, improvement_example},
      {3, state_counts},
      {4, action_counts},
      {5, counterexample},
      {6, theorem_audit},
      {7, vi_equals_avi},
      {8, pure_equilibria},
      {9, [&] { return certification(certified); }},
      {10, absorbing},
      {11, iteration_bounds},
      {12, contraction},
      {13, [&] { return monte_carlo_check(certified.at(1)); }},
  };
  int unexpected = 0;
  int passed = 0;
  for (const auto& [id, check] : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const bool documented = kDocumentedConflicts.count(id) > 0;
    if (o.pass) ++passed;
    if (!o.pass && !documented) ++unexpected;
    std::printf("criterion %2d: %s%s  [%.2f s] %s\n", id, o.pass ? "PASS" : "FAIL",
                !o.pass && documented ? " (documented conflict)" : "", seconds_since(t0),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria pass, %d unexpected failures\n", passed, criteria.size(),
              unexpected);
  return unexpected == 0 ? 0 : 1;
}
