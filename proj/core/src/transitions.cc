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

#include "campaign/transitions.h"

#include <algorithm>
#include <sstream>

#include "campaign/random.h"
#include "campaign/state_space.h"

namespace campaign {

double attack_success_prob(const ProbabilityModel& model, Player player, ObjectiveId objective,
                           const CampaignState& state) {
  if (state.owner(objective) == player) return 1.0;
  return model.raw_attack(player, objective, state);
}

double reinforce_success_prob(const ProbabilityModel& model, Player player,
                              ObjectiveId objective, const CampaignState& state) {
  if (state.owner(objective) != player) return 0.0;
  return model.raw_reinforce(player, objective, state);
}

double battle_outcome_prob(const ProbabilityModel& model, const CampaignState& state,
                           ObjectiveId objective, OrderKind order1, OrderKind order2) {
  const Player defender = state.owner(objective);
  const Player attacker = opponent(defender);
  const OrderKind attacker_order = attacker == Player::kOne ? order1 : order2;
  const OrderKind defender_order = defender == Player::kOne ? order1 : order2;
  double flip = 0.0;
  if (attacker_order == OrderKind::kAttack) {
    flip = attack_success_prob(model, attacker, objective, state);
    if (defender_order == OrderKind::kReinforce) {
      flip *= 1.0 - reinforce_success_prob(model, defender, objective, state);
    }
  }
  return defender == Player::kOne ? 1.0 - flip : flip;
}

std::vector<Battle> battles(const Campaign& campaign, const CampaignState& state,
                            const ActionProfile& a1, const ActionProfile& a2) {
  std::vector<Battle> out;
  const ProbabilityModel& model = campaign.probabilities();
  auto add = [&](const ActionProfile& attack_side, const ActionProfile& defend_side,
                 Player attacker) {
    for (const Order& ord : attack_side.orders) {
      if (ord.kind != OrderKind::kAttack) continue;
      const ObjectiveId o = ord.target;
      const Order& defence = defend_side.orders[campaign.commander_of(o)];
      Battle b;
      b.objective = o;
      b.attacker = attacker;
      b.reinforced = defence.kind == OrderKind::kReinforce && defence.target == o;
      b.success = attack_success_prob(model, attacker, o, state);
      if (b.reinforced) {
        b.success *= 1.0 - reinforce_success_prob(model, opponent(attacker), o, state);
      }
      out.push_back(b);
    }
  };
  add(a1, a2, Player::kOne);
  add(a2, a1, Player::kTwo);
  std::sort(out.begin(), out.end(),
            [](const Battle& x, const Battle& y) { return x.objective < y.objective; });
  return out;
}

double SuccessorDistribution::total() const {
  double t = 0.0;
  for (const auto& [s, p] : outcomes) t += p;
  return t;
}

double SuccessorDistribution::probability_of(const CampaignState& state) const {
  for (const auto& [s, p] : outcomes) {
    if (s == state) return p;
  }
  return 0.0;
}

SuccessorDistribution successor_distribution(const Campaign& campaign, const CampaignState& state,
                                             const ActionProfile& a1, const ActionProfile& a2) {
  SuccessorDistribution dist;
  const auto fights = battles(campaign, state, a1, a2);
  for_each_successor(fights, state.player_two_mask(), [&](std::uint64_t mask, double p) {
    if (p > 0.0) dist.outcomes.emplace_back(CampaignState::from_mask(state.size(), mask), p);
  });
  return dist;
}

std::string AssumptionViolation::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << (severity == Severity::kError ? "error" : "warning") << ": assumption " << assumption
     << " violated for player " << to_int(player) << " on objective " << objective << " ("
     << quantity << ") between states " << state.to_string() << " and " << other.to_string()
     << ": " << lhs << " vs " << rhs;
  return os.str();
}

namespace {

class Checker {
 public:
  Checker(const Campaign& campaign, const ValidationOptions& options, AssumptionReport& report)
      : campaign_(campaign), model_(campaign.probabilities()), options_(options), report_(report) {}

  // `required` must be >= `actual` (up to tolerance).
  void expect_at_least(int assumption, double required_side, double other_side, Player player,
                       ObjectiveId o, const CampaignState& s, const CampaignState& t,
                       const char* quantity) {
    const double margin = other_side - required_side;
    if (margin <= 0.0) return;
    AssumptionViolation v;
    v.assumption = assumption;
    v.severity = margin <= options_.tolerance ? Severity::kWarning : Severity::kError;
    v.player = player;
    v.objective = o;
    v.state = s;
    v.other = t;
    v.quantity = quantity;
    v.lhs = required_side;
    v.rhs = other_side;
    if (v.severity == Severity::kWarning) {
      ++report_.warnings;
    } else if (assumption == 1) {
      ++report_.assumption1_errors;
    } else {
      ++report_.assumption2_errors;
    }
    if (report_.violations.size() < options_.max_recorded) report_.violations.push_back(v);
  }

  // s ⪯ t, t differs from s in one objective flipped to Player 2.
  void check_monotone(const CampaignState& s, const CampaignState& t) {
    ++report_.pairs_checked;
    for (ObjectiveId o = 0; o < static_cast<ObjectiveId>(campaign_.num_objectives()); ++o) {
      const Player one = Player::kOne;
      const Player two = Player::kTwo;
      expect_at_least(1, attack_success_prob(model_, one, o, s),
                      attack_success_prob(model_, one, o, t), one, o, s, t, "alpha1");
      expect_at_least(1, reinforce_success_prob(model_, one, o, s),
                      reinforce_success_prob(model_, one, o, t), one, o, s, t, "rho1");
      expect_at_least(1, attack_success_prob(model_, two, o, t),
                      attack_success_prob(model_, two, o, s), two, o, s, t, "alpha2");
      expect_at_least(1, reinforce_success_prob(model_, two, o, t),
                      reinforce_success_prob(model_, two, o, s), two, o, s, t, "rho2");
    }
  }

  // Player i holds o in s; t is s with o handed to the opponent.
  void check_defence_advantage(const CampaignState& s, const CampaignState& t, ObjectiveId o) {
    const Player i = s.owner(o);
    const Player j = opponent(i);
    const double hold =
        1.0 - attack_success_prob(model_, j, o, s) * (1.0 - reinforce_success_prob(model_, i, o, s));
    const double gain =
        attack_success_prob(model_, i, o, t) * (1.0 - reinforce_success_prob(model_, j, o, t));
    expect_at_least(2, hold, gain, i, o, s, t, "hold-vs-gain");
  }

  void check_strictness(const CampaignState& s) {
    for (Player p : {Player::kOne, Player::kTwo}) {
      for (ObjectiveId o : open_loc(campaign_, s, p)) {
        if (s.owner(o) == p) {
          const double rho = reinforce_success_prob(model_, p, o, s);
          if (!(rho > 0.0 && rho < 1.0)) {
            strict_failure("rho" + std::to_string(to_int(p)) + " = " + std::to_string(rho) +
                           " outside (0,1) on objective " + std::to_string(o) + " at " +
                           s.to_string());
          }
        } else if (!(attack_success_prob(model_, p, o, s) > 0.0)) {
          strict_failure("alpha" + std::to_string(to_int(p)) + " = 0 on objective " +
                         std::to_string(o) + " at " + s.to_string());
        }
      }
    }
  }

  void strict_failure(std::string message) {
    report_.strictness_holds = false;
    if (report_.strictness_failures.size() < 10) {
      report_.strictness_failures.push_back(std::move(message));
    }
  }

 private:
  const Campaign& campaign_;
  const ProbabilityModel& model_;
  const ValidationOptions& options_;
  AssumptionReport& report_;
};

}  // namespace

AssumptionReport validate_assumptions(const Campaign& campaign, const ValidationOptions& options) {
  AssumptionReport report;
  Checker checker(campaign, options, report);
  const StateSpace space(campaign);

  for (const Objective& obj : campaign.objectives()) {
    if (!(obj.loss > 0.0)) {
      checker.strict_failure("objective " + std::to_string(obj.id) + " has zero loss");
    }
  }

  auto visit = [&](const CampaignState& s) {
    ++report.states_checked;
    for (ObjectiveId o = 0; o < static_cast<ObjectiveId>(campaign.num_objectives()); ++o) {
      CampaignState t = s;
      t.flip(o);
      if (space.try_encode(t) < 0) continue;
      // Each unordered single-flip pair is visited from both ends; the
      // monotone check runs once, from its lower end.
      if (s.owner(o) == Player::kOne) checker.check_monotone(s, t);
      checker.check_defence_advantage(s, t, o);
    }
    checker.check_strictness(s);
  };

  if (options.mode == ValidationOptions::Mode::kExhaustive) {
    for (std::size_t i = 0; i < space.size(); ++i) visit(space.decode(i));
  } else {
    Rng rng(options.seed);
    for (std::size_t n = 0; n < options.samples; ++n) visit(space.decode(rng.below(space.size())));
  }
  return report;
}

}  // namespace campaign
