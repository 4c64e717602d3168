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

#ifndef CAMPAIGN_CAMPAIGN_H_
#define CAMPAIGN_CAMPAIGN_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "campaign/probability_model.h"
#include "campaign/state.h"

namespace campaign {

class CampaignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Objective {
  ObjectiveId id = 0;
  double loss = 0.0;
  std::string label;
};

// Objectives ordered from Player 1's side (front) to Player 2's side (rear).
struct Axis {
  AxisId id = 0;
  std::vector<ObjectiveId> objectives;
};

// One commander record serves both players: responsibilities are symmetric.
struct Commander {
  CommanderId id = 0;
  std::vector<AxisId> axes;
};

// Static campaign structure. Immutable once constructed; the constructor
// checks that the axes partition the objectives, that every axis has exactly
// one commander and that the discount lies in (0, 1).
class Campaign {
 public:
  Campaign(std::vector<Objective> objectives, std::vector<Axis> axes,
           std::vector<Commander> commanders, double discount,
           ProbabilityModel model);

  const std::vector<Objective>& objectives() const { return objectives_; }
  const std::vector<Axis>& axes() const { return axes_; }
  const std::vector<Commander>& commanders() const { return commanders_; }
  const ProbabilityModel& probabilities() const { return model_; }
  double discount() const { return discount_; }

  std::size_t num_objectives() const { return objectives_.size(); }
  std::size_t num_axes() const { return axes_.size(); }
  std::size_t num_commanders() const { return commanders_.size(); }

  AxisId axis_of(ObjectiveId o) const { return axis_of_[o]; }
  // 0-based position of `o` along its axis.
  int position_of(ObjectiveId o) const { return position_of_[o]; }
  CommanderId commander_of_axis(AxisId x) const { return commander_of_axis_[x]; }
  CommanderId commander_of(ObjectiveId o) const { return commander_of_axis_[axis_of_[o]]; }
  // Objectives under a commander, axis by axis in front-to-rear order.
  const std::vector<ObjectiveId>& objectives_of(CommanderId c) const {
    return objectives_of_commander_[c];
  }

  double loss(ObjectiveId o) const { return objectives_[o].loss; }
  double total_loss() const { return total_loss_; }

 private:
  std::vector<Objective> objectives_;
  std::vector<Axis> axes_;
  std::vector<Commander> commanders_;
  double discount_;
  ProbabilityModel model_;

  std::vector<AxisId> axis_of_;
  std::vector<int> position_of_;
  std::vector<CommanderId> commander_of_axis_;
  std::vector<std::vector<ObjectiveId>> objectives_of_commander_;
  double total_loss_ = 0.0;
};

struct AxisType {
  enum class Kind : std::uint8_t { kC1, kC2, kPureFront, kSplitFront, kUnachievable };
  Kind kind = Kind::kUnachievable;
  // 1-based split position for pure/split fronts, 0 otherwise.
  //   pure front:  o_1..o_k held by Player 1, o_{k+1}..o_n by Player 2
  //   split front: o_1..o_{k-1} by 1, o_k by 2, o_{k+1} by 1, rest by 2
  int split = 0;

  bool achievable() const { return kind != Kind::kUnachievable; }
  friend bool operator==(const AxisType&, const AxisType&) = default;
};

std::string to_string(AxisType type);

AxisType classify_axis(const Axis& axis, const CampaignState& state);

// Battle-front objectives of `axis` for `player`. Throws CampaignError if the
// axis pattern is unachievable.
std::vector<ObjectiveId> fronts(const Axis& axis, const CampaignState& state, Player player);

// Objectives reachable from `player`'s bases through an open line of control.
// The result is sorted by objective id.
std::vector<ObjectiveId> open_loc(const Campaign& campaign, const CampaignState& state,
                                  Player player);
bool has_open_loc(const Campaign& campaign, const CampaignState& state, Player player,
                  ObjectiveId o);

double stage_loss(const Campaign& campaign, const CampaignState& state);

enum class OrderKind : std::uint8_t { kNone, kAttack, kReinforce };

std::string to_string(OrderKind kind);
// Accepts "none", "attack"/"atk", "reinforce"/"rfc".
OrderKind order_kind_from_string(const std::string& text);

struct Order {
  OrderKind kind = OrderKind::kNone;
  ObjectiveId target = -1;

  static Order none() { return {}; }
  static Order attack(ObjectiveId o) { return {OrderKind::kAttack, o}; }
  static Order reinforce(ObjectiveId o) { return {OrderKind::kReinforce, o}; }

  friend bool operator==(const Order&, const Order&) = default;
};

// One order per commander (indexed by commander id) for a single player.
struct ActionProfile {
  std::vector<Order> orders;

  friend bool operator==(const ActionProfile&, const ActionProfile&) = default;
};

std::string to_string(const ActionProfile& action);

// Every action allowed by the line-of-control and one-order-per-commander
// rules. Per commander: NONE first, then its open-LoC objectives in
// axis/front-to-rear order. Commander 0 varies slowest.
std::vector<ActionProfile> feasible_actions_full(const Campaign& campaign,
                                                 const CampaignState& state, Player player);

// Actions kept after the equilibrium reduction: every commander issues exactly
// one order at a battle front of one of its axes. Same canonical ordering as
// feasible_actions_full. Throws CampaignError on unachievable states.
std::vector<ActionProfile> reduced_actions(const Campaign& campaign,
                                           const CampaignState& state, Player player);

// Per-commander option lists whose cartesian product (commander 0 slowest)
// gives feasible_actions_full and reduced_actions respectively.
std::vector<std::vector<Order>> full_commander_options(const Campaign& campaign,
                                                       const CampaignState& state, Player player);
std::vector<std::vector<Order>> reduced_commander_options(const Campaign& campaign,
                                                          const CampaignState& state,
                                                          Player player);

// Number of reduced actions, without materializing them.
std::size_t reduced_action_count(const Campaign& campaign, const CampaignState& state,
                                 Player player);

// Describes why an action is not feasible; empty `constraint` means feasible.
struct FeasibilityViolation {
  std::string constraint;  // e.g. "no_open_loc", "wrong_owner"
  std::string message;
  bool ok() const { return constraint.empty(); }
};

FeasibilityViolation check_feasible(const Campaign& campaign, const CampaignState& state,
                                    Player player, const ActionProfile& action);

struct InitialStateReport {
  std::vector<AxisId> unachievable_axes;
  bool ok() const { return unachievable_axes.empty(); }
  std::string message() const;
};

InitialStateReport validate_initial_state(const Campaign& campaign, const CampaignState& state);

bool is_achievable(const Campaign& campaign, const CampaignState& state);

}  // namespace campaign

#endif  // CAMPAIGN_CAMPAIGN_H_
