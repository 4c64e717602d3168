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

#include "campaign/campaign.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace campaign {
namespace {

std::string id_str(int id) { return std::to_string(id); }

// Cartesian product of per-commander option lists; commander 0 varies slowest.
std::vector<ActionProfile> cartesian(const std::vector<std::vector<Order>>& options) {
  std::size_t total = 1;
  for (const auto& opts : options) total *= opts.size();
  std::vector<ActionProfile> out;
  if (total == 0) return out;
  out.reserve(total);
  std::vector<std::size_t> digit(options.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    ActionProfile a;
    a.orders.reserve(options.size());
    for (std::size_t c = 0; c < options.size(); ++c) a.orders.push_back(options[c][digit[c]]);
    out.push_back(std::move(a));
    for (std::size_t c = options.size(); c-- > 0;) {
      if (++digit[c] < options[c].size()) break;
      digit[c] = 0;
    }
  }
  return out;
}

Order order_for(const CampaignState& state, Player player, ObjectiveId o) {
  return state.owner(o) == player ? Order::reinforce(o) : Order::attack(o);
}

}  // namespace

Campaign::Campaign(std::vector<Objective> objectives, std::vector<Axis> axes,
                   std::vector<Commander> commanders, double discount, ProbabilityModel model)
    : objectives_(std::move(objectives)),
      axes_(std::move(axes)),
      commanders_(std::move(commanders)),
      discount_(discount),
      model_(std::move(model)) {
  const std::size_t n = objectives_.size();
  if (n == 0) throw CampaignError("campaign has no objectives");
  if (n > CampaignState::kMaxObjectives) {
    throw CampaignError("campaign has " + std::to_string(n) + " objectives; at most 64 supported");
  }
  for (std::size_t o = 0; o < n; ++o) {
    if (objectives_[o].id != static_cast<ObjectiveId>(o)) {
      throw CampaignError("objective ids must be contiguous from 0; position " +
                          std::to_string(o) + " has id " + id_str(objectives_[o].id));
    }
    const double l = objectives_[o].loss;
    if (!std::isfinite(l) || l < 0.0) {
      throw CampaignError("objective " + id_str(objectives_[o].id) +
                          " has a negative or non-finite loss");
    }
    total_loss_ += l;
  }
  if (!(discount_ > 0.0 && discount_ < 1.0)) {
    throw CampaignError("discount must lie strictly inside (0, 1)");
  }
  if (model_.num_objectives() != n) {
    throw CampaignError("probability model covers " + std::to_string(model_.num_objectives()) +
                        " objectives, campaign has " + std::to_string(n));
  }

  axis_of_.assign(n, -1);
  position_of_.assign(n, -1);
  if (axes_.empty()) throw CampaignError("campaign has no axes");
  for (std::size_t x = 0; x < axes_.size(); ++x) {
    const Axis& axis = axes_[x];
    if (axis.id != static_cast<AxisId>(x)) {
      throw CampaignError("axis ids must be contiguous from 0; position " + std::to_string(x) +
                          " has id " + id_str(axis.id));
    }
    if (axis.objectives.empty()) throw CampaignError("axis " + id_str(axis.id) + " is empty");
    for (std::size_t k = 0; k < axis.objectives.size(); ++k) {
      const ObjectiveId o = axis.objectives[k];
      if (o < 0 || static_cast<std::size_t>(o) >= n) {
        throw CampaignError("axis " + id_str(axis.id) + " references unknown objective " +
                            id_str(o));
      }
      if (axis_of_[o] != -1) {
        throw CampaignError("objective " + id_str(o) + " appears in axis " +
                            id_str(axis_of_[o]) + " and axis " + id_str(axis.id));
      }
      axis_of_[o] = axis.id;
      position_of_[o] = static_cast<int>(k);
    }
  }
  for (std::size_t o = 0; o < n; ++o) {
    if (axis_of_[o] == -1) {
      throw CampaignError("objective " + std::to_string(o) + " belongs to no axis");
    }
  }

  commander_of_axis_.assign(axes_.size(), -1);
  if (commanders_.empty()) throw CampaignError("campaign has no commanders");
  objectives_of_commander_.resize(commanders_.size());
  for (std::size_t c = 0; c < commanders_.size(); ++c) {
    const Commander& cmd = commanders_[c];
    if (cmd.id != static_cast<CommanderId>(c)) {
      throw CampaignError("commander ids must be contiguous from 0; position " +
                          std::to_string(c) + " has id " + id_str(cmd.id));
    }
    if (cmd.axes.empty()) {
      throw CampaignError("commander " + id_str(cmd.id) + " is responsible for no axis");
    }
    for (AxisId x : cmd.axes) {
      if (x < 0 || static_cast<std::size_t>(x) >= axes_.size()) {
        throw CampaignError("commander " + id_str(cmd.id) + " references unknown axis " +
                            id_str(x));
      }
      if (commander_of_axis_[x] != -1) {
        throw CampaignError("axis " + id_str(x) + " is assigned to commander " +
                            id_str(commander_of_axis_[x]) + " and commander " + id_str(cmd.id));
      }
      commander_of_axis_[x] = cmd.id;
      const auto& objs = axes_[x].objectives;
      objectives_of_commander_[c].insert(objectives_of_commander_[c].end(), objs.begin(),
                                         objs.end());
    }
  }
  for (std::size_t x = 0; x < axes_.size(); ++x) {
    if (commander_of_axis_[x] == -1) {
      throw CampaignError("axis " + std::to_string(x) + " has no commander");
    }
  }
}

std::string to_string(AxisType type) {
  switch (type.kind) {
    case AxisType::Kind::kC1:
      return "c1";
    case AxisType::Kind::kC2:
      return "c2";
    case AxisType::Kind::kPureFront:
      return "pf(" + std::to_string(type.split) + ")";
    case AxisType::Kind::kSplitFront:
      return "sf(" + std::to_string(type.split) + ")";
    case AxisType::Kind::kUnachievable:
      break;
  }
  return "unachievable";
}

AxisType classify_axis(const Axis& axis, const CampaignState& state) {
  const auto& objs = axis.objectives;
  const int n = static_cast<int>(objs.size());
  auto held_by_one = [&](int j) { return state.owner(objs[j]) == Player::kOne; };
  int leading = 0;
  while (leading < n && held_by_one(leading)) ++leading;
  if (leading == n) return {AxisType::Kind::kC1, 0};
  int rest = leading;
  while (rest < n && !held_by_one(rest)) ++rest;
  if (rest == n) {
    if (leading == 0) return {AxisType::Kind::kC2, 0};
    return {AxisType::Kind::kPureFront, leading};
  }
  // objs[leading] is Player 2's, objs[rest] is Player 1's.
  if (rest == leading + 1) {
    bool tail_two = true;
    for (int j = rest + 1; j < n; ++j) tail_two = tail_two && !held_by_one(j);
    if (tail_two) return {AxisType::Kind::kSplitFront, leading + 1};
  }
  return {AxisType::Kind::kUnachievable, 0};
}

std::vector<ObjectiveId> fronts(const Axis& axis, const CampaignState& state, Player player) {
  const AxisType type = classify_axis(axis, state);
  const auto& objs = axis.objectives;
  switch (type.kind) {
    case AxisType::Kind::kC1:
      return {objs.back()};
    case AxisType::Kind::kC2:
      return {objs.front()};
    case AxisType::Kind::kPureFront:
      return {objs[type.split - 1], objs[type.split]};
    case AxisType::Kind::kSplitFront:
      return {player == Player::kOne ? objs[type.split - 1] : objs[type.split]};
    case AxisType::Kind::kUnachievable:
      break;
  }
  throw CampaignError("axis " + std::to_string(axis.id) + " is unachievable in state " +
                      state.to_string());
}

bool has_open_loc(const Campaign& campaign, const CampaignState& state, Player player,
                  ObjectiveId o) {
  const auto& objs = campaign.axes()[campaign.axis_of(o)].objectives;
  const int k = campaign.position_of(o);
  if (player == Player::kOne) {
    for (int j = 0; j < k; ++j) {
      if (state.owner(objs[j]) != Player::kOne) return false;
    }
  } else {
    for (int j = k + 1; j < static_cast<int>(objs.size()); ++j) {
      if (state.owner(objs[j]) != Player::kTwo) return false;
    }
  }
  return true;
}

std::vector<ObjectiveId> open_loc(const Campaign& campaign, const CampaignState& state,
                                  Player player) {
  std::vector<ObjectiveId> out;
  for (const Axis& axis : campaign.axes()) {
    const auto& objs = axis.objectives;
    const int n = static_cast<int>(objs.size());
    if (player == Player::kOne) {
      for (int j = 0; j < n; ++j) {
        out.push_back(objs[j]);
        if (state.owner(objs[j]) != Player::kOne) break;
      }
    } else {
      for (int j = n - 1; j >= 0; --j) {
        out.push_back(objs[j]);
        if (state.owner(objs[j]) != Player::kTwo) break;
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double stage_loss(const Campaign& campaign, const CampaignState& state) {
  double total = 0.0;
  std::uint64_t mask = state.player_two_mask();
  while (mask != 0) {
    const int o = __builtin_ctzll(mask);
    total += campaign.loss(o);
    mask &= mask - 1;
  }
  return total;
}

std::string to_string(OrderKind kind) {
  switch (kind) {
    case OrderKind::kAttack:
      return "attack";
    case OrderKind::kReinforce:
      return "reinforce";
    case OrderKind::kNone:
      break;
  }
  return "none";
}

OrderKind order_kind_from_string(const std::string& text) {
  if (text == "none") return OrderKind::kNone;
  if (text == "attack" || text == "atk") return OrderKind::kAttack;
  if (text == "reinforce" || text == "rfc") return OrderKind::kReinforce;
  throw std::invalid_argument("unknown order kind \"" + text + "\"");
}

std::string to_string(const ActionProfile& action) {
  std::ostringstream os;
  os << '(';
  for (std::size_t c = 0; c < action.orders.size(); ++c) {
    if (c > 0) os << ", ";
    const Order& ord = action.orders[c];
    switch (ord.kind) {
      case OrderKind::kNone:
        os << "none";
        break;
      case OrderKind::kAttack:
        os << "atk " << ord.target;
        break;
      case OrderKind::kReinforce:
        os << "rfc " << ord.target;
        break;
    }
  }
  os << ')';
  return os.str();
}

std::vector<std::vector<Order>> full_commander_options(const Campaign& campaign,
                                                       const CampaignState& state,
                                                       Player player) {
  std::vector<std::vector<Order>> options(campaign.num_commanders());
  for (std::size_t c = 0; c < options.size(); ++c) {
    options[c].push_back(Order::none());
    for (ObjectiveId o : campaign.objectives_of(static_cast<CommanderId>(c))) {
      if (has_open_loc(campaign, state, player, o)) {
        options[c].push_back(order_for(state, player, o));
      }
    }
  }
  return options;
}

std::vector<ActionProfile> feasible_actions_full(const Campaign& campaign,
                                                 const CampaignState& state, Player player) {
  return cartesian(full_commander_options(campaign, state, player));
}

std::vector<std::vector<Order>> reduced_commander_options(const Campaign& campaign,
                                                          const CampaignState& state,
                                                          Player player) {
  std::vector<std::vector<Order>> options(campaign.num_commanders());
  for (const Commander& cmd : campaign.commanders()) {
    for (AxisId x : cmd.axes) {
      for (ObjectiveId o : fronts(campaign.axes()[x], state, player)) {
        options[cmd.id].push_back(order_for(state, player, o));
      }
    }
  }
  return options;
}

std::vector<ActionProfile> reduced_actions(const Campaign& campaign, const CampaignState& state,
                                           Player player) {
  return cartesian(reduced_commander_options(campaign, state, player));
}

std::size_t reduced_action_count(const Campaign& campaign, const CampaignState& state,
                                 Player player) {
  std::size_t total = 1;
  for (const Commander& cmd : campaign.commanders()) {
    std::size_t per = 0;
    for (AxisId x : cmd.axes) per += fronts(campaign.axes()[x], state, player).size();
    total *= per;
  }
  return total;
}

FeasibilityViolation check_feasible(const Campaign& campaign, const CampaignState& state,
                                    Player player, const ActionProfile& action) {
  if (action.orders.size() != campaign.num_commanders()) {
    return {"commander_count", "expected one order slot per commander (" +
                                   std::to_string(campaign.num_commanders()) + "), got " +
                                   std::to_string(action.orders.size())};
  }
  for (std::size_t c = 0; c < action.orders.size(); ++c) {
    const Order& ord = action.orders[c];
    if (ord.kind == OrderKind::kNone) continue;
    const ObjectiveId o = ord.target;
    if (o < 0 || static_cast<std::size_t>(o) >= campaign.num_objectives()) {
      return {"unknown_objective", "order of commander " + std::to_string(c) +
                                       " targets unknown objective " + std::to_string(o)};
    }
    if (campaign.commander_of(o) != static_cast<CommanderId>(c)) {
      return {"outside_responsibility", "objective " + std::to_string(o) +
                                            " is not under the responsibility of commander " +
                                            std::to_string(c)};
    }
    if (!has_open_loc(campaign, state, player, o)) {
      return {"no_open_loc", "player " + std::to_string(to_int(player)) +
                                 " has no open line of control to objective " +
                                 std::to_string(o) + "; only none is allowed there"};
    }
    const bool own = state.owner(o) == player;
    if (ord.kind == OrderKind::kAttack && own) {
      return {"wrong_owner", "objective " + std::to_string(o) + " is already controlled by player " +
                                 std::to_string(to_int(player)) + "; it can only be reinforced"};
    }
    if (ord.kind == OrderKind::kReinforce && !own) {
      return {"wrong_owner", "objective " + std::to_string(o) + " is controlled by the opponent" +
                                 "; it can only be attacked"};
    }
  }
  return {};
}

std::string InitialStateReport::message() const {
  if (ok()) return "all axes are c1, c2, pf or sf";
  std::string out = "unachievable axis pattern on axis";
  out += unachievable_axes.size() > 1 ? "es" : "";
  for (std::size_t i = 0; i < unachievable_axes.size(); ++i) {
    out += (i == 0 ? " " : ", ") + std::to_string(unachievable_axes[i]);
  }
  return out;
}

InitialStateReport validate_initial_state(const Campaign& campaign, const CampaignState& state) {
  if (state.size() != campaign.num_objectives()) {
    throw CampaignError("state has " + std::to_string(state.size()) + " entries, campaign has " +
                        std::to_string(campaign.num_objectives()) + " objectives");
  }
  InitialStateReport report;
  for (const Axis& axis : campaign.axes()) {
    if (!classify_axis(axis, state).achievable()) report.unachievable_axes.push_back(axis.id);
  }
  return report;
}

bool is_achievable(const Campaign& campaign, const CampaignState& state) {
  if (state.size() != campaign.num_objectives()) return false;
  for (const Axis& axis : campaign.axes()) {
    if (!classify_axis(axis, state).achievable()) return false;
  }
  return true;
}

}  // namespace campaign
