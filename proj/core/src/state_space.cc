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

#include "campaign/state_space.h"

#include <limits>
#include <stdexcept>

namespace campaign {

StateSpace::StateSpace(const Campaign& campaign) : num_objectives_(campaign.num_objectives()) {
  const auto& axes = campaign.axes();
  axes_.resize(axes.size());
  radices_.resize(axes.size());
  for (std::size_t x = 0; x < axes.size(); ++x) {
    axes_[x].objectives = axes[x].objectives;
    axes_[x].radix = 2 * axes[x].objectives.size();
    radices_[x] = axes_[x].radix;
  }
  // Axis 0 is the most significant digit.
  for (std::size_t x = axes_.size(); x-- > 0;) {
    axes_[x].weight = size_;
    if (size_ > std::numeric_limits<std::size_t>::max() / axes_[x].radix) {
      throw CampaignError("achievable state space does not fit in a 64-bit index");
    }
    size_ *= axes_[x].radix;
  }
}

int StateSpace::axis_code(AxisType type, std::size_t axis_length) {
  const int n = static_cast<int>(axis_length);
  switch (type.kind) {
    case AxisType::Kind::kC1:
      return 0;
    case AxisType::Kind::kC2:
      return 1;
    case AxisType::Kind::kPureFront:
      return 1 + type.split;
    case AxisType::Kind::kSplitFront:
      return n + type.split;
    case AxisType::Kind::kUnachievable:
      break;
  }
  return -1;
}

AxisType StateSpace::axis_type_from_code(int code, std::size_t axis_length) {
  const int n = static_cast<int>(axis_length);
  if (code == 0) return {AxisType::Kind::kC1, 0};
  if (code == 1) return {AxisType::Kind::kC2, 0};
  if (code >= 2 && code <= n) return {AxisType::Kind::kPureFront, code - 1};
  if (code > n && code < 2 * n) return {AxisType::Kind::kSplitFront, code - n};
  return {AxisType::Kind::kUnachievable, 0};
}

std::int64_t StateSpace::try_encode(const CampaignState& state) const {
  if (state.size() != num_objectives_) return -1;
  std::size_t index = 0;
  for (const AxisBits& axis : axes_) {
    // Inline classification over the axis bit pattern.
    const int n = static_cast<int>(axis.objectives.size());
    auto two = [&](int j) { return state.owner(axis.objectives[j]) == Player::kTwo; };
    int leading = 0;
    while (leading < n && !two(leading)) ++leading;
    int code;
    if (leading == n) {
      code = 0;
    } else {
      int rest = leading;
      while (rest < n && two(rest)) ++rest;
      if (rest == n) {
        code = leading == 0 ? 1 : 1 + leading;
      } else {
        if (rest != leading + 1) return -1;
        for (int j = rest + 1; j < n; ++j) {
          if (!two(j)) return -1;
        }
        code = n + leading + 1;
      }
    }
    index += static_cast<std::size_t>(code) * axis.weight;
  }
  return static_cast<std::int64_t>(index);
}

std::size_t StateSpace::encode(const CampaignState& state) const {
  const std::int64_t index = try_encode(state);
  if (index < 0) {
    throw CampaignError("state " + state.to_string() + " is not achievable");
  }
  return static_cast<std::size_t>(index);
}

CampaignState StateSpace::decode(std::size_t index) const {
  if (index >= size_) {
    throw std::out_of_range("state index " + std::to_string(index) + " outside [0, " +
                            std::to_string(size_) + ")");
  }
  CampaignState state(num_objectives_, Player::kOne);
  for (const AxisBits& axis : axes_) {
    const int code = static_cast<int>((index / axis.weight) % axis.radix);
    const int n = static_cast<int>(axis.objectives.size());
    const AxisType type = axis_type_from_code(code, axis.objectives.size());
    for (int j = 0; j < n; ++j) {
      bool two = false;
      switch (type.kind) {
        case AxisType::Kind::kC1:
          two = false;
          break;
        case AxisType::Kind::kC2:
          two = true;
          break;
        case AxisType::Kind::kPureFront:
          two = j >= type.split;
          break;
        case AxisType::Kind::kSplitFront:
          // 0-based: positions < k-1 are Player 1's, k-1 is 2's, k is 1's.
          two = j == type.split - 1 || j > type.split;
          break;
        case AxisType::Kind::kUnachievable:
          break;
      }
      if (two) state.set_owner(axis.objectives[j], Player::kTwo);
    }
  }
  return state;
}

std::vector<CampaignState> enumerate_achievable_states(const Campaign& campaign) {
  const StateSpace space(campaign);
  std::vector<CampaignState> states;
  states.reserve(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) states.push_back(space.decode(i));
  return states;
}

}  // namespace campaign
