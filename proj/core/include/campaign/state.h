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

#ifndef CAMPAIGN_STATE_H_
#define CAMPAIGN_STATE_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace campaign {

using ObjectiveId = int;
using AxisId = int;
using CommanderId = int;

// Player 1 minimizes the discounted loss, Player 2 maximizes it.
enum class Player : std::uint8_t { kOne = 1, kTwo = 2 };

constexpr Player opponent(Player p) {
  return p == Player::kOne ? Player::kTwo : Player::kOne;
}

constexpr int to_int(Player p) { return static_cast<int>(p); }

// Parses 1 or 2; throws std::invalid_argument otherwise.
Player player_from_int(int value);

// Control vector over objectives. Stored as a bitmask of the objectives held
// by Player 2, so campaigns are limited to kMaxObjectives objectives.
class CampaignState {
 public:
  static constexpr std::size_t kMaxObjectives = 64;

  CampaignState() = default;
  CampaignState(std::size_t size, Player all);

  // Builds a state from a string over {1,2} in objective-id order.
  static CampaignState from_string(std::string_view text);
  static CampaignState from_mask(std::size_t size, std::uint64_t player_two_mask);

  std::size_t size() const { return size_; }

  Player owner(ObjectiveId o) const {
    return (two_mask_ >> o) & 1U ? Player::kTwo : Player::kOne;
  }
  bool controlled_by(ObjectiveId o, Player p) const { return owner(o) == p; }

  void set_owner(ObjectiveId o, Player p);
  void flip(ObjectiveId o) { two_mask_ ^= std::uint64_t{1} << o; }

  std::uint64_t player_two_mask() const { return two_mask_; }
  // Bitmask of objectives controlled by `p`.
  std::uint64_t controlled_mask(Player p) const;

  // Componentwise order: s ⪯ s' iff every Player-2 objective of s is also a
  // Player-2 objective of s'.
  bool precedes(const CampaignState& other) const {
    return size_ == other.size_ && (two_mask_ & ~other.two_mask_) == 0;
  }

  std::string to_string() const;

  friend bool operator==(const CampaignState&, const CampaignState&) = default;

 private:
  std::uint32_t size_ = 0;
  std::uint64_t two_mask_ = 0;
};

}  // namespace campaign

#endif  // CAMPAIGN_STATE_H_
