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

#include "campaign/state.h"

#include <stdexcept>

namespace campaign {

Player player_from_int(int value) {
  if (value == 1) return Player::kOne;
  if (value == 2) return Player::kTwo;
  throw std::invalid_argument("player must be 1 or 2, got " + std::to_string(value));
}

CampaignState::CampaignState(std::size_t size, Player all) {
  if (size > kMaxObjectives) {
    throw std::invalid_argument("at most 64 objectives are supported");
  }
  size_ = static_cast<std::uint32_t>(size);
  if (all == Player::kTwo && size > 0) {
    two_mask_ = size == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << size) - 1;
  }
}

CampaignState CampaignState::from_string(std::string_view text) {
  if (text.size() > kMaxObjectives) {
    throw std::invalid_argument("state string longer than 64 objectives");
  }
  CampaignState s(text.size(), Player::kOne);
  for (std::size_t o = 0; o < text.size(); ++o) {
    if (text[o] == '2') {
      s.two_mask_ |= std::uint64_t{1} << o;
    } else if (text[o] != '1') {
      throw std::invalid_argument("state string must contain only '1' and '2': \"" +
                                  std::string(text) + "\"");
    }
  }
  return s;
}

CampaignState CampaignState::from_mask(std::size_t size, std::uint64_t player_two_mask) {
  CampaignState s(size, Player::kOne);
  const std::uint64_t all = size == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << size) - 1;
  if ((player_two_mask & ~all) != 0) {
    throw std::invalid_argument("mask has bits beyond the state size");
  }
  s.two_mask_ = player_two_mask;
  return s;
}

void CampaignState::set_owner(ObjectiveId o, Player p) {
  const std::uint64_t bit = std::uint64_t{1} << o;
  if (p == Player::kTwo) {
    two_mask_ |= bit;
  } else {
    two_mask_ &= ~bit;
  }
}

std::uint64_t CampaignState::controlled_mask(Player p) const {
  if (p == Player::kTwo) return two_mask_;
  const std::uint64_t all = size_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << size_) - 1;
  return all & ~two_mask_;
}

std::string CampaignState::to_string() const {
  std::string out(size_, '1');
  for (std::size_t o = 0; o < size_; ++o) {
    if ((two_mask_ >> o) & 1U) out[o] = '2';
  }
  return out;
}

}  // namespace campaign
