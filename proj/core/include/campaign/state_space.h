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

#ifndef CAMPAIGN_STATE_SPACE_H_
#define CAMPAIGN_STATE_SPACE_H_

#include <cstdint>
#include <vector>

#include "campaign/campaign.h"

namespace campaign {

// Dense indexing of the achievable states.
//
// Each axis of length n contributes a digit in [0, 2n):
//   0 = C1, 1 = C2, 1 + k = pure front k, n + k = split front k (k in 1..n-1).
// Digits are combined mixed-radix with radix 2n per axis, axis 0 most
// significant.
class StateSpace {
 public:
  explicit StateSpace(const Campaign& campaign);

  std::size_t size() const { return size_; }

  static int axis_code(AxisType type, std::size_t axis_length);
  static AxisType axis_type_from_code(int code, std::size_t axis_length);

  // Throws CampaignError for unachievable states.
  std::size_t encode(const CampaignState& state) const;
  // Returns -1 instead of throwing.
  std::int64_t try_encode(const CampaignState& state) const;
  // Throws std::out_of_range for indices outside [0, size()).
  CampaignState decode(std::size_t index) const;

  const std::vector<std::size_t>& radices() const { return radices_; }

 private:
  struct AxisBits {
    std::vector<int> objectives;
    std::size_t radix;
    std::size_t weight;
  };

  std::size_t num_objectives_;
  std::vector<AxisBits> axes_;
  std::vector<std::size_t> radices_;
  std::size_t size_ = 1;
};

// All achievable states in index order.
std::vector<CampaignState> enumerate_achievable_states(const Campaign& campaign);

}  // namespace campaign

#endif  // CAMPAIGN_STATE_SPACE_H_
