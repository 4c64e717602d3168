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

#ifndef CAMPAIGN_PROBABILITY_MODEL_H_
#define CAMPAIGN_PROBABILITY_MODEL_H_

#include <array>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "campaign/state.h"

namespace campaign {

enum class BattleKind : std::uint8_t { kAttack, kReinforce };

// Multiplicative improvement of a success probability that applies while the
// acting player controls every objective of `condition`.
struct ImprovementEntry {
  Player player = Player::kOne;
  ObjectiveId target = 0;
  BattleKind kind = BattleKind::kAttack;
  std::vector<ObjectiveId> condition;
  double boost = 0.0;
};

// Fully tabulated success probabilities for one (state, player, objective).
// Either field may be absent, in which case the multiplicative model is used.
struct ProbabilityOverride {
  CampaignState state;
  Player player = Player::kOne;
  ObjectiveId objective = 0;
  std::optional<double> alpha;
  std::optional<double> rho;
};

// Base attack / reinforce success probabilities. Values are built from an
// initial probability per player and objective, improved by every entry
// whose condition set the acting player controls:
//   p = 1 - (1 - q) * prod(1 - boost).
// Per-state overrides bypass that construction.
class ProbabilityModel {
 public:
  ProbabilityModel() = default;
  // Constant model: every objective gets the same initial probabilities.
  ProbabilityModel(std::size_t num_objectives, double attack, double reinforce);

  std::size_t num_objectives() const { return attack_[0].size(); }

  // Throws std::invalid_argument on out-of-range ids or probabilities.
  void set_initial_attack(Player p, ObjectiveId o, double q);
  void set_initial_reinforce(Player p, ObjectiveId o, double q);
  void add_improvement(ImprovementEntry entry);
  void add_override(ProbabilityOverride entry);

  double initial_attack(Player p, ObjectiveId o) const { return attack_[idx(p)][o]; }
  double initial_reinforce(Player p, ObjectiveId o) const { return reinforce_[idx(p)][o]; }
  const std::vector<ImprovementEntry>& improvements() const { return improvements_; }
  const std::vector<ProbabilityOverride>& overrides() const { return overrides_; }
  bool has_overrides() const { return !overrides_.empty(); }

  // Raw model values ignoring the control conventions (the caller has
  // already checked who holds the objective).
  double raw_attack(Player p, ObjectiveId o, const CampaignState& s) const;
  double raw_reinforce(Player p, ObjectiveId o, const CampaignState& s) const;

 private:
  struct CompiledEntry {
    std::uint64_t condition_mask;
    double keep;  // 1 - boost
  };
  struct OverrideKey {
    std::uint64_t mask;
    std::uint32_t size;
    std::uint8_t player;
    std::int32_t objective;
    friend bool operator==(const OverrideKey&, const OverrideKey&) = default;
  };
  struct OverrideKeyHash {
    std::size_t operator()(const OverrideKey& k) const;
  };
  struct OverrideValue {
    std::optional<double> alpha;
    std::optional<double> rho;
  };

  static std::size_t idx(Player p) { return p == Player::kOne ? 0 : 1; }
  void resize(std::size_t n);
  double combine(double initial, const std::vector<CompiledEntry>& entries,
                 std::uint64_t controlled) const;
  const OverrideValue* find_override(Player p, ObjectiveId o,
                                     const CampaignState& s) const;

  std::array<std::vector<double>, 2> attack_;
  std::array<std::vector<double>, 2> reinforce_;
  // [player][kind][objective]
  std::array<std::array<std::vector<std::vector<CompiledEntry>>, 2>, 2> compiled_;
  std::vector<ImprovementEntry> improvements_;
  std::vector<ProbabilityOverride> overrides_;
  std::unordered_map<OverrideKey, OverrideValue, OverrideKeyHash> override_index_;
};

}  // namespace campaign

#endif  // CAMPAIGN_PROBABILITY_MODEL_H_
