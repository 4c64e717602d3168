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

#include "campaign/probability_model.h"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace campaign {
namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1], got " +
                                std::to_string(p));
  }
}

}  // namespace

ProbabilityModel::ProbabilityModel(std::size_t num_objectives, double attack,
                                   double reinforce) {
  check_probability(attack, "initial attack probability");
  check_probability(reinforce, "initial reinforce probability");
  resize(num_objectives);
  for (auto& v : attack_) std::fill(v.begin(), v.end(), attack);
  for (auto& v : reinforce_) std::fill(v.begin(), v.end(), reinforce);
}

void ProbabilityModel::resize(std::size_t n) {
  for (auto& v : attack_) v.assign(n, 0.0);
  for (auto& v : reinforce_) v.assign(n, 0.0);
  for (auto& per_player : compiled_) {
    for (auto& per_kind : per_player) per_kind.assign(n, {});
  }
}

void ProbabilityModel::set_initial_attack(Player p, ObjectiveId o, double q) {
  if (o < 0 || static_cast<std::size_t>(o) >= num_objectives()) {
    throw std::invalid_argument("objective id out of range: " + std::to_string(o));
  }
  check_probability(q, "initial attack probability");
  attack_[idx(p)][o] = q;
}

void ProbabilityModel::set_initial_reinforce(Player p, ObjectiveId o, double q) {
  if (o < 0 || static_cast<std::size_t>(o) >= num_objectives()) {
    throw std::invalid_argument("objective id out of range: " + std::to_string(o));
  }
  check_probability(q, "initial reinforce probability");
  reinforce_[idx(p)][o] = q;
}

void ProbabilityModel::add_improvement(ImprovementEntry entry) {
  const auto n = static_cast<ObjectiveId>(num_objectives());
  if (entry.target < 0 || entry.target >= n) {
    throw std::invalid_argument("improvement target out of range: " +
                                std::to_string(entry.target));
  }
  check_probability(entry.boost, "improvement boost");
  if (entry.condition.empty()) {
    throw std::invalid_argument("improvement condition must be nonempty");
  }
  std::uint64_t mask = 0;
  for (ObjectiveId c : entry.condition) {
    if (c < 0 || c >= n) {
      throw std::invalid_argument("improvement condition id out of range: " + std::to_string(c));
    }
    if (c == entry.target) {
      throw std::invalid_argument("improvement condition contains its own target " +
                                  std::to_string(c));
    }
    mask |= std::uint64_t{1} << c;
  }
  const std::size_t kind = entry.kind == BattleKind::kAttack ? 0 : 1;
  compiled_[idx(entry.player)][kind][entry.target].push_back({mask, 1.0 - entry.boost});
  improvements_.push_back(std::move(entry));
}

void ProbabilityModel::add_override(ProbabilityOverride entry) {
  if (entry.state.size() != num_objectives()) {
    throw std::invalid_argument("override state has wrong length: " + entry.state.to_string());
  }
  if (entry.objective < 0 || static_cast<std::size_t>(entry.objective) >= num_objectives()) {
    throw std::invalid_argument("override objective out of range: " +
                                std::to_string(entry.objective));
  }
  if (entry.alpha) check_probability(*entry.alpha, "override alpha");
  if (entry.rho) check_probability(*entry.rho, "override rho");
  const OverrideKey key{entry.state.player_two_mask(),
                        static_cast<std::uint32_t>(entry.state.size()),
                        static_cast<std::uint8_t>(entry.player), entry.objective};
  auto& slot = override_index_[key];
  if (entry.alpha) slot.alpha = entry.alpha;
  if (entry.rho) slot.rho = entry.rho;
  overrides_.push_back(std::move(entry));
}

std::size_t ProbabilityModel::OverrideKeyHash::operator()(const OverrideKey& k) const {
  std::uint64_t h = k.mask * 0x9E3779B97F4A7C15ULL;
  h ^= (static_cast<std::uint64_t>(k.objective) << 8 | k.player) + 0x7F4A7C15ULL + (h << 6) +
       (h >> 2);
  return static_cast<std::size_t>(h ^ k.size);
}

const ProbabilityModel::OverrideValue* ProbabilityModel::find_override(
    Player p, ObjectiveId o, const CampaignState& s) const {
  if (override_index_.empty()) return nullptr;
  const OverrideKey key{s.player_two_mask(), static_cast<std::uint32_t>(s.size()),
                        static_cast<std::uint8_t>(p), o};
  auto it = override_index_.find(key);
  return it == override_index_.end() ? nullptr : &it->second;
}

double ProbabilityModel::combine(double initial, const std::vector<CompiledEntry>& entries,
                                 std::uint64_t controlled) const {
  // Empty product: the initial probability itself, bit for bit.
  double fail = 1.0 - initial;
  bool active = false;
  for (const auto& e : entries) {
    if ((e.condition_mask & controlled) == e.condition_mask) {
      fail *= e.keep;
      active = true;
    }
  }
  return active ? 1.0 - fail : initial;
}

double ProbabilityModel::raw_attack(Player p, ObjectiveId o, const CampaignState& s) const {
  if (const auto* ov = find_override(p, o, s); ov != nullptr && ov->alpha) return *ov->alpha;
  return combine(attack_[idx(p)][o], compiled_[idx(p)][0][o], s.controlled_mask(p));
}

double ProbabilityModel::raw_reinforce(Player p, ObjectiveId o, const CampaignState& s) const {
  if (const auto* ov = find_override(p, o, s); ov != nullptr && ov->rho) return *ov->rho;
  return combine(reinforce_[idx(p)][o], compiled_[idx(p)][1][o], s.controlled_mask(p));
}

}  // namespace campaign
