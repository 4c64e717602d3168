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

#ifndef CAMPAIGN_SRC_STAGE_KERNEL_H_
#define CAMPAIGN_SRC_STAGE_KERNEL_H_

#include <algorithm>
#include <bit>
#include <cstdint>
#include <exception>
#include <functional>
#include <span>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "campaign/campaign.h"
#include "campaign/matrix_game.h"
#include "campaign/state_space.h"
#include "campaign/transitions.h"

namespace campaign::detail {

// Axis digit of a local Player-2 bit pattern (bit j = position j), or -1.
inline int local_axis_code(std::uint64_t m, int n) {
  const std::uint64_t full = n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  if (m == 0) return 0;
  if (m == full) return 1;
  const int k = std::countr_zero(m);
  if (m == (full & (full << k))) return 1 + k;
  // Split front: o_1..o_{k-1} held by 1, o_k by 2, o_{k+1} by 1, rest by 2.
  const int kk = k + 1;
  if (kk > n - 1) return -1;
  const std::uint64_t rest = kk + 1 >= 64 ? 0 : (full & (full << (kk + 1)));
  if (m == ((std::uint64_t{1} << k) | rest)) return n + kk;
  return -1;
}

// Reduced (or full) action lists of every achievable state, flattened.
struct ActionTable {
  std::size_t commanders = 0;
  std::vector<Order> orders;          // commanders entries per action
  std::vector<std::uint64_t> offset;  // first action of state s; size states+1

  std::size_t count(std::size_t s) const { return offset[s + 1] - offset[s]; }
  std::span<const Order> action(std::size_t s, std::size_t a) const {
    return {orders.data() + (offset[s] + a) * commanders, commanders};
  }
  std::size_t max_count() const {
    std::size_t m = 0;
    for (std::size_t s = 0; s + 1 < offset.size(); ++s) m = std::max(m, count(s));
    return m;
  }
};

enum class ActionScope : std::uint8_t { kReduced, kFull };

inline ActionTable build_action_table(const Campaign& campaign, const StateSpace& space,
                                      Player player, ActionScope scope) {
  ActionTable table;
  table.commanders = campaign.num_commanders();
  table.offset.reserve(space.size() + 1);
  table.offset.push_back(0);
  for (std::size_t s = 0; s < space.size(); ++s) {
    const CampaignState state = space.decode(s);
    const auto actions = scope == ActionScope::kReduced
                             ? reduced_actions(campaign, state, player)
                             : feasible_actions_full(campaign, state, player);
    for (const auto& a : actions) {
      table.orders.insert(table.orders.end(), a.orders.begin(), a.orders.end());
    }
    table.offset.push_back(table.offset.back() + actions.size());
  }
  return table;
}

inline ActionProfile to_profile(std::span<const Order> orders) {
  return ActionProfile{std::vector<Order>(orders.begin(), orders.end())};
}

// Per-state cache of success probabilities. Enumerates the successors of an
// action pair axis by axis, so next-state indices are assembled from digit
// deltas. One kernel per thread: it owns scratch buffers.
class StageKernel {
 public:
  StageKernel(const Campaign& campaign, const StateSpace& space)
      : campaign_(campaign), space_(space) {
    const auto& axes = campaign.axes();
    const auto& radices = space.radices();
    weight_.assign(axes.size(), 1);
    for (std::size_t x = axes.size(); x-- > 1;) weight_[x - 1] = weight_[x] * radices[x];
    local_.assign(axes.size(), 0);
    code_.assign(axes.size(), 0);
    axis_flip_.assign(axes.size(), 0);
    axis_branch_begin_.assign(axes.size(), 0);
    axis_branch_count_.assign(axes.size(), 0);
    n_objectives_ = campaign.num_objectives();
  }

  void load(std::size_t index) {
    index_ = index;
    state_ = space_.decode(index);
    loss_ = stage_loss(campaign_, state_);
    const ProbabilityModel& model = campaign_.probabilities();
    const auto& axes = campaign_.axes();
    for (std::size_t x = 0; x < axes.size(); ++x) {
      std::uint64_t m = 0;
      const auto& objs = axes[x].objectives;
      for (std::size_t j = 0; j < objs.size(); ++j) {
        if (state_.owner(objs[j]) == Player::kTwo) m |= std::uint64_t{1} << j;
      }
      local_[x] = m;
      code_[x] = local_axis_code(m, static_cast<int>(objs.size()));
    }
    for (ObjectiveId o = 0; o < static_cast<ObjectiveId>(n_objectives_); ++o) {
      for (Player p : {Player::kOne, Player::kTwo}) {
        const int i = to_int(p) - 1;
        alpha_[i][o] = attack_success_prob(model, p, o, state_);
        rho_[i][o] = reinforce_success_prob(model, p, o, state_);
      }
    }
  }

  std::size_t index() const { return index_; }
  const CampaignState& state() const { return state_; }
  double loss() const { return loss_; }

  // Calls fn(successor_index, probability) for every outcome of (a1, a2).
  // Outcomes are not merged; a successor may be reported more than once
  // only when the same digit pattern arises from different battle results.
  template <typename Fn>
  void successors(std::span<const Order> a1, std::span<const Order> a2, Fn&& fn) {
    collect(a1, a2);
    // Per-axis outcome lists.
    outcome_delta_.clear();
    outcome_prob_.clear();
    group_begin_.clear();
    std::int64_t base = static_cast<std::int64_t>(index_);
    for (AxisId x : touched_) {
      const auto& objs = campaign_.axes()[x].objectives;
      const int n = static_cast<int>(objs.size());
      const std::uint64_t start = local_[x] ^ axis_flip_[x];
      const int k = static_cast<int>(axis_branch_count_[x]);
      const std::size_t b0 = axis_branch_begin_[x];
      if (k == 0) {
        base += delta(x, start, n);
        continue;
      }
      group_begin_.push_back(outcome_delta_.size());
      for (std::uint64_t pattern = 0; pattern < (std::uint64_t{1} << k); ++pattern) {
        std::uint64_t m = start;
        double p = 1.0;
        for (int j = 0; j < k; ++j) {
          if ((pattern >> j) & 1U) {
            m ^= branch_bit_[b0 + j];
            p *= branch_p_[b0 + j];
          } else {
            p *= 1.0 - branch_p_[b0 + j];
          }
        }
        outcome_delta_.push_back(delta(x, m, n));
        outcome_prob_.push_back(p);
      }
    }
    const std::size_t groups = group_begin_.size();
    group_begin_.push_back(outcome_delta_.size());
    if (groups == 0) {
      fn(static_cast<std::size_t>(base), 1.0);
      return;
    }
    // Odometer over the cartesian product of per-axis outcomes.
    cursor_.assign(groups, 0);
    while (true) {
      std::int64_t idx = base;
      double p = 1.0;
      for (std::size_t g = 0; g < groups; ++g) {
        const std::size_t e = group_begin_[g] + cursor_[g];
        idx += outcome_delta_[e];
        p *= outcome_prob_[e];
      }
      fn(static_cast<std::size_t>(idx), p);
      std::size_t g = groups;
      while (g-- > 0) {
        if (++cursor_[g] < group_begin_[g + 1] - group_begin_[g]) break;
        cursor_[g] = 0;
        if (g == 0) return;
      }
    }
  }

  // Battles of (a1, a2) sorted by objective; valid until the next call.
  std::span<const Battle> battles(std::span<const Order> a1, std::span<const Order> a2) {
    n_battles_ = 0;
    add(a1, a2, Player::kOne);
    add(a2, a1, Player::kTwo);
    std::sort(battle_buf_, battle_buf_ + n_battles_,
              [](const Battle& a, const Battle& b) { return a.objective < b.objective; });
    return {battle_buf_, n_battles_};
  }

  double expected_value(std::span<const Order> a1, std::span<const Order> a2,
                        std::span<const double> values) {
    double total = 0.0;
    successors(a1, a2, [&](std::size_t idx, double p) { total += p * values[idx]; });
    return total;
  }

  // Stage matrix over the cartesian products of per-commander options
  // (commander 0 slowest, as in reduced_actions). The battles on a
  // commander's axes depend only on the two orders that commander received,
  // so the expectation is contracted one commander at a time instead of
  // enumerating every joint outcome for every action pair.
  void stage_matrix(const std::vector<std::vector<Order>>& opts1,
                    const std::vector<std::vector<Order>>& opts2, std::span<const double> values,
                    PayoffMatrix& R) {
    const std::size_t C = opts1.size();
    std::size_t rows = 1;
    std::size_t cols = 1;
    for (std::size_t c = 0; c < C; ++c) {
      rows *= opts1[c].size();
      cols *= opts2[c].size();
    }
    R.reset(rows, cols);
    if (rows == 0 || cols == 0) return;

    build_factors(opts1, opts2);
    std::size_t table = 1;
    for (std::size_t c = 0; c < C; ++c) table *= factor_deltas_[c].size();
    if (table > kMaxFactorTable) {
      direct_matrix(opts1, opts2, values, R);
      return;
    }

    // Values at every combination of per-commander outcome deltas.
    cur_.assign(table, 0.0);
    digits_.assign(C, 0);
    for (std::size_t t = 0; t < table; ++t) {
      std::int64_t idx = static_cast<std::int64_t>(index_);
      for (std::size_t c = 0; c < C; ++c) idx += factor_deltas_[c][digits_[c]];
      cur_[t] = values[static_cast<std::size_t>(idx)];
      for (std::size_t c = C; c-- > 0;) {
        if (++digits_[c] < factor_deltas_[c].size()) break;
        digits_[c] = 0;
      }
    }
    // Eliminate commanders from the last: [prefix][k_c][rest] -> [prefix][p_c][rest].
    std::size_t prefix = table;
    std::size_t rest = 1;
    for (std::size_t c = C; c-- > 0;) {
      const std::size_t d = factor_deltas_[c].size();
      const std::size_t pairs = opts1[c].size() * opts2[c].size();
      prefix /= d;
      next_.assign(prefix * pairs * rest, 0.0);
      for (std::size_t pre = 0; pre < prefix; ++pre) {
        for (std::size_t p = 0; p < pairs; ++p) {
          double* dst = next_.data() + (pre * pairs + p) * rest;
          const std::size_t e0 = factor_begin_[c][p];
          const std::size_t e1 = factor_begin_[c][p + 1];
          for (std::size_t e = e0; e < e1; ++e) {
            const double pr = factor_prob_[c][e];
            const double* src = cur_.data() + (pre * d + factor_key_[c][e]) * rest;
            for (std::size_t r = 0; r < rest; ++r) dst[r] += pr * src[r];
          }
        }
      }
      cur_.swap(next_);
      rest *= pairs;
    }
    // cur_ is indexed by (p_0, ..., p_{C-1}) with p_c = i_c * m2_c + j_c.
    row_part_.assign(rows, 0);
    col_part_.assign(cols, 0);
    std::size_t stride = 1;
    std::size_t rstride = 1;
    std::size_t cstride = 1;
    for (std::size_t c = C; c-- > 0;) {
      const std::size_t m1 = opts1[c].size();
      const std::size_t m2 = opts2[c].size();
      for (std::size_t r = 0; r < rows; ++r) row_part_[r] += ((r / rstride) % m1) * m2 * stride;
      for (std::size_t q = 0; q < cols; ++q) col_part_[q] += ((q / cstride) % m2) * stride;
      stride *= m1 * m2;
      rstride *= m1;
      cstride *= m2;
    }
    const double g = campaign_.discount();
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t q = 0; q < cols; ++q) {
        R(r, q) = loss_ + g * cur_[row_part_[r] + col_part_[q]];
      }
    }
  }

  // L(s) + γ Σ P(s'|s,a1,a2) V(s').
  double payoff(std::span<const Order> a1, std::span<const Order> a2,
                std::span<const double> values) {
    return loss_ + campaign_.discount() * expected_value(a1, a2, values);
  }

 private:
  static constexpr std::size_t kMaxFactorTable = std::size_t{1} << 22;

  // Index change when the objectives in `flips` change hands.
  std::int64_t flip_delta(const ObjectiveId* flips, int count) const {
    std::int64_t d = 0;
    for (int i = 0; i < count; ++i) {
      const AxisId x = campaign_.axis_of(flips[i]);
      bool seen = false;
      for (int j = 0; j < i; ++j) seen = seen || campaign_.axis_of(flips[j]) == x;
      if (seen) continue;
      std::uint64_t m = local_[x];
      for (int j = i; j < count; ++j) {
        if (campaign_.axis_of(flips[j]) == x) {
          m ^= std::uint64_t{1} << campaign_.position_of(flips[j]);
        }
      }
      d += delta(x, m, static_cast<int>(campaign_.axes()[x].objectives.size()));
    }
    return d;
  }

  // Per commander and order pair: sparse distribution over that commander's
  // distinct index deltas.
  void build_factors(const std::vector<std::vector<Order>>& opts1,
                     const std::vector<std::vector<Order>>& opts2) {
    const std::size_t C = opts1.size();
    factor_deltas_.resize(C);
    factor_begin_.resize(C);
    factor_key_.resize(C);
    factor_prob_.resize(C);
    for (std::size_t c = 0; c < C; ++c) {
      auto& deltas = factor_deltas_[c];
      auto& begin = factor_begin_[c];
      auto& key = factor_key_[c];
      auto& prob = factor_prob_[c];
      deltas.clear();
      begin.clear();
      key.clear();
      prob.clear();
      for (const Order& o1 : opts1[c]) {
        for (const Order& o2 : opts2[c]) {
          begin.push_back(key.size());
          ObjectiveId obj[2];
          double p[2];
          int k = 0;
          if (o1.kind == OrderKind::kAttack) {
            obj[k] = o1.target;
            p[k] = alpha_[0][o1.target];
            if (o2.kind == OrderKind::kReinforce && o2.target == o1.target) {
              p[k] *= 1.0 - rho_[1][o1.target];
            }
            ++k;
          }
          if (o2.kind == OrderKind::kAttack) {
            obj[k] = o2.target;
            p[k] = alpha_[1][o2.target];
            if (o1.kind == OrderKind::kReinforce && o1.target == o2.target) {
              p[k] *= 1.0 - rho_[0][o2.target];
            }
            ++k;
          }
          for (int pattern = 0; pattern < (1 << k); ++pattern) {
            double pr = 1.0;
            ObjectiveId flips[2];
            int nf = 0;
            for (int b = 0; b < k; ++b) {
              const double q = p[b] >= 1.0 ? 1.0 : (p[b] <= 0.0 ? 0.0 : p[b]);
              if ((pattern >> b) & 1) {
                pr *= q;
                flips[nf++] = obj[b];
              } else {
                pr *= 1.0 - q;
              }
            }
            if (pr <= 0.0) continue;
            const std::int64_t dl = flip_delta(flips, nf);
            std::size_t slot = 0;
            while (slot < deltas.size() && deltas[slot] != dl) ++slot;
            if (slot == deltas.size()) deltas.push_back(dl);
            key.push_back(static_cast<std::uint32_t>(slot));
            prob.push_back(pr);
          }
        }
      }
      begin.push_back(key.size());
    }
  }

  void direct_matrix(const std::vector<std::vector<Order>>& opts1,
                     const std::vector<std::vector<Order>>& opts2, std::span<const double> values,
                     PayoffMatrix& R) {
    const std::size_t C = opts1.size();
    std::vector<Order> a1(C);
    std::vector<Order> a2(C);
    for (std::size_t r = 0; r < R.rows(); ++r) {
      std::size_t rr = r;
      for (std::size_t c = C; c-- > 0;) {
        a1[c] = opts1[c][rr % opts1[c].size()];
        rr /= opts1[c].size();
      }
      for (std::size_t q = 0; q < R.cols(); ++q) {
        std::size_t qq = q;
        for (std::size_t c = C; c-- > 0;) {
          a2[c] = opts2[c][qq % opts2[c].size()];
          qq /= opts2[c].size();
        }
        R(r, q) = payoff(a1, a2, values);
      }
    }
  }

  std::int64_t delta(AxisId x, std::uint64_t m, int n) const {
    const int c = local_axis_code(m, n);
    if (c < 0) {
      throw std::logic_error("feasible actions led to an unachievable axis pattern");
    }
    return (static_cast<std::int64_t>(c) - code_[x]) * static_cast<std::int64_t>(weight_[x]);
  }

  void collect(std::span<const Order> a1, std::span<const Order> a2) {
    for (AxisId x : touched_) {
      axis_flip_[x] = 0;
      axis_branch_count_[x] = 0;
    }
    touched_.clear();
    n_battles_ = 0;
    add(a1, a2, Player::kOne);
    add(a2, a1, Player::kTwo);
    // Group branching battles by axis, objective order within an axis.
    std::sort(battle_buf_, battle_buf_ + n_battles_,
              [](const Battle& a, const Battle& b) { return a.objective < b.objective; });
    branch_bit_.clear();
    branch_p_.clear();
    for (std::size_t i = 0; i < n_battles_; ++i) {
      const Battle& b = battle_buf_[i];
      const AxisId x = campaign_.axis_of(b.objective);
      if (std::find(touched_.begin(), touched_.end(), x) == touched_.end()) {
        touched_.push_back(x);
      }
    }
    std::sort(touched_.begin(), touched_.end());
    for (AxisId x : touched_) {
      axis_branch_begin_[x] = branch_bit_.size();
      for (std::size_t i = 0; i < n_battles_; ++i) {
        const Battle& b = battle_buf_[i];
        if (campaign_.axis_of(b.objective) != x) continue;
        const std::uint64_t bit = std::uint64_t{1} << campaign_.position_of(b.objective);
        if (b.success >= 1.0) {
          axis_flip_[x] |= bit;
        } else if (b.success > 0.0) {
          branch_bit_.push_back(bit);
          branch_p_.push_back(b.success);
          ++axis_branch_count_[x];
        }
      }
    }
  }

  void add(std::span<const Order> attack_side, std::span<const Order> defend_side,
           Player attacker) {
    const int ai = to_int(attacker) - 1;
    for (const Order& ord : attack_side) {
      if (ord.kind != OrderKind::kAttack) continue;
      const ObjectiveId o = ord.target;
      const Order& defence = defend_side[campaign_.commander_of(o)];
      Battle& b = battle_buf_[n_battles_++];
      b.objective = o;
      b.attacker = attacker;
      b.reinforced = defence.kind == OrderKind::kReinforce && defence.target == o;
      b.success = alpha_[ai][o];
      if (b.reinforced) b.success *= 1.0 - rho_[1 - ai][o];
    }
  }

  const Campaign& campaign_;
  const StateSpace& space_;
  std::size_t n_objectives_ = 0;
  std::vector<std::size_t> weight_;

  std::size_t index_ = 0;
  CampaignState state_;
  double loss_ = 0.0;
  std::vector<std::uint64_t> local_;
  std::vector<int> code_;
  double alpha_[2][CampaignState::kMaxObjectives] = {};
  double rho_[2][CampaignState::kMaxObjectives] = {};

  // Scratch.
  Battle battle_buf_[2 * CampaignState::kMaxObjectives];
  std::size_t n_battles_ = 0;
  std::vector<AxisId> touched_;
  std::vector<std::uint64_t> axis_flip_;
  std::vector<std::size_t> axis_branch_begin_;
  std::vector<std::size_t> axis_branch_count_;
  std::vector<std::uint64_t> branch_bit_;
  std::vector<double> branch_p_;
  std::vector<std::int64_t> outcome_delta_;
  std::vector<double> outcome_prob_;
  std::vector<std::size_t> group_begin_;
  std::vector<std::size_t> cursor_;

  std::vector<std::vector<std::int64_t>> factor_deltas_;
  std::vector<std::vector<std::size_t>> factor_begin_;
  std::vector<std::vector<std::uint32_t>> factor_key_;
  std::vector<std::vector<double>> factor_prob_;
  std::vector<double> cur_;
  std::vector<double> next_;
  std::vector<std::size_t> digits_;
  std::vector<std::size_t> row_part_;
  std::vector<std::size_t> col_part_;
};

inline std::size_t resolve_workers(std::size_t requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Static block partition of [0, n) over workers; fn(begin, end, worker).
// Callers write only to per-index or per-worker slots, so results do not
// depend on the worker count.
inline void parallel_for(std::size_t n, std::size_t workers,
                         const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    fn(0, n, 0);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&, begin, end, w] {
      try {
        fn(begin, end, w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace campaign::detail

#endif  // CAMPAIGN_SRC_STAGE_KERNEL_H_
