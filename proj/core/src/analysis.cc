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

#include "campaign/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "stage_kernel.h"

namespace campaign {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void check_profile(const StateSpace& space, const PolicyProfile& profile,
                   const detail::ActionTable& rows, const detail::ActionTable& cols) {
  if (profile.player1.size() != space.size() || profile.player2.size() != space.size()) {
    throw std::invalid_argument("policy profile does not cover the state space");
  }
  for (std::size_t s = 0; s < space.size(); ++s) {
    if (profile.player1[s].size() != rows.count(s) || profile.player2[s].size() != cols.count(s)) {
      throw std::invalid_argument("policy profile does not match the reduced actions of state " +
                                  space.decode(s).to_string());
    }
  }
}

// Sparse transition rows in CSR form: row r spans [start[r], start[r+1]).
struct SparseRows {
  std::vector<std::uint64_t> start;
  std::vector<std::uint32_t> index;
  std::vector<double> prob;
};

// Accumulates weighted successor mass into a merged, sorted row.
class RowBuilder {
 public:
  explicit RowBuilder(std::size_t states) : mass_(states, 0.0), seen_(states, 0) {}

  void add(std::size_t idx, double p) {
    if (!seen_[idx]) {
      seen_[idx] = 1;
      touched_.push_back(static_cast<std::uint32_t>(idx));
    }
    mass_[idx] += p;
  }

  void flush(std::vector<std::uint32_t>& index, std::vector<double>& prob) {
    std::sort(touched_.begin(), touched_.end());
    for (std::uint32_t i : touched_) {
      index.push_back(i);
      prob.push_back(mass_[i]);
      mass_[i] = 0.0;
      seen_[i] = 0;
    }
    touched_.clear();
  }

 private:
  std::vector<double> mass_;
  std::vector<char> seen_;
  std::vector<std::uint32_t> touched_;
};

// Rows for a block of states built by one worker.
struct RowBlock {
  std::vector<std::uint64_t> lengths;
  std::vector<std::uint32_t> index;
  std::vector<double> prob;
};

// Concatenates per-worker blocks in state order.
SparseRows join(std::vector<RowBlock>& blocks) {
  SparseRows rows;
  rows.start.push_back(0);
  for (RowBlock& b : blocks) {
    for (std::uint64_t len : b.lengths) rows.start.push_back(rows.start.back() + len);
    rows.index.insert(rows.index.end(), b.index.begin(), b.index.end());
    rows.prob.insert(rows.prob.end(), b.prob.begin(), b.prob.end());
    b = RowBlock{};
  }
  return rows;
}

double dot(const SparseRows& rows, std::size_t r, const std::vector<double>& v) {
  double acc = 0.0;
  for (std::uint64_t k = rows.start[r]; k < rows.start[r + 1]; ++k) {
    acc += rows.prob[k] * v[rows.index[k]];
  }
  return acc;
}

std::size_t block_workers(std::size_t n, std::size_t requested) {
  return std::max<std::size_t>(1, std::min(detail::resolve_workers(requested), n));
}

}  // namespace

IsotonicityReport check_isotonicity(const Campaign& campaign, const ValueFunction& values,
                                    const IsotonicityOptions& options) {
  const StateSpace space(campaign);
  if (values.size() != space.size()) throw std::invalid_argument("value function size mismatch");
  const std::size_t n = space.size();
  std::vector<std::uint64_t> mask(n);
  std::vector<double> loss(n);
  for (std::size_t s = 0; s < n; ++s) {
    const CampaignState st = space.decode(s);
    mask[s] = st.player_two_mask();
    loss[s] = stage_loss(campaign, st);
  }

  IsotonicityReport report;
  auto check = [&](std::size_t lo, std::size_t hi) {
    ++report.pairs_checked;
    const double gap = values[hi] - values[lo];
    const double bound = loss[hi] - loss[lo];
    const double slack = gap - bound;
    if (slack >= -options.tolerance) return;
    ++report.violation_count;
    report.worst_slack = std::min(report.worst_slack, slack);
    if (report.violations.size() < options.max_recorded) {
      report.violations.push_back({lo, hi, gap, bound});
    }
  };

  if (n <= options.exhaustive_limit) {
    report.exhaustive = true;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && (mask[i] & ~mask[j]) == 0) check(i, j);
      }
    }
  } else {
    report.exhaustive = false;
    const std::size_t objectives = campaign.num_objectives();
    auto upward = [&](std::size_t s, std::vector<std::size_t>& out) {
      out.clear();
      for (std::size_t o = 0; o < objectives; ++o) {
        if ((mask[s] >> o) & 1U) continue;
        const std::int64_t u =
            space.try_encode(CampaignState::from_mask(objectives, mask[s] | (std::uint64_t{1} << o)));
        if (u >= 0) out.push_back(static_cast<std::size_t>(u));
      }
    };
    std::vector<std::size_t> next;
    for (std::size_t s = 0; s < n; ++s) {
      upward(s, next);
      for (std::size_t u : next) check(s, u);
    }
    Rng rng(options.seed);
    for (std::size_t k = 0; k < options.chain_samples; ++k) {
      const std::size_t start = static_cast<std::size_t>(rng.below(n));
      const std::size_t steps = 2 + static_cast<std::size_t>(rng.below(objectives));
      std::size_t cur = start;
      for (std::size_t t = 0; t < steps; ++t) {
        upward(cur, next);
        if (next.empty()) break;
        cur = next[static_cast<std::size_t>(rng.below(next.size()))];
      }
      if (cur != start) check(start, cur);
    }
  }
  std::sort(report.violations.begin(), report.violations.end(),
            [](const auto& a, const auto& b) { return a.slack() < b.slack(); });
  return report;
}

ValueFunction evaluate_policy(const Campaign& campaign, const PolicyProfile& profile,
                              double tolerance, std::size_t workers) {
  const StateSpace space(campaign);
  const auto rows = detail::build_action_table(campaign, space, Player::kOne,
                                               detail::ActionScope::kReduced);
  const auto cols = detail::build_action_table(campaign, space, Player::kTwo,
                                               detail::ActionScope::kReduced);
  check_profile(space, profile, rows, cols);
  const std::size_t n = space.size();
  const std::size_t w = block_workers(n, workers);

  std::vector<double> loss(n);
  std::vector<RowBlock> blocks(w);
  detail::parallel_for(n, w, [&](std::size_t begin, std::size_t end, std::size_t worker) {
    detail::StageKernel kernel(campaign, space);
    RowBuilder builder(n);
    RowBlock& block = blocks[worker];
    for (std::size_t s = begin; s < end; ++s) {
      kernel.load(s);
      loss[s] = kernel.loss();
      const auto& p1 = profile.player1[s];
      const auto& p2 = profile.player2[s];
      for (std::size_t r = 0; r < p1.size(); ++r) {
        if (p1[r] <= 0.0) continue;
        for (std::size_t c = 0; c < p2.size(); ++c) {
          if (p2[c] <= 0.0) continue;
          const double weight = p1[r] * p2[c];
          kernel.successors(rows.action(s, r), cols.action(s, c),
                            [&](std::size_t idx, double p) { builder.add(idx, weight * p); });
        }
      }
      const std::size_t before = block.index.size();
      builder.flush(block.index, block.prob);
      block.lengths.push_back(block.index.size() - before);
    }
  });
  const SparseRows sparse = join(blocks);

  const double g = campaign.discount();
  std::vector<double> v = loss;
  std::vector<double> next(n);
  for (std::size_t it = 0; it < 1000000; ++it) {
    double delta = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      next[s] = loss[s] + g * dot(sparse, s, v);
      delta = std::max(delta, std::abs(next[s] - v[s]));
    }
    v.swap(next);
    if (delta <= tolerance) break;
  }
  return ValueFunction{std::move(v)};
}

namespace {

ValueFunction best_response_impl(const Campaign& campaign, const PolicyProfile& profile,
                                 Player responder, const CertificationOptions& options,
                                 std::size_t* iterations) {
  const StateSpace space(campaign);
  const auto rows = detail::build_action_table(campaign, space, Player::kOne,
                                               detail::ActionScope::kReduced);
  const auto cols = detail::build_action_table(campaign, space, Player::kTwo,
                                               detail::ActionScope::kReduced);
  check_profile(space, profile, rows, cols);
  const auto full = detail::build_action_table(campaign, space, responder,
                                               detail::ActionScope::kFull);
  const std::size_t n = space.size();
  const std::size_t w = block_workers(n, options.workers);
  const bool p1 = responder == Player::kOne;

  // One merged row per (state, responder action) against the fixed strategy.
  std::vector<double> loss(n);
  std::vector<RowBlock> blocks(w);
  detail::parallel_for(n, w, [&](std::size_t begin, std::size_t end, std::size_t worker) {
    detail::StageKernel kernel(campaign, space);
    RowBuilder builder(n);
    RowBlock& block = blocks[worker];
    for (std::size_t s = begin; s < end; ++s) {
      kernel.load(s);
      loss[s] = kernel.loss();
      const auto& fixed = p1 ? profile.player2[s] : profile.player1[s];
      const auto& fixed_table = p1 ? cols : rows;
      for (std::size_t a = 0; a < full.count(s); ++a) {
        const auto mine = full.action(s, a);
        for (std::size_t b = 0; b < fixed.size(); ++b) {
          if (fixed[b] <= 0.0) continue;
          const auto theirs = fixed_table.action(s, b);
          const double weight = fixed[b];
          auto add = [&](std::size_t idx, double p) { builder.add(idx, weight * p); };
          if (p1) {
            kernel.successors(mine, theirs, add);
          } else {
            kernel.successors(theirs, mine, add);
          }
        }
        const std::size_t before = block.index.size();
        builder.flush(block.index, block.prob);
        block.lengths.push_back(block.index.size() - before);
      }
    }
  });
  const SparseRows sparse = join(blocks);

  const double g = campaign.discount();
  std::vector<double> v = loss;
  std::vector<double> next(n);
  std::size_t it = 0;
  while (it < options.max_iterations) {
    ++it;
    double delta = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      double best = p1 ? std::numeric_limits<double>::infinity()
                       : -std::numeric_limits<double>::infinity();
      for (std::size_t a = full.offset[s]; a < full.offset[s + 1]; ++a) {
        const double q = dot(sparse, a, v);
        best = p1 ? std::min(best, q) : std::max(best, q);
      }
      next[s] = loss[s] + g * best;
      delta = std::max(delta, std::abs(next[s] - v[s]));
    }
    v.swap(next);
    if (delta <= options.tolerance) break;
  }
  if (iterations) *iterations = it;
  return ValueFunction{std::move(v)};
}

}  // namespace

ValueFunction best_response_value(const Campaign& campaign, const PolicyProfile& profile,
                                  Player responder, const CertificationOptions& options) {
  return best_response_impl(campaign, profile, responder, options, nullptr);
}

CertificationReport certify_epsilon_mpe(const Campaign& campaign, const PolicyProfile& profile,
                                        double epsilon, const CertificationOptions& options) {
  CertificationReport rep;
  rep.epsilon_claimed = epsilon;
  const ValueFunction base = evaluate_policy(campaign, profile, options.tolerance * 0.1,
                                             options.workers);
  std::size_t it1 = 0;
  std::size_t it2 = 0;
  const ValueFunction br1 = best_response_impl(campaign, profile, Player::kOne, options, &it1);
  const ValueFunction br2 = best_response_impl(campaign, profile, Player::kTwo, options, &it2);
  rep.best_response_iterations = std::max(it1, it2);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < base.size(); ++s) {
    const double g1 = base[s] - br1[s];
    const double g2 = br2[s] - base[s];
    rep.max_deviation_gain_p1 = std::max(rep.max_deviation_gain_p1, g1);
    rep.max_deviation_gain_p2 = std::max(rep.max_deviation_gain_p2, g2);
    if (g1 > worst) {
      worst = g1;
      rep.worst_state = s;
      rep.worst_player = Player::kOne;
    }
    if (g2 > worst) {
      worst = g2;
      rep.worst_state = s;
      rep.worst_player = Player::kTwo;
    }
  }
  return rep;
}

CampaignState sample_transition(const Campaign& campaign, const CampaignState& state,
                                const ActionProfile& a1, const ActionProfile& a2, Rng& rng) {
  CampaignState next = state;
  for (const Battle& b : battles(campaign, state, a1, a2)) {
    if (b.success >= 1.0 || (b.success > 0.0 && rng.uniform() < b.success)) next.flip(b.objective);
  }
  return next;
}

std::size_t default_horizon(const Campaign& campaign, double tail) {
  const double total = campaign.total_loss();
  const double g = campaign.discount();
  if (total <= 0.0) return 1;
  const double h = std::log(tail * (1.0 - g) / total) / std::log(g);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::max(0.0, h))));
}

namespace {

// Runs episodes on precomputed action tables; shared by simulate and
// monte_carlo so both consume random draws identically.
class EpisodeRunner {
 public:
  EpisodeRunner(const Campaign& campaign, const PolicyProfile& profile)
      : campaign_(campaign),
        profile_(profile),
        space_(campaign),
        rows_(detail::build_action_table(campaign, space_, Player::kOne,
                                         detail::ActionScope::kReduced)),
        cols_(detail::build_action_table(campaign, space_, Player::kTwo,
                                         detail::ActionScope::kReduced)) {
    check_profile(space_, profile, rows_, cols_);
  }

  const StateSpace& space() const { return space_; }

  double run(detail::StageKernel& kernel, std::size_t start, std::size_t horizon, Rng& rng,
             Trajectory* out) const {
    std::size_t s = start;
    double discount = 1.0;
    double total = 0.0;
    const std::size_t n = campaign_.num_objectives();
    for (std::size_t t = 0; t < horizon; ++t) {
      kernel.load(s);
      const std::size_t r = rng.pick(profile_.player1[s]);
      const std::size_t c = rng.pick(profile_.player2[s]);
      total += discount * kernel.loss();
      std::uint64_t mask = kernel.state().player_two_mask();
      for (const Battle& b : kernel.battles(rows_.action(s, r), cols_.action(s, c))) {
        if (b.success >= 1.0 || (b.success > 0.0 && rng.uniform() < b.success)) {
          mask ^= std::uint64_t{1} << b.objective;
        }
      }
      if (out != nullptr) {
        out->states.push_back(kernel.state());
        out->actions_p1.push_back(r);
        out->actions_p2.push_back(c);
        out->stage_losses.push_back(kernel.loss());
      }
      s = space_.encode(CampaignState::from_mask(n, mask));
      discount *= campaign_.discount();
    }
    if (out != nullptr) {
      out->states.push_back(space_.decode(s));
      out->discounted_loss = total;
    }
    return total;
  }

 private:
  const Campaign& campaign_;
  const PolicyProfile& profile_;
  StateSpace space_;
  detail::ActionTable rows_;
  detail::ActionTable cols_;
};

}  // namespace

Trajectory simulate(const Campaign& campaign, const PolicyProfile& profile,
                    const CampaignState& start, std::size_t horizon, std::uint64_t seed) {
  const EpisodeRunner runner(campaign, profile);
  const std::size_t s0 = runner.space().encode(start);
  if (horizon == 0) horizon = default_horizon(campaign);
  detail::StageKernel kernel(campaign, runner.space());
  Rng rng(seed);
  Trajectory traj;
  runner.run(kernel, s0, horizon, rng, &traj);
  return traj;
}

MonteCarloEstimate monte_carlo(const Campaign& campaign, const PolicyProfile& profile,
                               const CampaignState& start, std::size_t episodes,
                               std::uint64_t seed, std::size_t horizon, std::size_t workers) {
  if (episodes == 0) throw std::invalid_argument("monte_carlo needs at least one episode");
  const EpisodeRunner runner(campaign, profile);
  const std::size_t s0 = runner.space().encode(start);
  if (horizon == 0) horizon = default_horizon(campaign);
  std::vector<double> results(episodes);
  detail::parallel_for(episodes, detail::resolve_workers(workers),
                       [&](std::size_t begin, std::size_t end, std::size_t) {
                         detail::StageKernel kernel(campaign, runner.space());
                         for (std::size_t i = begin; i < end; ++i) {
                           Rng rng(splitmix64(seed ^ splitmix64(i)));
                           results[i] = runner.run(kernel, s0, horizon, rng, nullptr);
                         }
                       });
  double mean = 0.0;
  for (double x : results) mean += x;
  mean /= static_cast<double>(episodes);
  double var = 0.0;
  for (double x : results) var += (x - mean) * (x - mean);
  MonteCarloEstimate est;
  est.mean = mean;
  est.episodes = episodes;
  est.standard_error =
      episodes > 1 ? std::sqrt(var / static_cast<double>(episodes - 1) / static_cast<double>(episodes))
                   : 0.0;
  return est;
}

}  // namespace campaign
