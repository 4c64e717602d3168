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

#include "campaign/matrix_game.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace campaign {

PayoffMatrix::PayoffMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw std::invalid_argument("ragged payoff matrix");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

void PayoffMatrix::reset(std::size_t rows, std::size_t cols, double fill) {
  rows_ = rows;
  cols_ = cols;
  data_.assign(rows * cols, fill);
}

std::optional<PureSaddle> find_pure_saddle(const PayoffMatrix& R, double tol) {
  if (R.rows() == 0 || R.cols() == 0) throw std::invalid_argument("empty payoff matrix");
  std::size_t best_row = 0;
  double minimax = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < R.rows(); ++r) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < R.cols(); ++c) worst = std::max(worst, R(r, c));
    if (worst < minimax) {
      minimax = worst;
      best_row = r;
    }
  }
  std::size_t best_col = 0;
  double maximin = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < R.cols(); ++c) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < R.rows(); ++r) worst = std::min(worst, R(r, c));
    if (worst > maximin) {
      maximin = worst;
      best_col = c;
    }
  }
  if (minimax - maximin > tol) return std::nullopt;
  return PureSaddle{best_row, best_col, minimax};
}

ActionSets eliminate_weakly_dominated(const PayoffMatrix& R, ActionSets sets, double tol) {
  std::vector<char> row_alive(sets.rows.size(), 1);
  std::vector<char> col_alive(sets.cols.size(), 1);
  auto row_dominates = [&](std::size_t a, std::size_t b) {
    for (std::size_t j = 0; j < sets.cols.size(); ++j) {
      if (!col_alive[j]) continue;
      if (R(a, sets.cols[j]) > R(b, sets.cols[j]) + tol) return false;
    }
    return true;
  };
  auto col_dominates = [&](std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < sets.rows.size(); ++i) {
      if (!row_alive[i]) continue;
      if (R(sets.rows[i], a) < R(sets.rows[i], b) - tol) return false;
    }
    return true;
  };

  bool reduced = true;
  while (reduced) {
    reduced = false;
    for (std::size_t i = 0; i < sets.rows.size(); ++i) {
      if (!row_alive[i]) continue;
      for (std::size_t k = 0; k < sets.rows.size(); ++k) {
        if (k == i || !row_alive[k]) continue;
        if (row_dominates(sets.rows[i], sets.rows[k])) {
          row_alive[k] = 0;
          reduced = true;
        }
      }
    }
    for (std::size_t j = 0; j < sets.cols.size(); ++j) {
      if (!col_alive[j]) continue;
      for (std::size_t k = 0; k < sets.cols.size(); ++k) {
        if (k == j || !col_alive[k]) continue;
        if (col_dominates(sets.cols[j], sets.cols[k])) {
          col_alive[k] = 0;
          reduced = true;
        }
      }
    }
  }

  ActionSets out;
  for (std::size_t i = 0; i < sets.rows.size(); ++i) {
    if (row_alive[i]) out.rows.push_back(sets.rows[i]);
  }
  for (std::size_t j = 0; j < sets.cols.size(); ++j) {
    if (col_alive[j]) out.cols.push_back(sets.cols[j]);
  }
  return out;
}

namespace {

// Dense tableau for  max sum(x)  s.t.  B^T x <= 1, x >= 0  with B > 0.
// Dantzig pricing, switching to Bland's rule after a run of degenerate
// pivots so the method cannot cycle.
class Tableau {
 public:
  Tableau(const PayoffMatrix& R, const ActionSets& sets, double shift)
      : n_(sets.rows.size()), m_(sets.cols.size()), width_(n_ + m_ + 1) {
    t_.assign((m_ + 1) * width_, 0.0);
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t r = 0; r < n_; ++r) at(i, r) = R(sets.rows[r], sets.cols[i]) - shift;
      at(i, n_ + i) = 1.0;
      at(i, width_ - 1) = 1.0;
      basis_[i] = n_ + i;
    }
    for (std::size_t r = 0; r < n_; ++r) at(m_, r) = -1.0;
  }

  void solve() {
    constexpr double kEps = 1e-11;
    const std::size_t max_pivots = 50 * (n_ + m_) + 1000;
    int degenerate_run = 0;
    for (std::size_t pivots = 0; pivots < max_pivots; ++pivots) {
      const bool bland = degenerate_run > 20;
      std::size_t enter = width_;
      double most_negative = -kEps;
      for (std::size_t j = 0; j + 1 < width_; ++j) {
        const double rc = at(m_, j);
        if (rc < most_negative) {
          enter = j;
          if (bland) break;
          most_negative = rc;
        }
      }
      if (enter == width_) return;

      std::size_t leave = m_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = at(i, enter);
        if (a <= kEps) continue;
        const double ratio = at(i, width_ - 1) / a;
        if (ratio < best_ratio - 1e-15) {
          best_ratio = ratio;
          leave = i;
        } else if (ratio <= best_ratio + 1e-15 && basis_[i] < basis_[leave]) {
          leave = i;  // tie: smallest basic variable leaves
        }
      }
      if (leave == m_) throw MatrixGameError("simplex: unbounded direction in a bounded game LP");
      degenerate_run = best_ratio <= 1e-14 ? degenerate_run + 1 : 0;
      pivot(leave, enter);
    }
    throw MatrixGameError("simplex: pivot limit exceeded");
  }

  // Primal x over rows and dual y over columns.
  void extract(std::vector<double>& x, std::vector<double>& y) const {
    x.assign(n_, 0.0);
    y.assign(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x[basis_[i]] = at(i, width_ - 1);
    }
    for (std::size_t c = 0; c < m_; ++c) y[c] = at(m_, n_ + c);
  }

 private:
  double& at(std::size_t i, std::size_t j) { return t_[i * width_ + j]; }
  double at(std::size_t i, std::size_t j) const { return t_[i * width_ + j]; }

  void pivot(std::size_t row, std::size_t col) {
    const double p = at(row, col);
    for (std::size_t j = 0; j < width_; ++j) at(row, j) /= p;
    at(row, col) = 1.0;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == row) continue;
      const double f = at(i, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) at(i, j) -= f * at(row, j);
      at(i, col) = 0.0;
    }
    basis_[row] = col;
  }

  std::size_t n_;
  std::size_t m_;
  std::size_t width_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
};

void normalize(std::vector<double>& v) {
  double total = 0.0;
  for (double& p : v) {
    if (p < 0.0) p = 0.0;
    total += p;
  }
  if (total <= 0.0) throw MatrixGameError("simplex produced an empty strategy");
  for (double& p : v) p /= total;
}

}  // namespace

GameSolution solve_lp(const PayoffMatrix& R, const ActionSets& sets) {
  if (sets.rows.empty() || sets.cols.empty()) {
    throw std::invalid_argument("solve_lp needs at least one row and one column");
  }
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t r : sets.rows) {
    for (std::size_t c : sets.cols) {
      const double v = R(r, c);
      if (!std::isfinite(v)) throw std::invalid_argument("payoff matrix has non-finite entries");
      lowest = std::min(lowest, v);
    }
  }
  // Shifted payoffs are >= 1, so the game value is positive.
  const double shift = lowest - 1.0;
  Tableau tableau(R, sets, shift);
  tableau.solve();
  std::vector<double> x, y;
  tableau.extract(x, y);
  const double sum_x = std::accumulate(x.begin(), x.end(), 0.0);
  if (!(sum_x > 0.0)) throw MatrixGameError("simplex returned a zero primal solution");

  GameSolution sol;
  sol.value = 1.0 / sum_x + shift;
  normalize(x);
  normalize(y);
  sol.row_strategy.assign(R.rows(), 0.0);
  sol.col_strategy.assign(R.cols(), 0.0);
  for (std::size_t i = 0; i < sets.rows.size(); ++i) sol.row_strategy[sets.rows[i]] = x[i];
  for (std::size_t j = 0; j < sets.cols.size(); ++j) sol.col_strategy[sets.cols[j]] = y[j];

  // Certify on the sub-game: the row strategy caps the loss from above, the
  // column strategy guarantees it from below.
  double upper = -std::numeric_limits<double>::infinity();
  for (std::size_t c : sets.cols) {
    double e = 0.0;
    for (std::size_t r : sets.rows) e += sol.row_strategy[r] * R(r, c);
    upper = std::max(upper, e);
  }
  double lower = std::numeric_limits<double>::infinity();
  for (std::size_t r : sets.rows) {
    double e = 0.0;
    for (std::size_t c : sets.cols) e += sol.col_strategy[c] * R(r, c);
    lower = std::min(lower, e);
  }
  if (upper - lower > kDualityGapTolerance || sol.value > upper + kDualityGapTolerance ||
      sol.value < lower - kDualityGapTolerance) {
    throw MatrixGameError("simplex duality gap " + std::to_string(upper - lower) +
                          " exceeds tolerance");
  }
  return sol;
}

GameSolution solve_lp(const PayoffMatrix& R) {
  ActionSets all;
  all.rows.resize(R.rows());
  all.cols.resize(R.cols());
  std::iota(all.rows.begin(), all.rows.end(), 0);
  std::iota(all.cols.begin(), all.cols.end(), 0);
  return solve_lp(R, all);
}

GameSolution azs(const PayoffMatrix& R, double tol) {
  if (auto saddle = find_pure_saddle(R, tol)) {
    GameSolution sol;
    sol.value = saddle->value;
    sol.row_strategy.assign(R.rows(), 0.0);
    sol.col_strategy.assign(R.cols(), 0.0);
    sol.row_strategy[saddle->row] = 1.0;
    sol.col_strategy[saddle->col] = 1.0;
    sol.pure = true;
    return sol;
  }
  ActionSets all;
  all.rows.resize(R.rows());
  all.cols.resize(R.cols());
  std::iota(all.rows.begin(), all.rows.end(), 0);
  std::iota(all.cols.begin(), all.cols.end(), 0);
  const ActionSets kept = eliminate_weakly_dominated(R, all, tol);
  GameSolution sol = solve_lp(R, kept);
  sol.rows_eliminated = R.rows() - kept.rows.size();
  sol.cols_eliminated = R.cols() - kept.cols.size();
  sol.used_lp = true;
  return sol;
}

double expected_payoff(const PayoffMatrix& R, const std::vector<double>& rows,
                       const std::vector<double>& cols) {
  double total = 0.0;
  for (std::size_t r = 0; r < R.rows(); ++r) {
    if (rows[r] == 0.0) continue;
    for (std::size_t c = 0; c < R.cols(); ++c) total += rows[r] * cols[c] * R(r, c);
  }
  return total;
}

double exploitability(const PayoffMatrix& R, const std::vector<double>& rows,
                      const std::vector<double>& cols) {
  double upper = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < R.cols(); ++c) {
    double e = 0.0;
    for (std::size_t r = 0; r < R.rows(); ++r) e += rows[r] * R(r, c);
    upper = std::max(upper, e);
  }
  double lower = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < R.rows(); ++r) {
    double e = 0.0;
    for (std::size_t c = 0; c < R.cols(); ++c) e += cols[c] * R(r, c);
    lower = std::min(lower, e);
  }
  return upper - lower;
}

}  // namespace campaign
