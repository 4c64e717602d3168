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

#ifndef CAMPAIGN_MATRIX_GAME_H_
#define CAMPAIGN_MATRIX_GAME_H_

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <vector>

namespace campaign {

// Zero-sum payoff matrix. The row player (Player 1) minimizes, the column
// player (Player 2) maximizes.
class PayoffMatrix {
 public:
  PayoffMatrix() = default;
  PayoffMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  PayoffMatrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  // Reuses storage.
  void reset(std::size_t rows, std::size_t cols, double fill = 0.0);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct GameSolution {
  double value = 0.0;
  std::vector<double> row_strategy;
  std::vector<double> col_strategy;
  bool pure = false;

  // Diagnostics filled by azs().
  std::size_t rows_eliminated = 0;
  std::size_t cols_eliminated = 0;
  bool used_lp = false;
};

struct PureSaddle {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
};

class MatrixGameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultDominanceTolerance = 1e-9;
inline constexpr double kDualityGapTolerance = 1e-8;

// Pure equilibrium if min_r max_c R == max_c min_r R within `tol`. Ties are
// broken towards the lowest index; the value is the minimax row's worst case.
std::optional<PureSaddle> find_pure_saddle(const PayoffMatrix& R,
                                           double tol = kDefaultDominanceTolerance);

struct ActionSets {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
};

// Iterated elimination of weakly dominated actions restricted to `sets`.
// Each pass scans rows then columns in index order; when a dominates b (and
// both survive), b is removed, so of two identical actions the lower index
// stays. Stops at a fixed point.
ActionSets eliminate_weakly_dominated(const PayoffMatrix& R, ActionSets sets,
                                      double tol = kDefaultDominanceTolerance);

// Solves the game on the given subsets with a dense simplex. Strategies are
// returned over the full index space, zero outside the subsets.
// Throws MatrixGameError if the certified duality gap exceeds 1e-8.
GameSolution solve_lp(const PayoffMatrix& R, const ActionSets& sets);
GameSolution solve_lp(const PayoffMatrix& R);

// Pure-saddle search, then dominance elimination, then LP on what remains.
GameSolution azs(const PayoffMatrix& R, double tol = kDefaultDominanceTolerance);

// Expected payoff of mixed strategies.
double expected_payoff(const PayoffMatrix& R, const std::vector<double>& rows,
                       const std::vector<double>& cols);

// max over columns of the row strategy's payoff minus min over rows of the
// column strategy's payoff: 0 exactly at an equilibrium.
double exploitability(const PayoffMatrix& R, const std::vector<double>& rows,
                      const std::vector<double>& cols);

}  // namespace campaign

#endif  // CAMPAIGN_MATRIX_GAME_H_
