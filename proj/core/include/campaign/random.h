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

#ifndef CAMPAIGN_RANDOM_H_
#define CAMPAIGN_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>

namespace campaign {

// Seeded 64-bit generator. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; the conversions below avoid the
// implementation-defined std:: distributions so a seed maps to the same
// draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() {
    ++draws_;
    return engine_();
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound == 0 ? 0 : (~std::uint64_t{0} / bound) * bound;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % bound;
  }

  // Index drawn from a discrete distribution; falls back to the last index
  // with positive mass when rounding leaves the draw past the total.
  std::size_t pick(std::span<const double> probabilities) {
    const double u = uniform();
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
      if (probabilities[i] <= 0.0) continue;
      acc += probabilities[i];
      last = i;
      if (u < acc) return i;
    }
    return last;
  }

  // Number of raw 64-bit draws consumed so far.
  std::uint64_t draws() const { return draws_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
};

}  // namespace campaign

#endif  // CAMPAIGN_RANDOM_H_
