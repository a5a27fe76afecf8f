// Copyright 2026 The lossbound Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lossbound/error.hpp"

namespace lossbound {

/// Score of one positive item together with the scores of its negatives.
///
/// The negatives are either the whole negative catalog of a user (a "full"
/// set, from which the true rank follows) or a uniformly drawn K-subset of it
/// (a "sampled" set, K = number of negatives). Construction validates that
/// there is at least one negative and that every score is finite.
class ScoreSet {
 public:
  ScoreSet(double positive_score, std::vector<double> negative_scores,
           bool is_sampled);

  static ScoreSet full(double positive_score, std::vector<double> negatives) {
    return ScoreSet(positive_score, std::move(negatives), false);
  }
  static ScoreSet sampled(double positive_score,
                          std::vector<double> negatives) {
    return ScoreSet(positive_score, std::move(negatives), true);
  }

  double positive_score() const noexcept { return positive_; }
  std::span<const double> negative_scores() const noexcept {
    return negatives_;
  }
  bool is_sampled() const noexcept { return sampled_; }
  std::size_t num_negatives() const noexcept { return negatives_.size(); }

 private:
  double positive_;
  std::vector<double> negatives_;
  bool sampled_;
};

/// 1-based rank of the positive item. Ties count against the positive.
class Rank {
 public:
  explicit Rank(std::int64_t value);

  std::int64_t value() const noexcept { return value_; }

  friend auto operator<=>(const Rank&, const Rank&) = default;

 private:
  std::int64_t value_;
};

/// Cardinalities of the "at least as high as the positive" and
/// "non-negative" negative subsets. The population fields are only present
/// when they were computed from a full (non-sampled) score set.
struct GammaCounts {
  std::size_t gamma_k = 0;
  std::size_t gamma0_k = 0;
  std::optional<std::size_t> population_gamma;
  std::optional<std::size_t> population_gamma0;

  friend bool operator==(const GammaCounts&, const GammaCounts&) = default;
};

/// Throws InvalidInput unless every value is finite.
void require_finite(std::span<const double> values, const char* what);

/// Number of values v with v >= threshold (exact comparison).
std::size_t count_at_least(std::span<const double> values, double threshold);

/// 1 + #{i : s_i >= s_+}.
Rank compute_rank(const ScoreSet& scores);

Rank compute_rank(double positive_score, std::span<const double> negatives);

GammaCounts compute_gamma_counts(const ScoreSet& scores);

}  // namespace lossbound
