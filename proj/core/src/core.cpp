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

#include "lossbound/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lossbound {

void require_finite(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw InvalidInput(std::string(what) + "[" + std::to_string(i) +
                         "] is not finite");
    }
  }
}

std::size_t count_at_least(std::span<const double> values, double threshold) {
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(),
                    [threshold](double v) { return v >= threshold; }));
}

ScoreSet::ScoreSet(double positive_score, std::vector<double> negative_scores,
                   bool is_sampled)
    : positive_(positive_score),
      negatives_(std::move(negative_scores)),
      sampled_(is_sampled) {
  if (!std::isfinite(positive_)) {
    throw InvalidInput("positive score is not finite");
  }
  if (negatives_.empty()) {
    throw InvalidInput("score set needs at least one negative score");
  }
  require_finite(negatives_, "negative_scores");
}

Rank::Rank(std::int64_t value) : value_(value) {
  if (value < 1) {
    throw InvalidInput("rank must be >= 1, got " + std::to_string(value));
  }
}

Rank compute_rank(double positive_score, std::span<const double> negatives) {
  if (!std::isfinite(positive_score)) {
    throw InvalidInput("positive score is not finite");
  }
  require_finite(negatives, "negative_scores");
  return Rank(static_cast<std::int64_t>(
                  count_at_least(negatives, positive_score)) +
              1);
}

Rank compute_rank(const ScoreSet& scores) {
  return Rank(static_cast<std::int64_t>(count_at_least(
                  scores.negative_scores(), scores.positive_score())) +
              1);
}

GammaCounts compute_gamma_counts(const ScoreSet& scores) {
  GammaCounts counts;
  counts.gamma_k =
      count_at_least(scores.negative_scores(), scores.positive_score());
  counts.gamma0_k = count_at_least(scores.negative_scores(), 0.0);
  if (!scores.is_sampled()) {
    counts.population_gamma = counts.gamma_k;
    counts.population_gamma0 = counts.gamma0_k;
  }
  return counts;
}

}  // namespace lossbound
