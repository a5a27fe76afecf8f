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

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lossbound/core.hpp"

namespace lossbound {

enum class LossKind { kBce, kBpr, kCce };

inline constexpr LossKind kAllLosses[] = {LossKind::kBce, LossKind::kBpr,
                                          LossKind::kCce};

std::string_view to_string(LossKind kind);
std::optional<LossKind> parse_loss(std::string_view name);

/// Partial derivatives of a per-user loss with respect to every score.
/// d_negatives is aligned with ScoreSet::negative_scores().
struct LossGradient {
  double d_positive = 0.0;
  std::vector<double> d_negatives;
};

/// Half-width S of the symmetric score box [-S, S].
class ScoreBound {
 public:
  explicit ScoreBound(double half_width);
  double value() const noexcept { return half_width_; }

 private:
  double half_width_;
};

/// log(1 + e^x) without overflow for large |x|.
double softplus(double x);
/// Logistic function 1 / (1 + e^-x), evaluated on the non-overflowing branch.
double sigmoid(double x);

// Per-user losses. With d_i = s_i - s_+:
//   BCE = softplus(-s_+) + sum_i softplus(s_i)
//   BPR = sum_i softplus(d_i)
//   CCE = log(1 + sum_i exp(d_i))
// CCE is evaluated with a log-sum-exp shift. With a single negative it goes
// through the same softplus(d_1) call as BPR, so the two agree bitwise.
double loss_value(LossKind kind, const ScoreSet& scores);
double loss_value(LossKind kind, double positive_score,
                  std::span<const double> negatives);

LossGradient loss_gradient(LossKind kind, const ScoreSet& scores);

/// Writes dl/ds_i into d_negatives (same length as negatives) and returns
/// dl/ds_+. Allocation-free variant used by the trainer.
double loss_gradient(LossKind kind, double positive_score,
                     std::span<const double> negatives,
                     std::span<double> d_negatives);

/// True iff BPR and CCE give the identical double for a single-negative set.
/// Throws InvalidInput when the set has more than one negative.
bool check_k1_equivalence(const ScoreSet& scores);

/// Sum of per-user losses, L = sum_u l_u.
double batch_loss(LossKind kind, std::span<const ScoreSet> per_user);

/// Projected gradient descent on the box [-S, S]^(K+1) starting from `start`.
/// Because dl/ds_+ < 0 and dl/ds_i > 0 everywhere, every loss is driven to
/// the corner s_+ = S, s_i = -S.
ScoreSet minimize_in_box(LossKind kind, const ScoreSet& start,
                         ScoreBound bound, int iterations, double step);

}  // namespace lossbound
