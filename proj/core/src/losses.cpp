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

#include "lossbound/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lossbound {

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kBce:
      return "bce";
    case LossKind::kBpr:
      return "bpr";
    case LossKind::kCce:
      return "cce";
  }
  return "unknown";
}

std::optional<LossKind> parse_loss(std::string_view name) {
  if (name == "bce") return LossKind::kBce;
  if (name == "bpr") return LossKind::kBpr;
  if (name == "cce") return LossKind::kCce;
  return std::nullopt;
}

ScoreBound::ScoreBound(double half_width) : half_width_(half_width) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw InvalidInput("score bound S must be a finite positive real");
  }
}

double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

namespace {

void validate(double positive_score, std::span<const double> negatives) {
  if (!std::isfinite(positive_score)) {
    throw InvalidInput("positive score is not finite");
  }
  if (negatives.empty()) {
    throw InvalidInput("loss needs at least one negative score");
  }
  require_finite(negatives, "negative_scores");
}

double bce_value(double pos, std::span<const double> negs) {
  double sum = softplus(-pos);
  for (double s : negs) sum += softplus(s);
  return sum;
}

double bpr_value(double pos, std::span<const double> negs) {
  double sum = 0.0;
  for (double s : negs) sum += softplus(s - pos);
  return sum;
}

double cce_value(double pos, std::span<const double> negs) {
  if (negs.size() == 1) return bpr_value(pos, negs);
  double shift = 0.0;
  for (double s : negs) shift = std::max(shift, s - pos);
  if (shift == 0.0) {
    double sum = 0.0;
    for (double s : negs) sum += std::exp(s - pos);
    return std::log1p(sum);
  }
  double sum = std::exp(-shift);
  for (double s : negs) sum += std::exp(s - pos - shift);
  return shift + std::log(sum);
}

double bce_gradient(double pos, std::span<const double> negs,
                    std::span<double> out) {
  for (std::size_t i = 0; i < negs.size(); ++i) out[i] = sigmoid(negs[i]);
  return -sigmoid(-pos);
}

double bpr_gradient(double pos, std::span<const double> negs,
                    std::span<double> out) {
  double d_pos = 0.0;
  for (std::size_t i = 0; i < negs.size(); ++i) {
    out[i] = sigmoid(negs[i] - pos);
    d_pos -= out[i];
  }
  return d_pos;
}

double cce_gradient(double pos, std::span<const double> negs,
                    std::span<double> out) {
  if (negs.size() == 1) return bpr_gradient(pos, negs, out);
  double shift = 0.0;
  for (double s : negs) shift = std::max(shift, s - pos);
  const double w_positive = std::exp(-shift);
  double w_negatives = 0.0;
  for (std::size_t i = 0; i < negs.size(); ++i) {
    out[i] = std::exp(negs[i] - pos - shift);
    w_negatives += out[i];
  }
  const double total = w_positive + w_negatives;
  for (double& g : out) g /= total;
  return -w_negatives / total;
}

}  // namespace

double loss_value(LossKind kind, double positive_score,
                  std::span<const double> negatives) {
  validate(positive_score, negatives);
  switch (kind) {
    case LossKind::kBce:
      return bce_value(positive_score, negatives);
    case LossKind::kBpr:
      return bpr_value(positive_score, negatives);
    case LossKind::kCce:
      return cce_value(positive_score, negatives);
  }
  throw InvalidInput("unknown loss kind");
}

double loss_value(LossKind kind, const ScoreSet& scores) {
  return loss_value(kind, scores.positive_score(), scores.negative_scores());
}

double loss_gradient(LossKind kind, double positive_score,
                     std::span<const double> negatives,
                     std::span<double> d_negatives) {
  validate(positive_score, negatives);
  if (d_negatives.size() != negatives.size()) {
    throw InvalidInput("gradient buffer length does not match negatives");
  }
  switch (kind) {
    case LossKind::kBce:
      return bce_gradient(positive_score, negatives, d_negatives);
    case LossKind::kBpr:
      return bpr_gradient(positive_score, negatives, d_negatives);
    case LossKind::kCce:
      return cce_gradient(positive_score, negatives, d_negatives);
  }
  throw InvalidInput("unknown loss kind");
}

LossGradient loss_gradient(LossKind kind, const ScoreSet& scores) {
  LossGradient grad;
  grad.d_negatives.resize(scores.num_negatives());
  grad.d_positive = loss_gradient(kind, scores.positive_score(),
                                  scores.negative_scores(), grad.d_negatives);
  return grad;
}

bool check_k1_equivalence(const ScoreSet& scores) {
  if (scores.num_negatives() != 1) {
    throw InvalidInput("K=1 equivalence needs exactly one negative, got " +
                       std::to_string(scores.num_negatives()));
  }
  return loss_value(LossKind::kBpr, scores) ==
         loss_value(LossKind::kCce, scores);
}

double batch_loss(LossKind kind, std::span<const ScoreSet> per_user) {
  double total = 0.0;
  for (const auto& scores : per_user) total += loss_value(kind, scores);
  return total;
}

ScoreSet minimize_in_box(LossKind kind, const ScoreSet& start,
                         ScoreBound bound, int iterations, double step) {
  if (iterations < 0 || !(step > 0.0)) {
    throw InvalidInput("projected descent needs iterations >= 0, step > 0");
  }
  const double s = bound.value();
  auto clamp = [s](double v) { return std::clamp(v, -s, s); };

  double pos = clamp(start.positive_score());
  std::vector<double> negs(start.negative_scores().begin(),
                           start.negative_scores().end());
  for (double& v : negs) v = clamp(v);
  std::vector<double> grad(negs.size());

  for (int it = 0; it < iterations; ++it) {
    const double d_pos = loss_gradient(kind, pos, negs, grad);
    pos = clamp(pos - step * d_pos);
    for (std::size_t i = 0; i < negs.size(); ++i) {
      negs[i] = clamp(negs[i] - step * grad[i]);
    }
  }
  return ScoreSet(pos, std::move(negs), start.is_sampled());
}

}  // namespace lossbound
