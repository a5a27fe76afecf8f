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

#include "lossbound/hypergeom.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace lossbound {

namespace mp = boost::multiprecision;

void HypergeomParams::validate() const {
  if (successes > population) {
    throw InvalidInput("hypergeometric successes (" +
                       std::to_string(successes) + ") exceed population (" +
                       std::to_string(population) + ")");
  }
  if (draws > population) {
    throw InvalidInput("hypergeometric draws (" + std::to_string(draws) +
                       ") exceed population (" + std::to_string(population) +
                       ")");
  }
}

std::int64_t HypergeomParams::support_min() const {
  const auto failures = static_cast<std::int64_t>(population - successes);
  return std::max<std::int64_t>(0, static_cast<std::int64_t>(draws) - failures);
}

std::int64_t HypergeomParams::support_max() const {
  return static_cast<std::int64_t>(std::min(draws, successes));
}

namespace {

constexpr std::uint64_t kTableRows = 128;

const std::vector<std::vector<BigInt>>& pascal_table() {
  static const std::vector<std::vector<BigInt>> table = [] {
    std::vector<std::vector<BigInt>> rows(kTableRows + 1);
    for (std::uint64_t n = 0; n <= kTableRows; ++n) {
      rows[n].resize(n + 1);
      rows[n][0] = 1;
      rows[n][n] = 1;
      for (std::uint64_t k = 1; k < n; ++k) {
        rows[n][k] = rows[n - 1][k - 1] + rows[n - 1][k];
      }
    }
    return rows;
  }();
  return table;
}

bool use_exact(const HypergeomParams& params, Evaluation eval) {
  switch (eval) {
    case Evaluation::kExact:
      return true;
    case Evaluation::kFloating:
      return false;
    case Evaluation::kAuto:
      break;
  }
  return params.population <= kExactPopulationLimit;
}

// Sum over i in [lo, hi] of C(M, i) C(N - M, K - i).
BigInt weight_sum(const HypergeomParams& p, std::int64_t lo, std::int64_t hi) {
  BigInt sum = 0;
  for (std::int64_t i = lo; i <= hi; ++i) {
    const auto ui = static_cast<std::uint64_t>(i);
    sum += binomial(p.successes, ui) *
           binomial(p.population - p.successes, p.draws - ui);
  }
  return sum;
}

}  // namespace

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (n <= kTableRows) return pascal_table()[n][k];
  k = std::min(k, n - k);
  BigInt result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

double to_double(const Rational& value) {
  BigInt num = mp::numerator(value);
  BigInt den = mp::denominator(value);
  if (num == 0) return 0.0;
  const bool negative = num < 0;
  if (negative) num = -num;
  const auto num_bits = static_cast<long>(mp::msb(num));
  const auto den_bits = static_cast<long>(mp::msb(den));
  // Scale so the integer quotient carries 64 significant bits.
  const long shift = 64 - (num_bits - den_bits);
  BigInt quotient = shift >= 0 ? BigInt((num << shift) / den)
                               : BigInt(num / (den << -shift));
  const double result =
      std::ldexp(quotient.convert_to<double>(), static_cast<int>(-shift));
  return negative ? -result : result;
}

Rational hypergeom_pmf_exact(const HypergeomParams& params, std::int64_t x) {
  params.validate();
  if (x < params.support_min() || x > params.support_max()) return 0;
  return Rational(weight_sum(params, x, x),
                  binomial(params.population, params.draws));
}

Rational hypergeom_cdf_exact(const HypergeomParams& params, std::int64_t x) {
  params.validate();
  if (x < params.support_min()) return 0;
  if (x >= params.support_max()) return 1;
  return Rational(weight_sum(params, params.support_min(), x),
                  binomial(params.population, params.draws));
}

std::vector<double> hypergeom_pmf_table(const HypergeomParams& params,
                                        Evaluation eval) {
  params.validate();
  std::vector<double> table(params.draws + 1, 0.0);
  const std::int64_t lo = params.support_min();
  const std::int64_t hi = params.support_max();

  if (use_exact(params, eval)) {
    const BigInt total = binomial(params.population, params.draws);
    for (std::int64_t x = lo; x <= hi; ++x) {
      table[static_cast<std::size_t>(x)] =
          to_double(Rational(weight_sum(params, x, x), total));
    }
    return table;
  }

  // Unnormalised weights from the mode outward via the ratio
  //   p(x+1)/p(x) = (M-x)(K-x) / ((x+1)(N-M-K+x+1)),
  // then normalised over the support.
  const double n = static_cast<double>(params.population);
  const double m = static_cast<double>(params.successes);
  const double k = static_cast<double>(params.draws);
  auto mode = static_cast<std::int64_t>(std::floor((k + 1) * (m + 1) / (n + 2)));
  mode = std::clamp(mode, lo, hi);

  table[static_cast<std::size_t>(mode)] = 1.0;
  for (std::int64_t x = mode; x < hi; ++x) {
    const double xd = static_cast<double>(x);
    const double ratio = (m - xd) * (k - xd) / ((xd + 1) * (n - m - k + xd + 1));
    table[static_cast<std::size_t>(x + 1)] =
        table[static_cast<std::size_t>(x)] * ratio;
  }
  for (std::int64_t x = mode; x > lo; --x) {
    const double xd = static_cast<double>(x);
    const double ratio = xd * (n - m - k + xd) / ((m - xd + 1) * (k - xd + 1));
    table[static_cast<std::size_t>(x - 1)] =
        table[static_cast<std::size_t>(x)] * ratio;
  }
  double total = 0.0;
  for (double w : table) total += w;
  for (double& w : table) w /= total;
  return table;
}

double hypergeom_pmf(const HypergeomParams& params, std::int64_t x,
                     Evaluation eval) {
  params.validate();
  if (x < params.support_min() || x > params.support_max()) return 0.0;
  if (use_exact(params, eval)) return to_double(hypergeom_pmf_exact(params, x));
  return hypergeom_pmf_table(params, eval)[static_cast<std::size_t>(x)];
}

double hypergeom_cdf(const HypergeomParams& params, std::int64_t x,
                     Evaluation eval) {
  params.validate();
  if (x < params.support_min()) return 0.0;
  if (x >= params.support_max()) return 1.0;
  if (use_exact(params, eval)) return to_double(hypergeom_cdf_exact(params, x));
  const auto table = hypergeom_pmf_table(params, eval);
  double sum = 0.0;
  for (std::int64_t i = params.support_min(); i <= x; ++i) {
    sum += table[static_cast<std::size_t>(i)];
  }
  return std::min(sum, 1.0);
}

double evaluation_point(MetricKind metric, LossKind loss, Rank rank) {
  const double r = static_cast<double>(rank.value());
  if (metric == MetricKind::kNdcg) {
    return loss == LossKind::kCce ? std::log2(1.0 + r)
                                  : std::log2(std::log2(1.0 + r));
  }
  return loss == LossKind::kCce ? r : std::log2(r);
}

std::int64_t floored_evaluation_point(MetricKind metric, LossKind loss,
                                      Rank rank) {
  const auto r = static_cast<std::uint64_t>(rank.value());
  auto floor_log2 = [](std::uint64_t v) {
    return static_cast<std::int64_t>(std::bit_width(v)) - 1;
  };
  if (metric == MetricKind::kNdcg) {
    const std::int64_t outer = floor_log2(r + 1);
    if (loss == LossKind::kCce) return outer;
    // floor(log2(y)) == floor(log2(floor(y))) for y >= 1.
    return floor_log2(static_cast<std::uint64_t>(outer));
  }
  return loss == LossKind::kCce ? rank.value() : floor_log2(r);
}

void validate_query(const BoundProbabilityQuery& query) {
  query.params.validate();
  const auto r = static_cast<std::uint64_t>(query.rank.value());
  if (r > query.params.population + 1) {
    throw InvalidInput("rank " + std::to_string(r) +
                       " exceeds negative population + 1");
  }
  if (query.loss != LossKind::kBce && query.params.successes != r - 1) {
    throw InvalidInput(
        "for BPR/CCE bounds successes must equal rank - 1 (got successes=" +
        std::to_string(query.params.successes) +
        ", rank=" + std::to_string(r) + ")");
  }
}

Rational bound_probability_exact(const BoundProbabilityQuery& query) {
  validate_query(query);
  const std::int64_t t =
      floored_evaluation_point(query.metric, query.loss, query.rank);
  return Rational(1) - hypergeom_cdf_exact(query.params, t);
}

BoundProbability bound_probability(const BoundProbabilityQuery& query,
                                   Evaluation eval) {
  validate_query(query);
  BoundProbability out;
  out.evaluation_point =
      evaluation_point(query.metric, query.loss, query.rank);
  out.floored_point =
      floored_evaluation_point(query.metric, query.loss, query.rank);
  if (use_exact(query.params, eval)) {
    out.lower_bound = to_double(
        Rational(1) - hypergeom_cdf_exact(query.params, out.floored_point));
  } else {
    out.lower_bound = std::clamp(
        1.0 - hypergeom_cdf(query.params, out.floored_point, eval), 0.0, 1.0);
  }
  return out;
}

WorstCaseOrdering worst_case_ordering(const HypergeomParams& params_gamma,
                                      std::uint64_t gamma0, Rank rank,
                                      MetricKind metric) {
  params_gamma.validate();
  if (gamma0 < params_gamma.successes) {
    throw InvalidInput("worst-case ordering needs |Gamma_0| >= |Gamma|");
  }
  if (gamma0 > params_gamma.population) {
    throw InvalidInput("|Gamma_0| exceeds the negative population");
  }
  HypergeomParams params_gamma0 = params_gamma;
  params_gamma0.successes = gamma0;

  const BoundProbabilityQuery bce{params_gamma0, rank, metric, LossKind::kBce};
  const BoundProbabilityQuery bpr{params_gamma, rank, metric, LossKind::kBpr};
  const BoundProbabilityQuery cce{params_gamma, rank, metric, LossKind::kCce};

  auto describe = [](const BoundProbabilityQuery& q, double lower_bound) {
    return BoundProbability{lower_bound,
                            evaluation_point(q.metric, q.loss, q.rank),
                            floored_evaluation_point(q.metric, q.loss, q.rank)};
  };

  WorstCaseOrdering out;
  bool ordered;
  if (use_exact(params_gamma, Evaluation::kAuto)) {
    const Rational p_bce = bound_probability_exact(bce);
    const Rational p_bpr = bound_probability_exact(bpr);
    const Rational p_cce = bound_probability_exact(cce);
    out = {describe(bce, to_double(p_bce)), describe(bpr, to_double(p_bpr)),
           describe(cce, to_double(p_cce))};
    ordered = p_bce >= p_bpr && p_bpr >= p_cce;
  } else {
    out = {bound_probability(bce), bound_probability(bpr),
           bound_probability(cce)};
    constexpr double kSlack = 1e-12;
    ordered = out.bce.lower_bound + kSlack >= out.bpr.lower_bound &&
              out.bpr.lower_bound + kSlack >= out.cce.lower_bound;
  }
  if (!ordered) {
    throw std::logic_error("bound probabilities violate BCE >= BPR >= CCE");
  }
  return out;
}

}  // namespace lossbound
