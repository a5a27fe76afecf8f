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

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>

#include "lossbound/core.hpp"
#include "lossbound/losses.hpp"
#include "lossbound/metrics.hpp"

namespace lossbound {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Hypergeometric(population N, successes M, draws K): number of successes
/// among K items drawn without replacement from N, of which M are successes.
struct HypergeomParams {
  std::uint64_t population = 0;
  std::uint64_t successes = 0;
  std::uint64_t draws = 0;

  /// Throws InvalidInput unless successes <= population and draws <= population.
  void validate() const;

  std::int64_t support_min() const;
  std::int64_t support_max() const;

  friend bool operator==(const HypergeomParams&,
                         const HypergeomParams&) = default;
};

/// Exact rationals are used up to this population size under kAuto.
inline constexpr std::uint64_t kExactPopulationLimit = 10'000;

enum class Evaluation {
  kAuto,      // exact for N <= kExactPopulationLimit, floating otherwise
  kExact,     // big-integer rationals
  kFloating,  // double precision, normalised over the support
};

/// C(n, k); zero when k > n. Rows n <= 128 come from a shared table that is
/// built once on first use and only read afterwards.
BigInt binomial(std::uint64_t n, std::uint64_t k);

/// Nearest double to a rational, including ones whose numerator and
/// denominator do not fit in a double on their own.
double to_double(const Rational& value);

Rational hypergeom_pmf_exact(const HypergeomParams& params, std::int64_t x);
Rational hypergeom_cdf_exact(const HypergeomParams& params, std::int64_t x);

double hypergeom_pmf(const HypergeomParams& params, std::int64_t x,
                     Evaluation eval = Evaluation::kAuto);
double hypergeom_cdf(const HypergeomParams& params, std::int64_t x,
                     Evaluation eval = Evaluation::kAuto);

/// The whole PMF over 0..draws in double precision.
std::vector<double> hypergeom_pmf_table(const HypergeomParams& params,
                                        Evaluation eval = Evaluation::kAuto);

/// Lower bound on P(-log metric(r_+) <= loss) under uniform sampling of K
/// negatives out of N.
///
/// For BPR and CCE the hypergeometric counts sampled negatives scoring at
/// least s_+, so `successes` must equal rank - 1. For BCE it counts sampled
/// non-negative scores and `successes` is the caller's |Gamma_0|.
struct BoundProbabilityQuery {
  HypergeomParams params;
  Rank rank{1};
  MetricKind metric = MetricKind::kNdcg;
  LossKind loss = LossKind::kBpr;
};

struct BoundProbability {
  double lower_bound = 0.0;
  double evaluation_point = 0.0;  // rho
  std::int64_t floored_point = 0;  // floor(rho)
};

// The CDF is evaluated at rho, where
//   ndcg/bpr, ndcg/bce : log2(log2(1 + r))
//   ndcg/cce           : log2(1 + r)
//   mrr/bpr, mrr/bce   : log2(r)
//   mrr/cce            : r
double evaluation_point(MetricKind metric, LossKind loss, Rank rank);

/// floor(rho), computed with integer arithmetic so exact powers of two never
/// round the wrong way.
std::int64_t floored_evaluation_point(MetricKind metric, LossKind loss,
                                      Rank rank);

void validate_query(const BoundProbabilityQuery& query);

/// 1 - CDF(floor(rho)) as an exact rational.
Rational bound_probability_exact(const BoundProbabilityQuery& query);

BoundProbability bound_probability(const BoundProbabilityQuery& query,
                                   Evaluation eval = Evaluation::kAuto);

struct WorstCaseOrdering {
  BoundProbability bce;
  BoundProbability bpr;
  BoundProbability cce;
};

/// Bound probabilities of all three losses at a shared rank, with |Gamma| =
/// params_gamma.successes and |Gamma_0| = gamma0 >= |Gamma| (the s_+ >= 0
/// regime). Checks BCE >= BPR >= CCE and throws std::logic_error otherwise.
WorstCaseOrdering worst_case_ordering(const HypergeomParams& params_gamma,
                                      std::uint64_t gamma0, Rank rank,
                                      MetricKind metric);

}  // namespace lossbound
