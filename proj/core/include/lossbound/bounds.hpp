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
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lossbound/core.hpp"
#include "lossbound/hypergeom.hpp"
#include "lossbound/losses.hpp"
#include "lossbound/metrics.hpp"
#include "lossbound/sampling.hpp"

namespace lossbound {

/// Absolute slack on every loss/metric inequality. The inequalities are
/// exact in real arithmetic; this only absorbs rounding.
inline constexpr double kInequalitySlack = 1e-9;

/// -log ndcg <= CCE <= BPR on a full score set, and BPR <= BCE when s_+ >= 0.
struct ChainCheck {
  bool ndcg_le_cce = false;
  bool cce_le_bpr = false;
  std::optional<bool> bpr_le_bce;  // absent when s_+ < 0

  bool all() const {
    return ndcg_le_cce && cce_le_bpr && bpr_le_bce.value_or(true);
  }
};

ChainCheck verify_full_chain(const ScoreSet& scores);

/// Lower bounds of the sampled losses in terms of the sampled Gamma counts:
///   BPR >= |Gamma^K| ln 2,  BCE >= |Gamma^K_0| ln 2,  CCE >= ln |Gamma^K|.
/// The CCE bound is vacuous (reported as 0) when |Gamma^K| = 0.
struct LowerBoundCheck {
  bool bpr = false;
  bool bce = false;
  bool cce = false;
  bool cce_vacuous = false;
  double bpr_bound = 0.0;
  double bce_bound = 0.0;
  double cce_bound = 0.0;

  bool all() const { return bpr && bce && cce; }
};

LowerBoundCheck verify_sampled_lower_bounds(const ScoreSet& scores);

enum class ScoreGenerator {
  kUniform,   // U[-5, 5]
  kGaussian,  // N(0, 2^2)
  kNearTie,   // most negatives exactly equal to s_+ or to 0
};

std::string_view to_string(ScoreGenerator gen);

/// Random score set with 1..max_negatives negatives. When
/// `nonnegative_positive` is set, s_+ is redrawn until it is >= 0.
ScoreSet generate_scores(ScoreGenerator gen, std::size_t max_negatives,
                         bool sampled, bool nonnegative_positive, Rng& rng);

/// Full negative population of size `population` whose positive has the given
/// true rank: exactly rank - 1 negatives score >= s_+ = 0.5, and a random share
/// of the rest fall in [0, s_+) so that |Gamma_0| > |Gamma| in general.
ScoreSet make_rank_scenario(std::size_t population, Rank rank, Rng& rng);

struct Counterexample {
  std::string check;
  ScoreSet scores;
};

struct FuzzSummary {
  std::string name;
  ScoreGenerator generator = ScoreGenerator::kUniform;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::optional<Counterexample> first_failure;
};

/// Full-set chain check on `cases` random score sets with s_+ >= 0.
FuzzSummary fuzz_full_chain(std::size_t cases, std::uint64_t seed,
                            ScoreGenerator gen);

/// Sampled lower-bound check on `cases` random sampled score sets.
FuzzSummary fuzz_sampled_lower_bounds(std::size_t cases, std::uint64_t seed,
                                      ScoreGenerator gen);

/// Monte Carlo outcome for one (loss, metric) pair.
struct LossBoundStats {
  LossKind loss = LossKind::kBpr;
  MetricKind metric = MetricKind::kNdcg;
  std::size_t trials = 0;
  std::size_t hits = 0;             // trials with -log metric(r_+) <= loss
  std::size_t lower_bound_passes = 0;     // trials where the sampled lower bound held
  double frequency = 0.0;
  double theoretical_bound = 0.0;
  double std_err = 0.0;

  /// frequency >= theoretical_bound - 3 std_err
  bool consistent() const {
    return frequency >= theoretical_bound - 3.0 * std_err;
  }
};

struct BoundScenario {
  std::size_t population = 0;
  std::size_t k = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::int64_t true_rank = 1;
  std::size_t gamma = 0;
  std::size_t gamma0 = 0;
  std::string generator;
};

struct BoundReport {
  BoundScenario scenario;
  MetricKind metric = MetricKind::kNdcg;
  std::vector<LossBoundStats> per_loss;  // BCE, BPR, CCE

  bool all_consistent() const;
  bool all_lower_bounds_hold() const;
};

/// Draws K negatives `trials` times from the full population and records how
/// often -log metric(r_+), with r_+ the TRUE rank, is at most each sampled
/// loss. Trials are split into a fixed number of shards, each with its own
/// sampler stream, so the result does not depend on `workers`.
BoundReport monte_carlo_bound_check(const ScoreSet& full_scores,
                                    const SamplerConfig& config,
                                    MetricKind metric, std::size_t trials,
                                    unsigned workers = 1);

struct SurfaceCell {
  std::size_t k = 0;
  std::int64_t rank = 1;
  LossKind loss = LossKind::kBpr;
  MetricKind metric = MetricKind::kNdcg;
  BoundProbability bound;
};

/// Bound probabilities for every (K, r_+) pair, K-major. BCE cells use
/// `gamma0` successes when given and the worst case |Gamma_0| = r_+ - 1
/// otherwise. Throws InvalidInput on empty ranges, K outside [1, N] or r_+
/// outside [1, N + 1].
std::vector<SurfaceCell> bound_surface(std::size_t population,
                                       std::span<const std::size_t> ks,
                                       std::span<const std::int64_t> ranks,
                                       MetricKind metric, LossKind loss,
                                       std::optional<std::size_t> gamma0 = {});

// CSV writers. Header rows:
//   surface:     K,r_plus,loss,metric,lower_bound
//   monte carlo: loss,metric,trials,frequency,theoretical_bound,std_err,
//                scenario,population,k,r_plus
void write_surface_csv(std::ostream& out, std::span<const SurfaceCell> cells,
                       bool header = true);
void write_monte_carlo_csv(std::ostream& out,
                           std::span<const BoundReport> reports);

}  // namespace lossbound
