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

#include "lossbound/bounds.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <numbers>
#include <ostream>
#include <thread>

namespace lossbound {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr std::size_t kMonteCarloShards = 64;

LowerBoundCheck check_lower_bounds(double pos, std::span<const double> negs,
                                   double bce, double bpr, double cce) {
  const std::size_t gamma_k = count_at_least(negs, pos);
  const std::size_t gamma0_k = count_at_least(negs, 0.0);
  LowerBoundCheck check;
  check.bpr_bound = static_cast<double>(gamma_k) * kLn2;
  check.bce_bound = static_cast<double>(gamma0_k) * kLn2;
  check.bpr = bpr + kInequalitySlack >= check.bpr_bound;
  check.bce = bce + kInequalitySlack >= check.bce_bound;
  if (gamma_k == 0) {
    check.cce_vacuous = true;
    check.cce = true;
  } else {
    check.cce_bound = std::log(static_cast<double>(gamma_k));
    check.cce = cce + kInequalitySlack >= check.cce_bound;
  }
  return check;
}

std::size_t index_of(LossKind kind) {
  switch (kind) {
    case LossKind::kBce:
      return 0;
    case LossKind::kBpr:
      return 1;
    case LossKind::kCce:
      return 2;
  }
  return 0;
}

struct ShardCounts {
  std::array<std::size_t, 3> hits{};
  std::array<std::size_t, 3> lower_bound_passes{};
};

}  // namespace

ChainCheck verify_full_chain(const ScoreSet& scores) {
  if (scores.is_sampled()) {
    throw InvalidInput("the full-set chain needs the full negative set");
  }
  const double neg_log_ndcg = -std::log(ndcg(compute_rank(scores)));
  const double cce = loss_value(LossKind::kCce, scores);
  const double bpr = loss_value(LossKind::kBpr, scores);

  ChainCheck check;
  check.ndcg_le_cce = neg_log_ndcg <= cce + kInequalitySlack;
  check.cce_le_bpr = cce <= bpr + kInequalitySlack;
  if (scores.positive_score() >= 0.0) {
    const double bce = loss_value(LossKind::kBce, scores);
    check.bpr_le_bce = bpr <= bce + kInequalitySlack;
  }
  return check;
}

LowerBoundCheck verify_sampled_lower_bounds(const ScoreSet& scores) {
  if (!scores.is_sampled()) {
    throw InvalidInput("sampled lower bounds need a sampled score set");
  }
  return check_lower_bounds(scores.positive_score(), scores.negative_scores(),
                            loss_value(LossKind::kBce, scores),
                            loss_value(LossKind::kBpr, scores),
                            loss_value(LossKind::kCce, scores));
}

std::string_view to_string(ScoreGenerator gen) {
  switch (gen) {
    case ScoreGenerator::kUniform:
      return "uniform";
    case ScoreGenerator::kGaussian:
      return "gaussian";
    case ScoreGenerator::kNearTie:
      return "near_tie";
  }
  return "unknown";
}

ScoreSet generate_scores(ScoreGenerator gen, std::size_t max_negatives,
                         bool sampled, bool nonnegative_positive, Rng& rng) {
  if (max_negatives == 0) throw InvalidInput("max_negatives must be >= 1");
  std::uniform_int_distribution<std::size_t> size_dist(1, max_negatives);
  std::uniform_real_distribution<double> uniform(-5.0, 5.0);
  std::normal_distribution<double> gaussian(0.0, 2.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  auto draw = [&]() {
    return gen == ScoreGenerator::kGaussian ? gaussian(rng) : uniform(rng);
  };

  double positive = draw();
  if (nonnegative_positive) positive = std::abs(positive);

  const std::size_t k = size_dist(rng);
  std::vector<double> negatives(k);
  for (double& s : negatives) {
    if (gen == ScoreGenerator::kNearTie) {
      const double u = coin(rng);
      s = u < 0.4 ? positive : (u < 0.6 ? 0.0 : draw());
    } else {
      s = draw();
    }
  }
  return ScoreSet(positive, std::move(negatives), sampled);
}

ScoreSet make_rank_scenario(std::size_t population, Rank rank, Rng& rng) {
  const auto above = static_cast<std::size_t>(rank.value() - 1);
  if (population == 0 || above > population) {
    throw InvalidInput("rank scenario needs 1 <= rank <= population + 1");
  }
  constexpr double kPositive = 0.5;
  std::uniform_real_distribution<double> high(kPositive, kPositive + 3.0);
  // Strictly below s_+: [-3, s_+) excludes s_+ itself.
  std::uniform_real_distribution<double> low(-3.0, kPositive);

  std::vector<double> negatives(population);
  for (std::size_t i = 0; i < population; ++i) {
    negatives[i] = i < above ? high(rng) : low(rng);
  }
  std::shuffle(negatives.begin(), negatives.end(), rng);
  return ScoreSet::full(kPositive, std::move(negatives));
}

FuzzSummary fuzz_full_chain(std::size_t cases, std::uint64_t seed,
                            ScoreGenerator gen) {
  FuzzSummary summary{"full_chain", gen, cases, 0, std::nullopt};
  Rng rng = make_stream(seed, 0x46554c4cu);
  for (std::size_t c = 0; c < cases; ++c) {
    ScoreSet scores = generate_scores(gen, 64, false, true, rng);
    const ChainCheck check = verify_full_chain(scores);
    if (check.all()) continue;
    ++summary.failures;
    if (!summary.first_failure) {
      const char* which = !check.ndcg_le_cce  ? "-log ndcg <= cce"
                          : !check.cce_le_bpr ? "cce <= bpr"
                                              : "bpr <= bce";
      summary.first_failure = Counterexample{which, std::move(scores)};
    }
  }
  return summary;
}

FuzzSummary fuzz_sampled_lower_bounds(std::size_t cases, std::uint64_t seed,
                                      ScoreGenerator gen) {
  FuzzSummary summary{"sampled_lower_bounds", gen, cases, 0, std::nullopt};
  Rng rng = make_stream(seed, 0x53414d50u);
  for (std::size_t c = 0; c < cases; ++c) {
    ScoreSet scores = generate_scores(gen, 128, true, false, rng);
    const LowerBoundCheck check = verify_sampled_lower_bounds(scores);
    if (check.all()) continue;
    ++summary.failures;
    if (!summary.first_failure) {
      const char* which = !check.bpr   ? "bpr >= |Gamma^K| ln 2"
                          : !check.bce ? "bce >= |Gamma^K_0| ln 2"
                                       : "cce >= ln |Gamma^K|";
      summary.first_failure = Counterexample{which, std::move(scores)};
    }
  }
  return summary;
}

bool BoundReport::all_consistent() const {
  return std::all_of(per_loss.begin(), per_loss.end(),
                     [](const LossBoundStats& s) { return s.consistent(); });
}

bool BoundReport::all_lower_bounds_hold() const {
  return std::all_of(
      per_loss.begin(), per_loss.end(),
      [](const LossBoundStats& s) { return s.lower_bound_passes == s.trials; });
}

BoundReport monte_carlo_bound_check(const ScoreSet& full_scores,
                                    const SamplerConfig& config,
                                    MetricKind metric, std::size_t trials,
                                    unsigned workers) {
  if (trials == 0) throw InvalidInput("trials must be positive");
  if (full_scores.is_sampled()) {
    throw InvalidInput("Monte Carlo bound check needs the full negative set");
  }
  const auto negatives = full_scores.negative_scores();
  const std::size_t population = negatives.size();
  if (config.k < 1 || config.k > population) {
    throw InvalidInput("K must lie in [1, population]");
  }

  const Rank true_rank = compute_rank(full_scores);
  const GammaCounts gamma = compute_gamma_counts(full_scores);
  const double target = -std::log(metric_value(metric, true_rank));
  const double positive = full_scores.positive_score();

  const std::size_t shards = std::min(trials, kMonteCarloShards);
  std::vector<ShardCounts> shard_counts(shards);

  auto run_shard = [&](std::size_t shard) {
    const std::size_t begin = shard * trials / shards;
    const std::size_t end = (shard + 1) * trials / shards;
    Rng rng = make_stream(config.seed, shard);
    SubsetSampler sampler(population);
    std::vector<std::size_t> picked;
    std::vector<double> sample(config.k);
    ShardCounts& counts = shard_counts[shard];
    for (std::size_t t = begin; t < end; ++t) {
      sampler.draw(config.k, rng, picked);
      for (std::size_t i = 0; i < picked.size(); ++i) {
        sample[i] = negatives[picked[i]];
      }
      const std::array<double, 3> losses = {
          loss_value(LossKind::kBce, positive, sample),
          loss_value(LossKind::kBpr, positive, sample),
          loss_value(LossKind::kCce, positive, sample)};
      const LowerBoundCheck sampled =
          check_lower_bounds(positive, sample, losses[0], losses[1], losses[2]);
      const std::array<bool, 3> bound_ok = {sampled.bce, sampled.bpr, sampled.cce};
      for (std::size_t l = 0; l < 3; ++l) {
        if (target <= losses[l] + kInequalitySlack) ++counts.hits[l];
        if (bound_ok[l]) ++counts.lower_bound_passes[l];
      }
    }
  };

  const unsigned threads =
      std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(shards)));
  if (threads == 1) {
    for (std::size_t s = 0; s < shards; ++s) run_shard(s);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t s = next++; s < shards; s = next++) run_shard(s);
      });
    }
    for (auto& t : pool) t.join();
  }

  BoundReport report;
  report.metric = metric;
  report.scenario = BoundScenario{population,        config.k,
                                  trials,            config.seed,
                                  true_rank.value(), gamma.gamma_k,
                                  gamma.gamma0_k,    "given"};

  for (LossKind loss : kAllLosses) {
    const std::size_t l = index_of(loss);
    LossBoundStats stats;
    stats.loss = loss;
    stats.metric = metric;
    stats.trials = trials;
    for (const auto& c : shard_counts) {
      stats.hits += c.hits[l];
      stats.lower_bound_passes += c.lower_bound_passes[l];
    }
    const double n = static_cast<double>(trials);
    stats.frequency = static_cast<double>(stats.hits) / n;
    stats.std_err = std::sqrt(stats.frequency * (1.0 - stats.frequency) / n);

    BoundProbabilityQuery query;
    query.params.population = population;
    query.params.successes =
        loss == LossKind::kBce ? gamma.gamma0_k : gamma.gamma_k;
    query.params.draws = config.k;
    query.rank = true_rank;
    query.metric = metric;
    query.loss = loss;
    stats.theoretical_bound = bound_probability(query).lower_bound;
    report.per_loss.push_back(stats);
  }
  return report;
}

std::vector<SurfaceCell> bound_surface(std::size_t population,
                                       std::span<const std::size_t> ks,
                                       std::span<const std::int64_t> ranks,
                                       MetricKind metric, LossKind loss,
                                       std::optional<std::size_t> gamma0) {
  if (population == 0) throw InvalidInput("surface population must be >= 1");
  if (ks.empty() || ranks.empty()) {
    throw InvalidInput("surface needs at least one K and one rank");
  }
  for (std::size_t k : ks) {
    if (k < 1 || k > population) {
      throw InvalidInput("surface K=" + std::to_string(k) +
                         " outside [1, " + std::to_string(population) + "]");
    }
  }
  for (std::int64_t r : ranks) {
    if (r < 1 || static_cast<std::size_t>(r) > population + 1) {
      throw InvalidInput("surface rank " + std::to_string(r) +
                         " outside [1, population + 1]");
    }
  }
  if (gamma0 && *gamma0 > population) {
    throw InvalidInput("|Gamma_0| exceeds the surface population");
  }

  std::vector<SurfaceCell> cells;
  cells.reserve(ks.size() * ranks.size());
  for (std::size_t k : ks) {
    for (std::int64_t r : ranks) {
      BoundProbabilityQuery query;
      query.params.population = population;
      query.params.draws = k;
      query.params.successes =
          loss == LossKind::kBce && gamma0
              ? *gamma0
              : static_cast<std::uint64_t>(r - 1);
      query.rank = Rank(r);
      query.metric = metric;
      query.loss = loss;
      cells.push_back(SurfaceCell{k, r, loss, metric, bound_probability(query)});
    }
  }
  return cells;
}

void write_surface_csv(std::ostream& out, std::span<const SurfaceCell> cells,
                       bool header) {
  if (header) out << "K,r_plus,loss,metric,lower_bound\n";
  const auto old_precision = out.precision(17);
  for (const auto& c : cells) {
    out << c.k << ',' << c.rank << ',' << to_string(c.loss) << ','
        << to_string(c.metric) << ',' << c.bound.lower_bound << '\n';
  }
  out.precision(old_precision);
}

void write_monte_carlo_csv(std::ostream& out,
                           std::span<const BoundReport> reports) {
  out << "loss,metric,trials,frequency,theoretical_bound,std_err,"
         "scenario,population,k,r_plus,lower_bound_passes\n";
  const auto old_precision = out.precision(17);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& report = reports[i];
    for (const auto& s : report.per_loss) {
      out << to_string(s.loss) << ',' << to_string(s.metric) << ','
          << s.trials << ',' << s.frequency << ',' << s.theoretical_bound
          << ',' << s.std_err << ',' << i << ','
          << report.scenario.population << ',' << report.scenario.k << ','
          << report.scenario.true_rank << ',' << s.lower_bound_passes << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace lossbound
