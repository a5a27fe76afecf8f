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

#include "lossbound/sampling.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_set>

namespace lossbound {

Rng make_stream(std::uint64_t seed, std::uint64_t stream_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_index),
                    static_cast<std::uint32_t>(stream_index >> 32),
                    0x6c6f7373u};
  return Rng(seq);
}

SubsetSampler::SubsetSampler(std::size_t population_size)
    : slots_(population_size) {
  std::iota(slots_.begin(), slots_.end(), std::size_t{0});
}

void SubsetSampler::draw(std::size_t k, std::size_t n, Rng& rng,
                         std::vector<std::size_t>& out) {
  if (n > slots_.size()) {
    throw InvalidInput("sampler population exceeds its capacity");
  }
  if (k > n) {
    throw InvalidInput("cannot draw " + std::to_string(k) +
                       " distinct items from a population of " +
                       std::to_string(n));
  }
  if (k * 64 > n) {
    draw_shuffle(k, n, rng, out);
  } else {
    draw_rejection(k, n, rng, out);
  }
}

void SubsetSampler::draw_shuffle(std::size_t k, std::size_t n, Rng& rng,
                                 std::vector<std::size_t>& out) {
  swaps_.resize(k);
  out.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    const std::size_t j = pick(rng);
    std::swap(slots_[i], slots_[j]);
    swaps_[i] = j;
    out[i] = slots_[i];
  }
  // Restore the identity permutation for the next draw.
  for (std::size_t i = k; i-- > 0;) std::swap(slots_[i], slots_[swaps_[i]]);
}

void SubsetSampler::draw_rejection(std::size_t k, std::size_t n, Rng& rng,
                                   std::vector<std::size_t>& out) {
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::unordered_set<std::size_t> seen;
  seen.reserve(2 * k);
  out.clear();
  out.reserve(k);
  while (out.size() < k) {
    const std::size_t j = pick(rng);
    if (seen.insert(j).second) out.push_back(j);
  }
}

std::vector<ItemId> sample_negatives(std::span<const ItemId> population,
                                     const SamplerConfig& config,
                                     std::uint64_t stream_index) {
  if (config.k < 1) throw InvalidInput("sampler k must be >= 1");
  if (config.k > population.size()) {
    throw InvalidInput("sampler k=" + std::to_string(config.k) +
                       " exceeds population size " +
                       std::to_string(population.size()));
  }
  std::vector<ItemId> sorted(population.begin(), population.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidInput("sampling population contains duplicate ids");
  }

  Rng rng = make_stream(config.seed, stream_index);
  SubsetSampler sampler(population.size());
  std::vector<std::size_t> picked;
  sampler.draw(config.k, rng, picked);

  std::vector<ItemId> out;
  out.reserve(picked.size());
  for (std::size_t idx : picked) out.push_back(population[idx]);
  return out;
}

std::vector<double> sample_gamma_count(const ScoreSet& full_scores,
                                       const SamplerConfig& config,
                                       GammaCondition condition,
                                       std::size_t trials) {
  if (full_scores.is_sampled()) {
    throw InvalidInput("gamma-count sampling needs the full negative set");
  }
  if (trials == 0) throw InvalidInput("trials must be positive");
  if (config.k < 1) throw InvalidInput("sampler k must be >= 1");

  const auto negatives = full_scores.negative_scores();
  const double threshold = condition == GammaCondition::kVsPositive
                               ? full_scores.positive_score()
                               : 0.0;
  std::vector<char> success(negatives.size());
  for (std::size_t i = 0; i < negatives.size(); ++i) {
    success[i] = negatives[i] >= threshold;
  }

  SubsetSampler sampler(negatives.size());
  Rng rng = make_stream(config.seed, 0);
  std::vector<std::size_t> picked;
  std::vector<std::size_t> counts(config.k + 1, 0);
  for (std::size_t t = 0; t < trials; ++t) {
    sampler.draw(config.k, rng, picked);
    std::size_t hits = 0;
    for (std::size_t idx : picked) hits += success[idx] ? 1 : 0;
    ++counts[hits];
  }

  std::vector<double> histogram(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    histogram[i] = static_cast<double>(counts[i]) / static_cast<double>(trials);
  }
  return histogram;
}

}  // namespace lossbound
