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
#include <random>
#include <span>
#include <vector>

#include "lossbound/core.hpp"

namespace lossbound {

using ItemId = std::uint32_t;
using Rng = std::mt19937_64;

/// K negatives per positive, plus the root seed of every random stream.
struct SamplerConfig {
  std::size_t k = 1;
  std::uint64_t seed = 0;
};

/// Independent generator for stream `stream_index` under `seed`. Distinct
/// stream indices give unrelated sequences, so parallel workers (or training
/// steps) each take their own index instead of sharing a generator.
Rng make_stream(std::uint64_t seed, std::uint64_t stream_index);

/// Uniform k-subsets of {0, ..., n-1} drawn without replacement.
///
/// Uses a partial Fisher-Yates shuffle over a persistent index array when k/n
/// is above 1/64 (the swaps are undone afterwards, so each draw costs O(k)),
/// and rejection into a hash set otherwise. Not thread-safe; give each worker
/// its own instance.
class SubsetSampler {
 public:
  explicit SubsetSampler(std::size_t population_size);

  std::size_t population_size() const noexcept { return slots_.size(); }

  /// Replaces `out` with k distinct indices. Throws InvalidInput if k > n.
  void draw(std::size_t k, Rng& rng, std::vector<std::size_t>& out) {
    draw(k, slots_.size(), rng, out);
  }

  /// Same, from the prefix {0, ..., population-1}; population <= n.
  void draw(std::size_t k, std::size_t population, Rng& rng,
            std::vector<std::size_t>& out);

 private:
  void draw_shuffle(std::size_t k, std::size_t n, Rng& rng,
                    std::vector<std::size_t>& out);
  void draw_rejection(std::size_t k, std::size_t n, Rng& rng,
                      std::vector<std::size_t>& out);

  std::vector<std::size_t> slots_;
  std::vector<std::size_t> swaps_;
};

/// config.k distinct ids from `population`, every k-subset equally likely.
/// Deterministic given (config.seed, stream_index).
std::vector<ItemId> sample_negatives(std::span<const ItemId> population,
                                     const SamplerConfig& config,
                                     std::uint64_t stream_index);

enum class GammaCondition {
  kVsPositive,  // s_i >= s_+
  kVsZero,      // s_i >= 0
};

/// Empirical distribution of the number of sampled negatives meeting
/// `condition`, over `trials` independent K-draws from the full negative set.
/// Returns probabilities indexed 0..k.
std::vector<double> sample_gamma_count(const ScoreSet& full_scores,
                                       const SamplerConfig& config,
                                       GammaCondition condition,
                                       std::size_t trials);

}  // namespace lossbound
