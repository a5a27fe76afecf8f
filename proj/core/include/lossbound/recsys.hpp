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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lossbound/losses.hpp"
#include "lossbound/metrics.hpp"
#include "lossbound/sampling.hpp"

namespace lossbound {

// ---------------------------------------------------------------------------
// Interaction log

enum class InteractionFormat {
  kCsv,        // header row, then user_id,item_id,timestamp
  kMovieLens,  // user::item::rating::timestamp, rating ignored
};

std::optional<InteractionFormat> parse_interaction_format(std::string_view name);

struct Interaction {
  std::uint32_t user = 0;  // dense index
  ItemId item = 0;         // dense index
  std::int64_t timestamp = 0;
};

/// Implicit-feedback log with dense user and item indices. `user_ids` and
/// `item_ids` map each dense index back to the id found in the file.
struct InteractionDataset {
  std::vector<std::string> user_ids;
  std::vector<std::string> item_ids;
  std::vector<Interaction> events;
  /// Per-user item sequence ordered by timestamp (file order breaks ties).
  std::vector<std::vector<ItemId>> sequences;
  /// Users removed for having fewer than the minimum number of events.
  std::size_t dropped_users = 0;

  std::size_t num_users() const { return user_ids.size(); }
  std::size_t num_items() const { return item_ids.size(); }
};

inline constexpr std::size_t kMinEventsPerUser = 3;

/// Parses, drops users with fewer than kMinEventsPerUser events and re-indexes
/// users and items densely in order of first appearance. Throws IoError for
/// unreadable files, malformed rows (with the line number) or an empty result.
InteractionDataset load_interactions(const std::filesystem::path& path,
                                     InteractionFormat format);
InteractionDataset parse_interactions(std::istream& in,
                                      InteractionFormat format);

/// Builds a dataset from already-dense events (sequences are derived here).
InteractionDataset make_dataset(std::size_t num_users, std::size_t num_items,
                                std::vector<Interaction> events);

void write_interactions_csv(std::ostream& out,
                            const InteractionDataset& dataset);
void write_id_mapping(std::ostream& out, const InteractionDataset& dataset);

/// Users split into equally sized item blocks; each user only interacts with
/// items of its own block, in random order. Block b holds items
/// [b * items/blocks, (b + 1) * items/blocks).
struct BlockDatasetSpec {
  std::size_t users = 200;
  std::size_t items = 200;
  std::size_t blocks = 10;
  std::size_t events_per_user = 12;
};

InteractionDataset make_block_dataset(const BlockDatasetSpec& spec,
                                      std::uint64_t seed);

// ---------------------------------------------------------------------------
// Leave-last-out split

struct UserSplit {
  std::vector<ItemId> train;
  ItemId validation = 0;
  ItemId test = 0;
  /// Every item the user interacted with, sorted and unique.
  std::vector<ItemId> interacted;
};

struct SplitDataset {
  std::size_t num_items = 0;
  std::vector<UserSplit> users;
};

/// Last event -> test, second-to-last -> validation, the rest -> train.
/// Throws InvalidInput naming the first user with fewer than 3 events.
SplitDataset split_leave_last(const InteractionDataset& dataset);

// ---------------------------------------------------------------------------
// Model

enum class ScorerKind {
  kFactor,       // s = h_u . h_i
  kHistoryMean,  // s = mean(h_j, j in history) . h_i
};

std::string_view to_string(ScorerKind kind);
std::optional<ScorerKind> parse_scorer(std::string_view name);

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::span<double> row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct ModelParams {
  std::size_t dim = 0;
  ScorerKind scorer = ScorerKind::kFactor;
  Matrix item_embeddings;  // m x d
  Matrix user_embeddings;  // n x d, read by the factor scorer only

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Gaussian N(0, init_std^2) embeddings from stream (seed, init).
ModelParams init_model(std::size_t num_users, std::size_t num_items,
                       std::size_t dim, ScorerKind scorer, double init_std,
                       std::uint64_t seed);

/// Writes the user representation (h_u or the history mean) into `out`.
/// Throws InvalidInput for out-of-range ids or an empty history under the
/// history-mean scorer.
void user_vector(const ModelParams& params, std::uint32_t user,
                 std::span<const ItemId> history, std::span<double> out);

double score(const ModelParams& params, ScorerKind scorer, std::uint32_t user,
             std::span<const ItemId> history, ItemId item);

/// Text dump: a "lossbound-model 1" line, then d, m, n and scorer lines, then
/// the item rows and the user rows, one row per line.
void write_model(std::ostream& out, const ModelParams& params);
ModelParams read_model(std::istream& in);

// ---------------------------------------------------------------------------
// Training and evaluation

enum class OptimizerKind { kSgd, kAdam };

std::string_view to_string(OptimizerKind kind);
std::optional<OptimizerKind> parse_optimizer(std::string_view name);

struct TrainConfig {
  LossKind loss = LossKind::kBpr;
  std::size_t negatives = 1;  // K
  ScorerKind scorer = ScorerKind::kFactor;
  std::size_t dim = 64;
  std::size_t batch_size = 128;
  double learning_rate = 0.001;
  int epochs = 100;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double init_std = 0.1;
  std::uint64_t seed = 0;
  int cutoff = 10;

  /// Throws InvalidInput for non-positive hyperparameters.
  void validate() const;
};

enum class EvalSplit { kValidation, kTest };

std::string_view to_string(EvalSplit split);

struct EvalResult {
  double ndcg = 0.0;  // mean NDCG@cutoff
  double mrr = 0.0;   // mean MRR@cutoff
};

/// Ranks each user's held-out item against every item the user never
/// interacted with (no sampled metrics). Validation uses the train prefix as
/// history; test appends the validation item.
EvalResult evaluate(const ModelParams& params, const SplitDataset& split,
                    int cutoff, EvalSplit which = EvalSplit::kTest);

struct TraceRow {
  int epoch = 0;
  EvalSplit split = EvalSplit::kValidation;
  MetricKind metric = MetricKind::kNdcg;
  int cutoff = 10;
  double value = 0.0;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct TrainResult {
  ModelParams params;  // best validation NDCG@cutoff epoch
  int best_epoch = 0;
  double best_validation_ndcg = 0.0;
  std::vector<TraceRow> trace;  // epoch 0 is the untrained model
};

/// Per-example gradient of the sampled loss chained through the scorer.
/// Accumulates into item_grad / user_grad (same shapes as the embeddings) and
/// returns the loss value.
double accumulate_example_gradient(const ModelParams& params, LossKind loss,
                                   std::uint32_t user,
                                   std::span<const ItemId> history,
                                   ItemId positive,
                                   std::span<const ItemId> negatives,
                                   Matrix& item_grad, Matrix& user_grad);

/// Trains with K uniformly sampled negatives per positive, drawn from the
/// items the user never interacted with, on a fresh sampler stream per
/// (epoch, batch). Evaluates after every epoch. Throws TrainingDiverged when
/// a loss or parameter becomes non-finite.
TrainResult train(const SplitDataset& split, const TrainConfig& config);

void write_trace_csv(std::ostream& out, std::span<const TraceRow> trace,
                     bool header = true);

}  // namespace lossbound
