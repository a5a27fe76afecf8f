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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "lossbound/recsys.hpp"

namespace lossbound {

std::string_view to_string(OptimizerKind kind) {
  return kind == OptimizerKind::kSgd ? "sgd" : "adam";
}

std::optional<OptimizerKind> parse_optimizer(std::string_view name) {
  if (name == "sgd") return OptimizerKind::kSgd;
  if (name == "adam") return OptimizerKind::kAdam;
  return std::nullopt;
}

std::string_view to_string(EvalSplit split) {
  return split == EvalSplit::kValidation ? "validation" : "test";
}

void TrainConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw InvalidInput(std::string("invalid training config: ") + what);
  };
  require(negatives >= 1, "negatives must be >= 1");
  require(dim >= 1, "dim must be >= 1");
  require(batch_size >= 1, "batch_size must be >= 1");
  require(learning_rate >= 0.0 && std::isfinite(learning_rate),
          "learning_rate must be finite and >= 0");
  require(epochs >= 0, "epochs must be >= 0");
  require(beta1 >= 0.0 && beta1 < 1.0, "beta1 must lie in [0, 1)");
  require(beta2 >= 0.0 && beta2 < 1.0, "beta2 must lie in [0, 1)");
  require(epsilon > 0.0, "epsilon must be > 0");
  require(init_std >= 0.0 && std::isfinite(init_std),
          "init_std must be finite and >= 0");
  require(cutoff >= 1, "cutoff must be >= 1");
}

EvalResult evaluate(const ModelParams& params, const SplitDataset& split,
                    int cutoff, EvalSplit which) {
  if (cutoff < 1) throw InvalidInput("evaluation cutoff must be >= 1");
  if (split.users.empty()) return {};
  if (params.item_embeddings.rows() != split.num_items) {
    throw InvalidInput("model item count does not match the dataset");
  }

  const std::size_t m = split.num_items;
  std::vector<double> h(params.dim);
  std::vector<double> scores(m);
  std::vector<ItemId> history;
  double ndcg_sum = 0.0;
  double mrr_sum = 0.0;

  for (std::size_t u = 0; u < split.users.size(); ++u) {
    const UserSplit& user = split.users[u];
    history = user.train;
    ItemId target = user.validation;
    if (which == EvalSplit::kTest) {
      history.push_back(user.validation);
      target = user.test;
    }
    user_vector(params, static_cast<std::uint32_t>(u), history, h);
    for (std::size_t i = 0; i < m; ++i) {
      const auto row = params.item_embeddings.row(i);
      scores[i] = std::inner_product(h.begin(), h.end(), row.begin(), 0.0);
    }
    const double positive = scores[target];
    std::size_t at_least = 0;
    auto seen = user.interacted.begin();
    for (std::size_t i = 0; i < m; ++i) {
      while (seen != user.interacted.end() && *seen < i) ++seen;
      if (seen != user.interacted.end() && *seen == i) continue;
      if (scores[i] >= positive) ++at_least;
    }
    const Rank rank(static_cast<std::int64_t>(at_least) + 1);
    ndcg_sum += metric_at_k(rank, cutoff, MetricKind::kNdcg);
    mrr_sum += metric_at_k(rank, cutoff, MetricKind::kMrr);
  }
  const double n = static_cast<double>(split.users.size());
  return EvalResult{ndcg_sum / n, mrr_sum / n};
}

double accumulate_example_gradient(const ModelParams& params, LossKind loss,
                                   std::uint32_t user,
                                   std::span<const ItemId> history,
                                   ItemId positive,
                                   std::span<const ItemId> negatives,
                                   Matrix& item_grad, Matrix& user_grad) {
  const std::size_t d = params.dim;
  std::vector<double> h(d);
  user_vector(params, user, history, h);

  auto dot = [&h](std::span<const double> row) {
    return std::inner_product(h.begin(), h.end(), row.begin(), 0.0);
  };
  const double s_pos = dot(params.item_embeddings.row(positive));
  std::vector<double> s_neg(negatives.size());
  for (std::size_t j = 0; j < negatives.size(); ++j) {
    s_neg[j] = dot(params.item_embeddings.row(negatives[j]));
  }

  const double value = loss_value(loss, s_pos, s_neg);
  std::vector<double> d_neg(negatives.size());
  const double d_pos = loss_gradient(loss, s_pos, s_neg, d_neg);

  // dl/dh = d_pos e_pos + sum_j d_j e_j; dl/de_i = (dl/ds_i) h.
  std::vector<double> d_h(d, 0.0);
  auto add_item = [&](ItemId item, double coeff) {
    const auto e = params.item_embeddings.row(item);
    auto g = item_grad.row(item);
    for (std::size_t c = 0; c < d; ++c) {
      d_h[c] += coeff * e[c];
      g[c] += coeff * h[c];
    }
  };
  add_item(positive, d_pos);
  for (std::size_t j = 0; j < negatives.size(); ++j) {
    add_item(negatives[j], d_neg[j]);
  }

  if (params.scorer == ScorerKind::kFactor) {
    auto g = user_grad.row(user);
    for (std::size_t c = 0; c < d; ++c) g[c] += d_h[c];
  } else {
    const double inv = 1.0 / static_cast<double>(history.size());
    for (ItemId j : history) {
      auto g = item_grad.row(j);
      for (std::size_t c = 0; c < d; ++c) g[c] += inv * d_h[c];
    }
  }
  return value;
}

namespace {

constexpr std::uint64_t kShuffleBatch = 0xFFFFFFFFu;

std::uint64_t step_stream(int epoch, std::uint64_t batch) {
  return (static_cast<std::uint64_t>(epoch) << 32) | batch;
}

struct AdamState {
  Matrix first;
  Matrix second;
};

class Optimizer {
 public:
  Optimizer(const TrainConfig& config, const ModelParams& params)
      : config_(config),
        items_{Matrix(params.item_embeddings.rows(), params.dim),
               Matrix(params.item_embeddings.rows(), params.dim)},
        users_{Matrix(params.user_embeddings.rows(), params.dim),
               Matrix(params.user_embeddings.rows(), params.dim)} {}

  void step(ModelParams& params, const Matrix& item_grad,
            const Matrix& user_grad) {
    ++t_;
    update(params.item_embeddings, item_grad, items_);
    update(params.user_embeddings, user_grad, users_);
  }

 private:
  void update(Matrix& weights, const Matrix& grad, AdamState& state) {
    auto w = weights.data();
    const auto g = grad.data();
    const double lr = config_.learning_rate;
    if (config_.optimizer == OptimizerKind::kSgd) {
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= lr * g[i];
      return;
    }
    auto m1 = state.first.data();
    auto m2 = state.second.data();
    const double b1 = config_.beta1;
    const double b2 = config_.beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
    for (std::size_t i = 0; i < w.size(); ++i) {
      m1[i] = b1 * m1[i] + (1.0 - b1) * g[i];
      m2[i] = b2 * m2[i] + (1.0 - b2) * g[i] * g[i];
      const double m_hat = m1[i] / c1;
      const double v_hat = m2[i] / c2;
      w[i] -= lr * m_hat / (std::sqrt(v_hat) + config_.epsilon);
    }
  }

  const TrainConfig& config_;
  AdamState items_;
  AdamState users_;
  std::int64_t t_ = 0;
};

bool all_finite(const Matrix& m) {
  const auto data = m.data();
  return std::all_of(data.begin(), data.end(),
                     [](double v) { return std::isfinite(v); });
}

void append_trace(std::vector<TraceRow>& trace, int epoch, int cutoff,
                  EvalSplit split, const EvalResult& result) {
  trace.push_back({epoch, split, MetricKind::kNdcg, cutoff, result.ndcg});
  trace.push_back({epoch, split, MetricKind::kMrr, cutoff, result.mrr});
}

}  // namespace

TrainResult train(const SplitDataset& split, const TrainConfig& config) {
  config.validate();
  const std::size_t num_users = split.users.size();
  const std::size_t m = split.num_items;
  if (num_users == 0 || m == 0) {
    throw InvalidInput("training needs at least one user and one item");
  }

  // Per-user negative catalog: items the user never interacted with.
  std::vector<std::vector<ItemId>> negatives(num_users);
  for (std::size_t u = 0; u < num_users; ++u) {
    const auto& seen = split.users[u].interacted;
    negatives[u].reserve(m - seen.size());
    auto it = seen.begin();
    for (ItemId i = 0; i < m; ++i) {
      while (it != seen.end() && *it < i) ++it;
      if (it == seen.end() || *it != i) negatives[u].push_back(i);
    }
    if (negatives[u].size() < config.negatives) {
      throw InvalidInput("user " + std::to_string(u) + " has only " +
                         std::to_string(negatives[u].size()) +
                         " negative items, fewer than K=" +
                         std::to_string(config.negatives));
    }
  }

  // (user, position in train prefix). The history-mean scorer needs a
  // non-empty history, so it starts at position 1.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> examples;
  const std::size_t first_pos =
      config.scorer == ScorerKind::kHistoryMean ? 1 : 0;
  for (std::size_t u = 0; u < num_users; ++u) {
    for (std::size_t p = first_pos; p < split.users[u].train.size(); ++p) {
      examples.emplace_back(static_cast<std::uint32_t>(u),
                            static_cast<std::uint32_t>(p));
    }
  }
  if (examples.empty() && config.epochs > 0) {
    throw InvalidInput("no training examples for the chosen scorer");
  }

  TrainResult result;
  ModelParams params = init_model(num_users, m, config.dim, config.scorer,
                                  config.init_std, config.seed);

  EvalResult valid = evaluate(params, split, config.cutoff, EvalSplit::kValidation);
  append_trace(result.trace, 0, config.cutoff, EvalSplit::kValidation, valid);
  append_trace(result.trace, 0, config.cutoff, EvalSplit::kTest,
               evaluate(params, split, config.cutoff, EvalSplit::kTest));
  result.params = params;
  result.best_epoch = 0;
  result.best_validation_ndcg = valid.ndcg;

  Optimizer optimizer(config, params);
  Matrix item_grad(m, config.dim);
  Matrix user_grad(num_users, config.dim);
  SubsetSampler sampler(m);
  std::vector<std::size_t> picked;
  std::vector<ItemId> sampled(config.negatives);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    Rng shuffle_rng = make_stream(config.seed, step_stream(epoch, kShuffleBatch));
    std::shuffle(examples.begin(), examples.end(), shuffle_rng);

    const std::size_t batches =
        (examples.size() + config.batch_size - 1) / config.batch_size;
    for (std::size_t b = 0; b < batches; ++b) {
      Rng rng = make_stream(config.seed, step_stream(epoch, b));
      std::fill(item_grad.data().begin(), item_grad.data().end(), 0.0);
      std::fill(user_grad.data().begin(), user_grad.data().end(), 0.0);

      double batch_loss = 0.0;
      const std::size_t begin = b * config.batch_size;
      const std::size_t end = std::min(examples.size(), begin + config.batch_size);
      for (std::size_t e = begin; e < end; ++e) {
        const auto [u, pos] = examples[e];
        const auto& train_items = split.users[u].train;
        const auto& user_negs = negatives[u];
        sampler.draw(config.negatives, user_negs.size(), rng, picked);
        for (std::size_t j = 0; j < picked.size(); ++j) {
          sampled[j] = user_negs[picked[j]];
        }
        const std::span<const ItemId> history(train_items.data(), pos);
        try {
          batch_loss += accumulate_example_gradient(
              params, config.loss, u, history, train_items[pos], sampled,
              item_grad, user_grad);
        } catch (const InvalidInput&) {
          throw TrainingDiverged(epoch, static_cast<int>(b),
                                 "non-finite scores at epoch " +
                                     std::to_string(epoch) + ", batch " +
                                     std::to_string(b));
        }
      }
      if (!std::isfinite(batch_loss)) {
        throw TrainingDiverged(epoch, static_cast<int>(b),
                               "non-finite loss at epoch " +
                                   std::to_string(epoch) + ", batch " +
                                   std::to_string(b));
      }
      optimizer.step(params, item_grad, user_grad);
      if (!all_finite(params.item_embeddings) ||
          !all_finite(params.user_embeddings)) {
        throw TrainingDiverged(epoch, static_cast<int>(b),
                               "non-finite parameters at epoch " +
                                   std::to_string(epoch) + ", batch " +
                                   std::to_string(b));
      }
    }

    valid = evaluate(params, split, config.cutoff, EvalSplit::kValidation);
    append_trace(result.trace, epoch, config.cutoff, EvalSplit::kValidation,
                 valid);
    append_trace(result.trace, epoch, config.cutoff, EvalSplit::kTest,
                 evaluate(params, split, config.cutoff, EvalSplit::kTest));
    if (valid.ndcg > result.best_validation_ndcg) {
      result.best_validation_ndcg = valid.ndcg;
      result.best_epoch = epoch;
      result.params = params;
    }
  }
  return result;
}

void write_trace_csv(std::ostream& out, std::span<const TraceRow> trace,
                     bool header) {
  if (header) out << "epoch,split,metric,cutoff,value\n";
  const auto old_precision = out.precision(17);
  for (const auto& row : trace) {
    out << row.epoch << ',' << to_string(row.split) << ','
        << to_string(row.metric) << ',' << row.cutoff << ',' << row.value
        << '\n';
  }
  out.precision(old_precision);
}

}  // namespace lossbound
