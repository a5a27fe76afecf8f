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
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "lossbound/recsys.hpp"

namespace lossbound {

namespace {

constexpr std::uint64_t kInitStream = 0x494e4954u;
constexpr std::string_view kModelMagic = "lossbound-model";

}  // namespace

std::string_view to_string(ScorerKind kind) {
  return kind == ScorerKind::kFactor ? "factor" : "history-mean";
}

std::optional<ScorerKind> parse_scorer(std::string_view name) {
  if (name == "factor") return ScorerKind::kFactor;
  if (name == "history-mean" || name == "history_mean") {
    return ScorerKind::kHistoryMean;
  }
  return std::nullopt;
}

ModelParams init_model(std::size_t num_users, std::size_t num_items,
                       std::size_t dim, ScorerKind scorer, double init_std,
                       std::uint64_t seed) {
  if (dim < 1) throw InvalidInput("embedding dimension must be >= 1");
  if (!(init_std >= 0.0) || !std::isfinite(init_std)) {
    throw InvalidInput("init_std must be finite and non-negative");
  }
  ModelParams params;
  params.dim = dim;
  params.scorer = scorer;
  params.item_embeddings = Matrix(num_items, dim);
  params.user_embeddings = Matrix(num_users, dim);

  Rng rng = make_stream(seed, kInitStream);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : params.item_embeddings.data()) v = init_std * normal(rng);
  for (double& v : params.user_embeddings.data()) v = init_std * normal(rng);
  return params;
}

namespace {

void scorer_user_vector(const ModelParams& params, ScorerKind scorer,
                        std::uint32_t user, std::span<const ItemId> history,
                        std::span<double> out) {
  if (out.size() != params.dim) {
    throw InvalidInput("user vector buffer has the wrong dimension");
  }
  if (scorer == ScorerKind::kFactor) {
    if (user >= params.user_embeddings.rows()) {
      throw InvalidInput("user id " + std::to_string(user) + " out of range");
    }
    const auto row = params.user_embeddings.row(user);
    std::copy(row.begin(), row.end(), out.begin());
    return;
  }
  if (history.empty()) {
    throw InvalidInput("history-mean scorer needs a non-empty history");
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (ItemId j : history) {
    if (j >= params.item_embeddings.rows()) {
      throw InvalidInput("history item " + std::to_string(j) +
                         " out of range");
    }
    const auto row = params.item_embeddings.row(j);
    for (std::size_t c = 0; c < params.dim; ++c) out[c] += row[c];
  }
  const double inv = 1.0 / static_cast<double>(history.size());
  for (double& v : out) v *= inv;
}

}  // namespace

void user_vector(const ModelParams& params, std::uint32_t user,
                 std::span<const ItemId> history, std::span<double> out) {
  scorer_user_vector(params, params.scorer, user, history, out);
}

double score(const ModelParams& params, ScorerKind scorer, std::uint32_t user,
             std::span<const ItemId> history, ItemId item) {
  if (item >= params.item_embeddings.rows()) {
    throw InvalidInput("item id " + std::to_string(item) + " out of range");
  }
  std::vector<double> h(params.dim);
  scorer_user_vector(params, scorer, user, history, h);
  const auto row = params.item_embeddings.row(item);
  return std::inner_product(h.begin(), h.end(), row.begin(), 0.0);
}

void write_model(std::ostream& out, const ModelParams& params) {
  out << kModelMagic << " 1\n";
  out << "d " << params.dim << '\n';
  out << "m " << params.item_embeddings.rows() << '\n';
  out << "n " << params.user_embeddings.rows() << '\n';
  out << "scorer " << to_string(params.scorer) << '\n';
  const auto old_precision = out.precision(17);
  auto dump = [&out](const Matrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
      const auto row = m.row(r);
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out << ' ';
        out << row[c];
      }
      out << '\n';
    }
  };
  dump(params.item_embeddings);
  dump(params.user_embeddings);
  out.precision(old_precision);
}

ModelParams read_model(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kModelMagic || version != 1) {
    throw IoError("not a lossbound model dump");
  }
  auto read_field = [&in](std::string_view key) {
    std::string name;
    std::size_t value = 0;
    if (!(in >> name >> value) || name != key) {
      throw IoError("model dump: expected field '" + std::string(key) + "'");
    }
    return value;
  };
  const std::size_t d = read_field("d");
  const std::size_t m = read_field("m");
  const std::size_t n = read_field("n");
  std::string key, scorer_name;
  if (!(in >> key >> scorer_name) || key != "scorer") {
    throw IoError("model dump: expected field 'scorer'");
  }
  const auto scorer = parse_scorer(scorer_name);
  if (!scorer) throw IoError("model dump: unknown scorer " + scorer_name);

  ModelParams params;
  params.dim = d;
  params.scorer = *scorer;
  params.item_embeddings = Matrix(m, d);
  params.user_embeddings = Matrix(n, d);
  for (Matrix* mat : {&params.item_embeddings, &params.user_embeddings}) {
    for (double& v : mat->data()) {
      if (!(in >> v)) throw IoError("model dump: truncated matrix data");
    }
  }
  return params;
}

}  // namespace lossbound
