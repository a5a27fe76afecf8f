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

#include "lossbound/metrics.hpp"

#include <cmath>
#include <string>

namespace lossbound {

std::string_view to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::kNdcg:
      return "ndcg";
    case MetricKind::kMrr:
      return "mrr";
  }
  return "unknown";
}

std::optional<MetricKind> parse_metric(std::string_view name) {
  if (name == "ndcg") return MetricKind::kNdcg;
  if (name == "mrr") return MetricKind::kMrr;
  return std::nullopt;
}

double ndcg(Rank rank) {
  return 1.0 / std::log2(1.0 + static_cast<double>(rank.value()));
}

double mrr(Rank rank) { return 1.0 / static_cast<double>(rank.value()); }

double metric_value(MetricKind kind, Rank rank) {
  return kind == MetricKind::kNdcg ? ndcg(rank) : mrr(rank);
}

double metric_at_k(Rank rank, int cutoff, MetricKind kind) {
  if (cutoff < 1) {
    throw InvalidInput("metric cutoff must be >= 1, got " +
                       std::to_string(cutoff));
  }
  if (rank.value() > cutoff) return 0.0;
  return metric_value(kind, rank);
}

}  // namespace lossbound
