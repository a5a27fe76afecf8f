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

#include <optional>
#include <string_view>

#include "lossbound/core.hpp"

namespace lossbound {

enum class MetricKind { kNdcg, kMrr };

std::string_view to_string(MetricKind kind);
std::optional<MetricKind> parse_metric(std::string_view name);

// Single-relevant-item metrics. Both lie in (0, 1] and equal 1 at rank 1.
// ndcg uses log base 2; everything else in the library uses natural log.
double ndcg(Rank rank);
double mrr(Rank rank);
double metric_value(MetricKind kind, Rank rank);

/// The metric when rank <= cutoff, exactly 0 otherwise. Throws InvalidInput
/// for cutoff < 1.
double metric_at_k(Rank rank, int cutoff, MetricKind kind);

}  // namespace lossbound
