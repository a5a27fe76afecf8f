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

#include <gtest/gtest.h>

#include <cmath>

#include "lossbound/hypergeom.hpp"
#include "oracles.hpp"

namespace lossbound {
namespace {

using testing::Exact;

TEST(Enumeration, WalkAndCountingAgree) {
  for (unsigned n = 0; n <= 14; ++n) {
    for (unsigned m = 0; m <= n; ++m) {
      for (unsigned k = 0; k <= n; ++k) {
        ASSERT_EQ(testing::enumerate_subset_counts(n, m, k),
                  testing::counting_subset_counts(n, m, k))
            << n << " " << m << " " << k;
      }
    }
  }
}

TEST(Hypergeom, SpecPmfValues) {
  const HypergeomParams p{10, 4, 3};
  EXPECT_EQ(hypergeom_pmf_exact(p, 0), Exact(1, 6));
  EXPECT_EQ(hypergeom_pmf_exact(p, 0), testing::oracle_pmf(10, 4, 3)[0]);
  EXPECT_DOUBLE_EQ(hypergeom_pmf(p, 0), 1.0 / 6.0);
  for (std::uint64_t k = 0; k <= 12; ++k) {
    EXPECT_EQ(hypergeom_pmf(HypergeomParams{12, 0, k}, 0), 1.0);
  }
  for (std::uint64_t m = 0; m <= 9; ++m) {
    EXPECT_EQ(hypergeom_pmf_exact(HypergeomParams{9, m, 9},
                                  static_cast<std::int64_t>(m)),
              Exact(1));
  }
}

TEST(Hypergeom, SpecCdfValues) {
  const HypergeomParams p{10, 4, 3};
  EXPECT_EQ(hypergeom_cdf_exact(p, 1), Exact(2, 3));
  EXPECT_EQ(hypergeom_cdf_exact(p, 1), testing::oracle_cdf(10, 4, 3, 1));
  EXPECT_EQ(hypergeom_cdf_exact(p, 2), Exact(116, 120));
  EXPECT_EQ(hypergeom_cdf(p, -1), 0.0);
  EXPECT_EQ(hypergeom_cdf(p, 3), 1.0);
  EXPECT_EQ(hypergeom_cdf(p, 1000), 1.0);
  EXPECT_EQ(hypergeom_pmf(p, 4), 0.0);
  EXPECT_EQ(hypergeom_pmf(p, -2), 0.0);
}

TEST(Hypergeom, ExactMatchesOracleEverywhereSmall) {
  for (unsigned n = 1; n <= 18; ++n) {
    for (unsigned m = 0; m <= n; ++m) {
      for (unsigned k = 0; k <= n; ++k) {
        const auto pmf = testing::oracle_pmf(n, m, k);
        const HypergeomParams p{n, m, k};
        for (unsigned x = 0; x <= k; ++x) {
          ASSERT_EQ(hypergeom_pmf_exact(p, x), pmf[x]) << n << " " << m << " " << k;
        }
      }
    }
  }
}

TEST(Hypergeom, FloatingPathTracksExact) {
  for (std::uint64_t n : {50u, 300u, 2000u}) {
    for (std::uint64_t m : {0u, 1u, 7u, 49u}) {
      for (std::uint64_t k : {1u, 5u, 50u}) {
        const HypergeomParams p{n, m, k};
        for (std::int64_t x = p.support_min(); x <= p.support_max(); ++x) {
          const double exact = hypergeom_pmf(p, x, Evaluation::kExact);
          const double approx = hypergeom_pmf(p, x, Evaluation::kFloating);
          EXPECT_NEAR(approx, exact, 1e-12 + 1e-10 * exact);
          EXPECT_NEAR(hypergeom_cdf(p, x, Evaluation::kFloating),
                      hypergeom_cdf(p, x, Evaluation::kExact), 1e-12);
        }
      }
    }
  }
}

TEST(Hypergeom, LargePopulationTableIsNormalised) {
  const HypergeomParams p{1'000'000, 40'000, 100};
  const auto table = hypergeom_pmf_table(p);
  double total = 0.0;
  for (double v : table) {
    EXPECT_GE(v, 0.0);
    total += v;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  // Mean K M / N.
  double mean = 0.0;
  for (std::size_t x = 0; x < table.size(); ++x) mean += x * table[x];
  EXPECT_NEAR(mean, 4.0, 1e-9);
}

TEST(Hypergeom, BinomialAndConversion) {
  EXPECT_EQ(binomial(10, 3), 120);
  EXPECT_EQ(binomial(3, 10), 0);
  EXPECT_EQ(binomial(200, 100),
            BigInt("90548514656103281165404177077484163874504589675413336841320"));
  EXPECT_DOUBLE_EQ(to_double(Exact(1, 3)), 1.0 / 3.0);
  const Rational tiny(BigInt(1), BigInt(1) << 1100);
  EXPECT_EQ(to_double(tiny), 0.0);
  const Rational ratio(binomial(3000, 1500), binomial(3000, 1500) * 7);
  EXPECT_DOUBLE_EQ(to_double(ratio), 1.0 / 7.0);
}

TEST(Hypergeom, InvalidParams) {
  EXPECT_THROW(hypergeom_pmf(HypergeomParams{5, 6, 1}, 0), InvalidInput);
  EXPECT_THROW(hypergeom_pmf(HypergeomParams{5, 2, 6}, 0), InvalidInput);
  EXPECT_EQ(HypergeomParams({10, 8, 5}).support_min(), 3);
  EXPECT_EQ(HypergeomParams({10, 8, 5}).support_max(), 5);
}

TEST(EvaluationPoint, FlooredPointsMatchDoublingOracle) {
  for (std::int64_t r = 1; r <= 5000; ++r) {
    const double rv = static_cast<double>(r);
    const long ndcg_cce = testing::oracle_floor_log2(rv + 1);
    EXPECT_EQ(floored_evaluation_point(MetricKind::kNdcg, LossKind::kCce, Rank(r)),
              ndcg_cce);
    EXPECT_EQ(floored_evaluation_point(MetricKind::kNdcg, LossKind::kBpr, Rank(r)),
              testing::oracle_floor_log2(std::log2(rv + 1)));
    EXPECT_EQ(floored_evaluation_point(MetricKind::kMrr, LossKind::kBpr, Rank(r)),
              testing::oracle_floor_log2(rv));
    EXPECT_EQ(floored_evaluation_point(MetricKind::kMrr, LossKind::kCce, Rank(r)), r);
    EXPECT_EQ(floored_evaluation_point(MetricKind::kMrr, LossKind::kBce, Rank(r)),
              floored_evaluation_point(MetricKind::kMrr, LossKind::kBpr, Rank(r)));
  }
  EXPECT_DOUBLE_EQ(evaluation_point(MetricKind::kNdcg, LossKind::kBpr, Rank(5)),
                   std::log2(std::log2(6.0)));
  EXPECT_DOUBLE_EQ(evaluation_point(MetricKind::kNdcg, LossKind::kCce, Rank(5)),
                   std::log2(6.0));
}

TEST(BoundProbability, SpecCells) {
  BoundProbabilityQuery q{{10, 4, 3}, Rank(5), MetricKind::kNdcg, LossKind::kBpr};
  auto b = bound_probability(q);
  EXPECT_NEAR(b.evaluation_point, 1.370, 1e-3);
  EXPECT_EQ(b.floored_point, 1);
  EXPECT_EQ(bound_probability_exact(q), Exact(1, 3));
  EXPECT_EQ(bound_probability_exact(q), 1 - testing::oracle_cdf(10, 4, 3, 1));

  q.loss = LossKind::kCce;
  b = bound_probability(q);
  EXPECT_NEAR(b.evaluation_point, 2.585, 1e-3);
  EXPECT_EQ(b.floored_point, 2);
  EXPECT_EQ(bound_probability_exact(q), Exact(1, 30));
  EXPECT_EQ(bound_probability_exact(q), 1 - testing::oracle_cdf(10, 4, 3, 2));

  // r_+ = 1: rho = 0 and the bound is 1 - P(X = 0); with no successes that is 0.
  BoundProbabilityQuery top{{10, 0, 3}, Rank(1), MetricKind::kNdcg, LossKind::kBpr};
  EXPECT_EQ(bound_probability(top).evaluation_point, 0.0);
  EXPECT_EQ(bound_probability_exact(top), Exact(0));
}

TEST(BoundProbability, QueryRules) {
  // BPR and CCE tie the success count to the rank.
  EXPECT_THROW(bound_probability(
                   {{10, 3, 3}, Rank(5), MetricKind::kNdcg, LossKind::kBpr}),
               InvalidInput);
  EXPECT_THROW(bound_probability(
                   {{10, 4, 3}, Rank(12), MetricKind::kMrr, LossKind::kCce}),
               InvalidInput);
  // BCE takes |Gamma_0| freely.
  EXPECT_NO_THROW(bound_probability(
      {{10, 7, 3}, Rank(5), MetricKind::kNdcg, LossKind::kBce}));
}

TEST(WorstCaseOrdering, SpecCells) {
  auto o = worst_case_ordering({10, 4, 3}, 4, Rank(5), MetricKind::kNdcg);
  EXPECT_DOUBLE_EQ(o.bce.lower_bound, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(o.bpr.lower_bound, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(o.cce.lower_bound, 1.0 / 30.0);

  o = worst_case_ordering({10, 2, 3}, 8, Rank(3), MetricKind::kNdcg);
  const unsigned floor_point = static_cast<unsigned>(o.bpr.floored_point);
  const Exact bce = 1 - testing::oracle_cdf(10, 8, 3, floor_point);
  const Exact bpr = 1 - testing::oracle_cdf(10, 2, 3, floor_point);
  EXPECT_GE(bce, bpr);
  EXPECT_DOUBLE_EQ(o.bce.lower_bound, static_cast<double>(bce));
  EXPECT_DOUBLE_EQ(o.bpr.lower_bound, static_cast<double>(bpr));

  o = worst_case_ordering({10, 0, 3}, 0, Rank(1), MetricKind::kMrr);
  EXPECT_EQ(o.bpr.lower_bound, 0.0);
  EXPECT_EQ(o.cce.lower_bound, 0.0);

  EXPECT_THROW(worst_case_ordering({10, 4, 3}, 3, Rank(5), MetricKind::kNdcg),
               InvalidInput);
}

}  // namespace
}  // namespace lossbound
