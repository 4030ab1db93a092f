/*
 * Copyright 2026 The HSA Toolkit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "hsa/rate_region.h"

#include <gtest/gtest.h>

#include <algorithm>

namespace hsa {
namespace {

// Direct transcription of the optimal region, used as the oracle.
int OracleSourceRate(int u, int v, int t) {
  return std::max(v + t, std::min(u * v - 1, u + t - 1));
}

TEST(RateRegionTest, PaperExamples) {
  const RateRegion ex1 = *OptimalRates({2, 3, 1});
  EXPECT_TRUE(ex1.feasible);
  EXPECT_EQ(ex1.message_rate, 1);
  EXPECT_EQ(ex1.relay_message_rate, 1);
  EXPECT_EQ(ex1.key_rate, 1);
  EXPECT_EQ(ex1.source_key_rate, 4);
  EXPECT_EQ(OptimalRates({3, 2, 2})->source_key_rate, 4);
  EXPECT_EQ(OptimalRates({2, 2, 0})->source_key_rate, 2);
}

TEST(RateRegionTest, InfeasibleBeyondBoundary) {
  const RateRegion r = *OptimalRates({2, 3, 3});
  EXPECT_FALSE(r.feasible);
  EXPECT_EQ(r.branch, RateBranch::kInfeasible);
  EXPECT_FALSE(IsFeasible({2, 3, 3}));
  EXPECT_TRUE(IsFeasible({2, 3, 2}));
}

TEST(RateRegionTest, Baseline) {
  EXPECT_EQ(*BaselineSourceRate({3, 2, 2}), 5);
  EXPECT_EQ(*BaselineSourceRate({2, 3, 1}), 5);
  EXPECT_EQ(*BaselineSourceRate({2, 1, 0}), 1);
}

TEST(RateRegionTest, RejectsOutOfModelConfigs) {
  EXPECT_FALSE(OptimalRates({1, 3, 0}).ok());
  EXPECT_FALSE(OptimalRates({2, 0, 0}).ok());
  EXPECT_FALSE(OptimalRates({2, 2, -1}).ok());
  EXPECT_FALSE(BaselineSourceRate({1, 2, 0}).ok());
}

TEST(RateRegionTest, MatchesOracleAndBranch) {
  for (int u = 2; u <= 6; ++u) {
    for (int v = 1; v <= 6; ++v) {
      for (int t = 0; t < (u - 1) * v; ++t) {
        const RateRegion r = *OptimalRates({u, v, t});
        ASSERT_TRUE(r.feasible);
        const int want = OracleSourceRate(u, v, t);
        EXPECT_EQ(r.source_key_rate, want);
        switch (r.branch) {
          case RateBranch::kClusterPlusColluders:
            EXPECT_EQ(want, v + t);
            break;
          case RateBranch::kAllButOne:
            EXPECT_EQ(want, u * v - 1);
            break;
          case RateBranch::kRelaysPlusColluders:
            EXPECT_EQ(want, u + t - 1);
            break;
          case RateBranch::kInfeasible:
            ADD_FAILURE();
        }
      }
    }
  }
}

TEST(RateRegionTest, MonotoneInColludersAndNeverAboveBaseline) {
  for (int u = 2; u <= 6; ++u) {
    for (int v = 1; v <= 6; ++v) {
      int prev = 0;
      for (int t = 0; t < (u - 1) * v; ++t) {
        const int r = OptimalRates({u, v, t})->source_key_rate;
        EXPECT_GE(r, prev);
        EXPECT_LE(r, *BaselineSourceRate({u, v, t}));
        EXPECT_GE(r, v + t);
        prev = r;
      }
      EXPECT_FALSE(OptimalRates({u, v, (u - 1) * v})->feasible);
    }
  }
}

TEST(RateRegionTest, FourByThreeSweep) {
  for (int t = 0; t <= 8; ++t) {
    const RateRegion r = *OptimalRates({4, 3, t});
    EXPECT_EQ(r.source_key_rate, 3 + t) << t;
    EXPECT_EQ(*BaselineSourceRate({4, 3, t}), 11);
  }
  EXPECT_FALSE(OptimalRates({4, 3, 9})->feasible);
}

TEST(RateRegionTest, TieBreaking) {
  // V+T = U+T-1 = 3 at (2,2,1); V+T wins the outer tie.
  EXPECT_EQ(OptimalRates({2, 2, 1})->branch, RateBranch::kClusterPlusColluders);
  // (3,1,1): V+T = 2, UV-1 = 2, U+T-1 = 3; min is UV-1 but tie with V+T.
  EXPECT_EQ(OptimalRates({3, 1, 1})->branch, RateBranch::kClusterPlusColluders);
  // (4,1,1): V+T = 2, UV-1 = 3, U+T-1 = 4.
  EXPECT_EQ(OptimalRates({4, 1, 1})->branch, RateBranch::kAllButOne);
  // (5,2,1): V+T = 3, UV-1 = 9, U+T-1 = 5.
  EXPECT_EQ(OptimalRates({5, 2, 1})->branch, RateBranch::kRelaysPlusColluders);
}

TEST(RateTableTest, CsvLayout) {
  auto rows = RateTable({2, 2}, {3, 3}, {1, 3});
  ASSERT_TRUE(rows.ok());
  ASSERT_EQ(rows->size(), 3u);
  EXPECT_EQ(RateTableCsv(*rows),
            "U,V,T,feasible,R_X,R_Y,R_Z,R_Zsigma,baseline,active_branch\n"
            "2,3,1,true,1,1,1,4,5,V+T\n"
            "2,3,2,true,1,1,1,5,5,V+T\n"
            "2,3,3,false,,,,,5,none\n");
}

TEST(RateTableTest, RejectsEmptyOrInvalidRanges) {
  EXPECT_FALSE(RateTable({3, 2}, {1, 1}, {0, 0}).ok());
  EXPECT_FALSE(RateTable({1, 2}, {1, 1}, {0, 0}).ok());
}

}  // namespace
}  // namespace hsa
