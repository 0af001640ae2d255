//
// Copyright 2026 The Coincidence Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "coincidence/population.h"

#include <cmath>

#include "gtest/gtest.h"

namespace coincidence {
namespace {

TEST(PopulationTest, BuiltinEstimates) {
  EXPECT_EQ(FindEstimate("living")->count, 7.8e9);
  EXPECT_EQ(FindEstimate("ever_lived")->count, 1.0e11);
  EXPECT_EQ(FindEstimate("ever_will_live_median")->count, 2.0e11);
  const auto& all = BuiltinEstimates();
  ASSERT_EQ(all.size(), 3u);
  for (size_t i = 0; i < all.size(); ++i) {
    EXPECT_FALSE(all[i].provenance.empty());
    EXPECT_GT(all[i].count, 0);
    if (i > 0) {
      EXPECT_LT(all[i - 1].count, all[i].count);
    }
  }
  EXPECT_EQ(FindEstimate("martians").status().code(),
            absl::StatusCode::kNotFound);
}

TEST(PopulationTest, CopernicanTotal) {
  EXPECT_EQ(*CopernicanTotal(1e11, 0.5), 2e11);
  EXPECT_EQ(*CopernicanTotal(1e11, 1.0), 1e11);
  EXPECT_NEAR(*CopernicanTotal(1e11, 0.05), 2e12, 1e-3);
  EXPECT_EQ(*CopernicanTotal(1e11, 0.5), FindEstimate("ever_will_live_median")->count);
  EXPECT_FALSE(CopernicanTotal(1e11, 0).ok());
  EXPECT_FALSE(CopernicanTotal(1e11, 1.01).ok());
  EXPECT_FALSE(CopernicanTotal(0, 0.5).ok());
}

TEST(PopulationTest, CopernicanTotalMonotoneAndLinear) {
  double prev = INFINITY;
  for (double q = 0.01; q <= 1.0; q += 0.01) {
    const double total = *CopernicanTotal(3e10, q);
    EXPECT_LT(total, prev);
    prev = total;
    EXPECT_NEAR(*CopernicanTotal(6e10, q), 2 * total, 1e-6 * total);
  }
}

TEST(PopulationTest, BuiltinDatasets) {
  const auto& datasets = BuiltinDatasets();
  ASSERT_EQ(datasets.size(), 3u);
  EXPECT_EQ(datasets[0].name, "FFHQ");
  EXPECT_EQ(datasets[0].image_count, 70000);
  EXPECT_EQ(datasets[0].identity_count_upper_bound, 70000);
  EXPECT_EQ(datasets[1].name, "CelebA");
  EXPECT_EQ(datasets[1].identity_count_upper_bound, 10177);
  EXPECT_EQ(datasets[2].name, "LFW");
  EXPECT_EQ(datasets[2].identity_count_upper_bound, 10000);
  EXPECT_TRUE(datasets[2].approximate);
  for (const DatasetInfo& d : datasets) {
    if (d.image_count) {
      EXPECT_LE(d.identity_count_upper_bound, *d.image_count);
    }
  }
}

TEST(PopulationTest, FoldRatios) {
  EXPECT_NEAR(*FoldRatio(7.8e9, 7e4), 111428.5714, 1e-3);
  EXPECT_NEAR(*FoldRatio(1e11, 7e4), 1428571.4286, 1e-3);
  EXPECT_NEAR(*FoldRatio(2e11, 7e4), 2857142.8571, 1e-3);
  // The quoted figures (100 thousand, 1.4 million, 2.9 million) are the
  // ratios rounded to the significant figures they are quoted with.
  const double ffhq = 70000;
  const struct {
    double quoted;
    int digits;
  } kQuoted[] = {{1e5, 1}, {1.4e6, 2}, {2.9e6, 2}};
  for (size_t i = 0; i < 3; ++i) {
    const double fold = *FoldRatio(BuiltinEstimates()[i].count, ffhq);
    const double unit =
        std::pow(10.0, std::floor(std::log10(fold)) - kQuoted[i].digits + 1);
    EXPECT_EQ(std::round(fold / unit) * unit, kQuoted[i].quoted) << i;
  }
  EXPECT_FALSE(FoldRatio(1e9, 0).ok());
}

TEST(PopulationTest, Familiarity) {
  EXPECT_NEAR(Familiarity(5000, 7.8e9)->familiar_fraction, 6.41e-7, 1e-9);
  EXPECT_EQ(Familiarity(5000, 5000)->familiar_fraction, 1.0);
  EXPECT_NEAR(Familiarity(5000, 1e11)->familiar_fraction, 5e-8, 1e-20);
  EXPECT_EQ(Familiarity(kDefaultKnownFaces, 1e6)->known_count, 5000);
  EXPECT_FALSE(Familiarity(0, 1e6).ok());
  EXPECT_FALSE(Familiarity(5000, -1).ok());
}

}  // namespace
}  // namespace coincidence
