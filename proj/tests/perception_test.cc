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

#include "coincidence/perception.h"

#include <cmath>
#include <random>

#include "coincidence/nn_stats.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace coincidence {
namespace {

using ::coincidence::testing::UnitBallVolumeOracle;

TEST(RiskVerdictTest, PopulationScaleIsAtRisk) {
  const RiskAssessment risk =
      *RiskVerdict({.d_bar_prime = 1, .c = 1}, 2e11, 10);
  EXPECT_NEAR(risk.mean_nn_jnd, 0.06416, 1e-4);
  EXPECT_EQ(risk.mean_nn_jnd, risk.mean_nn_distance);
  EXPECT_EQ(risk.threshold_jnd, 1.0);
  EXPECT_TRUE(risk.at_risk);
}

TEST(RiskVerdictTest, BlindObserverConfusesEverything) {
  for (int d : {1, 10, 40}) {
    const RiskAssessment risk = *RiskVerdict({.d_bar_prime = 0, .c = 1}, 50, d);
    EXPECT_EQ(risk.mean_nn_jnd, 0.0);
    EXPECT_TRUE(risk.at_risk);
    EXPECT_EQ(risk.confusion_probability, 1.0);
    EXPECT_FALSE(risk.critical_population.has_value());
  }
}

TEST(RiskVerdictTest, SharpObserverSmallPopulation) {
  const RiskAssessment risk =
      *RiskVerdict({.d_bar_prime = 100, .c = 1}, 100, 10);
  // mpmath: 100 * <r_1(100)> at D = 10.
  EXPECT_NEAR(risk.mean_nn_jnd, 54.686427735336924, 1e-10);
  EXPECT_FALSE(risk.at_risk);
}

TEST(RiskVerdictTest, BoundaryEqualityIsNotAtRisk) {
  const double mean = *NNMeanExact({.dimension = 4, .rank = 1, .points = 500});
  const RiskAssessment risk =
      *RiskVerdict({.d_bar_prime = 1, .c = mean}, 500, 4);
  EXPECT_EQ(risk.mean_nn_jnd, risk.threshold_jnd);
  EXPECT_FALSE(risk.at_risk);
}

TEST(RiskVerdictTest, HeadlineHoldsAcrossFaceDimensions) {
  for (int d = kMinFaceDimension; d <= kMaxFaceDimension; ++d) {
    EXPECT_TRUE(RiskVerdict({.d_bar_prime = 1, .c = 1}, 2e11, d)->at_risk)
        << "D=" << d;
  }
}

TEST(RiskVerdictTest, PropagatesDomainErrors) {
  EXPECT_FALSE(RiskVerdict({.d_bar_prime = 1, .c = 1}, 1, 10).ok());
  EXPECT_FALSE(RiskVerdict({.d_bar_prime = 1, .c = 1}, 100, 0).ok());
  EXPECT_FALSE(RiskVerdict({.d_bar_prime = -1, .c = 1}, 100, 3).ok());
  EXPECT_FALSE(RiskVerdict({.d_bar_prime = 1, .c = 0}, 100, 3).ok());
}

TEST(ConfusionProbabilityTest, Examples) {
  EXPECT_EQ(*ConfusionProbability({.d_bar_prime = 1, .c = 0.1}, 0, 10), 0.0);
  for (int d : {1, 4, 10}) {
    EXPECT_EQ(*ConfusionProbability({.d_bar_prime = 1, .c = std::sqrt(d)}, 5, d),
              1.0);
  }
  // V = 2.5502 * 0.0741^10; oracle 1 - exp(-N V) in long double.
  const long double v = UnitBallVolumeOracle(10) * std::pow(0.0741L, 10);
  const double oracle = static_cast<double>(-std::expm1(-2e11L * v));
  const double got =
      *ConfusionProbability({.d_bar_prime = 1, .c = 0.0741}, 2e11, 10);
  EXPECT_NEAR(got, 0.922, 0.005);
  EXPECT_NEAR(got, oracle, 1e-10);
}

TEST(ConfusionProbabilityTest, BallVolumeMatchesRecurrence) {
  for (int d = 1; d <= 40; ++d) {
    EXPECT_NEAR(std::exp(LogBallVolume(d, 1.0)), UnitBallVolumeOracle(d),
                1e-13 * UnitBallVolumeOracle(d));
  }
}

TEST(ConfusionProbabilityTest, IsMonotone) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.01, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    const int d = 1 + rep % 12;
    const double c = unit(rng) * 0.3;
    const double dp = unit(rng) * 3;
    const double n = std::pow(10.0, 1 + 10 * unit(rng));
    const PerceptualParams base{.d_bar_prime = dp, .c = c};
    const double p = *ConfusionProbability(base, n, d);
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
    EXPECT_GE(*ConfusionProbability(base, n * 2, d), p);
    EXPECT_GE(*ConfusionProbability({.d_bar_prime = dp, .c = c * 1.5}, n, d), p);
    EXPECT_LE(*ConfusionProbability({.d_bar_prime = dp * 1.5, .c = c}, n, d), p);
  }
}

TEST(CriticalPopulationTest, Examples) {
  for (int d : {1, 5, 10}) {
    const double c = *LargeNPrefactor(d, 1);
    EXPECT_NEAR(*CriticalPopulation({.d_bar_prime = 1, .c = c}, d, 1), 1.0,
                1e-12);
  }
  // mpmath: (C(10, 1) / 0.5)^10.
  EXPECT_NEAR(*CriticalPopulation({.d_bar_prime = 1, .c = 0.5}, 10, 1),
              243.85888224683679, 1e-9);
  EXPECT_NEAR(*CriticalPopulation({.d_bar_prime = 1, .c = 0.5}, 1, 1), 1.0,
              1e-14);
  EXPECT_FALSE(CriticalPopulation({.d_bar_prime = 0, .c = 1}, 10, 1).ok());
}

// At the critical population the exact mean still exceeds the large-N form
// by a relative O(1/N) term, so the verdict flips within 1e-6 of N* only once
// that term is below 1e-6 / D, roughly N* > 5e5.
TEST(CriticalPopulationTest, VerdictFlipsAtCriticalPopulation) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int checked = 0;
  for (int rep = 0; rep < 300; ++rep) {
    const int d = 1 + rep % 16;
    const double dp = 0.5 + 2 * unit(rng);
    const double target = std::pow(10.0, 6 + 8 * unit(rng));
    // Choose c so that N* = target.
    const double c = *LargeNPrefactor(d, 1) * dp * std::pow(target, -1.0 / d);
    const PerceptualParams params{.d_bar_prime = dp, .c = c};
    const double critical = *CriticalPopulation(params, d);
    EXPECT_FALSE(RiskVerdict(params, critical * (1 - 1e-6), d)->at_risk);
    EXPECT_TRUE(RiskVerdict(params, critical * (1 + 1e-6), d)->at_risk)
        << "D=" << d << " N*=" << critical;
    ++checked;
  }
  EXPECT_EQ(checked, 300);
}

TEST(CriticalPopulationTest, VerdictFlipsWithinLargeNAccuracyFromTenThousand) {
  for (int d = 1; d <= 16; ++d) {
    for (double target : {1e4, 3e4, 1e5}) {
      const double c = *LargeNPrefactor(d, 1) * std::pow(target, -1.0 / d);
      const PerceptualParams params{.d_bar_prime = 1, .c = c};
      const double critical = *CriticalPopulation(params, d);
      EXPECT_FALSE(RiskVerdict(params, critical * 0.999, d)->at_risk);
      EXPECT_TRUE(RiskVerdict(params, critical * 1.001, d)->at_risk);
    }
  }
}

TEST(PerceptionPropertyTest, ScaleInvariance) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    const int d = 1 + rep % 20;
    const double dp = 0.1 + 5 * unit(rng);
    const double c = 0.01 + unit(rng);
    const double n = std::pow(10.0, 1 + 11 * unit(rng));
    const double k = std::ldexp(1.0, static_cast<int>(rep % 9) - 4);
    const RiskAssessment a = *RiskVerdict({.d_bar_prime = dp, .c = c}, n, d);
    const RiskAssessment b =
        *RiskVerdict({.d_bar_prime = dp * k, .c = c * k}, n, d);
    EXPECT_EQ(a.at_risk, b.at_risk);
    EXPECT_NEAR(a.confusion_probability, b.confusion_probability, 1e-12);
    EXPECT_NEAR(*a.critical_population, *b.critical_population,
                1e-12 * *a.critical_population);
  }
}

}  // namespace
}  // namespace coincidence
