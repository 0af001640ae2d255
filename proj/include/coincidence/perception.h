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

// Perceptual privacy criterion for coincidental resemblance.
//
// Geometric nearest-neighbor distances in the unit-volume feature space are
// converted to just-noticeable differences (JND) by multiplying with the mean
// observer discriminability d'. A synthetic artifact is at risk of resembling
// some real entity when the expected distance to the nearest of N entities,
// in JND, falls strictly below the likeness threshold c.

#ifndef COINCIDENCE_PERCEPTION_H_
#define COINCIDENCE_PERCEPTION_H_

#include <optional>

#include "absl/status/statusor.h"

namespace coincidence {

inline constexpr int kDefaultFaceDimension = 10;
inline constexpr int kMinFaceDimension = 7;
inline constexpr int kMaxFaceDimension = 12;

struct PerceptualParams {
  // JND per unit feature-space distance.
  double d_bar_prime = 1.0;
  // Likeness threshold in JND.
  double c = 1.0;
};

absl::Status ValidateParams(const PerceptualParams& params);

struct RiskAssessment {
  int dimension = 0;
  double population = 0;
  double mean_nn_distance = 0;
  double mean_nn_jnd = 0;
  double threshold_jnd = 0;
  bool at_risk = false;
  double confusion_probability = 0;
  // Unset when d' == 0: the criterion then holds at every population size.
  std::optional<double> critical_population;
};

absl::StatusOr<RiskAssessment> RiskVerdict(const PerceptualParams& params,
                                           double population, int dimension);

// Probability that at least one of N uniformly placed entities lies within
// c / d' of a given artifact: 1 - (1 - min(1, V_D(c / d')))^N, where V_D(r)
// is the volume of the D-ball of radius r. Ignores boundary effects, so it
// is meaningful only while V_D is small.
absl::StatusOr<double> ConfusionProbability(const PerceptualParams& params,
                                            double population, int dimension);

// Population above which the mean n-th neighbor lies within c, using the
// large-N form d' * C(D, n) * N^(-1/D) = c.
absl::StatusOr<double> CriticalPopulation(const PerceptualParams& params,
                                          int dimension, int rank = 1);

// Volume of the D-ball of radius r, ln-space internally.
double LogBallVolume(int dimension, double radius);

}  // namespace coincidence

#endif  // COINCIDENCE_PERCEPTION_H_
