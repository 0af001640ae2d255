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
#include <numbers>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "coincidence/nn_stats.h"

namespace coincidence {

absl::Status ValidateParams(const PerceptualParams& params) {
  if (!std::isfinite(params.d_bar_prime) || params.d_bar_prime < 0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "d' must be finite and >= 0, got %g", params.d_bar_prime));
  }
  if (!std::isfinite(params.c) || params.c <= 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("c must be finite and > 0, got %g", params.c));
  }
  return absl::OkStatus();
}

double LogBallVolume(int dimension, double radius) {
  const double d = dimension;
  return 0.5 * d * std::log(std::numbers::pi) + d * std::log(radius) -
         *LogGamma(0.5 * d + 1.0);
}

absl::StatusOr<double> ConfusionProbability(const PerceptualParams& params,
                                            double population, int dimension) {
  if (absl::Status status = ValidateParams(params); !status.ok()) return status;
  if (dimension < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("dimension must be >= 1, got %d", dimension));
  }
  if (!std::isfinite(population) || population < 0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "population must be finite and >= 0, got %g", population));
  }
  if (population == 0) return 0.0;
  if (params.d_bar_prime == 0) return 1.0;
  const double log_volume =
      LogBallVolume(dimension, params.c / params.d_bar_prime);
  if (log_volume >= 0) return 1.0;
  // 1 - (1 - V)^N = -expm1(N * log1p(-V)), stable for tiny V and huge N.
  return -std::expm1(population * std::log1p(-std::exp(log_volume)));
}

absl::StatusOr<double> CriticalPopulation(const PerceptualParams& params,
                                          int dimension, int rank) {
  if (absl::Status status = ValidateParams(params); !status.ok()) return status;
  if (params.d_bar_prime == 0) {
    return absl::InvalidArgumentError(
        "critical population is unbounded below when d' = 0: every N is at "
        "risk");
  }
  absl::StatusOr<double> prefactor = LargeNPrefactor(dimension, rank);
  if (!prefactor.ok()) return prefactor.status();
  return std::exp(dimension *
                  std::log(*prefactor * params.d_bar_prime / params.c));
}

absl::StatusOr<RiskAssessment> RiskVerdict(const PerceptualParams& params,
                                           double population, int dimension) {
  if (absl::Status status = ValidateParams(params); !status.ok()) return status;
  absl::StatusOr<double> mean = NNMeanExact(
      NNQuery{.dimension = dimension, .rank = 1, .points = population});
  if (!mean.ok()) return mean.status();

  RiskAssessment out;
  out.dimension = dimension;
  out.population = population;
  out.mean_nn_distance = *mean;
  out.mean_nn_jnd = params.d_bar_prime * *mean;
  out.threshold_jnd = params.c;
  out.at_risk = out.mean_nn_jnd < out.threshold_jnd;

  absl::StatusOr<double> confusion =
      ConfusionProbability(params, population, dimension);
  if (!confusion.ok()) return confusion.status();
  out.confusion_probability = *confusion;

  if (params.d_bar_prime > 0) {
    absl::StatusOr<double> critical = CriticalPopulation(params, dimension);
    if (!critical.ok()) return critical.status();
    out.critical_population = *critical;
  }
  return out;
}

}  // namespace coincidence
