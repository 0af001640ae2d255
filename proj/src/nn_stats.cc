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

#include "coincidence/nn_stats.h"

#include <math.h>

#include <cmath>
#include <numbers>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace coincidence {
namespace {

constexpr double kMaxPoints = 1e15;

// Below this n the lgamma difference has no cancellation to speak of.
constexpr double kStirlingThreshold = 10.0;

// Tail of Stirling's series for ln Gamma(x) after (x - 1/2) ln x - x +
// ln(2 pi)/2. Truncation error is below 1e-15 relative for x >= 10.
double StirlingTail(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return inv * (1.0 / 12.0 -
                inv2 * (1.0 / 360.0 -
                        inv2 * (1.0 / 1260.0 -
                                inv2 * (1.0 / 1680.0 - inv2 / 1188.0))));
}

absl::Status CheckRatioArgs(double n, double s) {
  if (!std::isfinite(n) || n <= 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("gamma ratio requires finite N > 0, got %g", n));
  }
  if (!std::isfinite(s) || s <= 0 || s > 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("gamma ratio requires 0 < s <= 1, got %g", s));
  }
  return absl::OkStatus();
}

absl::Status CheckDimensionRank(int dimension, int rank) {
  if (dimension < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("dimension must be >= 1, got %d", dimension));
  }
  if (rank < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("neighbor rank must be >= 1, got %d", rank));
  }
  return absl::OkStatus();
}

double LogGammaUnchecked(double x) {
  int sign = 0;
  // lgamma_r leaves the global signgam alone.
  return ::lgamma_r(x, &sign);
}

// ln C(D, n) for validated arguments.
double LogPrefactor(int dimension, int rank) {
  const double d = dimension;
  const double s = 1.0 / d;
  return LogGammaUnchecked(0.5 * d + 1.0) / d - 0.5 * std::log(std::numbers::pi) +
         LogGammaUnchecked(rank + s) - LogGammaUnchecked(rank);
}

}  // namespace

namespace internal {

double GammaRatioLogLgamma(double n, double s) {
  return LogGammaUnchecked(n) - LogGammaUnchecked(n + s);
}

double GammaRatioLogAsymptotic(double n, double s) {
  const double inv = 1.0 / n;
  const double a = s * (s - 1.0);
  return -s * std::log(n) - a * inv * (0.5 - (2.0 * s - 1.0) * inv / 12.0);
}

double GammaRatioLogStirling(double n, double s) {
  // ln Gamma(n + s) - ln Gamma(n), regrouped so that the two (x - 1/2) ln x
  // terms never get subtracted directly.
  const double up = (n - 0.5) * std::log1p(s / n) + s * std::log(n + s) - s +
                    (StirlingTail(n + s) - StirlingTail(n));
  return -up;
}

}  // namespace internal

absl::Status ValidateQuery(const NNQuery& query) {
  if (absl::Status status = CheckDimensionRank(query.dimension, query.rank);
      !status.ok()) {
    return status;
  }
  if (!std::isfinite(query.points) || query.points > kMaxPoints) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "point count must be finite and <= %g, got %g", kMaxPoints,
        query.points));
  }
  if (query.points < query.rank + 1.0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "point count N=%g is below n + 1 = %d; no %d-th neighbor exists",
        query.points, query.rank + 1, query.rank));
  }
  return absl::OkStatus();
}

absl::StatusOr<double> LogGamma(double x) {
  if (!std::isfinite(x) || x <= 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("log_gamma requires finite x > 0, got %g", x));
  }
  return LogGammaUnchecked(x);
}

absl::StatusOr<double> GammaRatioLog(double n, double s) {
  if (absl::Status status = CheckRatioArgs(n, s); !status.ok()) {
    return status;
  }
  if (n > kGammaRatioSwitch) return internal::GammaRatioLogAsymptotic(n, s);
  if (n >= kStirlingThreshold) return internal::GammaRatioLogStirling(n, s);
  return internal::GammaRatioLogLgamma(n, s);
}

absl::StatusOr<double> LargeNPrefactor(int dimension, int rank) {
  if (absl::Status status = CheckDimensionRank(dimension, rank); !status.ok()) {
    return status;
  }
  return std::exp(LogPrefactor(dimension, rank));
}

absl::StatusOr<double> ApproximationRatio(int dimension, int rank) {
  if (absl::Status status = CheckDimensionRank(dimension, rank); !status.ok()) {
    return status;
  }
  return std::exp(LogPrefactor(dimension, rank) -
                  std::log(static_cast<double>(rank)) / dimension);
}

absl::StatusOr<double> NNMeanExact(const NNQuery& query) {
  if (absl::Status status = ValidateQuery(query); !status.ok()) return status;
  const double s = 1.0 / query.dimension;
  absl::StatusOr<double> ratio = GammaRatioLog(query.points, s);
  if (!ratio.ok()) return ratio.status();
  return std::exp(LogPrefactor(query.dimension, query.rank) + *ratio);
}

absl::StatusOr<double> NNMeanApprox(const NNQuery& query) {
  if (absl::Status status = CheckDimensionRank(query.dimension, query.rank);
      !status.ok()) {
    return status;
  }
  if (!std::isfinite(query.points) || query.points > kMaxPoints ||
      query.points < query.rank) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "approximation requires n <= N <= %g, got n=%d N=%g", kMaxPoints,
        query.rank, query.points));
  }
  return std::exp((std::log(static_cast<double>(query.rank)) -
                   std::log(query.points)) /
                  query.dimension);
}

}  // namespace coincidence
