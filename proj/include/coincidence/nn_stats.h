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

// Mean n-th nearest-neighbor distances among N points distributed uniformly
// in a D-dimensional unit volume.
//
// The exact mean is
//
//   <r_n(N)> = [Gamma(D/2 + 1)]^(1/D) / sqrt(pi)
//              * Gamma(n + 1/D) / Gamma(n)
//              * Gamma(N) / Gamma(N + 1/D)
//
// and for N >> n it approaches (n / N)^(1/D) up to a constant that depends
// only on D and n. Every gamma product is evaluated in log space, so N may be
// as large as ~1e15 (population-scale estimates are passed as reals).

#ifndef COINCIDENCE_NN_STATS_H_
#define COINCIDENCE_NN_STATS_H_

#include "absl/status/statusor.h"

namespace coincidence {

// Above this N, ln(Gamma(N) / Gamma(N + s)) is taken from its 1/N expansion.
inline constexpr double kGammaRatioSwitch = 1e7;

// Parameters of a nearest-neighbor distance query. `points` is real-valued
// because population counts are order-of-magnitude estimates.
struct NNQuery {
  int dimension = 1;
  int rank = 1;
  double points = 2;
};

// Checks D >= 1, n >= 1, N >= n + 1 and N finite and <= 1e15.
absl::Status ValidateQuery(const NNQuery& query);

// ln Gamma(x) for finite x > 0.
absl::StatusOr<double> LogGamma(double x);

// ln(Gamma(n) / Gamma(n + s)) for n > 0 and 0 < s <= 1.
absl::StatusOr<double> GammaRatioLog(double n, double s);

// Exact mean distance to the n-th nearest neighbor.
absl::StatusOr<double> NNMeanExact(const NNQuery& query);

// (n / N)^(1/D). Requires only N >= n, so n == N is a valid input.
absl::StatusOr<double> NNMeanApprox(const NNQuery& query);

// C(D, n) = [Gamma(D/2 + 1)]^(1/D) / sqrt(pi) * Gamma(n + 1/D) / Gamma(n),
// the large-N prefactor in <r_n(N)> ~ C(D, n) * N^(-1/D).
absl::StatusOr<double> LargeNPrefactor(int dimension, int rank);

// C(D, n) / n^(1/D): the N -> infinity limit of NNMeanExact / NNMeanApprox.
absl::StatusOr<double> ApproximationRatio(int dimension, int rank);

namespace internal {

// The two evaluation routes behind GammaRatioLog, exposed for consistency
// tests. Neither validates its arguments.
double GammaRatioLogLgamma(double n, double s);
double GammaRatioLogAsymptotic(double n, double s);

// Cancellation-free Stirling difference used for moderate n below the switch.
double GammaRatioLogStirling(double n, double s);

}  // namespace internal
}  // namespace coincidence

#endif  // COINCIDENCE_NN_STATS_H_
