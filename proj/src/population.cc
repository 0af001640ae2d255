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

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace coincidence {
namespace {

absl::Status CheckPositive(double value, std::string_view what) {
  if (!std::isfinite(value) || value <= 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s must be finite and > 0, got %g", std::string(what),
                      value));
  }
  return absl::OkStatus();
}

}  // namespace

const std::vector<PopulationEstimate>& BuiltinEstimates() {
  static const auto* const kEstimates = new std::vector<PopulationEstimate>{
      {"living", 7.8e9, "global demographic estimate of currently living humans"},
      {"ever_lived", 1.0e11,
       "Kaneda & Haub (2018), humans who have ever lived"},
      {"ever_will_live_median", 2.0e11,
       "Copernican (delta-t) median: ever_lived / 0.5"},
  };
  return *kEstimates;
}

absl::StatusOr<PopulationEstimate> FindEstimate(std::string_view label) {
  for (const PopulationEstimate& estimate : BuiltinEstimates()) {
    if (estimate.label == label) return estimate;
  }
  return absl::NotFoundError(absl::StrFormat(
      "unknown population label '%s' (known: living, ever_lived, "
      "ever_will_live_median)",
      std::string(label)));
}

absl::StatusOr<double> CopernicanTotal(double past_count,
                                       double rank_quantile) {
  if (absl::Status status = CheckPositive(past_count, "past_count");
      !status.ok()) {
    return status;
  }
  if (!(rank_quantile > 0 && rank_quantile <= 1)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "rank_quantile must be in (0, 1], got %g", rank_quantile));
  }
  return past_count / rank_quantile;
}

const std::vector<DatasetInfo>& BuiltinDatasets() {
  static const auto* const kDatasets = new std::vector<DatasetInfo>{
      {"FFHQ", 70000, 70000, false,
       "70,000 images; at most one identity per image"},
      {"CelebA", std::nullopt, 10177, false, "10,177 identities"},
      {"LFW", std::nullopt, 10000, true, "on the order of 10,000 identities"},
  };
  return *kDatasets;
}

absl::StatusOr<double> FoldRatio(double population, double dataset_count) {
  if (absl::Status status = CheckPositive(population, "population");
      !status.ok()) {
    return status;
  }
  if (absl::Status status = CheckPositive(dataset_count, "dataset_count");
      !status.ok()) {
    return status;
  }
  return population / dataset_count;
}

absl::StatusOr<FamiliarityStats> Familiarity(double known_faces,
                                             double population) {
  if (absl::Status status = CheckPositive(known_faces, "known_faces");
      !status.ok()) {
    return status;
  }
  if (absl::Status status = CheckPositive(population, "population");
      !status.ok()) {
    return status;
  }
  return FamiliarityStats{.known_count = known_faces,
                          .familiar_fraction = known_faces / population};
}

}  // namespace coincidence
