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

// Candidate entity counts for the population that a synthetic face could
// coincidentally resemble, plus the reference face-dataset sizes they are
// compared against.

#ifndef COINCIDENCE_POPULATION_H_
#define COINCIDENCE_POPULATION_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace coincidence {

inline constexpr double kDefaultKnownFaces = 5000;

struct PopulationEstimate {
  std::string label;
  double count = 0;
  std::string provenance;
};

struct DatasetInfo {
  std::string name;
  std::optional<int64_t> image_count;
  int64_t identity_count_upper_bound = 0;
  // True when the identity count is only an order-of-magnitude figure.
  bool approximate = false;
  std::string provenance;
};

struct FamiliarityStats {
  double known_count = 0;
  double familiar_fraction = 0;
};

// living, ever_lived, ever_will_live_median, in that order.
const std::vector<PopulationEstimate>& BuiltinEstimates();

absl::StatusOr<PopulationEstimate> FindEstimate(std::string_view label);

// Total head count implied by a uniform prior on our birth rank: the value
// exceeded with probability `rank_quantile`.
absl::StatusOr<double> CopernicanTotal(double past_count, double rank_quantile);

// FFHQ, CelebA, LFW.
const std::vector<DatasetInfo>& BuiltinDatasets();

absl::StatusOr<double> FoldRatio(double population, double dataset_count);

absl::StatusOr<FamiliarityStats> Familiarity(double known_faces,
                                             double population);

}  // namespace coincidence

#endif  // COINCIDENCE_POPULATION_H_
