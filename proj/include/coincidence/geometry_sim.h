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

// Monte Carlo estimates of nearest-neighbor distance statistics for uniform
// points in [0,1)^D, with either periodic (torus) or hard (cube) boundaries.
//
// Every trial draws its points from its own substream keyed by
// (seed, trial_index), and per-trial partial statistics are merged in trial
// order, so results are bit-identical for any number of worker threads.

#ifndef COINCIDENCE_GEOMETRY_SIM_H_
#define COINCIDENCE_GEOMETRY_SIM_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace coincidence {

inline constexpr int kMaxSimDimension = 32;
inline constexpr int kMaxSimPoints = 100000;

enum class Topology { kTorus, kCube };

std::string_view TopologyName(Topology topology);
absl::StatusOr<Topology> ParseTopology(std::string_view name);

struct SimConfig {
  int dimension = 2;
  int points = 1024;
  int trials = 100;
  uint64_t seed = 0;
  Topology topology = Topology::kTorus;
  int max_rank = 1;
};

absl::Status ValidateSimConfig(const SimConfig& config);

// N points of dimension D stored row-major.
class PointSet {
 public:
  PointSet(int dimension, std::vector<double> coords);

  int dimension() const { return dimension_; }
  int size() const { return static_cast<int>(coords_.size()) / dimension_; }
  std::span<const double> point(int i) const {
    return std::span<const double>(coords_).subspan(
        static_cast<size_t>(i) * dimension_, dimension_);
  }
  std::span<const double> coords() const { return coords_; }

 private:
  int dimension_;
  std::vector<double> coords_;
};

// Sorted distances to the `max_rank` nearest other points, one row per point.
class NeighborTable {
 public:
  NeighborTable(int points, int max_rank)
      : max_rank_(max_rank),
        distances_(static_cast<size_t>(points) * max_rank, 0.0) {}

  int max_rank() const { return max_rank_; }
  int size() const { return static_cast<int>(distances_.size()) / max_rank_; }
  std::span<const double> row(int i) const {
    return std::span<const double>(distances_).subspan(
        static_cast<size_t>(i) * max_rank_, max_rank_);
  }
  std::span<double> mutable_row(int i) {
    return std::span<double>(distances_).subspan(
        static_cast<size_t>(i) * max_rank_, max_rank_);
  }
  // Distance to the rank-th neighbor (1-based) of point i.
  double at(int i, int rank) const { return row(i)[rank - 1]; }

  friend bool operator==(const NeighborTable&, const NeighborTable&) = default;

 private:
  int max_rank_;
  std::vector<double> distances_;
};

struct RankStats {
  int rank = 0;
  double mean = 0;
  double standard_error = 0;
  int64_t count = 0;

  friend bool operator==(const RankStats&, const RankStats&) = default;
};

struct SimResult {
  SimConfig config;
  std::vector<RankStats> ranks;
};

// Uniform points in [0,1)^D for one trial. Depends only on
// (config.seed, trial_index, config.points, config.dimension).
absl::StatusOr<PointSet> SamplePoints(const SimConfig& config, int trial_index);

absl::StatusOr<double> PairDistance(std::span<const double> a,
                                    std::span<const double> b,
                                    Topology topology);

// O(N^2) reference search.
absl::StatusOr<NeighborTable> NNDistancesBruteForce(const PointSet& points,
                                                    int max_rank,
                                                    Topology topology);

// k-d tree search. Produces the same table as NNDistancesBruteForce, bit for
// bit, because both evaluate each candidate distance with the same kernel.
absl::StatusOr<NeighborTable> NNDistancesAccelerated(const PointSet& points,
                                                     int max_rank,
                                                     Topology topology);

// `num_threads` <= 0 uses the hardware concurrency.
absl::StatusOr<SimResult> RunSimulation(const SimConfig& config,
                                        int num_threads = 0);

// Mean rank-1 neighbor distance divided by the mean distance between
// distinct random pairs, both on the unit torus.
absl::StatusOr<double> NNToRandomRatio(int dimension, int points, int trials,
                                       uint64_t seed, int num_threads = 0);

}  // namespace coincidence

#endif  // COINCIDENCE_GEOMETRY_SIM_H_
