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

// Times brute-force against k-d tree neighbor search at N = 10^4, D = 8 and
// fails unless the tree is at least 5x faster.

#include <chrono>
#include <cstdio>

#include "coincidence/geometry_sim.h"

int main() {
  using coincidence::Topology;
  using Clock = std::chrono::steady_clock;
  const coincidence::SimConfig config{
      .dimension = 8, .points = 10000, .trials = 1, .seed = 1};
  const coincidence::PointSet points = *coincidence::SamplePoints(config, 0);

  const auto t0 = Clock::now();
  const auto brute =
      *coincidence::NNDistancesBruteForce(points, 1, Topology::kTorus);
  const auto t1 = Clock::now();
  const auto tree =
      *coincidence::NNDistancesAccelerated(points, 1, Topology::kTorus);
  const auto t2 = Clock::now();

  const double brute_s = std::chrono::duration<double>(t1 - t0).count();
  const double tree_s = std::chrono::duration<double>(t2 - t1).count();
  const double speedup = brute_s / tree_s;
  std::printf("brute force %.3f s, k-d tree %.3f s, speedup %.1fx\n", brute_s,
              tree_s, speedup);
  if (!(brute == tree)) {
    std::printf("FAIL: tables differ\n");
    return 1;
  }
  if (speedup < 5.0) {
    std::printf("FAIL: speedup below 5x\n");
    return 1;
  }
  return 0;
}
