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

#include "coincidence/geometry_sim.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace coincidence {
namespace {

// k-d tree leaves hold at most this many points. Large leaves suit the
// vectorized scan; in 8-D a smaller leaf prunes little more.
constexpr int kLeafSize = 64;
// Leaves are padded to a multiple of this many points for the vector scan.
constexpr int kLeafLanes = 4;
// Axes between checks for a leaf whose points are all out of reach.
constexpr int kAbandonStride = 2;

// Pairs sampled per trial by NNToRandomRatio once all-pairs is too costly.
constexpr int kAllPairsLimit = 2000;
constexpr int64_t kSampledPairs = 1000000;

// Substream salts so that point draws and pair draws never share a stream.
constexpr uint64_t kPointStream = 0;
constexpr uint64_t kPairStream = 1;

std::mt19937_64 TrialEngine(uint64_t seed, uint64_t trial, uint64_t stream) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(trial),
                    static_cast<uint32_t>(trial >> 32),
                    static_cast<uint32_t>(stream)};
  return std::mt19937_64(seq);
}

// 53 random bits mapped onto [0, 1).
double UniformUnit(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

double SquaredDistance(std::span<const double> a, std::span<const double> b,
                       Topology topology) {
  double sum = 0;
  for (size_t k = 0; k < a.size(); ++k) {
    double diff = std::abs(a[k] - b[k]);
    if (topology == Topology::kTorus) diff = std::min(diff, 1.0 - diff);
    sum += diff * diff;
  }
  return sum;
}

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void Add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0;
  double carry_ = 0;
};

// Count, mean and sum of squared deviations for one rank.
struct Moments {
  int64_t count = 0;
  double mean = 0;
  double m2 = 0;

  // Chan et al. pairwise update; order of merges is fixed by the caller.
  void Merge(const Moments& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double total = static_cast<double>(count + other.count);
    const double delta = other.mean - mean;
    mean += delta * static_cast<double>(other.count) / total;
    m2 += other.m2 + delta * delta * static_cast<double>(count) *
                         static_cast<double>(other.count) / total;
    count += other.count;
  }
};

Moments TwoPassMoments(const NeighborTable& table, int rank) {
  Moments out;
  out.count = table.size();
  CompensatedSum sum;
  for (int i = 0; i < table.size(); ++i) sum.Add(table.at(i, rank));
  out.mean = sum.value() / static_cast<double>(out.count);
  CompensatedSum squares;
  for (int i = 0; i < table.size(); ++i) {
    const double dev = table.at(i, rank) - out.mean;
    squares.Add(dev * dev);
  }
  out.m2 = squares.value();
  return out;
}

absl::Status CheckSearchArgs(const PointSet& points, int max_rank) {
  if (max_rank < 1 || max_rank >= points.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "max_rank must satisfy 1 <= max_rank < N (N=%d), got %d", points.size(),
        max_rank));
  }
  return absl::OkStatus();
}

// Runs body(i) for i in [0, count) on up to num_threads workers.
template <typename Body>
void ParallelFor(int count, int num_threads, Body body) {
  if (num_threads <= 0) {
    num_threads = static_cast<int>(std::thread::hardware_concurrency());
  }
  num_threads = std::clamp(num_threads, 1, std::max(count, 1));
  if (num_threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::jthread> workers;
  workers.reserve(num_threads);
  for (int t = 0; t < num_threads; ++t) {
    workers.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    });
  }
}

void FillRow(std::span<const double> squared, std::span<double> row) {
  for (size_t r = 0; r < row.size(); ++r) row[r] = std::sqrt(squared[r]);
}

// Fixed-capacity ascending list of the smallest squared distances seen.
class KBest {
 public:
  explicit KBest(int k) : values_(k, std::numeric_limits<double>::infinity()) {}

  double worst() const { return values_.back(); }

  void Offer(double value) {
    if (!(value < values_.back())) return;
    auto pos = std::upper_bound(values_.begin(), values_.end(), value);
    std::move_backward(pos, values_.end() - 1, values_.end());
    *pos = value;
  }

  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;
};

// Squared distances from q to the `count` points of a leaf stored axis-major
// at `base`, written to `sum`. The loops run axis by axis across the leaf so
// they vectorize; each point's sum still accumulates axes in order, so every
// value is bit-identical to SquaredDistance. Partial sums only grow, so the
// scan gives up, returning false, once every point is already past `worst`.
// The AVX2 clone adds no fused multiply-add and rounds exactly as the
// baseline does.
__attribute__((target_clones("avx2", "default"))) bool LeafDistances(
    const double* base, int count, std::span<const double> q, bool torus,
    double worst, double* sum) {
  const int dim = static_cast<int>(q.size());
  std::fill(sum, sum + count, 0.0);
  for (int k = 0; k < dim; ++k) {
    const double x = q[k];
    const double* column = base + static_cast<size_t>(k) * count;
    if (torus) {
      for (int i = 0; i < count; ++i) {
        double diff = std::abs(x - column[i]);
        diff = std::min(diff, 1.0 - diff);
        sum[i] += diff * diff;
      }
    } else {
      for (int i = 0; i < count; ++i) {
        const double diff = x - column[i];
        sum[i] += diff * diff;
      }
    }
    if (k % kAbandonStride == kAbandonStride - 1 || k + 1 == dim) {
      double low[kLeafLanes];
      std::fill(low, low + kLeafLanes, std::numeric_limits<double>::infinity());
      for (int i = 0; i < count; i += kLeafLanes) {
        for (int l = 0; l < kLeafLanes; ++l) {
          low[l] = std::min(low[l], sum[i + l]);
        }
      }
      if (*std::min_element(low, low + kLeafLanes) > worst) return false;
    }
  }
  return true;
}

// Cells are split at the median of the widest coordinate. The search keeps,
// per axis, the gap from the query to the current cell so moving into a child
// costs O(1) instead of a full box distance (Arya and Mount's incremental
// distance). Under the torus the gap is measured around the circle.
class KdTree {
 public:
  KdTree(const PointSet& points, Topology topology)
      : points_(points), topology_(topology), dim_(points.dimension()) {
    order_.resize(points.size());
    for (int i = 0; i < points.size(); ++i) order_[i] = i;
    nodes_.reserve(2 * points.size() / kLeafSize + 1);
    Build(0, points.size());
    box_lo_.resize(nodes_.size() * dim_);
    box_hi_.resize(nodes_.size() * dim_);
    for (size_t id = 0; id < nodes_.size(); ++id) {
      const Node& node = nodes_[id];
      if (node.left >= 0) continue;
      const int width = PaddedWidth(node.end - node.begin);
      nodes_[id].packed = packed_.size();
      // Padding slots hold +inf, which lands at an infinite distance.
      packed_.resize(packed_.size() + static_cast<size_t>(width) * dim_,
                     std::numeric_limits<double>::infinity());
      for (int k = 0; k < dim_; ++k) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (int i = node.begin; i < node.end; ++i) {
          const double x = Coord(order_[i], k);
          packed_[nodes_[id].packed + k * width + (i - node.begin)] = x;
          lo = std::min(lo, x);
          hi = std::max(hi, x);
        }
        box_lo_[id * dim_ + k] = lo;
        box_hi_[id * dim_ + k] = hi;
      }
    }
  }

  // Fills every row of `table`. Queries run in tree order so consecutive
  // searches touch the same leaves.
  void SearchAll(NeighborTable& table) const {
    SearchState state{{}, 0, std::vector<double>(dim_, 0.0),
                      std::vector<double>(dim_, 0.0),
                      std::vector<double>(dim_, 1.0)};
    for (int query : order_) {
      KBest best(table.max_rank());
      state.q = points_.point(query);
      state.query = query;
      Visit(0, 0.0, best, state);
      FillRow(best.values(), table.mutable_row(query));
    }
  }

 private:
  struct Node {
    int begin;
    int end;
    int left = -1;
    int right = -1;
    int split_dim = 0;
    double split = 0;
    size_t packed = 0;
  };

  static int PaddedWidth(int count) {
    return (count + kLeafLanes - 1) / kLeafLanes * kLeafLanes;
  }

  struct SearchState {
    std::span<const double> q;
    int query;
    std::vector<double> gap;
    std::vector<double> cell_lo;
    std::vector<double> cell_hi;
  };

  double Coord(int index, int k) const { return points_.point(index)[k]; }

  int Build(int begin, int end) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{begin, end});
    if (end - begin <= kLeafSize) return id;
    int split_dim = 0;
    double widest = -1;
    for (int k = 0; k < dim_; ++k) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (int i = begin; i < end; ++i) {
        lo = std::min(lo, Coord(order_[i], k));
        hi = std::max(hi, Coord(order_[i], k));
      }
      if (hi - lo > widest) {
        widest = hi - lo;
        split_dim = k;
      }
    }
    const int mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid,
                     order_.begin() + end, [&](int a, int b) {
                       return Coord(a, split_dim) < Coord(b, split_dim);
                     });
    const double split = Coord(order_[mid], split_dim);
    const int left = Build(begin, mid);
    const int right = Build(mid, end);
    nodes_[id].left = left;
    nodes_[id].right = right;
    nodes_[id].split_dim = split_dim;
    nodes_[id].split = split;
    return id;
  }

  // Distance from x to the interval [lo, hi] along one axis, written without
  // branches because the outcome is close to a coin flip during a search.
  double AxisGap(double x, double lo, double hi) const {
    if (topology_ == Topology::kCube) {
      return std::max(0.0, std::max(lo - x, x - hi));
    }
    // How far x sits past lo going up the circle, against the arc width.
    double t = x - lo;
    t += t < 0 ? 1.0 : 0.0;
    return std::max(0.0, std::min(t - (hi - lo), 1.0 - t));
  }

  // A child is skipped only when its bound clears the current k-th best by
  // more than any rounding the running sum can have picked up, so ties and
  // near-ties are always examined.
  bool MayContain(double bound, const KBest& best) const {
    return bound * (1.0 - 1e-9) - 1e-12 <= best.worst();
  }

  // Tight box around a leaf's points, which prunes far better than the cell.
  double LeafBound(int id, std::span<const double> q) const {
    double sum = 0;
    for (int k = 0; k < dim_; ++k) {
      const double gap =
          AxisGap(q[k], box_lo_[static_cast<size_t>(id) * dim_ + k],
                  box_hi_[static_cast<size_t>(id) * dim_ + k]);
      sum += gap * gap;
    }
    return sum;
  }

  // Full distances to every point of a leaf, axis by axis across the leaf so
  // the loop vectorizes. Each point's sum still runs over axes in order, so
  // the values are bit-identical to SquaredDistance.
  void ScanLeaf(int id, KBest& best, const SearchState& s) const {
    const Node& node = nodes_[id];
    if (!MayContain(LeafBound(id, s.q), best)) return;
    const int count = node.end - node.begin;
    double sum[kLeafSize + kLeafLanes];
    if (!LeafDistances(&packed_[node.packed], PaddedWidth(count),
                       s.q, topology_ == Topology::kTorus, best.worst(),
                       sum)) {
      return;
    }
    for (int i = 0; i < count; ++i) {
      if (order_[node.begin + i] != s.query) best.Offer(sum[i]);
    }
  }

  void Visit(int id, double bound, KBest& best, SearchState& s) const {
    const Node& node = nodes_[id];
    if (node.left < 0) {
      ScanLeaf(id, best, s);
      return;
    }
    const int k = node.split_dim;
    const double old_gap = s.gap[k];
    const double lo = s.cell_lo[k];
    const double hi = s.cell_hi[k];
    const double left_gap = AxisGap(s.q[k], lo, node.split);
    const double right_gap = AxisGap(s.q[k], node.split, hi);
    const double base = bound - old_gap * old_gap;
    const double left_bound = base + left_gap * left_gap;
    const double right_bound = base + right_gap * right_gap;
    const bool left_first = left_bound <= right_bound;
    for (int pass = 0; pass < 2; ++pass) {
      const bool go_left = (pass == 0) == left_first;
      const double child_bound = go_left ? left_bound : right_bound;
      if (!MayContain(child_bound, best)) continue;
      s.gap[k] = go_left ? left_gap : right_gap;
      (go_left ? s.cell_hi[k] : s.cell_lo[k]) = node.split;
      Visit(go_left ? node.left : node.right, child_bound, best, s);
      s.cell_lo[k] = lo;
      s.cell_hi[k] = hi;
    }
    s.gap[k] = old_gap;
  }

  const PointSet& points_;
  Topology topology_;
  int dim_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
  // Leaf coordinates copied axis-major, each leaf padded to a whole number of
  // vector lanes, so a leaf scan reads contiguous memory.
  std::vector<double> packed_;
  // Tight bounding boxes, filled for leaves only.
  std::vector<double> box_lo_;
  std::vector<double> box_hi_;
};

}  // namespace

std::string_view TopologyName(Topology topology) {
  return topology == Topology::kTorus ? "torus" : "cube";
}

absl::StatusOr<Topology> ParseTopology(std::string_view name) {
  if (name == "torus") return Topology::kTorus;
  if (name == "cube") return Topology::kCube;
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown topology '%s' (expected torus or cube)",
                      std::string(name)));
}

PointSet::PointSet(int dimension, std::vector<double> coords)
    : dimension_(dimension), coords_(std::move(coords)) {}

absl::Status ValidateSimConfig(const SimConfig& config) {
  if (config.dimension < 1 || config.dimension > kMaxSimDimension) {
    return absl::InvalidArgumentError(
        absl::StrFormat("dimension must be in [1, %d], got %d",
                        kMaxSimDimension, config.dimension));
  }
  if (config.points < 2 || config.points > kMaxSimPoints) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "points must be in [2, %d], got %d", kMaxSimPoints, config.points));
  }
  if (config.trials < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("trials must be >= 1, got %d", config.trials));
  }
  if (config.max_rank < 1 || config.max_rank >= config.points) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "max_rank must satisfy 1 <= max_rank < N (N=%d), got %d",
        config.points, config.max_rank));
  }
  return absl::OkStatus();
}

absl::StatusOr<PointSet> SamplePoints(const SimConfig& config,
                                      int trial_index) {
  if (absl::Status status = ValidateSimConfig(config); !status.ok()) {
    return status;
  }
  if (trial_index < 0 || trial_index >= config.trials) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "trial_index must be in [0, %d), got %d", config.trials, trial_index));
  }
  std::mt19937_64 engine = TrialEngine(config.seed, trial_index, kPointStream);
  std::vector<double> coords(static_cast<size_t>(config.points) *
                             config.dimension);
  for (double& c : coords) c = UniformUnit(engine);
  return PointSet(config.dimension, std::move(coords));
}

absl::StatusOr<double> PairDistance(std::span<const double> a,
                                    std::span<const double> b,
                                    Topology topology) {
  if (a.size() != b.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "dimension mismatch: %d vs %d", a.size(), b.size()));
  }
  return std::sqrt(SquaredDistance(a, b, topology));
}

absl::StatusOr<NeighborTable> NNDistancesBruteForce(const PointSet& points,
                                                    int max_rank,
                                                    Topology topology) {
  if (absl::Status status = CheckSearchArgs(points, max_rank); !status.ok()) {
    return status;
  }
  const int n = points.size();
  NeighborTable table(n, max_rank);
  std::vector<double> squared;
  squared.reserve(n - 1);
  for (int i = 0; i < n; ++i) {
    squared.clear();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      squared.push_back(SquaredDistance(points.point(i), points.point(j), topology));
    }
    std::partial_sort(squared.begin(), squared.begin() + max_rank,
                      squared.end());
    FillRow(squared, table.mutable_row(i));
  }
  return table;
}

absl::StatusOr<NeighborTable> NNDistancesAccelerated(const PointSet& points,
                                                     int max_rank,
                                                     Topology topology) {
  if (absl::Status status = CheckSearchArgs(points, max_rank); !status.ok()) {
    return status;
  }
  NeighborTable table(points.size(), max_rank);
  KdTree(points, topology).SearchAll(table);
  return table;
}

absl::StatusOr<SimResult> RunSimulation(const SimConfig& config,
                                        int num_threads) {
  if (absl::Status status = ValidateSimConfig(config); !status.ok()) {
    return status;
  }
  // per_trial[t][r] holds rank r+1 moments of trial t.
  std::vector<std::vector<Moments>> per_trial(config.trials);
  std::vector<absl::Status> errors(config.trials);
  ParallelFor(config.trials, num_threads, [&](int trial) {
    absl::StatusOr<PointSet> points = SamplePoints(config, trial);
    if (!points.ok()) {
      errors[trial] = points.status();
      return;
    }
    absl::StatusOr<NeighborTable> table =
        NNDistancesAccelerated(*points, config.max_rank, config.topology);
    if (!table.ok()) {
      errors[trial] = table.status();
      return;
    }
    per_trial[trial].reserve(config.max_rank);
    for (int r = 1; r <= config.max_rank; ++r) {
      per_trial[trial].push_back(TwoPassMoments(*table, r));
    }
  });
  for (const absl::Status& status : errors) {
    if (!status.ok()) return status;
  }

  SimResult result{.config = config, .ranks = {}};
  result.ranks.reserve(config.max_rank);
  for (int r = 0; r < config.max_rank; ++r) {
    Moments total;
    for (const auto& trial : per_trial) total.Merge(trial[r]);
    const double variance =
        total.count > 1 ? total.m2 / static_cast<double>(total.count - 1) : 0.0;
    result.ranks.push_back(RankStats{
        .rank = r + 1,
        .mean = total.mean,
        .standard_error =
            std::sqrt(variance / static_cast<double>(total.count)),
        .count = total.count,
    });
  }
  return result;
}

absl::StatusOr<double> NNToRandomRatio(int dimension, int points, int trials,
                                       uint64_t seed, int num_threads) {
  const SimConfig config{.dimension = dimension,
                         .points = points,
                         .trials = trials,
                         .seed = seed,
                         .topology = Topology::kTorus,
                         .max_rank = 1};
  if (absl::Status status = ValidateSimConfig(config); !status.ok()) {
    return status;
  }
  struct TrialSums {
    double nearest = 0;
    int64_t nearest_count = 0;
    double pairs = 0;
    int64_t pair_count = 0;
  };
  std::vector<TrialSums> sums(trials);
  std::vector<absl::Status> errors(trials);
  ParallelFor(trials, num_threads, [&](int trial) {
    absl::StatusOr<PointSet> set = SamplePoints(config, trial);
    if (!set.ok()) {
      errors[trial] = set.status();
      return;
    }
    absl::StatusOr<NeighborTable> table =
        NNDistancesAccelerated(*set, 1, Topology::kTorus);
    if (!table.ok()) {
      errors[trial] = table.status();
      return;
    }
    TrialSums& out = sums[trial];
    CompensatedSum nearest;
    for (int i = 0; i < table->size(); ++i) nearest.Add(table->at(i, 1));
    out.nearest = nearest.value();
    out.nearest_count = table->size();

    CompensatedSum pairs;
    if (points <= kAllPairsLimit) {
      for (int i = 0; i < points; ++i) {
        for (int j = i + 1; j < points; ++j) {
          pairs.Add(std::sqrt(
              SquaredDistance(set->point(i), set->point(j), Topology::kTorus)));
        }
      }
      out.pair_count = static_cast<int64_t>(points) * (points - 1) / 2;
    } else {
      std::mt19937_64 engine = TrialEngine(seed, trial, kPairStream);
      std::uniform_int_distribution<int> pick(0, points - 1);
      for (int64_t s = 0; s < kSampledPairs; ++s) {
        const int i = pick(engine);
        int j = pick(engine);
        while (j == i) j = pick(engine);
        pairs.Add(std::sqrt(
            SquaredDistance(set->point(i), set->point(j), Topology::kTorus)));
      }
      out.pair_count = kSampledPairs;
    }
    out.pairs = pairs.value();
  });
  for (const absl::Status& status : errors) {
    if (!status.ok()) return status;
  }

  CompensatedSum nearest, pairs;
  int64_t nearest_count = 0, pair_count = 0;
  for (const TrialSums& s : sums) {
    nearest.Add(s.nearest);
    pairs.Add(s.pairs);
    nearest_count += s.nearest_count;
    pair_count += s.pair_count;
  }
  const double nearest_mean =
      nearest.value() / static_cast<double>(nearest_count);
  const double pair_mean = pairs.value() / static_cast<double>(pair_count);
  return nearest_mean / pair_mean;
}

}  // namespace coincidence
