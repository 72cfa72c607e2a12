#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "batchrips/point_cloud.hpp"

namespace batchrips {

// Farthest-point ordering of a cloud. radii[i] is the insertion radius of
// order[i]: its distance to order[0..i-1]; radii[0] = +inf.
struct GreedyPermutation {
  std::vector<PointId> order;
  std::vector<double> radii;
  // radius by point id rather than by position
  std::vector<double> radius_of;
};

GreedyPermutation greedy_permutation(const PointCloud& cloud, PointId seed_id = 0);

// How delta_net chooses the next untouched vertex.
enum class PickPolicy {
  kLowestId,      // deterministic: smallest untouched id first
  kSeededShuffle  // uniformly shuffled order driven by the rng seed
};

struct NetOptions {
  PickPolicy policy = PickPolicy::kLowestId;
  std::uint64_t seed = 0;
};

struct DeltaNet {
  std::vector<PointId> net;     // ascending ids
  std::vector<PointId> assign;  // parallel to the input vertex list
};

// Random-ball delta-net of `vertices` (ids into `cloud`): repeatedly pick an
// untouched vertex and claim every untouched vertex within delta of it.
DeltaNet delta_net(const PointCloud& cloud, const std::vector<PointId>& vertices, double delta,
                   const NetOptions& options = {});

struct NetLevel {
  std::vector<PointId> vertices;  // V_k, ascending
  // projection V_k -> V_{k+1} as (vertex, image) pairs parallel to `vertices`;
  // empty on the last level
  std::vector<PointId> image;
};

// Nested nets V_0 = all ids, V_{k+1} an (alpha c^{k+1})-net of V_k, ending at
// the first level holding a single vertex.
class NetHierarchy {
 public:
  double base_scale() const { return alpha_; }
  double growth() const { return c_; }
  std::size_t last_level() const { return levels_.size() - 1; }
  const std::vector<NetLevel>& levels() const { return levels_; }
  const NetLevel& level(std::size_t k) const { return levels_.at(k); }
  // alpha * c^k
  double scale(std::size_t k) const;

 private:
  friend NetHierarchy net_hierarchy(const PointCloud&, double, const NetOptions&, bool);
  double alpha_ = 0.0;
  double c_ = 0.0;
  std::vector<NetLevel> levels_;
};

// Builds the hierarchy. With `use_nn_list` the incremental fast path is used:
// points whose nearest-neighbour distance exceeds the current radius enter the
// net without a ball query. Both paths give identical levels.
NetHierarchy net_hierarchy(const PointCloud& cloud, double c, const NetOptions& options = {},
                           bool use_nn_list = true);

struct NetViolation {
  std::size_t level = 0;
  PointId a = 0, b = 0;
  bool coverage = true;  // false: packing
};

// Coverage d(v, pi_k(v)) <= alpha c^{k+1} and packing d(u, w) > alpha c^{k+1}
// on V_{k+1}. Returns every violation found.
std::vector<NetViolation> check_net_hierarchy(const PointCloud& cloud, const NetHierarchy& h);

}  // namespace batchrips
