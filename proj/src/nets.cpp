#include "batchrips/nets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

#include "batchrips/errors.hpp"
#include "batchrips/spatial_index.hpp"

namespace batchrips {

GreedyPermutation greedy_permutation(const PointCloud& cloud, PointId seed_id) {
  const std::size_t n = cloud.size();
  if (n == 0) throw InputError("greedy_permutation: empty cloud");
  if (seed_id >= n) throw InputError("greedy_permutation: seed id out of range");

  GreedyPermutation g;
  g.order.reserve(n);
  g.radii.reserve(n);
  g.radius_of.assign(n, 0.0);

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist_to_prefix(n, inf);
  std::vector<char> taken(n, 0);
  PointId next = seed_id;
  double next_radius = inf;
  for (std::size_t step = 0; step < n; ++step) {
    g.order.push_back(next);
    g.radii.push_back(next_radius);
    g.radius_of[next] = next_radius;
    taken[next] = 1;
    const PointId added = next;
    next_radius = -1.0;
    for (PointId p = 0; p < n; ++p) {
      if (taken[p]) continue;
      dist_to_prefix[p] = std::min(dist_to_prefix[p], cloud.distance(p, added));
      // strict '>' keeps the smaller id on ties
      if (dist_to_prefix[p] > next_radius) {
        next_radius = dist_to_prefix[p];
        next = p;
      }
    }
  }
  return g;
}

namespace {

std::vector<PointId> pick_order(const std::vector<PointId>& sorted_vertices, const NetOptions& options,
                                std::uint64_t stream) {
  std::vector<PointId> order = sorted_vertices;
  if (options.policy == PickPolicy::kSeededShuffle) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    std::mt19937_64 rng(seq);
    std::shuffle(order.begin(), order.end(), rng);
  }
  return order;
}

// Core of the ball-claiming procedure. `eligible` holds the vertices that may
// have a neighbour within delta; every other vertex is its own center.
DeltaNet claim_balls(const PointCloud& cloud, const std::vector<PointId>& vertices,
                     const std::vector<PointId>& eligible, double delta, const std::vector<PointId>& order) {
  std::unordered_map<PointId, PointId> owner;
  owner.reserve(vertices.size() * 2);
  SpatialIndex index(cloud, eligible);
  std::vector<char> is_eligible;
  if (!vertices.empty()) is_eligible.assign(static_cast<std::size_t>(*std::max_element(vertices.begin(), vertices.end())) + 1, 0);
  for (PointId e : eligible) is_eligible[e] = 1;

  DeltaNet out;
  std::vector<PointId> hits;
  for (PointId p : order) {
    if (owner.count(p)) continue;
    out.net.push_back(p);
    owner.emplace(p, p);
    if (!is_eligible[p]) continue;
    hits.clear();
    index.radius_query_into(cloud[p], delta, hits);
    for (PointId q : hits) owner.emplace(q, p);  // no-op when already claimed
  }
  std::sort(out.net.begin(), out.net.end());
  out.assign.reserve(vertices.size());
  for (PointId v : vertices) out.assign.push_back(owner.at(v));
  return out;
}

}  // namespace

DeltaNet delta_net(const PointCloud& cloud, const std::vector<PointId>& vertices, double delta,
                   const NetOptions& options) {
  if (vertices.empty()) throw InputError("delta_net: empty vertex set");
  if (delta < 0) throw InputError("delta_net: negative radius");
  std::vector<PointId> sorted = vertices;
  std::sort(sorted.begin(), sorted.end());
  return claim_balls(cloud, vertices, sorted, delta, pick_order(sorted, options, 0));
}

double NetHierarchy::scale(std::size_t k) const {
  return alpha_ * std::pow(c_, static_cast<double>(k));
}

NetHierarchy net_hierarchy(const PointCloud& cloud, double c, const NetOptions& options, bool use_nn_list) {
  if (!(c > 1.0) || !std::isfinite(c)) throw InputError("net_hierarchy: growth c must be > 1");
  NetHierarchy h;
  h.alpha_ = min_pairwise_distance(cloud);
  if (!(h.alpha_ > 0.0)) throw InputError("net_hierarchy: duplicate points (deduplicate first)");
  h.c_ = c;

  NetLevel base;
  base.vertices.resize(cloud.size());
  std::iota(base.vertices.begin(), base.vertices.end(), PointId{0});
  h.levels_.push_back(std::move(base));

  // list L: points by nearest-neighbour distance, ascending
  std::vector<std::pair<double, PointId>> nn_list;
  if (use_nn_list) {
    SpatialIndex index(cloud);
    const auto nn = index.nearest_neighbor_distances();
    for (std::size_t i = 0; i < nn.size(); ++i) nn_list.emplace_back(nn[i], index.ids()[i]);
    std::sort(nn_list.begin(), nn_list.end());
  }
  std::size_t active_prefix = 0;
  std::vector<char> active(cloud.size(), 0);

  for (std::size_t k = 0; h.levels_[k].vertices.size() > 1; ++k) {
    const double delta = h.scale(k + 1);
    const auto& current = h.levels_[k].vertices;
    const auto order = pick_order(current, options, k + 1);

    DeltaNet net;
    if (use_nn_list && active_prefix < nn_list.size()) {
      while (active_prefix < nn_list.size() && nn_list[active_prefix].first <= delta) {
        active[nn_list[active_prefix].second] = 1;
        ++active_prefix;
      }
      std::vector<PointId> eligible;
      for (PointId v : current)
        if (active[v]) eligible.push_back(v);
      net = claim_balls(cloud, current, eligible, delta, order);
    } else {
      net = claim_balls(cloud, current, current, delta, order);
    }

    h.levels_[k].image = std::move(net.assign);
    NetLevel next;
    next.vertices = std::move(net.net);
    h.levels_.push_back(std::move(next));
  }
  return h;
}

std::vector<NetViolation> check_net_hierarchy(const PointCloud& cloud, const NetHierarchy& h) {
  std::vector<NetViolation> out;
  for (std::size_t k = 0; k + 1 < h.levels().size(); ++k) {
    const double delta = h.scale(k + 1);
    const auto& lvl = h.level(k);
    const auto& next = h.level(k + 1).vertices;
    for (std::size_t i = 0; i < lvl.vertices.size(); ++i) {
      const PointId v = lvl.vertices[i], img = lvl.image[i];
      const bool in_next = std::binary_search(next.begin(), next.end(), img);
      const bool fixed_ok = !std::binary_search(next.begin(), next.end(), v) || img == v;
      if (!in_next || !fixed_ok || cloud.distance(v, img) > delta) out.push_back({k, v, img, true});
    }
    for (std::size_t i = 0; i < next.size(); ++i)
      for (std::size_t j = i + 1; j < next.size(); ++j)
        if (!(cloud.distance(next[i], next[j]) > delta)) out.push_back({k, next[i], next[j], false});
  }
  if (h.levels().empty() || h.levels().back().vertices.size() != 1) out.push_back({h.levels().size(), 0, 0, true});
  return out;
}

}  // namespace batchrips
