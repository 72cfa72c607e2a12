#include "batchrips/filtrations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "batchrips/barcode.hpp"
#include "batchrips/errors.hpp"
#include "batchrips/format.hpp"
#include "batchrips/set_partition.hpp"
#include "batchrips/simplicial_state.hpp"
#include "batchrips/spatial_index.hpp"

namespace batchrips {

namespace {

void check_d_max(int d_max) {
  if (d_max < 1 || d_max > Simplex::kMaxDim)
    throw InputError("d_max must be in [1, " + std::to_string(Simplex::kMaxDim) + "]");
}

Edge make_edge(VertexId a, VertexId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

void single_vertex_stream(OperationStream& stream) {
  stream.timestamp(0.0);
  stream.insert(Simplex::vertex(0));
}

const char* policy_name(PickPolicy p) { return p == PickPolicy::kLowestId ? "lowest-id" : "shuffle"; }

}  // namespace

Prepared prepare_cloud(const PointCloud& cloud) {
  if (cloud.empty()) throw InputError("empty point cloud");
  DedupResult d = deduplicate(cloud);
  const std::size_t dups = d.duplicate_count();
  return Prepared{std::move(d.cloud), dups};
}

// ---------------------------------------------------------------------------

OperationStream build_rips(const PointCloud& cloud, const std::vector<double>& scales, int d_max) {
  check_d_max(d_max);
  if (cloud.empty()) throw InputError("empty point cloud");
  if (scales.empty()) throw InputError("build_rips: no scales");
  if (!(scales.front() >= 0.0)) throw InputError("build_rips: scales must be >= 0");
  for (std::size_t i = 1; i < scales.size(); ++i)
    if (!(scales[i] > scales[i - 1])) throw InputError("build_rips: scales must strictly increase");

  OperationStream stream;
  stream.set("algorithm", "rips");
  stream.set("d_max", std::to_string(d_max));
  stream.set("n", std::to_string(cloud.size()));

  struct Pair {
    double d;
    Edge e;
  };
  std::vector<Pair> pairs;
  const auto n = static_cast<VertexId>(cloud.size());
  for (VertexId a = 0; a < n; ++a)
    for (VertexId b = a + 1; b < n; ++b) pairs.push_back({cloud.distance(a, b), {a, b}});
  std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
    return x.d != y.d ? x.d < y.d : x.e < y.e;
  });

  SimplicialState state(d_max);
  std::size_t next = 0;
  for (std::size_t k = 0; k < scales.size(); ++k) {
    stream.timestamp(scales[k]);
    if (k == 0) {
      for (VertexId v = 0; v < n; ++v) {
        state.insert(Simplex::vertex(v));
        stream.insert(Simplex::vertex(v));
      }
    }
    std::vector<Edge> fresh;
    while (next < pairs.size() && pairs[next].d <= scales[k]) fresh.push_back(pairs[next++].e);
    for (const Simplex& s : incremental_flag_closure(state, fresh, d_max)) {
      state.insert(s);
      stream.insert(s);
    }
  }
  return stream;
}

// ---------------------------------------------------------------------------

double sparse_rips_weight(double lambda, double epsilon, double alpha) {
  if (std::isinf(lambda)) return 0.0;
  const double start = lambda / epsilon;
  const double full = lambda / (epsilon * (1.0 - epsilon));
  if (alpha <= start) return 0.0;
  if (alpha <= full) return alpha - start;
  return epsilon * alpha;
}

double perturbed_distance(double dist, double lambda_p, double lambda_q, double epsilon, double alpha) {
  return dist + sparse_rips_weight(lambda_p, epsilon, alpha) + sparse_rips_weight(lambda_q, epsilon, alpha);
}

double perturbed_distance(const PointCloud& cloud, const GreedyPermutation& perm, PointId p, PointId q,
                          double epsilon, double alpha) {
  return perturbed_distance(cloud.distance(p, q), perm.radius_of.at(p), perm.radius_of.at(q), epsilon, alpha);
}

double sparse_deletion_scale(double lambda, double epsilon) {
  if (std::isinf(lambda)) return kInfinity;
  return lambda / (epsilon * (1.0 - epsilon));
}

namespace {

// Derivative of the weight in alpha just right of `alpha`.
double weight_slope(double lambda, double epsilon, double alpha) {
  if (std::isinf(lambda)) return 0.0;
  if (alpha < lambda / epsilon) return 0.0;
  if (alpha < lambda / (epsilon * (1.0 - epsilon))) return 1.0;
  return epsilon;
}

}  // namespace

double sparse_edge_birth(double dist, double lambda_p, double lambda_q, double epsilon) {
  // g(alpha) = dhat - 2 alpha is continuous, piecewise linear, non-increasing
  auto g = [&](double a) { return perturbed_distance(dist, lambda_p, lambda_q, epsilon, a) - 2.0 * a; };
  if (g(0.0) <= 0.0) return 0.0;
  std::vector<double> breaks;
  for (double lambda : {lambda_p, lambda_q}) {
    if (std::isinf(lambda)) continue;
    breaks.push_back(lambda / epsilon);
    breaks.push_back(lambda / (epsilon * (1.0 - epsilon)));
  }
  std::sort(breaks.begin(), breaks.end());
  double left = 0.0;
  auto solve_from = [&](double from) {
    const double slope = weight_slope(lambda_p, epsilon, from) + weight_slope(lambda_q, epsilon, from) - 2.0;
    return from + g(from) / -slope;
  };
  for (double b : breaks) {
    if (b <= left) continue;
    if (g(b) <= 0.0) return std::clamp(solve_from(left), left, b);
    left = b;
  }
  return std::max(left, solve_from(left));
}

OperationStream build_sparse_rips(const PointCloud& input, const SparseRipsParams& params, SparseVariant variant) {
  const double eps = params.epsilon;
  if (!(eps > 0.0 && eps < 1.0)) throw InputError("epsilon must be in (0, 1)");
  check_d_max(params.d_max);
  const Prepared prep = prepare_cloud(input);
  const PointCloud& cloud = prep.cloud;
  const bool collapse = variant == SparseVariant::kCollapse;

  OperationStream stream;
  stream.set("algorithm", collapse ? "sparse-collapse" : "sparse");
  stream.set("epsilon", format_real(eps));
  stream.set("d_max", std::to_string(params.d_max));
  stream.set("n", std::to_string(cloud.size()));
  stream.set("duplicates", std::to_string(prep.duplicates));
  if (cloud.size() == 1) {
    single_vertex_stream(stream);
    return stream;
  }

  const auto n = static_cast<VertexId>(cloud.size());
  const GreedyPermutation perm = greedy_permutation(cloud, 0);
  const std::vector<double>& lambda = perm.radius_of;
  std::vector<double> death(n);
  for (VertexId p = 0; p < n; ++p) death[p] = sparse_deletion_scale(lambda[p], eps);

  std::vector<Edge> edges;
  std::unordered_map<std::uint64_t, double> edge_birth;
  for (VertexId p = 0; p < n; ++p) {
    for (VertexId q = p + 1; q < n; ++q) {
      const double b = sparse_edge_birth(cloud.distance(p, q), lambda[p], lambda[q], eps);
      if (b < std::min(death[p], death[q])) {
        edges.push_back({p, q});
        edge_birth.emplace(std::uint64_t{p} * n + q, b);
      }
    }
  }
  std::vector<VertexId> all(n);
  for (VertexId v = 0; v < n; ++v) all[v] = v;

  // a simplex lives in Q^alpha for alpha in [max edge birth, min vertex death)
  std::vector<std::pair<double, Simplex>> births;
  for (const Simplex& s : flag_closure(edges, all, params.d_max)) {
    double born = 0.0, dies = kInfinity;
    for (std::size_t i = 0; i < s.size(); ++i) {
      dies = std::min(dies, death[s[i]]);
      for (std::size_t j = i + 1; j < s.size(); ++j)
        born = std::max(born, edge_birth.at(std::uint64_t{s[i]} * n + s[j]));
    }
    if (born < dies) births.emplace_back(born, s);
  }
  std::sort(births.begin(), births.end());

  std::vector<std::pair<double, Edge>> collapses;  // (scale, (p, target))
  if (collapse) {
    for (VertexId p = 0; p < n; ++p) {
      if (std::isinf(death[p])) continue;
      const double radius = eps * death[p];
      VertexId target = p;
      double best = kInfinity;
      for (VertexId q = 0; q < n; ++q) {
        if (!(lambda[q] > radius)) continue;
        const double d = cloud.distance(p, q);
        if (d < best) {
          best = d;
          target = q;
        }
      }
      if (target == p) throw std::logic_error("sparse rips: empty projection net");
      collapses.push_back({death[p], {p, target}});
    }
    std::sort(collapses.begin(), collapses.end());
  }

  SimplicialState state(params.d_max);
  std::size_t bi = 0, ci = 0;
  while (bi < births.size() || ci < collapses.size()) {
    double now = kInfinity;
    if (bi < births.size()) now = births[bi].first;
    if (ci < collapses.size()) now = std::min(now, collapses[ci].first);
    stream.timestamp(now);
    for (; ci < collapses.size() && collapses[ci].first == now; ++ci) {
      const auto [p, target] = collapses[ci].second;
      stream.collapse(p, target);
      state.collapse(p, target);
    }
    for (; bi < births.size() && births[bi].first == now; ++bi) {
      const Simplex& s = births[bi].second;
      if (state.contains(s)) continue;  // already produced as a collapse image
      state.insert(s);
      stream.insert(s);
    }
  }
  return stream;
}

// ---------------------------------------------------------------------------

double batch_inflation(double c) { return (3.0 * c - 1.0) / (c - 1.0); }

int interleaving_step(double c) {
  if (!(c > 1.0)) throw InputError("c must be > 1");
  const double target = 2.0 / (c - 1.0) + 3.0;
  int t = 0;
  while (std::pow(c, t) < target) ++t;
  return t;
}

namespace {

// Drives the shared level loop: collapse V_{k-1} \ V_k, ask `discover` for
// the full edge set of level k, insert what is missing.
template <class OnCollapse, class Discover>
void run_levels(const PointCloud& cloud, const BatchParams& params, bool keep_trace, BatchBuild& out,
                OnCollapse on_collapse, Discover discover) {
  const NetHierarchy& h = out.hierarchy;
  OperationStream& stream = out.stream;
  SimplicialState state(params.d_max);

  stream.timestamp(0.0);
  for (VertexId v = 0; v < cloud.size(); ++v) {
    state.insert(Simplex::vertex(v));
    stream.insert(Simplex::vertex(v));
  }
  if (keep_trace) out.level_edges.emplace_back();

  for (std::size_t k = 1; k <= h.last_level(); ++k) {
    const double scale = h.scale(k);
    stream.timestamp(scale);

    std::vector<Edge> image_edges;
    const NetLevel& prev = h.level(k - 1);
    for (std::size_t i = 0; i < prev.vertices.size(); ++i) {
      const VertexId v = prev.vertices[i], img = prev.image[i];
      if (v == img) continue;
      stream.collapse(v, img);
      const CollapseChanges changes = state.collapse(v, img);
      for (const Simplex& s : changes.added)
        if (s.size() == 2) image_edges.push_back({s[0], s[1]});
      on_collapse(v, img);
    }
    // edges created mid-batch may have lost an endpoint to a later collapse
    std::sort(image_edges.begin(), image_edges.end());
    image_edges.erase(std::unique(image_edges.begin(), image_edges.end()), image_edges.end());
    std::erase_if(image_edges, [&](const Edge& e) { return !state.has_edge(e.first, e.second); });

    const std::vector<Edge> level = discover(k, scale);  // sorted, unique
    for (const Edge& e : image_edges) {
      if (!std::binary_search(level.begin(), level.end(), e))
        throw std::logic_error("vertex map is not simplicial at level " + std::to_string(k) + ": image edge <" +
                               std::to_string(e.first) + " " + std::to_string(e.second) + "> is not an edge");
    }
    std::vector<Edge> touched = image_edges;
    for (const Edge& e : level)
      if (!state.has_edge(e.first, e.second)) touched.push_back(e);
    for (const Simplex& s : missing_cliques(state, touched, params.d_max)) {
      state.insert(s);
      stream.insert(s);
    }
    if (state.count(1) != level.size())
      throw std::logic_error("edge set drifted from its definition at level " + std::to_string(k));
    if (keep_trace) out.level_edges.push_back(level);
  }
}

BatchBuild start_build(const Prepared& prep, const BatchParams& params, const char* algorithm) {
  if (!(params.c > 1.0) || !std::isfinite(params.c)) throw InputError("c must be > 1");
  check_d_max(params.d_max);
  BatchBuild out;
  OperationStream& s = out.stream;
  s.set("algorithm", algorithm);
  s.set("c", format_real(params.c));
  s.set("d_max", std::to_string(params.d_max));
  s.set("seed", std::to_string(params.seed));
  s.set("policy", policy_name(params.policy));
  s.set("n", std::to_string(prep.cloud.size()));
  s.set("duplicates", std::to_string(prep.duplicates));
  if (prep.cloud.size() > 1) {
    out.hierarchy = net_hierarchy(prep.cloud, params.c, NetOptions{params.policy, params.seed});
    s.set("alpha", format_real(out.hierarchy.base_scale()));
  }
  return out;
}

}  // namespace

BatchBuild build_batch_rips_traced(const PointCloud& input, const BatchParams& params, bool keep_trace) {
  const Prepared prep = prepare_cloud(input);
  BatchBuild out = start_build(prep, params, "batch");
  if (prep.cloud.size() == 1) {
    single_vertex_stream(out.stream);
    if (keep_trace) out.level_edges.emplace_back();
    return out;
  }
  const PointCloud& cloud = prep.cloud;
  const double inflation = batch_inflation(params.c);
  run_levels(cloud, params, keep_trace, out, [](VertexId, VertexId) {},
             [&](std::size_t k, double scale) {
               const auto& vk = out.hierarchy.level(k).vertices;
               SpatialIndex index(cloud, vk);
               std::vector<Edge> edges;
               std::vector<PointId> hits;
               for (VertexId u : vk) {
                 hits.clear();
                 index.radius_query_into(cloud[u], scale * inflation, hits);
                 for (PointId q : hits)
                   if (q > u) edges.push_back({u, q});
               }
               std::sort(edges.begin(), edges.end());
               return edges;
             });
  return out;
}

OperationStream build_batch_rips(const PointCloud& cloud, const BatchParams& params) {
  return build_batch_rips_traced(cloud, params, false).stream;
}

BatchBuild build_simba_traced(const PointCloud& input, const BatchParams& params, const SimbaOptions& options) {
  if (!(options.switch_fraction > 0.0 && options.switch_fraction <= 1.0))
    throw InputError("switch_fraction must be in (0, 1]");
  const Prepared prep = prepare_cloud(input);
  BatchBuild out = start_build(prep, params, "simba");
  out.stream.set("switch_fraction", format_real(options.switch_fraction));
  if (prep.cloud.size() == 1) {
    single_vertex_stream(out.stream);
    if (options.keep_trace) out.level_edges.emplace_back();
    return out;
  }
  const PointCloud& cloud = prep.cloud;
  const SpatialIndex all_points(cloud);
  SetPartition clusters(cloud.size());
  const double threshold = options.switch_fraction * static_cast<double>(cloud.size());

  auto by_radius = [&](const std::vector<PointId>& vk, double scale) {
    std::vector<Edge> edges;
    std::vector<PointId> hits;
    for (VertexId u : vk) {
      for (PointId p : clusters.members(u)) {
        hits.clear();
        all_points.radius_query_into(cloud[p], scale, hits);
        for (PointId q : hits) {
          const VertexId w = clusters.find(q);
          if (w != u) edges.push_back(make_edge(u, w));
        }
      }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
  };
  auto by_matrix = [&](const std::vector<PointId>& vk, double scale) {
    if (!clusters.has_matrix()) clusters.build_matrix(cloud);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < vk.size(); ++i)
      for (std::size_t j = i + 1; j < vk.size(); ++j)
        if (clusters.matrix_distance(vk[i], vk[j]) <= scale) edges.push_back({vk[i], vk[j]});
    return edges;
  };

  run_levels(cloud, params, options.keep_trace, out, [&](VertexId u, VertexId v) { clusters.merge(u, v); },
             [&](std::size_t k, double scale) {
               const auto& vk = out.hierarchy.level(k).vertices;
               switch (options.discovery) {
                 case EdgeDiscovery::kRadius:
                   return by_radius(vk, scale);
                 case EdgeDiscovery::kMatrix:
                   return by_matrix(vk, scale);
                 case EdgeDiscovery::kCompare: {
                   auto a = by_radius(vk, scale);
                   if (a != by_matrix(vk, scale))
                     throw std::logic_error("edge discovery phases disagree at level " + std::to_string(k));
                   return a;
                 }
                 case EdgeDiscovery::kHybrid:
                   break;
               }
               if (static_cast<double>(vk.size()) > threshold && !clusters.has_matrix()) return by_radius(vk, scale);
               return by_matrix(vk, scale);
             });
  return out;
}

OperationStream build_simba(const PointCloud& cloud, const BatchParams& params, double switch_fraction) {
  SimbaOptions options;
  options.switch_fraction = switch_fraction;
  return build_simba_traced(cloud, params, options).stream;
}

// ---------------------------------------------------------------------------

std::vector<std::string> check_simba_premises(const PointCloud& input, const BatchBuild& simba) {
  std::vector<std::string> out;
  const NetHierarchy& h = simba.hierarchy;
  if (h.levels().empty()) return out;  // single point
  const PointCloud cloud = prepare_cloud(input).cloud;
  for (const NetViolation& v : check_net_hierarchy(cloud, h)) {
    out.push_back(std::string(v.coverage ? "coverage" : "packing") + " violated at level " + std::to_string(v.level) +
                  " for " + std::to_string(v.a) + "," + std::to_string(v.b));
  }
  if (simba.level_edges.size() != h.levels().size()) {
    out.push_back("trace has " + std::to_string(simba.level_edges.size()) + " levels, hierarchy has " +
                  std::to_string(h.levels().size()));
    return out;
  }
  const int t = interleaving_step(h.growth());
  for (std::size_t k = 0; k < h.levels().size(); ++k) {
    const auto& edges = simba.level_edges[k];
    const double reach = h.scale(k + static_cast<std::size_t>(t));
    for (const Edge& e : edges) {
      if (cloud.distance(e.first, e.second) > reach)
        out.push_back("level " + std::to_string(k) + " edge " + std::to_string(e.first) + "-" +
                      std::to_string(e.second) + " longer than alpha c^(k+t)");
    }
    if (k + 1 == h.levels().size()) continue;
    const NetLevel& lvl = h.level(k);
    std::unordered_map<VertexId, VertexId> pi;
    for (std::size_t i = 0; i < lvl.vertices.size(); ++i) pi.emplace(lvl.vertices[i], lvl.image[i]);
    const auto& next = simba.level_edges[k + 1];
    for (const Edge& e : edges) {
      const VertexId a = pi.at(e.first), b = pi.at(e.second);
      if (a == b) continue;
      if (!std::binary_search(next.begin(), next.end(), make_edge(a, b)))
        out.push_back("image of level " + std::to_string(k) + " edge " + std::to_string(e.first) + "-" +
                      std::to_string(e.second) + " is not an edge at level " + std::to_string(k + 1));
    }
  }
  return out;
}

std::vector<std::string> check_batch_contains_simba(const BatchBuild& batch, const BatchBuild& simba) {
  std::vector<std::string> out;
  if (batch.level_edges.size() != simba.level_edges.size()) {
    out.push_back("level counts differ");
    return out;
  }
  for (std::size_t k = 0; k < batch.level_edges.size(); ++k) {
    const auto& big = batch.level_edges[k];
    for (const Edge& e : simba.level_edges[k]) {
      if (!std::binary_search(big.begin(), big.end(), e))
        out.push_back("level " + std::to_string(k) + ": simba edge " + std::to_string(e.first) + "-" +
                      std::to_string(e.second) + " missing from batch");
    }
  }
  return out;
}

}  // namespace batchrips
