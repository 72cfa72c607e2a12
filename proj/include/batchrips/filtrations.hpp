#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "batchrips/nets.hpp"
#include "batchrips/operation_stream.hpp"
#include "batchrips/point_cloud.hpp"

namespace batchrips {

using Edge = std::pair<VertexId, VertexId>;  // first < second

// ---------------------------------------------------------------------------
// Exact Rips

// Flag filtration at the given strictly increasing scales: edges with
// d(p, q) <= scale, all cliques up to d_max. Inclusions only.
OperationStream build_rips(const PointCloud& cloud, const std::vector<double>& scales, int d_max = 3);

// ---------------------------------------------------------------------------
// Sparse Rips

struct SparseRipsParams {
  double epsilon = 0.8;
  int d_max = 3;
};

enum class SparseVariant { kInclusion, kCollapse };

// Piecewise-linear point weight: 0 up to lambda/eps, then alpha - lambda/eps
// up to lambda/(eps(1-eps)), then eps*alpha. Infinite lambda weighs 0.
double sparse_rips_weight(double lambda, double epsilon, double alpha);

// d(p,q) + w_p(alpha) + w_q(alpha).
double perturbed_distance(double dist, double lambda_p, double lambda_q, double epsilon, double alpha);
double perturbed_distance(const PointCloud& cloud, const GreedyPermutation& perm, PointId p, PointId q,
                          double epsilon, double alpha);

// Smallest alpha >= 0 with perturbed distance <= 2 alpha.
double sparse_edge_birth(double dist, double lambda_p, double lambda_q, double epsilon);

// Scale at which p leaves the net: lambda_p / (eps (1 - eps)).
double sparse_deletion_scale(double lambda, double epsilon);

OperationStream build_sparse_rips(const PointCloud& cloud, const SparseRipsParams& params,
                                  SparseVariant variant = SparseVariant::kInclusion);

// ---------------------------------------------------------------------------
// Batch-collapsed Rips and SimBa

struct BatchParams {
  double c = 1.5;
  int d_max = 3;
  std::uint64_t seed = 0;
  PickPolicy policy = PickPolicy::kLowestId;
};

// (3c - 1) / (c - 1)
double batch_inflation(double c);

enum class EdgeDiscovery {
  kHybrid,   // radius queries while |V_k| > switch_fraction * n, then the matrix
  kRadius,   // radius queries at every level
  kMatrix,   // set-distance matrix from the first level on
  kCompare,  // run both and throw std::logic_error if they ever disagree
};

struct SimbaOptions {
  double switch_fraction = 0.1;
  EdgeDiscovery discovery = EdgeDiscovery::kHybrid;
  bool keep_trace = false;  // record per-level edge sets
};

// A batch build plus what the premise checks need.
struct BatchBuild {
  OperationStream stream;
  NetHierarchy hierarchy;
  // Edge set of the complex at each level k (index 0 is always empty);
  // filled only when a trace was requested.
  std::vector<std::vector<Edge>> level_edges;
};

BatchBuild build_batch_rips_traced(const PointCloud& cloud, const BatchParams& params, bool keep_trace);
OperationStream build_batch_rips(const PointCloud& cloud, const BatchParams& params);

BatchBuild build_simba_traced(const PointCloud& cloud, const BatchParams& params, const SimbaOptions& options = {});
OperationStream build_simba(const PointCloud& cloud, const BatchParams& params, double switch_fraction = 0.1);

// Integer interleaving step: smallest t with c^t >= 2/(c-1) + 3.
int interleaving_step(double c);

// Independent re-check of the premises of the SimBa approximation argument on
// a traced build: net coverage/packing, every edge image under pi_k is a
// vertex or edge one level up, and every level-k edge has length at most
// alpha c^(k+t). Returns human-readable violations (empty when all hold).
std::vector<std::string> check_simba_premises(const PointCloud& cloud, const BatchBuild& simba);

// Level-by-level check that the batch edge set contains SimBa's. Both builds
// must share the hierarchy (same cloud, c, seed and policy).
std::vector<std::string> check_batch_contains_simba(const BatchBuild& batch, const BatchBuild& simba);

// Exact coordinate duplicates merged; every builder runs on the result and
// records the merged count in the "duplicates" header entry.
struct Prepared {
  PointCloud cloud;
  std::size_t duplicates = 0;
};
Prepared prepare_cloud(const PointCloud& cloud);

}  // namespace batchrips
