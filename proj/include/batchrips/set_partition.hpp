#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "batchrips/point_cloud.hpp"

namespace batchrips {

// Clusters of input points keyed by their current image vertex. Backed by a
// union-find over point ids; each root carries the label of the vertex its
// cluster collapsed into.
class SetPartition {
 public:
  explicit SetPartition(std::size_t n);

  // Label (image vertex) of the cluster holding p.
  PointId find(PointId p);
  bool is_representative(PointId v) const;
  std::size_t cluster_count() const { return live_; }
  const std::vector<PointId>& members(PointId v) const;

  // Merges the cluster labelled u into the one labelled v (label v survives).
  // Also applies the min rule to the distance matrix when one is active.
  void merge(PointId u, PointId v);

  // Exact minimum over cross pairs. Throws ContractViolation on a label that
  // is not a live representative.
  double set_distance(PointId u, PointId v, const PointCloud& cloud) const;

  // Builds the pairwise set-distance matrix over the current clusters; later
  // merges keep it current via d(A u B, C) = min(d(A, C), d(B, C)).
  void build_matrix(const PointCloud& cloud);
  bool has_matrix() const { return !slot_.empty(); }
  double matrix_distance(PointId u, PointId v) const;

 private:
  PointId root(PointId p);
  void require_rep(PointId v) const;

  std::vector<PointId> parent_;
  std::vector<std::uint32_t> size_;
  std::vector<PointId> label_;              // valid at roots
  std::vector<PointId> root_of_label_;      // label -> root, valid for live labels
  std::vector<char> live_label_;
  std::vector<std::vector<PointId>> members_;  // by label
  std::size_t live_ = 0;

  std::unordered_map<PointId, std::size_t> slot_;  // label -> matrix row
  std::vector<double> matrix_;
  std::size_t matrix_dim_ = 0;
};

}  // namespace batchrips
