#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "batchrips/point_cloud.hpp"

namespace batchrips {

// Exact kd-tree over a subset of a PointCloud's ids. Immutable once built;
// concurrent queries are fine. The cloud must outlive the index.
class SpatialIndex {
 public:
  explicit SpatialIndex(const PointCloud& cloud);
  SpatialIndex(const PointCloud& cloud, std::vector<PointId> subset);

  std::size_t size() const { return ids_.size(); }
  const PointCloud& cloud() const { return *cloud_; }

  // All indexed ids with d(p, center) <= r, ascending by id.
  std::vector<PointId> radius_query(std::span<const double> center, double r) const;
  // Same, appending into `out` without sorting.
  void radius_query_into(std::span<const double> center, double r,
                         std::vector<PointId>& out) const;

  // k nearest ids by ascending distance, ties broken by smaller id.
  std::vector<PointId> knn_query(std::span<const double> center, std::size_t k) const;

  // Distance from each indexed point to its nearest other indexed point
  // (+inf when the index holds one point), in the order of `ids()`.
  std::vector<double> nearest_neighbor_distances() const;
  const std::vector<PointId>& ids() const { return sorted_ids_; }

 private:
  struct Node {
    std::size_t begin = 0, end = 0;  // range in ids_
    int axis = -1;                   // -1 for leaves
    double split = 0.0;
    int left = -1, right = -1;
  };

  int build(std::size_t begin, std::size_t end);
  void check_dim(std::span<const double> center) const;

  const PointCloud* cloud_;
  std::vector<PointId> ids_;
  std::vector<PointId> sorted_ids_;
  std::vector<Node> nodes_;
  int root_ = -1;

  static constexpr std::size_t kLeafSize = 8;
};

}  // namespace batchrips
