#include "batchrips/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <utility>

#include "batchrips/errors.hpp"

namespace batchrips {

namespace {

// Lower-bound pruning uses a hair of slack so that rounding in the plane
// distance never discards a point the brute-force predicate would accept.
constexpr double kSlack = 1e-12;

}  // namespace

SpatialIndex::SpatialIndex(const PointCloud& cloud) : SpatialIndex(cloud, {}) {}

SpatialIndex::SpatialIndex(const PointCloud& cloud, std::vector<PointId> subset)
    : cloud_(&cloud), ids_(std::move(subset)) {
  if (ids_.empty() && cloud.size() > 0) {
    ids_.resize(cloud.size());
    std::iota(ids_.begin(), ids_.end(), PointId{0});
  }
  sorted_ids_ = ids_;
  std::sort(sorted_ids_.begin(), sorted_ids_.end());
  if (!ids_.empty()) {
    nodes_.reserve(2 * ids_.size() / kLeafSize + 2);
    root_ = build(0, ids_.size());
  }
}

int SpatialIndex::build(std::size_t begin, std::size_t end) {
  const int index = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{begin, end});
  if (end - begin <= kLeafSize) return index;

  const std::size_t dim = cloud_->dim();
  int best_axis = 0;
  double best_spread = -1.0;
  for (std::size_t a = 0; a < dim; ++a) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = begin; i < end; ++i) {
      const double x = (*cloud_)[ids_[i]][a];
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    if (hi - lo > best_spread) {
      best_spread = hi - lo;
      best_axis = static_cast<int>(a);
    }
  }
  if (best_spread <= 0.0) return index;  // all coincident: keep as leaf

  const std::size_t mid = begin + (end - begin) / 2;
  auto first = ids_.begin() + static_cast<std::ptrdiff_t>(begin);
  auto last = ids_.begin() + static_cast<std::ptrdiff_t>(end);
  std::nth_element(first, ids_.begin() + static_cast<std::ptrdiff_t>(mid), last,
                   [&](PointId a, PointId b) { return (*cloud_)[a][best_axis] < (*cloud_)[b][best_axis]; });
  const double split = (*cloud_)[ids_[mid]][best_axis];

  const int left = build(begin, mid);
  const int right = build(mid, end);
  nodes_[index].axis = best_axis;
  nodes_[index].split = split;
  nodes_[index].left = left;
  nodes_[index].right = right;
  return index;
}

void SpatialIndex::check_dim(std::span<const double> center) const {
  if (center.size() != cloud_->dim()) throw InputError("query dimension mismatch");
}

void SpatialIndex::radius_query_into(std::span<const double> center, double r,
                                     std::vector<PointId>& out) const {
  check_dim(center);
  if (root_ < 0 || r < 0.0) return;
  std::vector<int> stack{root_};
  while (!stack.empty()) {
    const Node& node = nodes_[static_cast<std::size_t>(stack.back())];
    stack.pop_back();
    if (node.axis < 0) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        const PointId id = ids_[i];
        if (distance(center, (*cloud_)[id]) <= r) out.push_back(id);
      }
      continue;
    }
    const double diff = center[static_cast<std::size_t>(node.axis)] - node.split;
    const int near = diff < 0 ? node.left : node.right;
    const int far = diff < 0 ? node.right : node.left;
    stack.push_back(near);
    if (std::abs(diff) <= r * (1.0 + kSlack)) stack.push_back(far);
  }
}

std::vector<PointId> SpatialIndex::radius_query(std::span<const double> center, double r) const {
  std::vector<PointId> out;
  radius_query_into(center, r, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PointId> SpatialIndex::knn_query(std::span<const double> center, std::size_t k) const {
  check_dim(center);
  if (k == 0 || k > ids_.size()) throw InputError("knn_query: k must be in [1, n]");

  using Entry = std::pair<double, PointId>;  // max-heap on (distance, id)
  std::priority_queue<Entry> heap;
  auto worst = [&] { return heap.size() < k ? std::numeric_limits<double>::infinity() : heap.top().first; };

  auto visit = [&](auto&& self, int node_index) -> void {
    const Node& node = nodes_[static_cast<std::size_t>(node_index)];
    if (node.axis < 0) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        const Entry e{distance(center, (*cloud_)[ids_[i]]), ids_[i]};
        if (heap.size() < k) {
          heap.push(e);
        } else if (e < heap.top()) {
          heap.pop();
          heap.push(e);
        }
      }
      return;
    }
    const double diff = center[static_cast<std::size_t>(node.axis)] - node.split;
    self(self, diff < 0 ? node.left : node.right);
    // equality must still be explored: a tie may carry a smaller id
    if (std::abs(diff) <= worst() * (1.0 + kSlack)) self(self, diff < 0 ? node.right : node.left);
  };
  visit(visit, root_);

  std::vector<PointId> out(heap.size());
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = heap.top().second;
    heap.pop();
  }
  return out;
}

std::vector<double> SpatialIndex::nearest_neighbor_distances() const {
  std::vector<double> out;
  out.reserve(sorted_ids_.size());
  if (sorted_ids_.size() < 2) {
    out.assign(sorted_ids_.size(), std::numeric_limits<double>::infinity());
    return out;
  }
  for (PointId id : sorted_ids_) {
    auto nn = knn_query((*cloud_)[id], 2);
    const PointId other = nn[0] == id ? nn[1] : nn[0];
    out.push_back(cloud_->distance(id, other));
  }
  return out;
}

}  // namespace batchrips
