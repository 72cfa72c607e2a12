#include "batchrips/set_partition.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "batchrips/errors.hpp"

namespace batchrips {

SetPartition::SetPartition(std::size_t n)
    : parent_(n), size_(n, 1), label_(n), root_of_label_(n), live_label_(n, 1), members_(n), live_(n) {
  std::iota(parent_.begin(), parent_.end(), PointId{0});
  std::iota(label_.begin(), label_.end(), PointId{0});
  std::iota(root_of_label_.begin(), root_of_label_.end(), PointId{0});
  for (PointId i = 0; i < n; ++i) members_[i] = {i};
}

PointId SetPartition::root(PointId p) {
  PointId r = p;
  while (parent_[r] != r) r = parent_[r];
  while (parent_[p] != r) {
    const PointId next = parent_[p];
    parent_[p] = r;
    p = next;
  }
  return r;
}

PointId SetPartition::find(PointId p) {
  if (p >= parent_.size()) throw ContractViolation("SetPartition::find: id out of range");
  return label_[root(p)];
}

bool SetPartition::is_representative(PointId v) const { return v < live_label_.size() && live_label_[v]; }

void SetPartition::require_rep(PointId v) const {
  if (!is_representative(v))
    throw ContractViolation("SetPartition: " + std::to_string(v) + " is not a live representative");
}

const std::vector<PointId>& SetPartition::members(PointId v) const {
  require_rep(v);
  return members_[v];
}

void SetPartition::merge(PointId u, PointId v) {
  require_rep(u);
  require_rep(v);
  if (u == v) throw ContractViolation("SetPartition::merge: u == v");
  PointId ru = root_of_label_[u], rv = root_of_label_[v];
  if (size_[ru] > size_[rv]) std::swap(ru, rv);
  parent_[ru] = rv;
  size_[rv] += size_[ru];
  label_[rv] = v;
  root_of_label_[v] = rv;
  live_label_[u] = 0;
  --live_;

  auto& into = members_[v];
  auto& from = members_[u];
  if (from.size() > into.size()) into.swap(from);
  into.insert(into.end(), from.begin(), from.end());
  std::vector<PointId>().swap(from);

  if (has_matrix()) {
    const std::size_t su = slot_.at(u), sv = slot_.at(v);
    for (const auto& [w, sw] : slot_) {
      if (w == u || w == v) continue;
      double& d = matrix_[sv * matrix_dim_ + sw];
      d = std::min(d, matrix_[su * matrix_dim_ + sw]);
      matrix_[sw * matrix_dim_ + sv] = d;
    }
    slot_.erase(u);
  }
}

double SetPartition::set_distance(PointId u, PointId v, const PointCloud& cloud) const {
  require_rep(u);
  require_rep(v);
  if (u == v) throw ContractViolation("set_distance: a cluster's distance to itself is never queried");
  double best = std::numeric_limits<double>::infinity();
  for (PointId a : members_[u])
    for (PointId b : members_[v]) best = std::min(best, cloud.distance(a, b));
  return best;
}

void SetPartition::build_matrix(const PointCloud& cloud) {
  std::vector<PointId> reps;
  for (PointId v = 0; v < live_label_.size(); ++v)
    if (live_label_[v]) reps.push_back(v);
  matrix_dim_ = reps.size();
  matrix_.assign(matrix_dim_ * matrix_dim_, std::numeric_limits<double>::infinity());
  slot_.clear();
  for (std::size_t i = 0; i < reps.size(); ++i) slot_.emplace(reps[i], i);
  for (std::size_t i = 0; i < reps.size(); ++i) {
    for (std::size_t j = i + 1; j < reps.size(); ++j) {
      const double d = set_distance(reps[i], reps[j], cloud);
      matrix_[i * matrix_dim_ + j] = d;
      matrix_[j * matrix_dim_ + i] = d;
    }
  }
}

double SetPartition::matrix_distance(PointId u, PointId v) const {
  require_rep(u);
  require_rep(v);
  if (!has_matrix()) throw ContractViolation("matrix_distance: no matrix built");
  return matrix_[slot_.at(u) * matrix_dim_ + slot_.at(v)];
}

}  // namespace batchrips
