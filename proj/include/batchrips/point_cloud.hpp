#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace batchrips {

using PointId = std::uint32_t;

// Dense row-major storage of n points in R^D. Ids are 0..n-1 in input order.
class PointCloud {
 public:
  PointCloud() = default;
  PointCloud(std::size_t dim, std::vector<double> coords);
  static PointCloud from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  bool empty() const { return size() == 0; }

  std::span<const double> operator[](PointId id) const {
    return {coords_.data() + static_cast<std::size_t>(id) * dim_, dim_};
  }
  const std::vector<double>& coords() const { return coords_; }

  double distance(PointId a, PointId b) const;
  double squared_distance(PointId a, PointId b) const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

double distance(std::span<const double> p, std::span<const double> q);
double squared_distance(std::span<const double> p, std::span<const double> q);

// Result of merging exact coordinate duplicates.
struct DedupResult {
  PointCloud cloud;                     // distinct points, first occurrence order
  std::vector<PointId> original_to_unique;
  std::vector<std::uint32_t> multiplicity;  // per unique point
  std::size_t duplicate_count() const;
};

DedupResult deduplicate(const PointCloud& cloud);

// Minimum distance over distinct pairs. Throws InputError when n < 2.
double min_pairwise_distance(const PointCloud& cloud);
double diameter(const PointCloud& cloud);

// Text format: one point per line, whitespace separated reals, '#' comments.
PointCloud read_points(std::istream& in);
PointCloud read_points_file(const std::string& path);
void write_points(std::ostream& out, const PointCloud& cloud);

}  // namespace batchrips
