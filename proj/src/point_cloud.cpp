#include "batchrips/point_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "batchrips/errors.hpp"
#include "batchrips/format.hpp"
#include "batchrips/spatial_index.hpp"

namespace batchrips {

PointCloud::PointCloud(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
  if (dim_ == 0) throw InputError("point dimension must be >= 1");
  if (coords_.size() % dim_ != 0) throw InputError("coordinate count is not a multiple of the dimension");
  for (double x : coords_) {
    if (!std::isfinite(x)) throw InputError("non-finite coordinate");
  }
}

PointCloud PointCloud::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw InputError("empty point cloud");
  const std::size_t dim = rows.front().size();
  std::vector<double> coords;
  coords.reserve(rows.size() * dim);
  for (const auto& row : rows) {
    if (row.size() != dim) throw InputError("dimension mismatch between points");
    coords.insert(coords.end(), row.begin(), row.end());
  }
  return PointCloud(dim, std::move(coords));
}

double squared_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw InputError("dimension mismatch in distance");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - q[i];
    s += d * d;
  }
  return s;
}

double distance(std::span<const double> p, std::span<const double> q) {
  return std::sqrt(squared_distance(p, q));
}

double PointCloud::squared_distance(PointId a, PointId b) const {
  return batchrips::squared_distance((*this)[a], (*this)[b]);
}

double PointCloud::distance(PointId a, PointId b) const {
  return std::sqrt(squared_distance(a, b));
}

std::size_t DedupResult::duplicate_count() const {
  return original_to_unique.size() - cloud.size();
}

DedupResult deduplicate(const PointCloud& cloud) {
  DedupResult out;
  std::map<std::vector<double>, PointId> seen;
  std::vector<double> coords;
  out.original_to_unique.reserve(cloud.size());
  for (PointId i = 0; i < cloud.size(); ++i) {
    auto p = cloud[i];
    std::vector<double> key(p.begin(), p.end());
    // -0.0 and 0.0 are the same point
    for (double& x : key) x += 0.0;
    auto [it, inserted] = seen.emplace(std::move(key), static_cast<PointId>(out.multiplicity.size()));
    if (inserted) {
      coords.insert(coords.end(), p.begin(), p.end());
      out.multiplicity.push_back(1);
    } else {
      ++out.multiplicity[it->second];
    }
    out.original_to_unique.push_back(it->second);
  }
  out.cloud = PointCloud(cloud.dim(), std::move(coords));
  return out;
}

double min_pairwise_distance(const PointCloud& cloud) {
  if (cloud.size() < 2) throw InputError("degenerate input: need at least two points");
  SpatialIndex index(cloud);
  double best = std::numeric_limits<double>::infinity();
  for (double d : index.nearest_neighbor_distances()) best = std::min(best, d);
  return best;
}

double diameter(const PointCloud& cloud) {
  double best = 0.0;
  for (PointId i = 0; i < cloud.size(); ++i)
    for (PointId j = i + 1; j < cloud.size(); ++j) best = std::max(best, cloud.squared_distance(i, j));
  return std::sqrt(best);
}

PointCloud read_points(std::istream& in) {
  std::vector<double> coords;
  std::size_t dim = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::size_t count = 0;
    std::string tok;
    while (ls >> tok) {
      double x = 0.0;
      if (!parse_real(tok, x) || !std::isfinite(x))
        throw InputError("line " + std::to_string(line_no) + ": bad coordinate '" + tok + "'");
      coords.push_back(x);
      ++count;
    }
    if (dim == 0) {
      dim = count;
    } else if (count != dim) {
      throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(dim) +
                       " coordinates, got " + std::to_string(count));
    }
  }
  if (dim == 0) throw InputError("no points in input");
  return PointCloud(dim, std::move(coords));
}

PointCloud read_points_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_points(in);
}

void write_points(std::ostream& out, const PointCloud& cloud) {
  for (PointId i = 0; i < cloud.size(); ++i) {
    auto p = cloud[i];
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (k) out << ' ';
      out << format_real(p[k]);
    }
    out << '\n';
  }
}

}  // namespace batchrips
