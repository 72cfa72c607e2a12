#include "batchrips/samples.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "batchrips/errors.hpp"

namespace batchrips {

const std::vector<std::string>& sample_shapes() {
  static const std::vector<std::string> shapes{"circle", "annulus", "sphere", "torus", "flat-torus-4d", "line"};
  return shapes;
}

PointCloud generate_sample(const std::string& shape, std::size_t n, double sigma, std::uint64_t seed) {
  if (n < 1) throw InputError("sample size must be >= 1");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InputError("noise must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double tau = 2.0 * std::numbers::pi;

  std::vector<std::vector<double>> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (shape == "circle") {
      const double a = tau * static_cast<double>(i) / static_cast<double>(n);
      rows.push_back({std::cos(a), std::sin(a)});
    } else if (shape == "annulus") {
      const double r = std::sqrt(1.0 + 3.0 * unit(rng)), a = tau * unit(rng);
      rows.push_back({r * std::cos(a), r * std::sin(a)});
    } else if (shape == "sphere") {
      double x, y, z, norm;
      do {
        x = gauss(rng), y = gauss(rng), z = gauss(rng);
        norm = std::sqrt(x * x + y * y + z * z);
      } while (norm < 1e-12);
      rows.push_back({x / norm, y / norm, z / norm});
    } else if (shape == "torus") {
      const double u = tau * unit(rng), v = tau * unit(rng);
      rows.push_back({(2.0 + std::cos(v)) * std::cos(u), (2.0 + std::cos(v)) * std::sin(u), std::sin(v)});
    } else if (shape == "flat-torus-4d") {
      const double u = tau * unit(rng), v = tau * unit(rng);
      rows.push_back({std::cos(u), std::sin(u), std::cos(v), std::sin(v)});
    } else if (shape == "line") {
      rows.push_back({static_cast<double>(i)});
    } else {
      throw InputError("unknown shape '" + shape + "'");
    }
  }
  if (sigma > 0.0)
    for (auto& row : rows)
      for (double& x : row) x += sigma * gauss(rng);
  return PointCloud::from_rows(rows);
}

}  // namespace batchrips
