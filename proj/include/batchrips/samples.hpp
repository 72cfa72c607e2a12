#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "batchrips/point_cloud.hpp"

namespace batchrips {

// Synthetic clouds, deterministic per seed. Gaussian noise of deviation
// sigma is added to every coordinate.
//   circle         evenly spaced angles 2 pi i / n on the unit circle
//   annulus        area-uniform in 1 <= r <= 2
//   sphere         uniform on the unit 2-sphere
//   torus          (2 + cos v) cos u, (2 + cos v) sin u, sin v; u, v uniform
//   flat-torus-4d  (cos u, sin u, cos v, sin v); u, v uniform
//   line           0, 1, ..., n-1 in R^1
PointCloud generate_sample(const std::string& shape, std::size_t n, double sigma, std::uint64_t seed);
const std::vector<std::string>& sample_shapes();

}  // namespace batchrips
