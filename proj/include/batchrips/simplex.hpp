#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace batchrips {

using VertexId = std::uint32_t;

// Strictly increasing vertex list with inline storage. Dimension is capped at
// kMaxDim, which bounds every dimension cap in the library.
class Simplex {
 public:
  static constexpr std::size_t kMaxVertices = 8;
  static constexpr int kMaxDim = static_cast<int>(kMaxVertices) - 1;

  Simplex() = default;
  Simplex(std::initializer_list<VertexId> vs) : Simplex(std::span<const VertexId>(vs.begin(), vs.size())) {}
  // Sorts and checks for repeats; throws ContractViolation on bad input.
  explicit Simplex(std::span<const VertexId> vs);

  static Simplex vertex(VertexId v) {
    Simplex s;
    s.v_[0] = v;
    s.n_ = 1;
    return s;
  }

  std::size_t size() const { return n_; }
  int dim() const { return static_cast<int>(n_) - 1; }
  bool empty() const { return n_ == 0; }
  VertexId operator[](std::size_t i) const { return v_[i]; }
  const VertexId* begin() const { return v_.data(); }
  const VertexId* end() const { return v_.data() + n_; }
  bool contains(VertexId v) const { return std::binary_search(begin(), end(), v); }

  // Facet with position i removed.
  Simplex facet(std::size_t i) const;
  // Adds a vertex not already present. Throws if full.
  Simplex with(VertexId v) const;
  Simplex without(VertexId v) const;

  friend bool operator==(const Simplex& a, const Simplex& b) {
    return a.n_ == b.n_ && std::equal(a.begin(), a.end(), b.begin());
  }
  // Faces before cofaces: by dimension, then lexicographic.
  friend bool operator<(const Simplex& a, const Simplex& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }

  std::size_t hash() const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ n_;
    for (std::size_t i = 0; i < n_; ++i) {
      h ^= v_[i] + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 33));
  }

  std::string to_string() const;

 private:
  std::array<VertexId, kMaxVertices> v_{};
  std::uint8_t n_ = 0;
};

struct SimplexHash {
  std::size_t operator()(const Simplex& s) const { return s.hash(); }
};

// All nonempty faces (including s itself).
std::vector<Simplex> all_faces(const Simplex& s);

}  // namespace batchrips
