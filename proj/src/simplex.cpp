#include "batchrips/simplex.hpp"

#include "batchrips/errors.hpp"

namespace batchrips {

Simplex::Simplex(std::span<const VertexId> vs) {
  if (vs.size() > kMaxVertices) throw ContractViolation("simplex exceeds maximum dimension");
  std::copy(vs.begin(), vs.end(), v_.begin());
  n_ = static_cast<std::uint8_t>(vs.size());
  std::sort(v_.begin(), v_.begin() + n_);
  if (std::adjacent_find(begin(), end()) != end()) throw ContractViolation("simplex has a repeated vertex");
}

Simplex Simplex::facet(std::size_t i) const {
  Simplex s;
  for (std::size_t j = 0; j < n_; ++j)
    if (j != i) s.v_[s.n_++] = v_[j];
  return s;
}

Simplex Simplex::with(VertexId v) const {
  if (n_ == kMaxVertices) throw ContractViolation("simplex exceeds maximum dimension");
  Simplex s = *this;
  auto* pos = std::lower_bound(s.v_.begin(), s.v_.begin() + n_, v);
  if (pos != s.v_.begin() + n_ && *pos == v) throw ContractViolation("simplex has a repeated vertex");
  std::copy_backward(pos, s.v_.begin() + n_, s.v_.begin() + n_ + 1);
  *pos = v;
  ++s.n_;
  return s;
}

Simplex Simplex::without(VertexId v) const {
  Simplex s;
  for (std::size_t j = 0; j < n_; ++j)
    if (v_[j] != v) s.v_[s.n_++] = v_[j];
  return s;
}

std::string Simplex::to_string() const {
  std::string out = "<";
  for (std::size_t i = 0; i < n_; ++i) {
    if (i) out += ' ';
    out += std::to_string(v_[i]);
  }
  return out + ">";
}

std::vector<Simplex> all_faces(const Simplex& s) {
  std::vector<Simplex> out;
  const std::size_t n = s.size();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::array<VertexId, Simplex::kMaxVertices> buf{};
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) buf[k++] = s[i];
    out.emplace_back(std::span<const VertexId>(buf.data(), k));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace batchrips
