#include "batchrips/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "batchrips/errors.hpp"
#include "batchrips/filtrations.hpp"
#include "batchrips/format.hpp"
#include "batchrips/persistence.hpp"
#include "batchrips/simplicial_state.hpp"

namespace batchrips {

namespace {

using Column = std::vector<std::uint32_t>;  // sorted row indices

void add_into(Column& into, const Column& other) {
  Column out;
  out.reserve(into.size() + other.size());
  std::set_symmetric_difference(into.begin(), into.end(), other.begin(), other.end(), std::back_inserter(out));
  into.swap(out);
}

// Cliques of the graph given by "upper" neighbour lists (all w > v), up to
// max_size vertices. f returns false to stop; returns false if stopped.
bool for_each_clique(const std::vector<std::vector<VertexId>>& up, std::size_t max_size,
                     const std::function<bool(const std::vector<VertexId>&)>& f) {
  std::vector<VertexId> clique;
  std::function<bool(const std::vector<VertexId>&)> grow = [&](const std::vector<VertexId>& cands) {
    for (std::size_t i = 0; i < cands.size(); ++i) {
      const VertexId w = cands[i];
      clique.push_back(w);
      if (!f(clique)) return false;
      if (clique.size() < max_size) {
        std::vector<VertexId> next;
        std::set_intersection(cands.begin() + static_cast<std::ptrdiff_t>(i) + 1, cands.end(), up[w].begin(),
                              up[w].end(), std::back_inserter(next));
        if (!next.empty() && !grow(next)) return false;
      }
      clique.pop_back();
    }
    return true;
  };
  std::vector<VertexId> all(up.size());
  for (VertexId v = 0; v < up.size(); ++v) all[v] = v;
  return grow(all);
}

std::vector<double> distance_matrix(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  std::vector<double> d(n * n, 0.0);
  for (PointId a = 0; a < n; ++a)
    for (PointId b = a + 1; b < n; ++b) d[a * n + b] = d[b * n + a] = cloud.distance(a, b);
  return d;
}

std::vector<std::vector<VertexId>> upper_graph(const std::vector<double>& d, std::size_t n, double threshold) {
  std::vector<std::vector<VertexId>> up(n);
  for (VertexId a = 0; a < n; ++a)
    for (VertexId b = a + 1; b < n; ++b)
      if (d[a * n + b] <= threshold) up[a].push_back(b);
  return up;
}

void check_scales(const std::vector<double>& scales) {
  if (scales.empty()) throw InputError("no scales");
  for (std::size_t i = 1; i < scales.size(); ++i)
    if (!(scales[i] > scales[i - 1])) throw InputError("scales must strictly increase");
}

}  // namespace

Barcode reduce_filtration(const std::vector<std::pair<Simplex, double>>& filtration, int p_max) {
  std::unordered_map<Simplex, std::uint32_t, SimplexHash> index;
  std::vector<std::uint32_t> keep;  // positions into `filtration` with dim <= p_max + 1
  double last = -kInfinity;
  for (std::size_t i = 0; i < filtration.size(); ++i) {
    const auto& [s, value] = filtration[i];
    if (value < last) throw ContractViolation("reduce_filtration: values decrease at position " + std::to_string(i));
    last = value;
    if (s.dim() > p_max + 1) continue;
    if (!index.emplace(s, static_cast<std::uint32_t>(keep.size())).second)
      throw ContractViolation("reduce_filtration: repeated simplex " + s.to_string());
    keep.push_back(static_cast<std::uint32_t>(i));
  }

  const std::size_t n = keep.size();
  std::vector<Column> cols(n);
  std::vector<int> dims(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Simplex& s = filtration[keep[j]].first;
    dims[j] = s.dim();
    if (s.size() < 2) continue;
    for (std::size_t f = 0; f < s.size(); ++f) {
      auto it = index.find(s.facet(f));
      if (it == index.end() || it->second >= j)
        throw ContractViolation("reduce_filtration: face of " + s.to_string() + " missing or later");
      cols[j].push_back(it->second);
    }
    std::sort(cols[j].begin(), cols[j].end());
  }

  std::vector<std::int64_t> owner(n, -1);  // pivot row -> column
  std::vector<char> paired(n, 0);
  Barcode out;
  for (int d = p_max + 1; d >= 1; --d) {
    for (std::size_t j = 0; j < n; ++j) {
      if (dims[j] != d || paired[j]) continue;  // cleared: positive and already paired
      Column& col = cols[j];
      while (!col.empty() && owner[col.back()] != -1) add_into(col, cols[static_cast<std::size_t>(owner[col.back()])]);
      if (col.empty()) continue;
      const std::uint32_t low = col.back();
      owner[low] = static_cast<std::int64_t>(j);
      paired[low] = 1;
      paired[j] = 1;
      out.bars.push_back(Bar{dims[low], filtration[keep[low]].second, filtration[keep[j]].second});
    }
  }
  for (std::size_t j = 0; j < n; ++j)
    if (!paired[j] && dims[j] <= p_max) out.bars.push_back(Bar{dims[j], filtration[keep[j]].second, kInfinity});
  out.sort();
  return out;
}

Barcode exact_rips_barcode(const PointCloud& cloud, const std::vector<double>& scales, int p_max, int d_max,
                           const OracleLimits& limits) {
  check_scales(scales);
  if (p_max < 0) throw InputError("p_max must be >= 0");
  if (d_max < 1 || d_max > Simplex::kMaxDim) throw InputError("d_max out of range");
  const std::size_t n = cloud.size();
  const std::vector<double> d = distance_matrix(cloud);
  const auto up = upper_graph(d, n, scales.back());
  const std::size_t max_size = static_cast<std::size_t>(std::min(d_max, p_max + 1)) + 1;

  std::vector<std::pair<Simplex, double>> filtration;
  for_each_clique(up, max_size, [&](const std::vector<VertexId>& q) {
    double diam = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
      for (std::size_t j = i + 1; j < q.size(); ++j) diam = std::max(diam, d[q[i] * n + q[j]]);
    const double value = *std::lower_bound(scales.begin(), scales.end(), diam);
    filtration.emplace_back(Simplex(std::span<const VertexId>(q)), value);
    if (filtration.size() > limits.max_simplices)
      throw OracleScaleError("oracle scale: exact Rips exceeds " + std::to_string(limits.max_simplices) +
                             " simplices");
    return true;
  });
  std::sort(filtration.begin(), filtration.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second < b.second;
    return a.first < b.first;
  });
  return reduce_filtration(filtration, p_max).without_zero_length();
}

Barcode reduce_inclusion_stream(const OperationStream& stream, int p_max) {
  std::vector<std::pair<Simplex, double>> filtration;
  double scale = 0.0;
  for (const Record& rec : stream.records) {
    if (const auto* t = std::get_if<Timestamp>(&rec)) {
      scale = t->scale;
    } else if (const auto* ins = std::get_if<InsertSimplex>(&rec)) {
      filtration.emplace_back(ins->simplex, scale);
    } else {
      throw ContractViolation("reduce_inclusion_stream: stream has a collapse");
    }
  }
  return reduce_filtration(filtration, p_max).without_zero_length();
}

// ---------------------------------------------------------------------------

namespace {

using Bits = std::vector<std::uint64_t>;

void xor_into(Bits& a, const Bits& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] ^= b[i];
}
void flip(Bits& a, std::size_t i) { a[i / 64] ^= std::uint64_t{1} << (i % 64); }
long top_bit(const Bits& a) {
  for (std::size_t w = a.size(); w-- > 0;)
    if (a[w]) return static_cast<long>(w * 64 + 63 - static_cast<std::size_t>(std::countl_zero(a[w])));
  return -1;
}

// Incremental Z2 echelon basis keyed by top bit.
class Echelon {
 public:
  // Reduces v against the basis; keeps it and returns true when independent.
  bool add(Bits v) {
    for (long p = top_bit(v); p >= 0; p = top_bit(v)) {
      auto it = rows_.find(p);
      if (it == rows_.end()) {
        rows_.emplace(p, std::move(v));
        return true;
      }
      xor_into(v, it->second);
    }
    return false;
  }
  std::size_t rank() const { return rows_.size(); }

 private:
  std::map<long, Bits> rows_;
};

std::vector<Simplex> of_dim(const std::vector<Simplex>& sorted, int dim) {
  std::vector<Simplex> out;
  for (const Simplex& s : sorted)
    if (s.dim() == dim) out.push_back(s);
  return out;
}

std::size_t position(const std::vector<Simplex>& sorted_same_dim, const Simplex& s) {
  auto it = std::lower_bound(sorted_same_dim.begin(), sorted_same_dim.end(), s);
  if (it == sorted_same_dim.end() || !(*it == s)) throw std::logic_error("rank oracle: face " + s.to_string() + " missing");
  return static_cast<std::size_t>(it - sorted_same_dim.begin());
}

Bits zeros(std::size_t n) { return Bits((n + 63) / 64, 0); }

// Kernel basis of the boundary map on p-chains, as lists of p-simplices.
std::vector<std::vector<Simplex>> cycle_basis(const std::vector<Simplex>& simplices, int p) {
  const std::vector<Simplex> chains = of_dim(simplices, p);
  std::vector<std::vector<Simplex>> out;
  if (p == 0) {
    for (const Simplex& s : chains) out.push_back({s});
    return out;
  }
  const std::vector<Simplex> faces = of_dim(simplices, p - 1);
  // rows: [boundary | combination]
  const std::size_t nf = faces.size(), nc = chains.size();
  std::map<long, std::pair<Bits, Bits>> basis;
  for (std::size_t k = 0; k < nc; ++k) {
    Bits b = zeros(nf), comb = zeros(nc);
    flip(comb, k);
    for (std::size_t f = 0; f < chains[k].size(); ++f) flip(b, position(faces, chains[k].facet(f)));
    for (long piv = top_bit(b); piv >= 0; piv = top_bit(b)) {
      auto it = basis.find(piv);
      if (it == basis.end()) break;
      xor_into(b, it->second.first);
      xor_into(comb, it->second.second);
    }
    const long piv = top_bit(b);
    if (piv >= 0) {
      basis.emplace(piv, std::make_pair(std::move(b), std::move(comb)));
      continue;
    }
    std::vector<Simplex> z;
    for (std::size_t i = 0; i < nc; ++i)
      if (comb[i / 64] >> (i % 64) & 1) z.push_back(chains[i]);
    out.push_back(std::move(z));
  }
  return out;
}

}  // namespace

RankOracle::RankOracle(const OperationStream& stream, int p_max, const OracleLimits& limits) : p_max_(p_max) {
  if (p_max < 0) throw InputError("p_max must be >= 0");
  const StreamValidation v = validate_stream(stream);
  if (!v.ok) throw InputError("rank oracle: invalid stream [" + v.rule + "]: " + v.message);

  SimplicialState state(stream.d_max());
  std::unordered_map<VertexId, VertexId> image;
  double scale = 0.0;
  bool started = false;
  std::size_t total = 0;
  auto close = [&] {
    if (!snapshots_.empty()) {
      snapshots_.back().next.assign(image.begin(), image.end());
      std::sort(snapshots_.back().next.begin(), snapshots_.back().next.end());
    }
    Snapshot snap;
    snap.scale = scale;
    for (const Simplex& s : state.sorted_simplices())
      if (s.dim() <= p_max + 1) snap.simplices.push_back(s);
    total += snap.simplices.size();
    if (total > limits.max_simplices)
      throw OracleScaleError("oracle scale: rank oracle exceeds " + std::to_string(limits.max_simplices) +
                             " simplices over all snapshots");
    snapshots_.push_back(std::move(snap));
    image.clear();
    for (VertexId u : state.vertices()) image.emplace(u, u);
  };
  for (const Record& rec : stream.records) {
    if (const auto* t = std::get_if<Timestamp>(&rec)) {
      if (started) close();
      started = true;
      scale = t->scale;
    } else if (const auto* ins = std::get_if<InsertSimplex>(&rec)) {
      state.insert(ins->simplex);
    } else {
      const auto& c = std::get<CollapseVertex>(rec);
      state.collapse(c.u, c.v);
      for (auto& [from, to] : image)
        if (to == c.u) to = c.v;
    }
  }
  if (started) close();
}

int RankOracle::rank(std::size_t i, std::size_t j, int p) const {
  if (i > j || j >= snapshots_.size()) throw ContractViolation("rank: indices out of range");
  if (p < 0 || p > p_max_) throw ContractViolation("rank: dimension out of range");

  std::unordered_map<VertexId, VertexId> f;
  for (const Simplex& s : snapshots_[i].simplices)
    if (s.size() == 1) f.emplace(s[0], s[0]);
  for (std::size_t k = i; k < j; ++k) {
    const auto& next = snapshots_[k].next;
    for (auto& [from, to] : f) {
      auto it = std::lower_bound(next.begin(), next.end(), std::make_pair(to, VertexId{0}));
      if (it == next.end() || it->first != to) throw std::logic_error("rank oracle: broken vertex map");
      to = it->second;
    }
  }

  const auto& target = snapshots_[j].simplices;
  const std::vector<Simplex> target_p = of_dim(target, p);
  const std::size_t width = target_p.size();
  Echelon span;
  for (const Simplex& s : of_dim(target, p + 1)) {
    Bits b = zeros(width);
    for (std::size_t k = 0; k < s.size(); ++k) flip(b, position(target_p, s.facet(k)));
    span.add(std::move(b));
  }
  const std::size_t boundary_rank = span.rank();
  for (const auto& z : cycle_basis(snapshots_[i].simplices, p)) {
    Bits img = zeros(width);
    for (const Simplex& s : z) {
      std::vector<VertexId> vs;
      for (VertexId v : s) vs.push_back(f.at(v));
      std::sort(vs.begin(), vs.end());
      vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
      if (vs.size() != s.size()) continue;  // degenerate image
      flip(img, position(target_p, Simplex(std::span<const VertexId>(vs))));
    }
    span.add(std::move(img));
  }
  return static_cast<int>(span.rank() - boundary_rank);
}

Barcode RankOracle::barcode() const {
  Barcode out;
  const std::size_t n = snapshots_.size();
  for (int p = 0; p <= p_max_; ++p) {
    std::vector<std::vector<int>> r(n, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) r[i][j] = rank(i, j, p);
    auto at = [&](long i, long j) { return i < 0 ? 0 : r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };
    for (long i = 0; i < static_cast<long>(n); ++i) {
      for (long j = i + 1; j < static_cast<long>(n); ++j) {
        const int m = at(i, j - 1) - at(i - 1, j - 1) - at(i, j) + at(i - 1, j);
        if (m < 0) throw std::logic_error("rank oracle: negative multiplicity");
        for (int k = 0; k < m; ++k) out.bars.push_back(Bar{p, scale(i), scale(j)});
      }
      const long last = static_cast<long>(n) - 1;
      const int m = at(i, last) - at(i - 1, last);
      if (m < 0) throw std::logic_error("rank oracle: negative multiplicity");
      for (int k = 0; k < m; ++k) out.bars.push_back(Bar{p, scale(i), kInfinity});
    }
  }
  out.sort();
  return out;
}

int homology_map_rank(const OperationStream& stream, std::size_t i, std::size_t j, int p) {
  return RankOracle(stream, p).rank(i, j, p);
}

Barcode module_rank_barcode(const OperationStream& stream, int p_max, const OracleLimits& limits) {
  return RankOracle(stream, p_max, limits).barcode();
}

// ---------------------------------------------------------------------------

namespace {

struct Point {
  double birth, death;
};

double linf(const Point& a, const Point& b) { return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death)); }
double half(const Point& a) { return (a.death - a.birth) / 2.0; }

// Perfect matching of A + diag(B) against B + diag(A) with every used edge
// costing at most eps.
bool feasible(const std::vector<Point>& A, const std::vector<Point>& B, double eps) {
  const std::size_t na = A.size(), nb = B.size(), n = na + nb;
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j)
      if (linf(A[i], B[j]) <= eps) adj[i].push_back(j);
    if (half(A[i]) <= eps) adj[i].push_back(nb + i);
  }
  for (std::size_t j = 0; j < nb; ++j) {
    if (half(B[j]) <= eps) adj[na + j].push_back(j);
    for (std::size_t i = 0; i < na; ++i) adj[na + j].push_back(nb + i);
  }
  std::vector<long> match(n, -1);
  std::vector<char> seen;
  std::function<bool(std::size_t)> augment = [&](std::size_t u) {
    for (std::size_t w : adj[u]) {
      if (seen[w]) continue;
      seen[w] = 1;
      if (match[w] < 0 || augment(static_cast<std::size_t>(match[w]))) {
        match[w] = static_cast<long>(u);
        return true;
      }
    }
    return false;
  };
  for (std::size_t u = 0; u < n; ++u) {
    seen.assign(n, 0);
    if (!augment(u)) return false;
  }
  return true;
}

}  // namespace

double bottleneck_distance(const Barcode& a, const Barcode& b, int dim, const BottleneckOptions& options) {
  if (options.log_scale && !(options.clamp > 0.0)) throw InputError("log-scale clamp must be > 0");
  auto tx = [&](double x) {
    if (!options.log_scale || std::isinf(x)) return x;
    return std::log(std::max(x, options.clamp));
  };
  std::vector<Point> A, B;
  std::vector<double> ea, eb;
  for (const Bar& bar : a.bars) {
    if (bar.dim != dim) continue;
    if (bar.infinite()) ea.push_back(tx(bar.birth));
    else A.push_back({tx(bar.birth), tx(bar.death)});
  }
  for (const Bar& bar : b.bars) {
    if (bar.dim != dim) continue;
    if (bar.infinite()) eb.push_back(tx(bar.birth));
    else B.push_back({tx(bar.birth), tx(bar.death)});
  }
  if (ea.size() != eb.size()) return kInfinity;
  std::sort(ea.begin(), ea.end());
  std::sort(eb.begin(), eb.end());
  double essential = 0.0;
  for (std::size_t i = 0; i < ea.size(); ++i) essential = std::max(essential, std::abs(ea[i] - eb[i]));

  std::vector<double> cand{0.0};
  for (const Point& p : A) cand.push_back(half(p));
  for (const Point& q : B) cand.push_back(half(q));
  for (const Point& p : A)
    for (const Point& q : B) cand.push_back(linf(p, q));
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  std::size_t lo = 0, hi = cand.size() - 1;  // the largest candidate is always feasible
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (feasible(A, B, cand[mid])) hi = mid;
    else lo = mid + 1;
  }
  return std::max(essential, cand[lo]);
}

InterleavingParams interleaving_params(double c) {
  InterleavingParams p;
  p.c = c;
  p.t = interleaving_step(c);
  p.bound = 3.0 * p.t * std::log(c);
  return p;
}

bool GuaranteeReport::pass() const {
  return std::all_of(dims.begin(), dims.end(), [](const DimVerdict& d) { return d.pass; });
}

GuaranteeReport check_simba_guarantee(const PointCloud& cloud, double c, int p_max, std::uint64_t seed,
                                      const GuaranteeOptions& options) {
  if (p_max < 0 || p_max + 1 > Simplex::kMaxDim) throw InputError("p_max out of range");
  GuaranteeReport report;
  report.params = interleaving_params(c);
  const BatchParams params{c, p_max + 1, seed, options.policy};
  const BatchBuild build = build_simba_traced(cloud, params);
  report.simba = compute_persistence(build.stream, p_max);

  double clamp = 1.0;
  report.scales = {0.0};
  if (!build.hierarchy.levels().empty()) {
    const NetHierarchy& h = build.hierarchy;
    report.alpha = clamp = h.base_scale();
    const double diam = diameter(cloud);
    std::size_t k = 0;
    for (; k <= h.last_level() || h.scale(k - 1) < diam; ++k) report.scales.push_back(h.scale(k));
  }
  report.exact = exact_rips_barcode(cloud, report.scales, p_max, p_max + 1, options.limits);
  for (int p = 0; p <= p_max; ++p) {
    DimVerdict v;
    v.dim = p;
    v.distance = bottleneck_distance(report.simba, report.exact, p, BottleneckOptions{true, clamp});
    v.bound = report.params.bound;
    v.pass = v.distance <= v.bound;
    report.dims.push_back(v);
  }
  return report;
}

void write_guarantee_report(std::ostream& out, const GuaranteeReport& r) {
  out << "alpha " << format_real(r.alpha) << "\n";
  out << "c " << format_real(r.params.c) << " t " << r.params.t << " bound " << format_real(r.params.bound) << "\n";
  out << "scales " << r.scales.size() << "\n";
  for (const DimVerdict& d : r.dims)
    out << "dim " << d.dim << " distance " << format_real(d.distance) << " bound " << format_real(d.bound) << " "
        << (d.pass ? "pass" : "fail") << "\n";
  out << "verdict " << (r.pass() ? "pass" : "fail") << "\n";
}

// ---------------------------------------------------------------------------

RipsSize rips_size(const PointCloud& cloud, const std::vector<double>& scales, int d_max, std::size_t cap) {
  check_scales(scales);
  if (d_max < 1 || d_max > Simplex::kMaxDim) throw InputError("d_max out of range");
  const std::size_t n = cloud.size();
  const std::vector<double> d = distance_matrix(cloud);
  auto count = [&](double threshold, std::size_t& total) {
    total = 0;
    return for_each_clique(upper_graph(d, n, threshold), static_cast<std::size_t>(d_max) + 1,
                           [&](const std::vector<VertexId>&) { return ++total <= cap; });
  };
  RipsSize best;
  std::size_t lo = 0, hi = scales.size();  // answer: number of scales that fit
  while (lo < hi) {
    const std::size_t mid = (lo + hi + 1) / 2;
    std::size_t total = 0;
    if (count(scales[mid - 1], total)) {
      lo = mid;
      best = {total, mid};
    } else {
      hi = mid - 1;
    }
  }
  return best;
}

}  // namespace batchrips
