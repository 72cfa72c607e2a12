#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "batchrips/errors.hpp"
#include "batchrips/filtrations.hpp"
#include "batchrips/persistence.hpp"
#include "batchrips/set_partition.hpp"
#include "support/stream_gen.hpp"

using namespace batchrips;

namespace {

PointCloud line(std::vector<double> xs) {
  std::vector<std::vector<double>> rows;
  for (double x : xs) rows.push_back({x});
  return PointCloud::from_rows(rows);
}

std::string text(const OperationStream& s) {
  std::ostringstream out;
  for (const Record& r : s.records) {
    if (const auto* t = std::get_if<Timestamp>(&r)) out << "t " << t->scale << "; ";
    else if (const auto* i = std::get_if<InsertSimplex>(&r)) out << "i " << testgen::vertex_list(i->simplex) << "; ";
    else out << "c " << std::get<CollapseVertex>(r).u << " " << std::get<CollapseVertex>(r).v << "; ";
  }
  return out.str();
}

// Complex reached after replaying every record with timestamp <= alpha.
std::set<Simplex> replay_until(const OperationStream& s, double alpha) {
  SimplicialState state(s.d_max());
  for (const Record& r : s.records) {
    if (const auto* t = std::get_if<Timestamp>(&r)) {
      if (t->scale > alpha) break;
    } else if (const auto* i = std::get_if<InsertSimplex>(&r)) {
      state.insert(i->simplex);
    } else {
      state.collapse(std::get<CollapseVertex>(r).u, std::get<CollapseVertex>(r).v);
    }
  }
  return {state.simplices().begin(), state.simplices().end()};
}

// Weight formula written out again, independent of the library.
double weight(double lambda, double eps, double a) {
  if (std::isinf(lambda) || a <= lambda / eps) return 0.0;
  if (a <= lambda / (eps * (1 - eps))) return a - lambda / eps;
  return eps * a;
}

// Q^alpha straight from its definition: cliques over the live net whose
// perturbed pairwise distances are <= 2 alpha (slack for rounding).
std::set<Simplex> direct_q(const PointCloud& c, const std::vector<double>& lambda, double eps, double a, int d_max,
                           double slack = 0.0) {
  std::vector<VertexId> net;
  for (VertexId p = 0; p < c.size(); ++p)
    if (lambda[p] > eps * (1 - eps) * a) net.push_back(p);
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (std::size_t i = 0; i < net.size(); ++i)
    for (std::size_t j = i + 1; j < net.size(); ++j) {
      const VertexId p = net[i], q = net[j];
      if (c.distance(p, q) + weight(lambda[p], eps, a) + weight(lambda[q], eps, a) <= 2 * a + slack)
        edges.push_back({p, q});
    }
  const auto all = flag_closure(edges, net, d_max);
  return {all.begin(), all.end()};
}

std::map<Simplex, double> insertion_times(const OperationStream& s) {
  std::map<Simplex, double> out;
  double now = 0;
  for (const Record& r : s.records) {
    if (const auto* t = std::get_if<Timestamp>(&r)) now = t->scale;
    else if (const auto* i = std::get_if<InsertSimplex>(&r)) out.emplace(i->simplex, now);
  }
  return out;
}

// Clusters B_v^k by composing the hierarchy's maps, then brute-force set
// distances between them.
std::vector<std::pair<VertexId, VertexId>> brute_simba_edges(const PointCloud& c, const NetHierarchy& h,
                                                             std::size_t k) {
  std::vector<VertexId> image(c.size());
  for (VertexId p = 0; p < c.size(); ++p) image[p] = p;
  for (std::size_t j = 0; j < k; ++j) {
    std::map<VertexId, VertexId> pi;
    for (std::size_t i = 0; i < h.level(j).vertices.size(); ++i) pi[h.level(j).vertices[i]] = h.level(j).image[i];
    for (VertexId& x : image) x = pi.at(x);
  }
  std::map<std::pair<VertexId, VertexId>, double> best;
  for (VertexId p = 0; p < c.size(); ++p)
    for (VertexId q = 0; q < c.size(); ++q) {
      if (image[p] >= image[q]) continue;
      auto key = std::make_pair(image[p], image[q]);
      auto it = best.find(key);
      const double d = c.distance(p, q);
      if (it == best.end()) best.emplace(key, d);
      else it->second = std::min(it->second, d);
    }
  std::vector<std::pair<VertexId, VertexId>> out;
  for (const auto& [e, d] : best)
    if (d <= h.scale(k)) out.push_back(e);
  return out;
}

}  // namespace

TEST_CASE("exact rips builder") {
  const PointCloud square = PointCloud::from_rows({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const OperationStream s = build_rips(square, {0, 1, std::sqrt(2.0)}, 3);
  CHECK(text(s) ==
        "t 0; i 0; i 1; i 2; i 3; t 1; i 0 1; i 0 3; i 1 2; i 2 3; t 1.41421; i 0 2; i 1 3; i 0 1 2; i 0 1 3; "
        "i 0 2 3; i 1 2 3; i 0 1 2 3; ");
  CHECK(validate_stream(s, {true}).ok);
  CHECK_FALSE(s.has_collapses());

  CHECK(text(build_rips(square, {0}, 3)) == "t 0; i 0; i 1; i 2; i 3; ");
  std::mt19937_64 rng(1);
  const PointCloud c = testgen::random_cloud(rng, 7, 2);
  const StreamValidation v = validate_stream(build_rips(c, {0, 10}, 3));
  CHECK(v.final_size == 7 + 21 + 35 + 35);
  CHECK_THROWS_AS(build_rips(c, {1, 1}, 3), InputError);
  CHECK_THROWS_AS(build_rips(c, {-1, 1}, 3), InputError);
}

TEST_CASE("sparse rips weight") {
  CHECK(sparse_rips_weight(1, 0.5, 1.5) == 0.0);
  CHECK(sparse_rips_weight(1, 0.5, 3) == 1.0);
  CHECK(sparse_rips_weight(1, 0.5, 8) == 4.0);
  CHECK(sparse_rips_weight(kInfinity, 0.5, 1e9) == 0.0);
  CHECK(perturbed_distance(2, 1, 1, 0.5, 3) == 4.0);
  CHECK(perturbed_distance(5, kInfinity, kInfinity, 0.5, 3) == 5.0);
}

TEST_CASE("sparse weight properties") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 10000; ++i) {
    const double lambda = 10 * u(rng) + 1e-3, eps = 0.01 + 0.98 * u(rng), a = 100 * u(rng);
    const double w = sparse_rips_weight(lambda, eps, a);
    CHECK(w == weight(lambda, eps, a));
    CHECK(w <= eps * a + 1e-12);
    CHECK(sparse_rips_weight(lambda, eps, a + 0.01) >= w);
  }
}

TEST_CASE("sparse edge birth matches a dense grid") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 2000; ++i) {
    const double eps = 0.05 + 0.9 * u(rng), d = 10 * u(rng);
    const double lp = i % 7 == 0 ? kInfinity : 10 * u(rng), lq = 10 * u(rng);
    const double b = sparse_edge_birth(d, lp, lq, eps);
    auto g = [&](double a) { return d + weight(lp, eps, a) + weight(lq, eps, a) - 2 * a; };
    CHECK(g(b) <= 1e-9 * (1 + d));
    if (b > 0) CHECK(g(b * (1 - 1e-9)) > 0);
    // grid oracle: the first grid point past the condition sits right after b
    const double step = (b + 1) / 4096;
    double first = -1;
    for (int k = 0; k <= 8192; ++k)
      if (g(k * step) <= 0) {
        first = k * step;
        break;
      }
    REQUIRE(first >= 0);
    CHECK(first >= b - 1e-9);
    CHECK(first - b <= step + 1e-9);
  }
}

TEST_CASE("sparse rips worked example") {
  const PointCloud c = line({0, 10});
  CHECK(text(build_sparse_rips(c, {0.5, 3})) == "t 0; i 0; i 1; t 5; i 0 1; ");
  CHECK(text(build_sparse_rips(c, {0.5, 3}, SparseVariant::kCollapse)) == "t 0; i 0; i 1; t 5; i 0 1; t 40; c 1 0; ");
  CHECK(text(build_sparse_rips(line({3}), {0.8, 3})) == "t 0; i 0; ");
  CHECK_THROWS_AS(build_sparse_rips(c, {1.0, 3}), InputError);
  CHECK_THROWS_AS(build_sparse_rips(c, {0.0, 3}), InputError);
}

TEST_CASE("sparse rips replay matches the set definitions") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 12; ++trial) {
    const double eps = trial % 2 ? 0.8 : 0.5;
    const int d_max = 2 + trial % 2;
    const PointCloud c = testgen::random_cloud(rng, 5 + rng() % 20, 2 + trial % 2);
    const std::vector<double> lambda = greedy_permutation(c, 0).radius_of;
    const OperationStream incl = build_sparse_rips(c, {eps, d_max}, SparseVariant::kInclusion);
    const OperationStream coll = build_sparse_rips(c, {eps, d_max}, SparseVariant::kCollapse);
    CHECK(validate_stream(incl).ok);
    CHECK(validate_stream(coll, {true}).ok);

    double top = 0;
    for (VertexId p = 1; p < c.size(); ++p) top = std::max(top, sparse_deletion_scale(lambda[p], eps));
    std::vector<double> probes;
    for (int k = 0; k < 40; ++k) probes.push_back(std::uniform_real_distribution<double>(0, 1.2 * top)(rng));

    const auto born = insertion_times(incl);
    std::map<double, std::set<Simplex>> q_at;  // entry scales repeat a lot
    for (double a : probes) {
      const auto q = direct_q(c, lambda, eps, a, d_max);
      const auto s_replay = replay_until(incl, a);
      // collapse variant realizes Q^alpha itself
      CHECK(replay_until(coll, a) == q);
      // Q within S
      for (const Simplex& x : q) CHECK(s_replay.count(x) == 1);
      // everything in S^alpha was in Q at its entry scale
      for (const Simplex& x : s_replay) {
        const double t = born.at(x);
        CHECK(t <= a);
        auto it = q_at.find(t);
        if (it == q_at.end()) it = q_at.emplace(t, direct_q(c, lambda, eps, t, d_max, 1e-9)).first;
        CHECK(it->second.count(x) == 1);
      }
    }
    // S is nested
    std::sort(probes.begin(), probes.end());
    for (std::size_t k = 1; k < probes.size(); ++k) {
      const auto lo = replay_until(incl, probes[k - 1]), hi = replay_until(incl, probes[k]);
      CHECK(std::includes(hi.begin(), hi.end(), lo.begin(), lo.end()));
    }
  }
}

TEST_CASE("batch and simba worked example") {
  const PointCloud c = line({0, 1, 10, 11});
  const BatchParams params{2.0, 3, 0, PickPolicy::kLowestId};
  const OperationStream simba = build_simba(c, params);
  CHECK(text(simba) == "t 0; i 0; i 1; i 2; i 3; t 2; c 1 0; c 3 2; t 4; t 8; t 16; c 2 0; ");
  CHECK(simba.get("alpha") == std::optional<std::string>("1"));
  const OperationStream batch = build_batch_rips(c, params);
  CHECK(text(batch) == "t 0; i 0; i 1; i 2; i 3; t 2; c 1 0; c 3 2; i 0 2; t 4; t 8; t 16; c 2 0; ");
  CHECK(batch_inflation(2.0) == 5.0);

  const Barcode b = compute_persistence(simba, 2);
  CHECK(b.bars == std::vector<Bar>{{0, 0, 2}, {0, 0, 2}, {0, 0, 16}, {0, 0, kInfinity}});
  CHECK(validate_stream(simba).sizes.cumulative < validate_stream(batch).sizes.cumulative);

  const OperationStream two = build_batch_rips(line({0, 1}), params);
  CHECK(text(two) == "t 0; i 0; i 1; t 2; c 1 0; ");
  CHECK(text(build_simba(line({4}), params)) == "t 0; i 0; ");
}

TEST_CASE("builders reject bad parameters") {
  const PointCloud c = line({0, 1, 3});
  CHECK_THROWS_AS(build_simba(c, {1.0, 3, 0, PickPolicy::kLowestId}), InputError);
  CHECK_THROWS_AS(build_batch_rips(c, {0.5, 3, 0, PickPolicy::kLowestId}), InputError);
  CHECK_THROWS_AS(build_simba(c, {2.0, 0, 0, PickPolicy::kLowestId}), InputError);
  CHECK_THROWS_AS(build_simba(c, {2.0, 3, 0, PickPolicy::kLowestId}, 0.0), InputError);
}

TEST_CASE("duplicates are merged and reported") {
  const PointCloud c = line({0, 0, 1, 10, 10, 11});
  const OperationStream s = build_simba(c, {2.0, 3, 0, PickPolicy::kLowestId});
  CHECK(s.get("duplicates") == std::optional<std::string>("2"));
  CHECK(s.get("n") == std::optional<std::string>("4"));
  PersistenceOptions keep;
  keep.keep_zero_length = true;
  CHECK(compute_persistence(s, 1, keep).count(0) == 6);
  CHECK(compute_persistence(s, 1).count(0) == 4);
}

TEST_CASE("set partition") {
  const PointCloud c = line({0, 1, 10, 11, 20});
  SetPartition part(5);
  part.merge(1, 0);
  part.merge(3, 2);
  CHECK(part.set_distance(0, 2, c) == 9.0);
  CHECK(part.set_distance(2, 4, c) == 9.0);
  CHECK(part.find(1) == 0);
  CHECK(part.find(3) == 2);
  CHECK(part.cluster_count() == 3);
  CHECK_THROWS_AS(part.set_distance(1, 2, c), ContractViolation);
  CHECK_THROWS_AS(part.set_distance(0, 0, c), ContractViolation);

  SetPartition single(2);
  CHECK(single.set_distance(0, 1, c) == 1.0);

  part.build_matrix(c);
  const double a = part.matrix_distance(0, 4), b = part.matrix_distance(2, 4);
  part.merge(2, 0);
  CHECK(part.matrix_distance(0, 4) == std::min(a, b));
  CHECK(part.matrix_distance(0, 4) == part.set_distance(0, 4, c));
  CHECK(part.members(0).size() == 4);
}

TEST_CASE("set partition matrix tracks brute force under random merges") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const PointCloud c = testgen::random_cloud(rng, 30, 2);
    SetPartition part(30);
    std::vector<PointId> reps(30);
    for (PointId i = 0; i < 30; ++i) reps[i] = i;
    while (reps.size() > 2) {
      std::shuffle(reps.begin(), reps.end(), rng);
      part.merge(reps.back(), reps.front());
      reps.pop_back();
      if (reps.size() == 20) part.build_matrix(c);
      if (part.has_matrix())
        for (std::size_t i = 0; i < reps.size(); ++i)
          for (std::size_t j = i + 1; j < reps.size(); ++j)
            CHECK(part.matrix_distance(reps[i], reps[j]) == part.set_distance(reps[i], reps[j], c));
    }
    for (PointId p = 0; p < 30; ++p) CHECK(part.is_representative(part.find(p)));
  }
}

TEST_CASE("simba edges equal brute-force set distances under every discovery mode") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 16; ++trial) {
    const PointCloud c = testgen::random_cloud(rng, 10 + rng() % 50, 2 + trial % 2);
    const double growth = trial % 2 ? 1.5 : 1.2;
    const BatchParams params{growth, 3, rng(), trial % 4 < 2 ? PickPolicy::kLowestId : PickPolicy::kSeededShuffle};
    SimbaOptions opts;
    opts.keep_trace = true;
    opts.discovery = EdgeDiscovery::kCompare;
    const BatchBuild traced = build_simba_traced(c, params, opts);
    for (std::size_t k = 1; k < traced.level_edges.size(); ++k)
      CHECK(traced.level_edges[k] == brute_simba_edges(c, traced.hierarchy, k));
    for (EdgeDiscovery mode : {EdgeDiscovery::kHybrid, EdgeDiscovery::kRadius, EdgeDiscovery::kMatrix}) {
      opts.discovery = mode;
      CHECK(build_simba_traced(c, params, opts).stream == traced.stream);
    }
    CHECK(validate_stream(traced.stream, {true}).ok);
    CHECK(check_simba_premises(c, traced).empty());
    const BatchBuild batch = build_batch_rips_traced(c, params, true);
    CHECK(validate_stream(batch.stream, {true}).ok);
    CHECK(check_batch_contains_simba(batch, traced).empty());
    for (std::size_t k = 0; k < traced.level_edges.size(); ++k)
      for (const auto& [u, v] : traced.level_edges[k]) CHECK(c.distance(u, v) >= 0);
  }
}

TEST_CASE("simba streams end with one essential H0 class") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const PointCloud c = testgen::random_cloud(rng, 5 + rng() % 40, 2);
    const Barcode b = compute_persistence(build_simba(c, {1.3, 3, 0, PickPolicy::kLowestId}), 2);
    CHECK(b.infinite_count(0) == 1);
    CHECK(b.infinite_count(1) == 0);
    CHECK(b.infinite_count(2) == 0);
  }
}

TEST_CASE("interleaving step") {
  CHECK(interleaving_step(2.0) == 3);
  CHECK(interleaving_step(1.5) == 5);
  for (double c : {1.05, 1.1, 1.5, 2.0, 3.0, 4.0}) {
    const int t = interleaving_step(c);
    CHECK(std::pow(c, t) >= 2 / (c - 1) + 3);
    CHECK(std::pow(c, t - 1) < 2 / (c - 1) + 3);
  }
}

TEST_CASE("premise checker catches a broken trace") {
  const PointCloud c = line({0, 1, 10, 11});
  SimbaOptions opts;
  opts.keep_trace = true;
  BatchBuild b = build_simba_traced(c, {2.0, 3, 0, PickPolicy::kLowestId}, opts);
  CHECK(check_simba_premises(c, b).empty());
  BatchBuild broken = b;
  broken.level_edges[2] = {{0, 2}};  // its image is missing at level 3
  CHECK_FALSE(check_simba_premises(c, broken).empty());
  const PointCloud far = line({0, 1, 100, 101});
  BatchBuild longer = build_simba_traced(far, {2.0, 3, 0, PickPolicy::kLowestId}, opts);
  longer.level_edges[1] = {{0, 2}};  // 100 > alpha c^(1+3) = 16
  CHECK_FALSE(check_simba_premises(far, longer).empty());
}
