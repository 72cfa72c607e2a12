#pragma once

// Random streams and clouds shared by the unit tests and the acceptance run.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "batchrips/operation_stream.hpp"
#include "batchrips/point_cloud.hpp"
#include "batchrips/simplicial_state.hpp"

namespace testgen {

using namespace batchrips;
using Edge = std::pair<VertexId, VertexId>;

// "0 1 2", as in the stream format.
inline std::string vertex_list(const Simplex& s) {
  std::string out;
  for (VertexId v : s) out += (out.empty() ? "" : " ") + std::to_string(v);
  return out;
}

inline PointCloud random_cloud(std::mt19937_64& rng, std::size_t n, std::size_t dim, double scale = 1.0) {
  std::uniform_real_distribution<double> u(0.0, scale);
  std::vector<std::vector<double>> rows(n, std::vector<double>(dim));
  for (auto& r : rows)
    for (double& x : r) x = u(rng);
  return PointCloud::from_rows(rows);
}

// Inclusion-only flag stream: vertices born at small integer times, edges at
// later integer times (plenty of ties), cliques added with their last edge.
inline OperationStream random_flag_stream(std::mt19937_64& rng, int max_vertices = 8, int max_d = 3) {
  std::uniform_int_distribution<int> nv(1, max_vertices), dd(1, max_d), vb(0, 2), ew(0, 4);
  std::bernoulli_distribution keep(0.6);
  const int n = nv(rng), d_max = dd(rng);
  std::vector<int> vbirth(n);
  for (int& b : vbirth) b = vb(rng);
  std::vector<std::pair<int, Edge>> edges;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (keep(rng)) edges.push_back({std::max(vbirth[a], vbirth[b]) + ew(rng), {VertexId(a), VertexId(b)}});

  OperationStream s;
  s.set("d_max", std::to_string(d_max));
  SimplicialState state(d_max);
  int last = 0;
  for (const auto& e : edges) last = std::max(last, e.first);
  for (int t = 0; t <= last; ++t) {
    s.timestamp(t);
    for (int v = 0; v < n; ++v) {
      if (vbirth[v] != t) continue;
      state.insert(Simplex::vertex(VertexId(v)));
      s.insert(Simplex::vertex(VertexId(v)));
    }
    std::vector<Edge> fresh;
    for (const auto& e : edges)
      if (e.first == t) fresh.push_back(e.second);
    for (const Simplex& x : incremental_flag_closure(state, fresh, d_max)) {
      state.insert(x);
      s.insert(x);
    }
  }
  return s;
}

// Insertions (vertices, edges, higher simplices whose faces exist) mixed with
// collapses of random live pairs. Not necessarily flag.
inline OperationStream random_map_stream(std::mt19937_64& rng, int max_vertices = 8, int batches = 6) {
  const int d_max = 3;
  OperationStream s;
  s.set("d_max", std::to_string(d_max));
  SimplicialState state(d_max);
  VertexId next_id = 0;
  std::uniform_int_distribution<int> ops(1, 6), kind(0, 9);
  for (int b = 0; b < batches; ++b) {
    s.timestamp(b);
    const int count = ops(rng);
    for (int k = 0; k < count; ++k) {
      std::vector<VertexId> live = state.vertices();
      const int what = kind(rng);
      if (live.empty() || (what < 2 && next_id < VertexId(max_vertices))) {
        if (next_id >= VertexId(max_vertices)) continue;
        const Simplex v = Simplex::vertex(next_id++);
        state.insert(v);
        s.insert(v);
      } else if (what < 4 && live.size() >= 2) {
        std::shuffle(live.begin(), live.end(), rng);
        state.collapse(live[0], live[1]);
        s.collapse(live[0], live[1]);
      } else if (live.size() >= 2) {
        // random simplex of size 2..4 on live vertices, inserted with any missing faces
        std::shuffle(live.begin(), live.end(), rng);
        const std::size_t size = std::min<std::size_t>(live.size(), 2 + std::uniform_int_distribution<int>(0, 2)(rng));
        const Simplex top(std::span<const VertexId>(live.data(), size));
        for (const Simplex& f : all_faces(top)) {
          if (state.contains(f)) continue;
          state.insert(f);
          s.insert(f);
        }
      }
    }
  }
  return s;
}

}  // namespace testgen
