#pragma once

#include <cstddef>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "batchrips/simplex.hpp"

namespace batchrips {

using SimplexSet = std::unordered_set<Simplex, SimplexHash>;

// Net effect of a vertex collapse on a complex.
struct CollapseChanges {
  std::vector<Simplex> removed;  // every simplex that contained u
  std::vector<Simplex> added;    // images that were not already present
};

// A simplicial complex closed under faces, with a dimension cap and an
// adjacency view of its 1-skeleton.
class SimplicialState {
 public:
  explicit SimplicialState(int d_max = Simplex::kMaxDim);

  int d_max() const { return d_max_; }
  std::size_t size() const { return simplices_.size(); }
  std::size_t count(int dim) const;
  std::size_t vertex_count() const { return adjacency_.size(); }
  bool is_live(VertexId v) const { return adjacency_.count(v) != 0; }
  bool contains(const Simplex& s) const { return simplices_.count(s) != 0; }
  bool has_edge(VertexId a, VertexId b) const;

  // Inserts a simplex whose facets are all present. Throws ContractViolation
  // on a missing face, a dimension above the cap, or a duplicate.
  void insert(const Simplex& s);
  // Replaces the complex by its image under u -> v (identity elsewhere).
  CollapseChanges collapse(VertexId u, VertexId v);

  // Simplices containing v (its open star), faces before cofaces.
  std::vector<Simplex> star(VertexId v) const;
  const std::vector<VertexId>& neighbors(VertexId v) const;
  std::vector<VertexId> vertices() const;
  std::vector<Simplex> sorted_simplices() const;
  const SimplexSet& simplices() const { return simplices_; }

  // True when the complex equals the flag complex of its edges up to d_max.
  bool is_flag() const;

  // Describes why `s` cannot be inserted, or empty when it can.
  std::string insert_problem(const Simplex& s) const;

 private:
  void erase(const Simplex& s);

  int d_max_;
  SimplexSet simplices_;
  std::unordered_map<VertexId, std::vector<VertexId>> adjacency_;  // sorted neighbour lists
  std::vector<std::size_t> counts_;
};

// All cliques with at most d_max+1 vertices of the graph (vertices, edges).
std::vector<Simplex> flag_closure(const std::vector<std::pair<VertexId, VertexId>>& edges,
                                  const std::vector<VertexId>& vertices, int d_max);

// Simplices missing from `state` that are cliques (<= d_max+1 vertices) of the
// graph state-edges + `edges` and contain at least one edge of `edges`.
// Faces come before cofaces, then lexicographic.
std::vector<Simplex> missing_cliques(const SimplicialState& state,
                                     const std::vector<std::pair<VertexId, VertexId>>& edges, int d_max);

// The new edges plus every new clique through them. Requires live endpoints
// and edges not yet present (ContractViolation otherwise).
std::vector<Simplex> incremental_flag_closure(const SimplicialState& state,
                                              const std::vector<std::pair<VertexId, VertexId>>& new_edges,
                                              int d_max);

}  // namespace batchrips
