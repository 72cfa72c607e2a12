#include "batchrips/simplicial_state.hpp"

#include <algorithm>
#include <set>

#include "batchrips/errors.hpp"

namespace batchrips {

namespace {

const std::vector<VertexId> kNoNeighbors;

void sorted_insert(std::vector<VertexId>& v, VertexId x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) v.insert(it, x);
}

void sorted_erase(std::vector<VertexId>& v, VertexId x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it != v.end() && *it == x) v.erase(it);
}

using EdgeList = std::vector<std::pair<VertexId, VertexId>>;

// Extends `base` by every clique of `candidates` (pairwise adjacent under
// `adjacent`), emitting each result with at most max_vertices vertices.
template <class Adjacent, class Emit>
void extend_cliques(const Simplex& base, const std::vector<VertexId>& candidates, std::size_t max_vertices,
                    const Adjacent& adjacent, const Emit& emit) {
  if (base.size() >= max_vertices) return;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const VertexId w = candidates[i];
    const Simplex next = base.with(w);
    emit(next);
    if (next.size() >= max_vertices) continue;
    std::vector<VertexId> rest;
    for (std::size_t j = i + 1; j < candidates.size(); ++j)
      if (adjacent(w, candidates[j])) rest.push_back(candidates[j]);
    extend_cliques(next, rest, max_vertices, adjacent, emit);
  }
}

}  // namespace

SimplicialState::SimplicialState(int d_max) : d_max_(d_max) {
  if (d_max < 0 || d_max > Simplex::kMaxDim) throw ContractViolation("dimension cap out of range");
  counts_.assign(static_cast<std::size_t>(Simplex::kMaxDim) + 1, 0);
}

std::size_t SimplicialState::count(int dim) const {
  if (dim < 0 || dim > Simplex::kMaxDim) return 0;
  return counts_[static_cast<std::size_t>(dim)];
}

bool SimplicialState::has_edge(VertexId a, VertexId b) const {
  auto it = adjacency_.find(a);
  if (it == adjacency_.end()) return false;
  return std::binary_search(it->second.begin(), it->second.end(), b);
}

const std::vector<VertexId>& SimplicialState::neighbors(VertexId v) const {
  auto it = adjacency_.find(v);
  return it == adjacency_.end() ? kNoNeighbors : it->second;
}

std::vector<VertexId> SimplicialState::vertices() const {
  std::vector<VertexId> out;
  out.reserve(adjacency_.size());
  for (const auto& [v, _] : adjacency_) out.push_back(v);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Simplex> SimplicialState::sorted_simplices() const {
  std::vector<Simplex> out(simplices_.begin(), simplices_.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::string SimplicialState::insert_problem(const Simplex& s) const {
  if (s.empty()) return "empty simplex";
  if (s.dim() > d_max_) return "dimension " + std::to_string(s.dim()) + " above cap " + std::to_string(d_max_);
  if (contains(s)) return "duplicate simplex " + s.to_string();
  if (s.size() > 1) {
    for (std::size_t i = 0; i < s.size(); ++i)
      if (!contains(s.facet(i))) return "missing face " + s.facet(i).to_string() + " of " + s.to_string();
  }
  return {};
}

void SimplicialState::insert(const Simplex& s) {
  if (auto problem = insert_problem(s); !problem.empty()) throw ContractViolation("insert: " + problem);
  simplices_.insert(s);
  ++counts_[static_cast<std::size_t>(s.dim())];
  if (s.size() == 1) {
    adjacency_.emplace(s[0], std::vector<VertexId>{});
  } else if (s.size() == 2) {
    sorted_insert(adjacency_[s[0]], s[1]);
    sorted_insert(adjacency_[s[1]], s[0]);
  }
}

void SimplicialState::erase(const Simplex& s) {
  if (simplices_.erase(s) == 0) return;
  --counts_[static_cast<std::size_t>(s.dim())];
  if (s.size() == 1) {
    adjacency_.erase(s[0]);
  } else if (s.size() == 2) {
    sorted_erase(adjacency_[s[0]], s[1]);
    sorted_erase(adjacency_[s[1]], s[0]);
  }
}

std::vector<Simplex> SimplicialState::star(VertexId v) const {
  std::vector<Simplex> out;
  if (!is_live(v)) return out;
  const Simplex base = Simplex::vertex(v);
  out.push_back(base);
  // every simplex through v is v plus an increasing run of its neighbours
  auto grow = [&](auto&& self, const Simplex& s, std::size_t from) -> void {
    const auto& nbrs = neighbors(v);
    for (std::size_t i = from; i < nbrs.size(); ++i) {
      if (static_cast<int>(s.size()) > d_max_) return;
      const Simplex next = s.with(nbrs[i]);
      if (!contains(next)) continue;
      out.push_back(next);
      self(self, next, i + 1);
    }
  };
  grow(grow, base, 0);
  std::sort(out.begin(), out.end());
  return out;
}

CollapseChanges SimplicialState::collapse(VertexId u, VertexId v) {
  if (u == v) throw ContractViolation("collapse: u == v");
  if (!is_live(u) || !is_live(v))
    throw ContractViolation("collapse: vertex " + std::to_string(is_live(u) ? v : u) + " is not live");
  CollapseChanges changes;
  changes.removed = star(u);
  for (const Simplex& s : changes.removed) {  // faces first, so images land in order
    if (s.contains(v)) continue;  // degenerate: image is a face of s, already present
    const Simplex image = s.without(u).with(v);
    if (!contains(image)) {
      simplices_.insert(image);
      ++counts_[static_cast<std::size_t>(image.dim())];
      if (image.size() == 2) {
        sorted_insert(adjacency_[image[0]], image[1]);
        sorted_insert(adjacency_[image[1]], image[0]);
      }
      changes.added.push_back(image);
    }
  }
  for (auto it = changes.removed.rbegin(); it != changes.removed.rend(); ++it) erase(*it);
  return changes;
}

bool SimplicialState::is_flag() const {
  EdgeList edges;
  for (const auto& [a, nbrs] : adjacency_)
    for (VertexId b : nbrs)
      if (a < b) edges.emplace_back(a, b);
  const auto closure = flag_closure(edges, vertices(), d_max_);
  if (closure.size() != simplices_.size()) return false;
  return std::all_of(closure.begin(), closure.end(), [&](const Simplex& s) { return contains(s); });
}

std::vector<Simplex> flag_closure(const EdgeList& edges, const std::vector<VertexId>& vertices, int d_max) {
  std::unordered_map<VertexId, std::vector<VertexId>> adj;
  for (VertexId v : vertices) adj[v];
  for (auto [a, b] : edges) {
    if (!adj.count(a) || !adj.count(b)) throw ContractViolation("flag_closure: edge endpoint is not a vertex");
    if (a == b) throw ContractViolation("flag_closure: loop edge");
    sorted_insert(adj[a], b);
    sorted_insert(adj[b], a);
  }
  auto adjacent = [&](VertexId a, VertexId b) { return std::binary_search(adj[a].begin(), adj[a].end(), b); };
  std::vector<Simplex> out;
  const std::size_t max_vertices = static_cast<std::size_t>(d_max) + 1;
  for (auto& [v, nbrs] : adj) {
    out.push_back(Simplex::vertex(v));
    std::vector<VertexId> higher;
    for (VertexId w : nbrs)
      if (w > v) higher.push_back(w);
    extend_cliques(Simplex::vertex(v), higher, max_vertices, adjacent, [&](const Simplex& s) { out.push_back(s); });
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Simplex> missing_cliques(const SimplicialState& state, const EdgeList& edges, int d_max) {
  std::unordered_map<VertexId, std::vector<VertexId>> extra;
  for (auto [a, b] : edges) {
    sorted_insert(extra[a], b);
    sorted_insert(extra[b], a);
  }
  auto adjacent = [&](VertexId a, VertexId b) {
    if (state.has_edge(a, b)) return true;
    auto it = extra.find(a);
    return it != extra.end() && std::binary_search(it->second.begin(), it->second.end(), b);
  };
  auto all_neighbors = [&](VertexId a) {
    std::vector<VertexId> out = state.neighbors(a);
    if (auto it = extra.find(a); it != extra.end()) {
      std::vector<VertexId> merged;
      std::set_union(out.begin(), out.end(), it->second.begin(), it->second.end(), std::back_inserter(merged));
      out.swap(merged);
    }
    return out;
  };

  SimplexSet found;
  const std::size_t max_vertices = static_cast<std::size_t>(d_max) + 1;
  for (auto [a, b] : edges) {
    if (max_vertices < 2) break;
    const Simplex edge{a, b};
    if (!state.contains(edge)) found.insert(edge);
    const auto na = all_neighbors(a), nb = all_neighbors(b);
    std::vector<VertexId> common;
    std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(), std::back_inserter(common));
    extend_cliques(edge, common, max_vertices, adjacent, [&](const Simplex& s) {
      if (!state.contains(s)) found.insert(s);
    });
  }
  std::vector<Simplex> out(found.begin(), found.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Simplex> incremental_flag_closure(const SimplicialState& state, const EdgeList& new_edges, int d_max) {
  for (auto [a, b] : new_edges) {
    if (a == b) throw ContractViolation("incremental_flag_closure: loop edge");
    if (!state.is_live(a) || !state.is_live(b))
      throw ContractViolation("incremental_flag_closure: endpoint is not live");
    if (state.has_edge(a, b)) throw ContractViolation("incremental_flag_closure: edge already present");
  }
  return missing_cliques(state, new_edges, d_max);
}

}  // namespace batchrips
