#include "batchrips/persistence.hpp"

#include <algorithm>
#include <iterator>

#include "batchrips/errors.hpp"
#include "batchrips/format.hpp"

namespace batchrips {

PersistenceEngine::PersistenceEngine(int p_max) : p_max_(p_max), state_(p_max + 1) {
  if (p_max < 0 || p_max + 1 > Simplex::kMaxDim) throw ContractViolation("p_max out of range");
}

void PersistenceEngine::toggle(const Simplex& s, Annotation& a, const Annotation& delta) {
  Annotation result;
  result.reserve(a.size() + delta.size());
  std::set_symmetric_difference(a.begin(), a.end(), delta.begin(), delta.end(), std::back_inserter(result));
  for (GenId g : delta) {
    if (std::binary_search(result.begin(), result.end(), g))
      generators_[g].holders.insert(s);
    else
      generators_[g].holders.erase(s);
  }
  a.swap(result);
}

void PersistenceEngine::insert(const Simplex& s) {
  if (s.dim() > p_max_ + 1) return;
  state_.insert(s);

  Annotation boundary;
  if (s.size() > 1) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      const Annotation& fa = annotation_.at(s.facet(i));
      Annotation next;
      std::set_symmetric_difference(boundary.begin(), boundary.end(), fa.begin(), fa.end(), std::back_inserter(next));
      boundary.swap(next);
    }
  }

  if (boundary.empty()) {
    if (s.dim() <= p_max_) {
      const auto id = static_cast<GenId>(generators_.size());
      generators_.push_back(Generator{s.dim(), scale_, true, {}});
      generators_.back().holders.insert(s);
      annotation_.emplace(s, Annotation{id});
    }
    return;
  }

  // youngest generator dies: ids grow with creation, scales never decrease
  const GenId dying = boundary.back();
  Generator& g = generators_[dying];
  closed_.push_back(Bar{g.dim, g.birth, scale_});
  const std::vector<Simplex> holders(g.holders.begin(), g.holders.end());
  for (const Simplex& t : holders) toggle(t, annotation_.at(t), boundary);
  g.alive = false;
  g.holders.clear();
  if (s.dim() <= p_max_) annotation_.emplace(s, Annotation{});
}

void PersistenceEngine::drop(const Simplex& s) {
  auto it = annotation_.find(s);
  if (it == annotation_.end()) return;
  for (GenId g : it->second) generators_[g].holders.erase(s);
  annotation_.erase(it);
}

void PersistenceEngine::collapse(VertexId u, VertexId v) {
  if (u == v) throw ContractViolation("collapse: u == v");
  if (!state_.is_live(u) || !state_.is_live(v))
    throw ContractViolation("collapse: vertex " + std::to_string(state_.is_live(u) ? v : u) + " is not live");

  // cone the closed star of u onto v
  SimplexSet cone;
  for (const Simplex& s : state_.star(u)) {
    for (const Simplex& face : all_faces(s)) {
      if (face.contains(v) || face.dim() + 1 > p_max_ + 1) continue;
      const Simplex c = face.with(v);
      if (!state_.contains(c)) cone.insert(c);
    }
  }
  std::vector<Simplex> ordered(cone.begin(), cone.end());
  std::sort(ordered.begin(), ordered.end());
  for (const Simplex& c : ordered) insert(c);

  // the vertex map image is now a subcomplex with the same homology
  const CollapseChanges changes = state_.collapse(u, v);
  if (!changes.added.empty()) throw ContractViolation("collapse: cone did not cover the image");
  for (const Simplex& s : changes.removed) drop(s);
}

std::vector<std::size_t> PersistenceEngine::betti() const {
  std::vector<std::size_t> out(static_cast<std::size_t>(p_max_) + 1, 0);
  for (const Generator& g : generators_)
    if (g.alive) ++out[static_cast<std::size_t>(g.dim)];
  return out;
}

Barcode PersistenceEngine::barcode() const {
  Barcode out;
  out.bars = closed_;
  for (const Generator& g : generators_)
    if (g.alive) out.bars.push_back(Bar{g.dim, g.birth, kInfinity});
  out.sort();
  return out;
}

InvalidStream::InvalidStream(StreamValidation v)
    : InputError("invalid stream at record " + std::to_string(v.record) + " [" + v.rule + "]: " + v.message),
      validation_(std::move(v)) {}

Barcode compute_persistence(const OperationStream& stream, int p_max, const PersistenceOptions& options) {
  if (p_max < 0) throw InputError("p_max must be >= 0");
  StreamValidation v = validate_stream(stream);
  if (!v.ok) throw InvalidStream(std::move(v));

  PersistenceEngine engine(p_max);
  bool first = true;
  double first_scale = 0.0;
  for (const Record& rec : stream.records) {
    if (const auto* t = std::get_if<Timestamp>(&rec)) {
      engine.set_scale(t->scale);
      if (first) first_scale = t->scale;
      first = false;
    } else if (const auto* ins = std::get_if<InsertSimplex>(&rec)) {
      engine.insert(ins->simplex);
    } else {
      const auto& c = std::get<CollapseVertex>(rec);
      engine.collapse(c.u, c.v);
    }
  }
  Barcode out = engine.barcode();
  // merged duplicate points are H_0 classes that die the moment they appear
  if (auto dups = stream.get("duplicates")) {
    const long count = std::stol(*dups);
    for (long i = 0; i < count; ++i) out.bars.push_back(Bar{0, first_scale, first_scale});
    out.sort();
  }
  return options.keep_zero_length ? out : out.without_zero_length();
}

}  // namespace batchrips
