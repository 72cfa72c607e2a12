#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "batchrips/barcode.hpp"
#include "batchrips/errors.hpp"
#include "batchrips/operation_stream.hpp"
#include "batchrips/simplicial_state.hpp"

namespace batchrips {

// Z2 persistence for streams of simplex insertions and vertex collapses.
//
// Every simplex of dimension <= p_max carries an annotation: the set of live
// cohomology generators it pairs with. Inserting a simplex either opens a
// generator (its boundary annotation is zero) or closes the youngest
// generator present in that boundary annotation. A collapse u -> v first
// cones the closed star of u onto v (plain insertions), after which removing
// u's star no longer changes homology in dimensions <= p_max.
class PersistenceEngine {
 public:
  explicit PersistenceEngine(int p_max);

  int p_max() const { return p_max_; }
  void set_scale(double scale) { scale_ = scale; }
  double scale() const { return scale_; }

  // Simplices above dimension p_max + 1 cannot affect H_<=p_max and are
  // ignored. Throws ContractViolation if a face is missing.
  void insert(const Simplex& s);
  void collapse(VertexId u, VertexId v);

  // Live generator count per dimension 0..p_max (Betti numbers).
  std::vector<std::size_t> betti() const;
  const SimplicialState& complex() const { return state_; }

  // Bars closed so far (zero-length included).
  const std::vector<Bar>& closed_bars() const { return closed_; }
  // Closed bars plus one infinite bar per live generator.
  Barcode barcode() const;

 private:
  using GenId = std::uint32_t;
  using Annotation = std::vector<GenId>;  // sorted coordinates equal to 1

  struct Generator {
    int dim = 0;
    double birth = 0.0;
    bool alive = true;
    SimplexSet holders;  // simplices whose annotation contains this generator
  };

  void toggle(const Simplex& s, Annotation& a, const Annotation& delta);
  void drop(const Simplex& s);

  int p_max_;
  double scale_ = 0.0;
  SimplicialState state_;
  std::unordered_map<Simplex, Annotation, SimplexHash> annotation_;
  std::vector<Generator> generators_;
  std::vector<Bar> closed_;
};

struct PersistenceOptions {
  bool keep_zero_length = false;
};

// Barcode of H_0..H_p_max of the stream. Validates the stream first and
// throws InvalidStream with the validator's diagnosis when it fails.
Barcode compute_persistence(const OperationStream& stream, int p_max, const PersistenceOptions& options = {});

class InvalidStream : public InputError {
 public:
  explicit InvalidStream(StreamValidation v);
  const StreamValidation& validation() const { return validation_; }

 private:
  StreamValidation validation_;
};

}  // namespace batchrips
