#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "batchrips/barcode.hpp"
#include "batchrips/nets.hpp"
#include "batchrips/operation_stream.hpp"
#include "batchrips/point_cloud.hpp"
#include "batchrips/simplex.hpp"

namespace batchrips {

// Brute-force ground truth. Everything here is deliberately simple and
// independent of the engine and the builders.

struct OracleLimits {
  std::size_t max_simplices = 200000;
};

// Standard column reduction with clearing. `filtration` must list faces
// before cofaces; values must be non-decreasing along the list. Returns bars
// of dimension <= p_max, zero-length ones included.
Barcode reduce_filtration(const std::vector<std::pair<Simplex, double>>& filtration, int p_max);

// Flag filtration of the cloud sampled at `scales` (ascending): a simplex
// enters at the first scale >= its diameter. Zero-length bars dropped.
// Throws OracleScaleError when the clique count passes the cap.
Barcode exact_rips_barcode(const PointCloud& cloud, const std::vector<double>& scales, int p_max, int d_max,
                           const OracleLimits& limits = {});

// Reduction of an insertion-only stream in record order. Zero-length bars
// dropped. Throws ContractViolation on a collapse record.
Barcode reduce_inclusion_stream(const OperationStream& stream, int p_max);

// Ranks of the induced maps H_p(K_i) -> H_p(K_j) between the complexes at
// each Timestamp (index 0 = first Timestamp), computed from chain-level
// images of cycle bases.
class RankOracle {
 public:
  RankOracle(const OperationStream& stream, int p_max, const OracleLimits& limits = {});

  std::size_t complex_count() const { return snapshots_.size(); }
  double scale(std::size_t i) const { return snapshots_.at(i).scale; }
  int rank(std::size_t i, std::size_t j, int p) const;
  // Interval decomposition by inclusion-exclusion on ranks.
  Barcode barcode() const;

 private:
  struct Snapshot {
    double scale = 0.0;
    std::vector<Simplex> simplices;                    // sorted, dim <= p_max + 1
    std::vector<std::pair<VertexId, VertexId>> next;  // vertex map to the next snapshot, by vertex
  };
  int p_max_;
  std::vector<Snapshot> snapshots_;
};

int homology_map_rank(const OperationStream& stream, std::size_t i, std::size_t j, int p);
Barcode module_rank_barcode(const OperationStream& stream, int p_max, const OracleLimits& limits = {});

struct BottleneckOptions {
  bool log_scale = false;
  double clamp = 1.0;  // log scale only: endpoints below clamp are raised to it before ln
};

// Exact L-infinity bottleneck distance between the dimension-`dim` bars.
// Essential bars match only essential bars; unequal counts give +inf.
double bottleneck_distance(const Barcode& a, const Barcode& b, int dim, const BottleneckOptions& options = {});

struct InterleavingParams {
  double c = 0.0;
  int t = 0;
  double bound = 0.0;  // 3 t ln c
};
InterleavingParams interleaving_params(double c);

struct GuaranteeOptions {
  PickPolicy policy = PickPolicy::kLowestId;
  OracleLimits limits;
};

struct DimVerdict {
  int dim = 0;
  double distance = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct GuaranteeReport {
  double alpha = 0.0;
  InterleavingParams params;
  std::vector<double> scales;  // grid the exact barcode was sampled on
  Barcode simba;
  Barcode exact;
  std::vector<DimVerdict> dims;
  bool pass() const;
};

// SimBa barcode vs exact Rips on {0} + {alpha c^k}, per dimension, on the
// log scale with clamp alpha. The grid runs at least to the hierarchy's last
// level and to the diameter.
GuaranteeReport check_simba_guarantee(const PointCloud& cloud, double c, int p_max, std::uint64_t seed,
                                      const GuaranteeOptions& options = {});
void write_guarantee_report(std::ostream& out, const GuaranteeReport& report);

// Exact Rips size on the longest prefix of `scales` whose clique count fits
// under the cap. For an inclusion filtration cumulative == maximum.
struct RipsSize {
  std::size_t simplices = 0;
  std::size_t scales_covered = 0;
};
RipsSize rips_size(const PointCloud& cloud, const std::vector<double>& scales, int d_max,
                   std::size_t cap = 20000000);

}  // namespace batchrips
