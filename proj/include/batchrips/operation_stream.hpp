#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "batchrips/simplex.hpp"

namespace batchrips {

struct Timestamp {
  double scale = 0.0;
  friend bool operator==(const Timestamp&, const Timestamp&) = default;
};

struct InsertSimplex {
  Simplex simplex;
  friend bool operator==(const InsertSimplex&, const InsertSimplex&) = default;
};

// u is mapped onto v; u's star is carried along and u disappears.
struct CollapseVertex {
  VertexId u = 0;
  VertexId v = 0;
  friend bool operator==(const CollapseVertex&, const CollapseVertex&) = default;
};

using Record = std::variant<Timestamp, InsertSimplex, CollapseVertex>;

// A simplicial-map filtration as a flat list of elementary operations.
// Records following a Timestamp happen at that scale; the complex indexed by
// a Timestamp is the state reached just before the next one.
struct OperationStream {
  std::vector<std::pair<std::string, std::string>> header;
  std::vector<Record> records;

  void set(const std::string& key, const std::string& value);
  std::optional<std::string> get(const std::string& key) const;

  void timestamp(double scale) { records.emplace_back(Timestamp{scale}); }
  void insert(const Simplex& s) { records.emplace_back(InsertSimplex{s}); }
  void collapse(VertexId u, VertexId v) { records.emplace_back(CollapseVertex{u, v}); }

  // Dimension cap from the "d_max" header entry, or Simplex::kMaxDim.
  int d_max() const;
  std::size_t timestamp_count() const;
  bool has_collapses() const;

  friend bool operator==(const OperationStream&, const OperationStream&) = default;
};

struct SizeStats {
  std::size_t cumulative = 0;  // InsertSimplex records
  std::size_t maximum = 0;     // peak live simplex count
};

struct StreamValidation {
  bool ok = true;
  std::size_t record = 0;  // index of the first offending record
  std::string rule;        // short rule name
  std::string message;
  SizeStats sizes;
  std::size_t final_size = 0;
  std::size_t timestamps = 0;
};

struct ValidationOptions {
  bool require_flag = false;  // also check the flag property at every Timestamp and at the end
};

// Replays the stream and reports the first broken rule. Never throws on bad
// streams.
StreamValidation validate_stream(const OperationStream& stream, const ValidationOptions& options = {});

// Exact text format: "% key value" header lines, then "t <scale>",
// "i <v0> ... <vk>" (ascending), "c <u> <v>". Blank lines and '#' comments
// are skipped.
void write_stream(std::ostream& out, const OperationStream& stream);
OperationStream read_stream(std::istream& in);
OperationStream read_stream_file(const std::string& path);
void write_stream_file(const std::string& path, const OperationStream& stream);

}  // namespace batchrips
