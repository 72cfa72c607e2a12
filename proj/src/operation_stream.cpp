#include "batchrips/operation_stream.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "batchrips/errors.hpp"
#include "batchrips/format.hpp"
#include "batchrips/simplicial_state.hpp"

namespace batchrips {

void OperationStream::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : header) {
    if (k == key) {
      v = value;
      return;
    }
  }
  header.emplace_back(key, value);
}

std::optional<std::string> OperationStream::get(const std::string& key) const {
  for (const auto& [k, v] : header)
    if (k == key) return v;
  return std::nullopt;
}

int OperationStream::d_max() const {
  if (auto v = get("d_max")) {
    try {
      const int d = std::stoi(*v);
      if (d >= 0 && d <= Simplex::kMaxDim) return d;
    } catch (const std::exception&) {
    }
    throw InputError("bad d_max header value '" + *v + "'");
  }
  return Simplex::kMaxDim;
}

std::size_t OperationStream::timestamp_count() const {
  std::size_t n = 0;
  for (const auto& r : records) n += std::holds_alternative<Timestamp>(r);
  return n;
}

bool OperationStream::has_collapses() const {
  for (const auto& r : records)
    if (std::holds_alternative<CollapseVertex>(r)) return true;
  return false;
}

StreamValidation validate_stream(const OperationStream& stream, const ValidationOptions& options) {
  StreamValidation report;
  int d_max = Simplex::kMaxDim;
  try {
    d_max = stream.d_max();
  } catch (const InputError& e) {
    report.ok = false;
    report.rule = "header";
    report.message = e.what();
    return report;
  }

  SimplicialState state(d_max);
  std::unordered_set<VertexId> dead;
  bool seen_timestamp = false;
  double last_scale = 0.0;

  auto fail = [&](std::size_t index, std::string rule, std::string message) {
    report.ok = false;
    report.record = index;
    report.rule = std::move(rule);
    report.message = std::move(message);
  };
  auto flag_ok = [&] { return !options.require_flag || state.is_flag(); };

  for (std::size_t i = 0; i < stream.records.size() && report.ok; ++i) {
    const Record& rec = stream.records[i];
    if (const auto* t = std::get_if<Timestamp>(&rec)) {
      if (!std::isfinite(t->scale)) {
        fail(i, "timestamp", "non-finite timestamp");
      } else if (seen_timestamp && !(t->scale > last_scale)) {
        fail(i, "timestamp", "timestamps must strictly increase (" + format_real(last_scale) + " then " +
                                 format_real(t->scale) + ")");
      } else if (!flag_ok()) {
        fail(i, "flag", "complex before this timestamp is not a flag complex");
      }
      seen_timestamp = true;
      last_scale = t->scale;
      ++report.timestamps;
    } else if (const auto* ins = std::get_if<InsertSimplex>(&rec)) {
      const Simplex& s = ins->simplex;
      std::string problem = state.insert_problem(s);
      if (!problem.empty()) {
        fail(i, problem.rfind("missing face", 0) == 0 ? "missing-face" : "insert", problem);
      } else if (s.size() == 1 && dead.count(s[0])) {
        fail(i, "dead-vertex", "vertex " + std::to_string(s[0]) + " was collapsed earlier");
      } else if (!seen_timestamp) {
        fail(i, "no-timestamp", "record before the first timestamp");
      } else {
        state.insert(s);
        ++report.sizes.cumulative;
      }
    } else {
      const auto& c = std::get<CollapseVertex>(rec);
      if (c.u == c.v) {
        fail(i, "collapse", "collapse onto itself");
      } else if (!state.is_live(c.u) || !state.is_live(c.v)) {
        fail(i, "collapse", "collapse of dead vertex " + std::to_string(state.is_live(c.u) ? c.v : c.u));
      } else if (!seen_timestamp) {
        fail(i, "no-timestamp", "record before the first timestamp");
      } else {
        state.collapse(c.u, c.v);
        dead.insert(c.u);
      }
    }
    report.sizes.maximum = std::max(report.sizes.maximum, state.size());
  }
  if (report.ok && !flag_ok()) fail(stream.records.size(), "flag", "final complex is not a flag complex");
  report.final_size = state.size();
  return report;
}

void write_stream(std::ostream& out, const OperationStream& stream) {
  for (const auto& [k, v] : stream.header) out << "% " << k << ' ' << v << '\n';
  for (const auto& rec : stream.records) {
    if (const auto* t = std::get_if<Timestamp>(&rec)) {
      out << "t " << format_real(t->scale) << '\n';
    } else if (const auto* ins = std::get_if<InsertSimplex>(&rec)) {
      out << 'i';
      for (VertexId v : ins->simplex) out << ' ' << v;
      out << '\n';
    } else {
      const auto& c = std::get<CollapseVertex>(rec);
      out << "c " << c.u << ' ' << c.v << '\n';
    }
  }
}

namespace {

VertexId parse_vertex(const std::string& tok, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(tok, &used);
    if (used == tok.size() && tok[0] != '-' && v <= 0xffffffffULL) return static_cast<VertexId>(v);
  } catch (const std::exception&) {
  }
  throw InputError("line " + std::to_string(line_no) + ": bad vertex id '" + tok + "'");
}

}  // namespace

OperationStream read_stream(std::istream& in) {
  OperationStream stream;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto where = [&] { return "line " + std::to_string(line_no) + ": "; };
    if (line[first] == '%') {
      std::istringstream ls(line.substr(first + 1));
      std::string key;
      if (!(ls >> key)) throw InputError(where() + "header without key");
      std::string value;
      std::getline(ls >> std::ws, value);
      stream.header.emplace_back(key, value);
      continue;
    }
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    std::vector<std::string> toks;
    for (std::string tok; ls >> tok;) toks.push_back(tok);
    if (kind == "t") {
      double scale = 0.0;
      if (toks.size() != 1 || !parse_real(toks[0], scale)) throw InputError(where() + "expected 't <scale>'");
      stream.timestamp(scale);
    } else if (kind == "i") {
      if (toks.empty() || toks.size() > Simplex::kMaxVertices) throw InputError(where() + "bad simplex size");
      std::vector<VertexId> vs;
      for (const auto& tok : toks) vs.push_back(parse_vertex(tok, line_no));
      for (std::size_t k = 1; k < vs.size(); ++k)
        if (!(vs[k - 1] < vs[k])) throw InputError(where() + "simplex vertices must be strictly ascending");
      stream.insert(Simplex(vs));
    } else if (kind == "c") {
      if (toks.size() != 2) throw InputError(where() + "expected 'c <u> <v>'");
      stream.collapse(parse_vertex(toks[0], line_no), parse_vertex(toks[1], line_no));
    } else {
      throw InputError(where() + "unknown record '" + kind + "'");
    }
  }
  return stream;
}

OperationStream read_stream_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_stream(in);
}

void write_stream_file(const std::string& path, const OperationStream& stream) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  write_stream(out, stream);
}

}  // namespace batchrips
