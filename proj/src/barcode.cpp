#include "batchrips/barcode.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "batchrips/errors.hpp"
#include "batchrips/format.hpp"

namespace batchrips {

void Barcode::sort() { std::sort(bars.begin(), bars.end()); }

std::vector<Bar> Barcode::in_dim(int dim) const {
  std::vector<Bar> out;
  for (const Bar& b : bars)
    if (b.dim == dim) out.push_back(b);
  return out;
}

std::size_t Barcode::count(int dim) const {
  return static_cast<std::size_t>(std::count_if(bars.begin(), bars.end(), [&](const Bar& b) { return b.dim == dim; }));
}

std::size_t Barcode::infinite_count(int dim) const {
  return static_cast<std::size_t>(
      std::count_if(bars.begin(), bars.end(), [&](const Bar& b) { return b.dim == dim && b.infinite(); }));
}

Barcode Barcode::without_zero_length() const {
  Barcode out;
  for (const Bar& b : bars)
    if (b.death != b.birth) out.bars.push_back(b);
  return out;
}

Barcode denoise(const Barcode& barcode, double ratio, const std::vector<int>& dims) {
  if (!(ratio >= 1.0)) throw InputError("denoise ratio must be >= 1");
  Barcode out;
  for (const Bar& b : barcode.bars) {
    const bool selected = std::find(dims.begin(), dims.end(), b.dim) != dims.end();
    if (!selected || b.infinite() || b.birth <= 0.0 || b.death / b.birth >= ratio) out.bars.push_back(b);
  }
  out.sort();
  return out;
}

void write_barcode(std::ostream& out, const Barcode& barcode,
                   const std::vector<std::pair<std::string, std::string>>& comments) {
  for (const auto& [k, v] : comments) out << "# " << k << ' ' << v << '\n';
  Barcode sorted = barcode;
  sorted.sort();
  for (const Bar& b : sorted.bars) out << b.dim << ' ' << format_real(b.birth) << ' ' << format_real(b.death) << '\n';
}

Barcode read_barcode(std::istream& in) {
  Barcode out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string d, b, e, extra;
    Bar bar;
    if (!(ls >> d >> b >> e) || (ls >> extra))
      throw InputError("line " + std::to_string(line_no) + ": expected 'dim birth death'");
    try {
      std::size_t used = 0;
      bar.dim = std::stoi(d, &used);
      if (used != d.size() || bar.dim < 0) throw InputError("");
    } catch (const std::exception&) {
      throw InputError("line " + std::to_string(line_no) + ": bad dimension '" + d + "'");
    }
    if (!parse_real(b, bar.birth) || !parse_real(e, bar.death) || bar.death < bar.birth)
      throw InputError("line " + std::to_string(line_no) + ": bad interval");
    out.bars.push_back(bar);
  }
  out.sort();
  return out;
}

Barcode read_barcode_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_barcode(in);
}

std::string to_string(const Barcode& barcode) {
  std::ostringstream os;
  write_barcode(os, barcode);
  return os.str();
}

}  // namespace batchrips
