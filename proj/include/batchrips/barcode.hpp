#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace batchrips {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Bar {
  int dim = 0;
  double birth = 0.0;
  double death = kInfinity;

  bool infinite() const { return death == kInfinity; }
  friend bool operator==(const Bar&, const Bar&) = default;
  friend bool operator<(const Bar& a, const Bar& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    if (a.birth != b.birth) return a.birth < b.birth;
    return a.death < b.death;
  }
};

// Multiset of bars, kept sorted by (dim, birth, death).
struct Barcode {
  std::vector<Bar> bars;

  void sort();
  std::vector<Bar> in_dim(int dim) const;
  std::size_t count(int dim) const;
  std::size_t infinite_count(int dim) const;
  // Drops bars with death == birth.
  Barcode without_zero_length() const;

  friend bool operator==(const Barcode&, const Barcode&) = default;
};

// Keeps bars with death/birth >= ratio (or infinite death) in `dims`; bars
// born at 0 in those dims are exempt. Other dims pass through.
Barcode denoise(const Barcode& barcode, double ratio, const std::vector<int>& dims = {1});

// "dim birth death" per line, "inf" for infinite deaths, '#' comments.
void write_barcode(std::ostream& out, const Barcode& barcode,
                   const std::vector<std::pair<std::string, std::string>>& comments = {});
Barcode read_barcode(std::istream& in);
Barcode read_barcode_file(const std::string& path);
std::string to_string(const Barcode& barcode);

}  // namespace batchrips
