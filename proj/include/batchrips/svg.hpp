#pragma once

#include <string>
#include <vector>

#include "batchrips/barcode.hpp"

namespace batchrips {

struct SvgOptions {
  bool log_scale = false;
  double clamp = 1.0;  // log scale: endpoints below clamp are drawn at ln(clamp)
  int width = 800;
  int height = 0;  // 0: sized from the bar count
  std::vector<std::string> colors{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
};

// Standalone SVG 1.1 barcode: one <line class="bar"> per interval, grouped by
// dimension, infinite bars running to the right edge with an arrowhead.
std::string render_svg(const Barcode& barcode, const SvgOptions& options = {});

}  // namespace batchrips
