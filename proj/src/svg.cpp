#include "batchrips/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "batchrips/errors.hpp"

namespace batchrips {

namespace {

constexpr double kLeft = 60, kRight = 30, kTop = 40, kRow = 6, kAxis = 40;

std::string num(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

}  // namespace

std::string render_svg(const Barcode& input, const SvgOptions& options) {
  if (options.log_scale && !(options.clamp > 0.0)) throw InputError("log-scale clamp must be > 0");
  if (options.width < 200) throw InputError("svg width must be >= 200");
  if (options.colors.empty()) throw InputError("no colors");
  Barcode barcode = input;
  barcode.sort();

  auto tx = [&](double v) { return options.log_scale ? std::log(std::max(v, options.clamp)) : v; };
  double lo = kInfinity, hi = -kInfinity;
  for (const Bar& b : barcode.bars) {
    lo = std::min(lo, tx(b.birth));
    hi = std::max(hi, tx(b.birth));
    if (!b.infinite()) hi = std::max(hi, tx(b.death));
  }
  if (barcode.bars.empty()) lo = 0.0, hi = 1.0;
  if (!(hi > lo)) hi = lo + 1.0;

  int max_dim = 2;
  for (const Bar& b : barcode.bars) max_dim = std::max(max_dim, b.dim);
  const double plot_w = options.width - kLeft - kRight;
  const double span_end = kLeft + plot_w * 0.95;  // finite values map into [kLeft, span_end]
  const double right_edge = kLeft + plot_w;
  auto x_of = [&](double v) { return kLeft + (tx(v) - lo) / (hi - lo) * (span_end - kLeft); };

  const double rows_h = kRow * static_cast<double>(barcode.bars.size()) + 4.0 * (max_dim + 1);
  const int height = options.height > 0 ? options.height : static_cast<int>(kTop + rows_h + kAxis + 20);
  const double row = barcode.bars.empty()
                         ? kRow
                         : std::min(kRow * 2, (height - kTop - kAxis) / (static_cast<double>(barcode.bars.size()) + 1));

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << options.width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << options.width << " " << height << "\">\n"
      << "<defs><marker id=\"arrow\" markerWidth=\"8\" markerHeight=\"8\" refX=\"6\" refY=\"4\" orient=\"auto\">"
      << "<path d=\"M0,0 L8,4 L0,8 z\" fill=\"#333\"/></marker></defs>\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  auto color = [&](int dim) { return options.colors[static_cast<std::size_t>(dim) % options.colors.size()]; };

  // legend
  for (int d = 0; d <= max_dim; ++d) {
    const double x = kLeft + 70.0 * d;
    svg << "<g class=\"legend\"><rect x=\"" << x << "\" y=\"12\" width=\"12\" height=\"12\" fill=\"" << color(d)
        << "\"/><text x=\"" << x + 16 << "\" y=\"22\" font-size=\"12\" font-family=\"sans-serif\">H" << d
        << "</text></g>\n";
  }

  double y = kTop;
  int prev_dim = -1;
  for (const Bar& b : barcode.bars) {
    if (prev_dim >= 0 && b.dim != prev_dim) y += row;
    prev_dim = b.dim;
    const double x1 = x_of(b.birth);
    const double x2 = b.infinite() ? right_edge : x_of(b.death);
    svg << "<line class=\"bar\" data-dim=\"" << b.dim << "\" x1=\"" << num(x1) << "\" y1=\"" << num(y) << "\" x2=\""
        << num(x2) << "\" y2=\"" << num(y) << "\" stroke=\"" << color(b.dim) << "\" stroke-width=\""
        << num(std::max(1.0, row * 0.6)) << "\"" << (b.infinite() ? " marker-end=\"url(#arrow)\"" : "") << "/>\n";
    y += row;
  }

  const double axis_y = height - kAxis + 10;
  svg << "<line class=\"axis\" x1=\"" << kLeft << "\" y1=\"" << axis_y << "\" x2=\"" << right_edge << "\" y2=\""
      << axis_y << "\" stroke=\"#333\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = lo + (hi - lo) * i / 4.0;
    const double x = kLeft + (span_end - kLeft) * i / 4.0;
    svg << "<text x=\"" << num(x) << "\" y=\"" << axis_y + 16 << "\" font-size=\"11\" font-family=\"sans-serif\" "
        << "text-anchor=\"middle\">" << num(options.log_scale ? std::exp(v) : v) << "</text>\n";
  }
  if (options.log_scale)
    svg << "<text x=\"" << right_edge << "\" y=\"" << axis_y + 30
        << "\" font-size=\"11\" font-family=\"sans-serif\" text-anchor=\"end\">log scale</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace batchrips
