#include "batchrips/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "batchrips/barcode.hpp"
#include "batchrips/errors.hpp"
#include "batchrips/filtrations.hpp"
#include "batchrips/format.hpp"
#include "batchrips/oracle.hpp"
#include "batchrips/persistence.hpp"
#include "batchrips/samples.hpp"
#include "batchrips/svg.hpp"

namespace batchrips {

namespace {

struct BuildFlags {
  std::string algo = "simba";
  double c = 1.1;
  double eps = 0.8;
  int d_max = 3;
  std::uint64_t seed = 0;
  std::string policy = "lowest-id";
  double switch_fraction = 0.1;
  std::vector<double> scales;
};

bool is_std(const std::string& path) { return path.empty() || path == "-"; }

template <class Read>
auto read_input(const std::string& path, Read read) {
  if (is_std(path)) return read(std::cin);
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read(in);
}

void write_output(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& write) {
  if (is_std(path)) {
    write(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw InputError("cannot write " + path);
  write(file);
  if (!file) throw InputError("write failed: " + path);
}

PickPolicy parse_policy(const std::string& name) {
  if (name == "lowest-id") return PickPolicy::kLowestId;
  if (name == "shuffle") return PickPolicy::kSeededShuffle;
  throw InputError("unknown policy '" + name + "'");
}

// {0} + alpha c^k for k >= 0 until the diameter is reached.
std::vector<double> geometric_grid(const PointCloud& cloud, double c) {
  if (!(c > 1.0)) throw InputError("c must be > 1");
  const PointCloud unique = prepare_cloud(cloud).cloud;
  std::vector<double> grid{0.0};
  if (unique.size() < 2) return grid;
  const double alpha = min_pairwise_distance(unique), diam = diameter(unique);
  for (int k = 0;; ++k) {
    grid.push_back(alpha * std::pow(c, k));
    if (grid.back() >= diam) break;
  }
  return grid;
}

void add_build_flags(CLI::App* cmd, BuildFlags& f) {
  cmd->add_option("--algo", f.algo, "rips | sparse | sparse-collapse | batch | simba")
      ->check(CLI::IsMember({"rips", "sparse", "sparse-collapse", "batch", "simba"}))
      ->capture_default_str();
  cmd->add_option("--c", f.c, "net growth factor (batch, simba; rips grid)")->capture_default_str();
  cmd->add_option("--eps", f.eps, "sparse Rips epsilon")->capture_default_str();
  cmd->add_option("--d-max", f.d_max, "simplex dimension cap")->capture_default_str();
  cmd->add_option("--seed", f.seed, "net picking seed")->capture_default_str();
  cmd->add_option("--policy", f.policy, "lowest-id | shuffle")
      ->check(CLI::IsMember({"lowest-id", "shuffle"}))
      ->capture_default_str();
  cmd->add_option("--switch-fraction", f.switch_fraction, "simba: use the distance matrix once |V_k| <= f n")
      ->capture_default_str();
  cmd->add_option("--scales", f.scales, "rips: explicit scale list (default: {0} + alpha c^k)")->delimiter(',');
}

OperationStream build_stream(const PointCloud& cloud, const BuildFlags& f) {
  if (f.algo == "rips") {
    OperationStream s = build_rips(cloud, f.scales.empty() ? geometric_grid(cloud, f.c) : f.scales, f.d_max);
    if (f.scales.empty()) s.set("c", format_real(f.c));
    return s;
  }
  if (f.algo == "sparse" || f.algo == "sparse-collapse")
    return build_sparse_rips(cloud, SparseRipsParams{f.eps, f.d_max},
                             f.algo == "sparse" ? SparseVariant::kInclusion : SparseVariant::kCollapse);
  const BatchParams params{f.c, f.d_max, f.seed, parse_policy(f.policy)};
  if (f.algo == "batch") return build_batch_rips(cloud, params);
  return build_simba(cloud, params, f.switch_fraction);
}

std::string stats_line(const OperationStream& stream) {
  const StreamValidation v = validate_stream(stream);
  if (!v.ok) throw ContractViolation("builder produced an invalid stream [" + v.rule + "]: " + v.message);
  return "cumulative=" + std::to_string(v.sizes.cumulative) + " maximum=" + std::to_string(v.sizes.maximum);
}

void write_persistence(const std::string& path, std::ostream& out, const OperationStream& stream, int p_max) {
  const Barcode barcode = compute_persistence(stream, p_max);
  auto comments = stream.header;
  comments.emplace_back("p_max", std::to_string(p_max));
  write_output(path, out, [&](std::ostream& o) { write_barcode(o, barcode, comments); });
}

void check_dims(int p_max, int d_max) {
  if (p_max < 0) throw InputError("p_max must be >= 0");
  if (p_max > d_max - 1) throw InputError("p_max must be <= d_max - 1");
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparsified Rips filtrations and their persistence barcodes", "batchrips"};
  app.require_subcommand(1);

  std::string input, output;
  BuildFlags flags;
  int p_max = 2;

  auto* build = app.add_subcommand("build", "points -> operation stream; prints size statistics");
  build->add_option("-i,--input", input, "point file ('-' for stdin)")->required();
  build->add_option("-o,--output", output, "stream file (default stdout)");
  add_build_flags(build, flags);

  auto* pers = app.add_subcommand("pers", "operation stream -> barcode");
  double denoise_ratio = 0.0;
  std::vector<int> denoise_dims{1};
  std::string denoised_out;
  pers->add_option("-i,--input", input, "stream file ('-' for stdin)")->required();
  pers->add_option("-o,--output", output, "barcode file (default stdout)");
  pers->add_option("--p-max", p_max, "highest homology dimension")->capture_default_str();
  auto* pers_ratio = pers->add_option("--denoise", denoise_ratio, "death/birth ratio threshold");
  pers->add_option("--denoise-dims", denoise_dims, "dimensions to denoise")->delimiter(',')->capture_default_str();
  pers->add_option("--denoised-out", denoised_out, "where the denoised barcode goes")->needs(pers_ratio);
  pers_ratio->needs("--denoised-out");

  auto* run = app.add_subcommand("run", "points -> barcode; prints size statistics");
  run->add_option("-i,--input", input, "point file ('-' for stdin)")->required();
  run->add_option("-o,--output", output, "barcode file (default stdout)");
  run->add_option("--p-max", p_max, "highest homology dimension")->capture_default_str();
  add_build_flags(run, flags);

  auto* exact = app.add_subcommand("exact", "points -> exact Rips barcode by matrix reduction");
  std::size_t cap = OracleLimits{}.max_simplices;
  exact->add_option("-i,--input", input, "point file ('-' for stdin)")->required();
  exact->add_option("-o,--output", output, "barcode file (default stdout)");
  exact->add_option("--p-max", p_max, "highest homology dimension")->capture_default_str();
  exact->add_option("--d-max", flags.d_max, "simplex dimension cap")->capture_default_str();
  exact->add_option("--c", flags.c, "grid growth factor")->capture_default_str();
  exact->add_option("--scales", flags.scales, "explicit scale list")->delimiter(',');
  exact->add_option("--cap", cap, "refuse above this many simplices")->capture_default_str();

  auto* compare = app.add_subcommand("compare", "bottleneck distance between two barcodes");
  std::string file_a, file_b;
  int dim = 0;
  BottleneckOptions bopts;
  compare->add_option("-a", file_a, "first barcode")->required();
  compare->add_option("-b", file_b, "second barcode")->required();
  compare->add_option("--dim", dim, "homology dimension")->capture_default_str();
  compare->add_flag("--log-scale", bopts.log_scale, "compare ln of endpoints");
  compare->add_option("--clamp", bopts.clamp, "log scale: raise endpoints below this first")->capture_default_str();

  auto* check = app.add_subcommand("check", "SimBa vs exact Rips on the log scale");
  GuaranteeOptions gopts;
  check->add_option("-i,--input", input, "point file ('-' for stdin)")->required();
  check->add_option("--c", flags.c, "net growth factor")->capture_default_str();
  check->add_option("--p-max", p_max, "highest homology dimension")->capture_default_str();
  check->add_option("--seed", flags.seed, "net picking seed")->capture_default_str();
  check->add_option("--policy", flags.policy, "lowest-id | shuffle")
      ->check(CLI::IsMember({"lowest-id", "shuffle"}))
      ->capture_default_str();
  check->add_option("--cap", gopts.limits.max_simplices, "exact Rips size cap")->capture_default_str();

  auto* plot = app.add_subcommand("plot", "barcode -> SVG");
  SvgOptions sopts;
  double plot_ratio = 0.0;
  plot->add_option("-i,--input", input, "barcode file ('-' for stdin)")->required();
  plot->add_option("-o,--output", output, "svg file (default stdout)");
  plot->add_flag("--log-scale", sopts.log_scale, "log-scale axis");
  plot->add_option("--clamp", sopts.clamp, "log scale: lowest drawn value")->capture_default_str();
  auto* plot_denoise = plot->add_option("--denoise", plot_ratio, "drop bars with death/birth below this ratio");
  plot->add_option("--denoise-dims", denoise_dims, "dimensions to denoise")->delimiter(',')->capture_default_str();
  plot->add_option("--width", sopts.width)->capture_default_str();
  plot->add_option("--height", sopts.height, "0 sizes from the bar count")->capture_default_str();

  auto* gen = app.add_subcommand("gen", "synthetic point samples");
  std::string shape;
  std::size_t n = 0;
  double noise = 0.0;
  gen->add_option("--shape", shape, "shape")->required()->check(CLI::IsMember(sample_shapes()));
  gen->add_option("-n", n, "point count")->required();
  gen->add_option("--noise", noise, "gaussian sigma")->capture_default_str();
  gen->add_option("--seed", flags.seed, "rng seed")->capture_default_str();
  gen->add_option("-o,--output", output, "point file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return 1;
  }

  try {
    auto read_cloud = [&] { return read_input(input, [](std::istream& in) { return read_points(in); }); };
    // statistics go to stdout unless the main product already does
    auto stats_to = [&]() -> std::ostream& { return is_std(output) ? err : out; };

    if (build->parsed()) {
      const OperationStream stream = build_stream(read_cloud(), flags);
      const std::string stats = stats_line(stream);
      write_output(output, out, [&](std::ostream& o) { write_stream(o, stream); });
      stats_to() << stats << "\n";
    } else if (pers->parsed()) {
      const OperationStream stream = read_input(input, [](std::istream& in) { return read_stream(in); });
      check_dims(p_max, stream.d_max());
      write_persistence(output, out, stream, p_max);
      if (*pers_ratio) {
        const Barcode raw = compute_persistence(stream, p_max);
        auto comments = stream.header;
        comments.emplace_back("p_max", std::to_string(p_max));
        comments.emplace_back("denoise", format_real(denoise_ratio));
        const Barcode clean = denoise(raw, denoise_ratio, denoise_dims);
        write_output(denoised_out, out, [&](std::ostream& o) { write_barcode(o, clean, comments); });
      }
    } else if (run->parsed()) {
      check_dims(p_max, flags.d_max);
      const OperationStream stream = build_stream(read_cloud(), flags);
      const std::string stats = stats_line(stream);
      write_persistence(output, out, stream, p_max);
      stats_to() << stats << "\n";
    } else if (exact->parsed()) {
      check_dims(p_max, flags.d_max);
      const PointCloud cloud = read_cloud();
      const std::vector<double> scales = flags.scales.empty() ? geometric_grid(cloud, flags.c) : flags.scales;
      const Barcode barcode = exact_rips_barcode(cloud, scales, p_max, flags.d_max, OracleLimits{cap});
      write_output(output, out, [&](std::ostream& o) {
        write_barcode(o, barcode,
                      {{"algorithm", "exact"}, {"d_max", std::to_string(flags.d_max)},
                       {"p_max", std::to_string(p_max)}, {"scales", std::to_string(scales.size())}});
      });
    } else if (compare->parsed()) {
      const Barcode a = read_barcode_file(file_a), b = read_barcode_file(file_b);
      out << format_real(bottleneck_distance(a, b, dim, bopts)) << "\n";
    } else if (check->parsed()) {
      if (p_max < 0) throw InputError("p_max must be >= 0");
      gopts.policy = parse_policy(flags.policy);
      const GuaranteeReport report = check_simba_guarantee(read_cloud(), flags.c, p_max, flags.seed, gopts);
      write_guarantee_report(out, report);
    } else if (plot->parsed()) {
      Barcode barcode = read_input(input, [](std::istream& in) { return read_barcode(in); });
      if (*plot_denoise) barcode = denoise(barcode, plot_ratio, denoise_dims);
      const std::string svg = render_svg(barcode, sopts);
      write_output(output, out, [&](std::ostream& o) { o << svg; });
    } else if (gen->parsed()) {
      const PointCloud cloud = generate_sample(shape, n, noise, flags.seed);
      write_output(output, out, [&](std::ostream& o) { write_points(o, cloud); });
    }
  } catch (const ContractViolation& e) {
    err << "contract violation: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::logic_error& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace batchrips
