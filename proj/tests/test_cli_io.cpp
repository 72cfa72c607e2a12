#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "batchrips/barcode.hpp"
#include "batchrips/cli.hpp"
#include "batchrips/errors.hpp"
#include "batchrips/point_cloud.hpp"
#include "batchrips/samples.hpp"
#include "batchrips/svg.hpp"

using namespace batchrips;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "batchrips");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("batchrips_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::size_t occurrences(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("sample shapes") {
  const PointCloud c = generate_sample("circle", 16, 0, 1);
  REQUIRE(c.size() == 16);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::hypot(c[i][0], c[i][1]) == doctest::Approx(1).epsilon(1e-12));
  CHECK(c[4][0] == doctest::Approx(0).epsilon(1e-12));

  const PointCloud line = generate_sample("line", 5, 0, 1);
  CHECK(line.dim() == 1);
  for (std::size_t i = 0; i < 5; ++i) CHECK(line[i][0] == double(i));

  const PointCloud s = generate_sample("sphere", 100, 0, 3);
  for (std::size_t i = 0; i < s.size(); ++i)
    CHECK(std::abs(std::sqrt(s[i][0] * s[i][0] + s[i][1] * s[i][1] + s[i][2] * s[i][2]) - 1) < 1e-12);

  const PointCloud a = generate_sample("annulus", 200, 0, 4);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double r = std::hypot(a[i][0], a[i][1]);
    CHECK(r >= 1 - 1e-12);
    CHECK(r <= 2 + 1e-12);
  }
  const PointCloud t4 = generate_sample("flat-torus-4d", 20, 0, 5);
  CHECK(t4.dim() == 4);
  const PointCloud t3 = generate_sample("torus", 20, 0, 5);
  CHECK(t3.dim() == 3);

  for (const auto& shape : sample_shapes()) {
    const PointCloud x = generate_sample(shape, 30, 0.1, 9), y = generate_sample(shape, 30, 0.1, 9);
    CHECK(x.coords() == y.coords());
  }
  CHECK_THROWS_AS(generate_sample("klein", 10, 0, 1), InputError);
}

TEST_CASE("svg rendering") {
  const Barcode b{{{0, 0, 1}, {0, 0, kInfinity}, {1, 0.5, 2}}};
  const std::string svg = render_svg(b);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(occurrences(svg, "<line class=\"bar\"") == 3);
  CHECK(occurrences(svg, "marker-end") == 1);
  // the infinite bar runs to the right edge: 800 - 30
  CHECK(svg.find("x2=\"770\" y2") != std::string::npos);
  CHECK(occurrences(svg, "class=\"legend\"") == 3);

  const std::string empty = render_svg(Barcode{});
  CHECK(occurrences(empty, "<line class=\"bar\"") == 0);
  CHECK(empty.find("</svg>") != std::string::npos);

  // log scale: 1, e, e^2 land evenly spaced
  const Barcode l{{{0, 1, std::exp(2.0)}, {0, std::exp(1.0), std::exp(2.0)}}};
  SvgOptions o;
  o.log_scale = true;
  const std::string ls = render_svg(l, o);
  std::regex x1("x1=\"([0-9.]+)\"");
  std::vector<double> xs;
  for (auto it = std::sregex_iterator(ls.begin(), ls.end(), x1); it != std::sregex_iterator(); ++it)
    xs.push_back(std::stod((*it)[1]));
  std::regex x2("<line class=\"bar\"[^>]*x2=\"([0-9.]+)\"");
  std::smatch m;
  REQUIRE(std::regex_search(ls, m, x2));
  const double right = std::stod(m[1]);
  REQUIRE(xs.size() >= 2);
  std::sort(xs.begin(), xs.end());
  const double first = xs[xs.size() - 2], second = xs.back();
  CHECK(second - first == doctest::Approx(right - second).epsilon(0.01));
}

TEST_CASE("cli flags and exit codes") {
  CHECK(cli({}).code == 1);
  CHECK(cli({"frobnicate"}).code == 1);
  CHECK(cli({"build", "--c"}).code == 1);
  CHECK(cli({"pers", "-i", "/nonexistent/stream.txt"}).code == 1);
  CHECK(cli({"gen", "--shape", "nope", "-n", "5"}).code == 1);
  const Run help = cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("build") != std::string::npos);
}

TEST_CASE("cli pipeline") {
  TempDir dir;
  const std::string pts = dir / "pts.txt";
  REQUIRE(cli({"gen", "--shape", "circle", "-n", "40", "--noise", "0.02", "--seed", "3", "-o", pts}).code == 0);
  CHECK(read_points_file(pts).size() == 40);

  const Run build = cli({"build", "-i", pts, "-o", dir / "s.txt", "--algo", "simba", "--c", "1.5", "--d-max", "3"});
  REQUIRE(build.code == 0);
  CHECK(std::regex_search(build.out, std::regex("^cumulative=[0-9]+ maximum=[0-9]+\n$")));

  const Run pers = cli({"pers", "-i", dir / "s.txt", "-o", dir / "b1.txt", "--p-max", "1"});
  REQUIRE(pers.code == 0);
  const Run run = cli({"run", "-i", pts, "-o", dir / "b2.txt", "--algo", "simba", "--c", "1.5", "--d-max", "3",
                       "--p-max", "1"});
  REQUIRE(run.code == 0);
  CHECK(slurp(dir / "b1.txt") == slurp(dir / "b2.txt"));
  const Barcode b = read_barcode_file(dir / "b1.txt");
  CHECK(b.infinite_count(0) == 1);

  // barcode on stdout
  const Run to_stdout = cli({"pers", "-i", dir / "s.txt", "--p-max", "1"});
  CHECK(to_stdout.out == slurp(dir / "b1.txt"));

  const Run cmp = cli({"compare", "-a", dir / "b1.txt", "-b", dir / "b2.txt", "--dim", "1"});
  REQUIRE(cmp.code == 0);
  CHECK(std::stod(cmp.out) == 0.0);

  const Run den = cli({"pers", "-i", dir / "s.txt", "-o", dir / "b3.txt", "--p-max", "1", "--denoise", "2",
                       "--denoised-out", dir / "b4.txt"});
  REQUIRE(den.code == 0);
  CHECK(read_barcode_file(dir / "b4.txt") == denoise(read_barcode_file(dir / "b3.txt"), 2));
  CHECK(cli({"pers", "-i", dir / "s.txt", "--denoise", "2"}).code == 1);

  const Run plot = cli({"plot", "-i", dir / "b1.txt", "-o", dir / "b.svg"});
  REQUIRE(plot.code == 0);
  CHECK(occurrences(slurp(dir / "b.svg"), "<line class=\"bar\"") == b.bars.size());

  // p_max too large for the stream's dimension cap
  CHECK(cli({"pers", "-i", dir / "s.txt", "--p-max", "3"}).code == 1);
}

TEST_CASE("cli check and exact") {
  TempDir dir;
  const std::string pts = dir / "line.txt";
  {
    std::ofstream f(pts);
    f << "0\n1\n10\n11\n";
  }
  const Run check = cli({"check", "-i", pts, "--c", "2", "--p-max", "1"});
  REQUIRE(check.code == 0);
  CHECK(check.out.find("alpha 1\n") != std::string::npos);
  CHECK(check.out.find("verdict pass") != std::string::npos);

  const Run exact = cli({"exact", "-i", pts, "--p-max", "0", "--scales", "0,1,4,9,16"});
  REQUIRE(exact.code == 0);
  std::istringstream in(exact.out);
  CHECK(read_barcode(in).bars == std::vector<Bar>{{0, 0, 1}, {0, 0, 1}, {0, 0, 9}, {0, 0, kInfinity}});

  const Run stream = cli({"build", "-i", pts, "--algo", "simba", "--c", "2"});
  REQUIRE(stream.code == 0);
  CHECK(stream.err.find("cumulative=") != std::string::npos);
  CHECK(stream.out.find("t 2\nc 1 0\nc 3 2\n") != std::string::npos);
}
