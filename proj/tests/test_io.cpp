#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <random>

#include "csv.hpp"
#include "svg.hpp"

using namespace frachc::io;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / "frachc_io_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("number formatting round-trips binary64") {
  std::mt19937_64 rng(15);
  std::vector<double> values{0.0, -0.0, 1.0 / 3.0, 1e-310, 1.7976931348623157e308, -2.5e-7};
  std::uniform_real_distribution<double> e(-300, 300);
  for (int i = 0; i < 500; ++i) values.push_back(std::pow(10.0, e(rng)) * (i % 2 ? 1 : -1));
  for (double v : values) {
    const auto s = format_number(v);
    const double back = std::strtod(s.c_str(), nullptr);
    CHECK(back == v);
    CHECK(std::signbit(back) == std::signbit(v));
  }
}

TEST_CASE("csv write and read") {
  const auto path = (scratch_dir() / "t.csv").string();
  CsvWriter w({"k", "value"});
  w.add_row({"0", format_number(0.1)});
  w.add_row({"1", ""});
  w.save(path);
  CHECK_FALSE(fs::exists(path + ".tmp"));
  const auto t = read_csv(path);
  CHECK(t.header == std::vector<std::string>{"k", "value"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.column("value") == 1);
  CHECK(t.column("missing") == -1);
  CHECK(t.number(0, 1) == 0.1);
  CHECK_THROWS(t.number(1, 1));
  CHECK_THROWS(w.add_row({"only one"}));
}

TEST_CASE("matrix files round-trip exactly") {
  std::mt19937_64 rng(16);
  std::normal_distribution<double> d;
  std::vector<double> a(6 * 4);
  for (auto& v : a) v = d(rng) * 1e5;
  const auto path = (scratch_dir() / "m.csv").string();
  save_matrix(path, a, 6, 4);
  std::size_t r = 0, c = 0;
  const auto b = load_matrix(path, r, c);
  CHECK(r == 6);
  CHECK(c == 4);
  CHECK(a == b);
}

TEST_CASE("svg rendering") {
  Plot p;
  p.title = "energy <test>";
  p.xlabel = "t";
  p.ylabel = "E";
  p.logy = true;
  p.series.push_back({"a", {0, 1, 2, 3}, {1.0, 0.5, 0.0, 0.25}, false});
  p.series.push_back({"b", {0, 1}, {2.0, 3.0}, true});
  const auto svg = render_svg(p);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("&lt;test&gt;") != std::string::npos);
  CHECK(svg.find("nan") == std::string::npos);
}
