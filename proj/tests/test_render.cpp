// SPDX-License-Identifier: Apache-2.0

#include "mandel/render.hpp"

#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>

using namespace mandel;
using namespace mandel::render;

namespace {

Rational q(const char* s) { return Rational::parse(s); }

Viewport view(unsigned n) {
  Viewport v;
  v.n = n;
  return v;
}

GridParams params(std::uint64_t budget, Mode mode = Mode::point, unsigned workers = 1) {
  GridParams p;
  p.decide.budget = budget;
  p.mode = mode;
  p.workers = workers;
  return p;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST_CASE("lattice endpoints") {
  auto pts = grid_points(view(2));
  REQUIRE(pts.size() == 4);
  CHECK(pts[0] == ComplexRational{Rational(-2), Rational(2)});
  CHECK(pts[1] == ComplexRational{Rational(2), Rational(2)});
  CHECK(pts[2] == ComplexRational{Rational(-2), Rational(-2)});
  CHECK(pts[3] == ComplexRational{Rational(2), Rational(-2)});
  CHECK(grid_point(view(3), 1, 1) == ComplexRational{Rational(0), Rational(0)});
  CHECK(grid_point(view(1000), 0, 0) == ComplexRational{Rational(-2), Rational(2)});
  CHECK(grid_point(view(1000), 999, 999) == ComplexRational{Rational(2), Rational(-2)});
  CHECK(grid_point(view(1), 0, 0) == ComplexRational{Rational(0), Rational(0)});
}

TEST_CASE("viewport validation") {
  Viewport bad;
  bad.re_min = Rational(1);
  bad.re_max = Rational(1);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(view(0).validate(), std::invalid_argument);
  CHECK_NOTHROW(view(1).validate());
}

TEST_CASE("pixel boxes tile the lattice") {
  Viewport v = view(5);
  ComplexBox b = pixel_box(v, 2, 2, 64);
  CHECK(b.contains(ComplexRational{Rational(0), Rational(0)}));
  CHECK(b.re.lo == Dyadic::parse("-1*2^-1"));
  CHECK(b.re.hi == Dyadic::parse("1*2^-1"));
  ComplexBox right = pixel_box(v, 2, 3, 64);
  CHECK(right.re.lo == b.re.hi);
}

TEST_CASE("classify_grid examples") {
  Viewport bulb;
  bulb.re_min = q("-17/16");
  bulb.re_max = q("-15/16");
  bulb.im_min = q("-1/16");
  bulb.im_max = q("1/16");
  bulb.n = 9;
  PixelGrid g = classify_grid(bulb, params(50));
  for (const Cell& c : g.cells) CHECK(c.verdict == CellVerdict::in_bulb);

  Viewport far;
  far.re_min = Rational(5);
  far.re_max = Rational(6);
  far.im_min = Rational(5);
  far.im_max = Rational(6);
  far.n = 1;
  PixelGrid f = classify_grid(far, params(1));
  REQUIRE(f.cells.size() == 1);
  CHECK(f.cells[0].is_out());
  CHECK(f.first_escape(0, 0) == std::optional<std::uint32_t>(1));
  PixelGrid fb = classify_grid(far, params(1, Mode::box));
  CHECK(fb.cells[0].is_out());
}

TEST_CASE("the pixel at 1 + 0i escapes at step 3") {
  // On the 257-point lattice, 1 + 0i is column 192 of the middle row.
  Viewport v = view(257);
  REQUIRE(grid_point(v, 128, 192) == ComplexRational{Rational(1), Rational(0)});
  PixelGrid g = classify_grid(v, params(50));
  CHECK(g.at(128, 192).is_out());
  CHECK(g.first_escape(128, 192) == std::optional<std::uint32_t>(3));
}

TEST_CASE("worker count does not change the grid") {
  PixelGrid a = classify_grid(view(48), params(30, Mode::point, 1));
  PixelGrid b = classify_grid(view(48), params(30, Mode::point, 4));
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].verdict == b.cells[i].verdict);
    CHECK(a.cells[i].first_escape == b.cells[i].first_escape);
  }
}

TEST_CASE("box mode covers point-mode In pixels") {
  PixelGrid pt = classify_grid(view(40), params(40));
  PixelGrid bx = classify_grid(view(40), params(40, Mode::box));
  for (std::size_t i = 0; i < pt.cells.size(); ++i) {
    if (pt.cells[i].is_in()) CHECK_FALSE(bx.cells[i].is_out());
    // A box certificate covers its centre point too.
    if (bx.cells[i].is_out()) CHECK_FALSE(pt.cells[i].is_in());
    if (bx.cells[i].is_in()) CHECK_FALSE(pt.cells[i].is_out());
  }
}

TEST_CASE("escape bands") {
  PixelGrid g{view(2), params(10), std::vector<Cell>(4)};
  Image blank = escape_bands(g);
  for (auto px : blank.pixels) CHECK(px == kUnknownIndex);

  g.cells = {{CellVerdict::out, 1}, {CellVerdict::out, 2}, {CellVerdict::out, 3}, {CellVerdict::in_cycle, 0}};
  Image img = escape_bands(g);
  std::set<std::uint8_t> bands(img.pixels.begin(), img.pixels.end());
  CHECK(bands == std::set<std::uint8_t>{1, 2, 3, kInIndex});
  g.cells[0] = {CellVerdict::out, 9999};
  CHECK(escape_bands(g).pixels[0] == kMaxBand);
}

TEST_CASE("pgm and ppm encoding") {
  Image zero{2, 2, std::vector<std::uint8_t>(4, 0)};
  std::string pgm = encode_pgm(zero);
  CHECK(pgm.size() == 15);
  CHECK(pgm == std::string("P5\n2 2\n255\n") + std::string(4, '\0'));

  Image white{1, 1, {255}};
  CHECK(encode_pgm(white) == std::string("P5\n1 1\n255\n\xff", 12));

  std::string ppm = encode_ppm(zero, default_palette());
  CHECK(ppm.rfind("P6\n2 2\n255\n", 0) == 0);
  CHECK(ppm.size() == 11 + 12);
  CHECK(ppm[11] == char(default_palette()[0][0]));

  Image bad{3, 3, {1, 2}};
  CHECK_THROWS_AS(encode_pgm(bad), std::invalid_argument);
}

TEST_CASE("emit writes exactly the encoded bytes") {
  Image zero{2, 2, std::vector<std::uint8_t>(4, 0)};
  const std::string path = "render_test_2x2.pgm";
  emit_pgm(zero, path);
  CHECK(slurp(path) == encode_pgm(zero));
  std::remove(path.c_str());
  CHECK_THROWS_AS(emit_pgm(zero, "/nonexistent-dir/x.pgm"), std::runtime_error);
}

TEST_CASE("area estimate") {
  PixelGrid all_out{view(4), params(10), std::vector<Cell>(16, Cell{CellVerdict::out, 1})};
  AreaBounds a = area_estimate(all_out);
  CHECK(a.upper == Rational(0));
  CHECK(a.lower == Rational(0));
  PixelGrid unknown{view(4), params(10), std::vector<Cell>(16)};
  AreaBounds u = area_estimate(unknown);
  CHECK(u.upper == Rational(16));
  CHECK(u.lower == Rational(0));
  PixelGrid mixed = unknown;
  mixed.cells[0] = {CellVerdict::in_cardioid, 0};
  mixed.cells[1] = {CellVerdict::out, 2};
  AreaBounds m = area_estimate(mixed);
  CHECK(m.upper == Rational(15));
  CHECK(m.lower == Rational(1));
  Counts c = count_verdicts(mixed);
  CHECK(c.in == 1);
  CHECK(c.out == 1);
  CHECK(c.unknown == 14);
}

TEST_CASE("small grid area is bracketed") {
  PixelGrid g = classify_grid(view(100), params(50));
  AreaBounds a = area_estimate(g);
  CHECK(a.lower <= a.upper);
  CHECK(a.lower.to_double() > 1.0);
  CHECK(a.upper.to_double() < 2.2);
}

TEST_CASE("fnv1a reference values") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}
