// SPDX-License-Identifier: Apache-2.0

#include "mandel/render.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace mandel::render {

void Viewport::validate() const {
  if (!(re_min < re_max)) throw std::invalid_argument("viewport needs re_min < re_max");
  if (!(im_min < im_max)) throw std::invalid_argument("viewport needs im_min < im_max");
  if (n < 1) throw std::invalid_argument("viewport needs n >= 1");
}

ComplexRational grid_point(const Viewport& v, unsigned row, unsigned col) {
  // A single sample sits at the viewport centre.
  if (v.n == 1) return {(v.re_min + v.re_max) / Rational(2), (v.im_min + v.im_max) / Rational(2)};
  const Rational steps(static_cast<long>(v.n) - 1);
  Rational re = v.re_min + Rational(static_cast<long>(col)) * (v.re_max - v.re_min) / steps;
  Rational im = v.im_max - Rational(static_cast<long>(row)) * (v.im_max - v.im_min) / steps;
  return {re, im};
}

std::vector<ComplexRational> grid_points(const Viewport& v) {
  v.validate();
  std::vector<ComplexRational> pts;
  pts.reserve(std::size_t(v.n) * v.n);
  for (unsigned r = 0; r < v.n; ++r) {
    for (unsigned k = 0; k < v.n; ++k) pts.push_back(grid_point(v, r, k));
  }
  return pts;
}

ComplexBox pixel_box(const Viewport& v, unsigned row, unsigned col, long precision) {
  const Rational two_steps(v.n == 1 ? 2 : 2 * (static_cast<long>(v.n) - 1));
  const Rational hx = (v.re_max - v.re_min) / two_steps;
  const Rational hy = (v.im_max - v.im_min) / two_steps;
  ComplexRational c = grid_point(v, row, col);
  return {DyadicInterval::enclose(c.re - hx, c.re + hx, precision),
          DyadicInterval::enclose(c.im - hy, c.im + hy, precision)};
}

Cell to_cell(const Verdict& v) {
  if (v.is_out()) return {CellVerdict::out, static_cast<std::uint32_t>(v.escape().n)};
  if (v.is_in()) {
    const InCertificate& cert = v.membership();
    if (std::holds_alternative<CycleCert>(cert)) return {CellVerdict::in_cycle, 0};
    if (std::holds_alternative<CardioidCert>(cert)) return {CellVerdict::in_cardioid, 0};
    return {CellVerdict::in_bulb, 0};
  }
  return {CellVerdict::unknown, 0};
}

const char* cell_name(CellVerdict v) {
  switch (v) {
    case CellVerdict::out: return "out";
    case CellVerdict::in_cycle: return "in:cycle";
    case CellVerdict::in_cardioid: return "in:cardioid";
    case CellVerdict::in_bulb: return "in:bulb";
    case CellVerdict::unknown: return "unknown";
  }
  return "unknown";
}

std::optional<std::uint32_t> PixelGrid::first_escape(unsigned row, unsigned col) const {
  const Cell& c = at(row, col);
  if (!c.is_out()) return std::nullopt;
  return c.first_escape;
}

PixelGrid classify_grid(const Viewport& v, const GridParams& params) {
  v.validate();
  PixelGrid grid{v, params, std::vector<Cell>(std::size_t(v.n) * v.n)};

  std::vector<Rational> re(v.n);
  std::vector<Rational> im(v.n);
  for (unsigned i = 0; i < v.n; ++i) {
    ComplexRational c = grid_point(v, i, i);
    re[i] = c.re;
    im[i] = c.im;
  }

  std::atomic<unsigned> next_row{0};
  auto worker = [&] {
    for (unsigned r = next_row++; r < v.n; r = next_row++) {
      for (unsigned k = 0; k < v.n; ++k) {
        Verdict verdict = params.mode == Mode::point
                              ? decide(ComplexRational{re[k], im[r]}, params.decide)
                              : decide(pixel_box(v, r, k, params.decide.precision), params.decide);
        grid.cells[std::size_t(r) * v.n + k] = to_cell(verdict);
      }
    }
  };

  unsigned workers = std::clamp(params.workers, 1U, v.n);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return grid;
}

Image escape_bands(const PixelGrid& g) {
  Image img{g.view.n, g.view.n, std::vector<std::uint8_t>(g.cells.size())};
  for (std::size_t i = 0; i < g.cells.size(); ++i) {
    const Cell& c = g.cells[i];
    if (c.is_out()) {
      img.pixels[i] = static_cast<std::uint8_t>(std::min<std::uint32_t>(c.first_escape, kMaxBand));
    } else if (c.is_in()) {
      img.pixels[i] = kInIndex;
    } else {
      img.pixels[i] = kUnknownIndex;
    }
  }
  return img;
}

const Palette& default_palette() {
  static const Palette palette = [] {
    Palette p{};
    p[kUnknownIndex] = {96, 96, 96};
    p[kInIndex] = {0, 0, 0};
    // Bands cycle through a fixed ramp so neighbouring escape steps differ.
    for (unsigned k = 1; k <= kMaxBand; ++k) {
      p[k] = {static_cast<std::uint8_t>((k * 53 + 40) % 256), static_cast<std::uint8_t>((k * 97 + 90) % 256),
              static_cast<std::uint8_t>((k * 31 + 200) % 256)};
    }
    return p;
  }();
  return palette;
}

namespace {

std::string header(const char* magic, const Image& image) {
  return std::string(magic) + "\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
}

void check_dims(const Image& image) {
  if (image.pixels.size() != std::size_t(image.width) * image.height) {
    throw std::invalid_argument("image buffer does not match its dimensions");
  }
}

void write_file(const std::string& bytes, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace

std::string encode_pgm(const Image& image) {
  check_dims(image);
  std::string out = header("P5", image);
  out.append(image.pixels.begin(), image.pixels.end());
  return out;
}

std::string encode_ppm(const Image& image, const Palette& palette) {
  check_dims(image);
  std::string out = header("P6", image);
  out.reserve(out.size() + 3 * image.pixels.size());
  for (std::uint8_t idx : image.pixels) {
    for (std::uint8_t ch : palette[idx]) out.push_back(static_cast<char>(ch));
  }
  return out;
}

void emit_pgm(const Image& image, const std::string& path) { write_file(encode_pgm(image), path); }

void emit_ppm(const Image& image, const Palette& palette, const std::string& path) {
  write_file(encode_ppm(image, palette), path);
}

Counts count_verdicts(const PixelGrid& g) {
  Counts c;
  for (const Cell& cell : g.cells) {
    if (cell.is_out()) {
      ++c.out;
    } else if (cell.is_in()) {
      ++c.in;
    } else {
      ++c.unknown;
    }
  }
  return c;
}

AreaBounds area_estimate(const PixelGrid& g) {
  const Viewport& v = g.view;
  const Rational n(static_cast<long>(v.n));
  const Rational pixel = (v.re_max - v.re_min) * (v.im_max - v.im_min) / (n * n);
  Counts c = count_verdicts(g);
  return {Rational(static_cast<long>(c.in + c.unknown)) * pixel, Rational(static_cast<long>(c.in)) * pixel};
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace mandel::render
