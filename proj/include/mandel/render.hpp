// SPDX-License-Identifier: Apache-2.0
//
// Grid classification over a viewport, escape-band images, PGM/PPM output
// and certified area brackets.

#pragma once

#include "mandel/certifier.hpp"
#include "mandel/exact_arith.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mandel::render {

/// Lattice with n points per side, endpoints included: column k maps to
/// re_min + k (re_max - re_min)/(n - 1), row r to im_max - r (im_max - im_min)/(n - 1).
/// With n = 1 the single sample is the viewport centre.
struct Viewport {
  Rational re_min{-2};
  Rational re_max{2};
  Rational im_min{-2};
  Rational im_max{2};
  unsigned n = 1000;

  void validate() const;
};

ComplexRational grid_point(const Viewport& v, unsigned row, unsigned col);
std::vector<ComplexRational> grid_points(const Viewport& v);

/// Closed box of half-spacing around the lattice point, rounded outward.
ComplexBox pixel_box(const Viewport& v, unsigned row, unsigned col, long precision);

enum class Mode { point, box };

struct GridParams {
  DecideParams decide;
  Mode mode = Mode::point;
  unsigned workers = 1;
};

enum class CellVerdict : std::uint8_t { unknown, out, in_cycle, in_cardioid, in_bulb };

struct Cell {
  CellVerdict verdict = CellVerdict::unknown;
  std::uint32_t first_escape = 0;  // escape step for out cells, 0 otherwise

  [[nodiscard]] bool is_out() const { return verdict == CellVerdict::out; }
  [[nodiscard]] bool is_in() const {
    return verdict == CellVerdict::in_cycle || verdict == CellVerdict::in_cardioid || verdict == CellVerdict::in_bulb;
  }
};

Cell to_cell(const Verdict& v);
const char* cell_name(CellVerdict v);

struct PixelGrid {
  Viewport view;
  GridParams params;
  std::vector<Cell> cells;  // row-major, top row first

  [[nodiscard]] const Cell& at(unsigned row, unsigned col) const { return cells[std::size_t(row) * view.n + col]; }
  [[nodiscard]] std::optional<std::uint32_t> first_escape(unsigned row, unsigned col) const;
};

/// Runs the certifier on every lattice point (point mode) or every pixel
/// box (box mode). Rows are distributed over `params.workers` threads; the
/// result does not depend on the worker count.
PixelGrid classify_grid(const Viewport& v, const GridParams& params);

struct Image {
  unsigned width = 0;
  unsigned height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, top row first
};

inline constexpr std::uint8_t kUnknownIndex = 0;
inline constexpr std::uint8_t kInIndex = 255;
inline constexpr std::uint8_t kMaxBand = 254;

/// Out pixels get min(first_escape, 254), In pixels 255, Unknown pixels 0.
Image escape_bands(const PixelGrid& g);

using Palette = std::array<std::array<std::uint8_t, 3>, 256>;
const Palette& default_palette();

std::string encode_pgm(const Image& image);
std::string encode_ppm(const Image& image, const Palette& palette);
/// Throws std::runtime_error when the file cannot be written.
void emit_pgm(const Image& image, const std::string& path);
void emit_ppm(const Image& image, const Palette& palette, const std::string& path);

struct AreaBounds {
  Rational upper;  // non-Out pixels times pixel area
  Rational lower;  // In-certified pixels times pixel area
};

AreaBounds area_estimate(const PixelGrid& g);

struct Counts {
  std::size_t out = 0;
  std::size_t in = 0;
  std::size_t unknown = 0;
};

Counts count_verdicts(const PixelGrid& g);

/// 64-bit FNV-1a, used for golden-image fingerprints.
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace mandel::render
