#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "equidyn/dynamics.hpp"

namespace equidyn {

/// Fixed palette indexed by attractor enumeration order; Unresolved pixels are
/// black. Indices past the table wrap (only k >= 4 has more than 16 attractors).
inline constexpr std::array<std::array<std::uint8_t, 3>, 16> kBasinPalette = {{
    {230, 57, 70},    // red
    {69, 123, 157},   // steel blue
    {244, 162, 97},   // sandy orange
    {42, 157, 143},   // teal
    {233, 196, 106},  // saffron
    {144, 190, 109},  // pistachio
    {157, 78, 221},   // violet
    {38, 70, 83},     // charcoal blue
    {231, 111, 81},   // burnt sienna
    {82, 182, 154},   // mint
    {255, 183, 195},  // pink
    {108, 117, 125},  // gray
    {255, 241, 208},  // cream
    {0, 119, 182},    // cerulean
    {188, 108, 37},   // ochre
    {106, 153, 78},   // fern
}};

struct ImageBuffer {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major RGB

  ImageBuffer(int w, int h) : width(w), height(h), pixels(3u * w * h, 0) {}

  void set(int row, int col, const std::array<std::uint8_t, 3>& rgb) {
    const std::size_t at = 3u * (static_cast<std::size_t>(row) * width + col);
    pixels[at] = rgb[0];
    pixels[at + 1] = rgb[1];
    pixels[at + 2] = rgb[2];
  }
};

/// Binary PPM, exactly "P6\n<w> <h>\n255\n" followed by the pixel payload.
inline void write_ppm(const ImageBuffer& img, std::ostream& out) {
  out << "P6\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
}

struct RenderWindow {
  double re_min = -2.0;
  double re_max = 2.0;
  double im_min = -2.0;
  double im_max = 2.0;
};

struct SliceSpec {
  CVector anchor0;  // point at t = 0
  CVector anchor1;  // direction: pixel t maps to anchor0 + t * anchor1
  RenderWindow window;
  int width = 512;
  int height = 512;
};

/// Complex parameter of a pixel center; top row carries the largest imaginary
/// part, matching the usual complex-plane orientation.
inline Complex pixel_parameter(const SliceSpec& slice, int row, int col) {
  const double re = slice.window.re_min +
                    (col + 0.5) / slice.width *
                        (slice.window.re_max - slice.window.re_min);
  const double im = slice.window.im_max -
                    (row + 0.5) / slice.height *
                        (slice.window.im_max - slice.window.im_min);
  return Complex(re, im);
}

/// Colors each pixel of the complex line anchor0 + t * anchor1 by the basin of
/// its point; unresolved pixels (the Julia boundary) stay black. Deterministic
/// for any thread count: pixels own their slots.
inline ImageBuffer render_basin_slice(const CompiledMap& map,
                                      const std::vector<CPoint>& attractors,
                                      const SliceSpec& slice, int max_iter,
                                      double capture_tol, int n_threads) {
  if (slice.width <= 0 || slice.height <= 0)
    throw DimensionError("render_basin_slice: empty image");
  if (chordal_distance(slice.anchor0, slice.anchor1) < kProjectiveTol)
    throw DimensionError("render_basin_slice: anchors are projectively equal");
  ImageBuffer img(slice.width, slice.height);
  const std::size_t total =
      static_cast<std::size_t>(slice.width) * slice.height;
  parallel_for(total, n_threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t px = begin; px < end; ++px) {
      const int row = static_cast<int>(px) / slice.width;
      const int col = static_cast<int>(px) % slice.width;
      const Complex t = pixel_parameter(slice, row, col);
      CVector v = slice.anchor0 + t * slice.anchor1;
      if (v.norm() < 1e-14) continue;  // degenerate combination: leave black
      CPoint p;
      p.coords = std::move(v);
      p.canonicalize();
      const BasinLabel label =
          classify_basin(map, p, attractors, max_iter, capture_tol);
      if (label.captured)
        img.set(row, col, kBasinPalette[label.attractor % kBasinPalette.size()]);
    }
  });
  return img;
}

}  // namespace equidyn
