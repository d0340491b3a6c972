#pragma once

#include <cstdint>
#include <vector>

#include "layoutforge/geometry.hpp"

namespace layoutforge {

// Binary pixel grid; row 0 is the bottom of the window, so pixel coordinates
// grow with the geometry.
struct RasterClip {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major from the bottom row

  std::uint8_t at(std::size_t row, std::size_t col) const {
    return pixels[row * width + col];
  }
  void set(std::size_t row, std::size_t col, std::uint8_t v) {
    pixels[row * width + col] = v;
  }
  double density() const;

  friend bool operator==(const RasterClip&, const RasterClip&) = default;
};

// Pixel is 1 when its center is covered (half-open: a center on a shape's low
// edge counts, on its high edge does not). The window must lie inside the
// cell bbox and divide evenly into pixels.
RasterClip rasterize_clip(const Cell& cell, const Rect& window, DbUnit pixel_size);

}  // namespace layoutforge
