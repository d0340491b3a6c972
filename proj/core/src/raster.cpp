#include "layoutforge/raster.hpp"

#include <algorithm>
#include <stdexcept>

namespace layoutforge {

double RasterClip::density() const {
  if (pixels.empty()) return 0.0;
  std::int64_t on = 0;
  for (auto p : pixels) on += p;
  return static_cast<double>(on) / static_cast<double>(pixels.size());
}

RasterClip rasterize_clip(const Cell& cell, const Rect& window, DbUnit pixel_size) {
  if (pixel_size <= 0) throw std::invalid_argument("pixel_size must be positive");
  if (!window.valid()) throw std::invalid_argument("window must be non-degenerate");
  if (!cell.bbox.contains(window)) {
    throw std::invalid_argument("window must lie inside the cell bbox");
  }
  if (window.width() % pixel_size != 0 || window.height() % pixel_size != 0) {
    throw std::invalid_argument("window does not divide into whole pixels");
  }

  RasterClip clip;
  clip.width = static_cast<std::size_t>(window.width() / pixel_size);
  clip.height = static_cast<std::size_t>(window.height() / pixel_size);
  clip.pixels.assign(clip.width * clip.height, 0);

  // Pixel centers in doubled coordinates stay integral: 2c = 2*wx + (2i+1)*px.
  // A center is covered when 2*x_ll <= 2c < 2*x_ur on both axes; solve for the
  // pixel index range per shape and fill.
  const auto index_range = [pixel_size](DbUnit lo2, DbUnit hi2, DbUnit base,
                                        std::size_t count, std::size_t& first,
                                        std::size_t& last) {
    // smallest i with 2*base + (2i+1)*px >= lo2, largest with ... < hi2
    const DbUnit lo_num = lo2 - 2 * base - pixel_size;
    DbUnit i_lo = lo_num <= 0 ? 0 : (lo_num + 2 * pixel_size - 1) / (2 * pixel_size);
    const DbUnit hi_num = hi2 - 2 * base - pixel_size;
    if (hi_num <= 0) return false;
    DbUnit i_hi = hi_num % (2 * pixel_size) == 0 ? hi_num / (2 * pixel_size) - 1
                                                 : hi_num / (2 * pixel_size);
    i_hi = std::min<DbUnit>(i_hi, static_cast<DbUnit>(count) - 1);
    if (i_lo > i_hi) return false;
    first = static_cast<std::size_t>(i_lo);
    last = static_cast<std::size_t>(i_hi);
    return true;
  };

  for (const Shape& s : cell.shapes) {
    std::size_t c0, c1, r0, r1;
    if (!index_range(2 * s.rect.x_ll, 2 * s.rect.x_ur, window.x_ll, clip.width, c0, c1))
      continue;
    if (!index_range(2 * s.rect.y_ll, 2 * s.rect.y_ur, window.y_ll, clip.height, r0, r1))
      continue;
    for (std::size_t r = r0; r <= r1; ++r) {
      std::fill(clip.pixels.begin() + static_cast<std::ptrdiff_t>(r * clip.width + c0),
                clip.pixels.begin() + static_cast<std::ptrdiff_t>(r * clip.width + c1 + 1),
                std::uint8_t{1});
    }
  }
  return clip;
}

}  // namespace layoutforge
