#include "layoutforge/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace layoutforge {

DbUnit nm_from_um(double um, const std::string& field) {
  const double scaled = um * 1000.0;
  const double nearest = std::round(scaled);
  const double tol = 1e-9 * std::max(1.0, std::abs(scaled));
  if (!std::isfinite(scaled) || std::abs(scaled - nearest) > tol) {
    throw SpecError(field + ": " + std::to_string(um) +
                    " um is not a whole number of nanometers");
  }
  return static_cast<DbUnit>(nearest);
}

double um_from_nm(DbUnit nm) { return static_cast<double>(nm) / 1000.0; }

std::optional<Rect> rect_intersect(const Rect& a, const Rect& b) {
  const Rect r{std::max(a.x_ll, b.x_ll), std::max(a.y_ll, b.y_ll),
               std::min(a.x_ur, b.x_ur), std::min(a.y_ur, b.y_ur)};
  if (!r.valid()) return std::nullopt;
  return r;
}

void Cell::sort_shapes() {
  std::sort(shapes.begin(), shapes.end(), [](const Shape& a, const Shape& b) {
    return std::tie(a.layer, a.rect.y_ll, a.rect.x_ll, a.rect.x_ur, a.rect.y_ur) <
           std::tie(b.layer, b.rect.y_ll, b.rect.x_ll, b.rect.x_ur, b.rect.y_ur);
  });
}

Cell merge_cells(std::string name, Rect bbox, const std::vector<const Cell*>& parts) {
  Cell out{std::move(name), bbox, {}};
  std::size_t total = 0;
  for (const Cell* c : parts) total += c->shapes.size();
  out.shapes.reserve(total);
  for (const Cell* c : parts) {
    out.shapes.insert(out.shapes.end(), c->shapes.begin(), c->shapes.end());
  }
  out.sort_shapes();
  return out;
}

}  // namespace layoutforge
