#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace layoutforge {

// Database unit: 1 nm. All geometry is integer; micron inputs convert once at
// the config boundary.
using DbUnit = std::int64_t;

struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rejects micron values that are not a whole number of nanometers.
DbUnit nm_from_um(double um, const std::string& field = "value");
double um_from_nm(DbUnit nm);

struct Rect {
  DbUnit x_ll = 0;
  DbUnit y_ll = 0;
  DbUnit x_ur = 0;
  DbUnit y_ur = 0;

  DbUnit width() const { return x_ur - x_ll; }
  DbUnit height() const { return y_ur - y_ll; }
  std::int64_t area() const { return width() * height(); }
  bool valid() const { return x_ll < x_ur && y_ll < y_ur; }
  // Closed containment: shared edges count as inside.
  bool contains(const Rect& inner) const {
    return x_ll <= inner.x_ll && inner.x_ur <= x_ur && y_ll <= inner.y_ll &&
           inner.y_ur <= y_ur;
  }
  bool contains_point(DbUnit x, DbUnit y) const {
    return x_ll <= x && x <= x_ur && y_ll <= y && y <= y_ur;
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

// Open-interior intersection: rects that only touch along an edge or corner
// produce no overlap.
std::optional<Rect> rect_intersect(const Rect& a, const Rect& b);

struct Shape {
  int layer = 0;
  Rect rect;

  friend bool operator==(const Shape&, const Shape&) = default;
};

struct Cell {
  std::string name;
  Rect bbox;
  std::vector<Shape> shapes;

  // Canonical order: (layer, y_ll, x_ll, x_ur, y_ur). Generators call this so
  // identical inputs serialize identically.
  void sort_shapes();

  friend bool operator==(const Cell&, const Cell&) = default;
};

// Single cell holding every shape of the sources, re-sorted.
Cell merge_cells(std::string name, Rect bbox, const std::vector<const Cell*>& parts);

}  // namespace layoutforge
