#include "layoutforge/drc.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <tuple>

namespace layoutforge {

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kWidthCd: return "WidthCD";
    case ViolationKind::kOffTrack: return "OffTrack";
    case ViolationKind::kT2TBelowMin: return "T2TBelowMin";
    case ViolationKind::kT2TAboveMax: return "T2TAboveMax";
    case ViolationKind::kT2TOffGrid: return "T2TOffGrid";
    case ViolationKind::kLengthBelowMin: return "LengthBelowMin";
    case ViolationKind::kLengthAboveMax: return "LengthAboveMax";
    case ViolationKind::kOutOfBounds: return "OutOfBounds";
    case ViolationKind::kSameTrackOverlap: return "SameTrackOverlap";
    case ViolationKind::kViaSize: return "ViaSize";
    case ViolationKind::kViaEnclosureX: return "ViaEnclosureX";
    case ViolationKind::kViaEnclosureY: return "ViaEnclosureY";
    case ViolationKind::kViaPitchX: return "ViaPitchX";
    case ViolationKind::kViaPitchY: return "ViaPitchY";
    case ViolationKind::kViaUncovered: return "ViaUncovered";
  }
  return "Unknown";
}

std::map<ViolationKind, std::int64_t> DrcReport::counts() const {
  std::map<ViolationKind, std::int64_t> out;
  for (const auto& v : violations) ++out[v.kind];
  return out;
}

bool DrcReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

namespace {

DbUnit floor_mod(DbUnit a, DbUnit m) {
  DbUnit r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

DrcReport check_metal(const Cell& cell, const MetalSpec& spec) {
  DrcReport report;
  const Rect bounds = spec.bounds();
  const bool horizontal = spec.orientation == Orientation::kHorizontal;

  const auto cross_lo = [&](const Rect& r) { return horizontal ? r.y_ll : r.x_ll; };
  const auto cross_size = [&](const Rect& r) { return horizontal ? r.height() : r.width(); };
  const auto along_lo = [&](const Rect& r) { return horizontal ? r.x_ll : r.y_ll; };
  const auto along_hi = [&](const Rect& r) { return horizontal ? r.x_ur : r.y_ur; };
  const DbUnit cross_origin = horizontal ? spec.origin_y : spec.origin_x;

  std::map<DbUnit, std::vector<Rect>> tracks;
  for (const Shape& s : cell.shapes) {
    const Rect& r = s.rect;

    if (!bounds.contains(r)) {
      report.violations.push_back({ViolationKind::kOutOfBounds, r, 0, 0});
    }
    if (cross_size(r) != spec.wire_cd) {
      report.violations.push_back(
          {ViolationKind::kWidthCd, r, cross_size(r), spec.wire_cd});
    }
    const DbUnit len = along_hi(r) - along_lo(r);
    if (len < spec.min_length) {
      report.violations.push_back(
          {ViolationKind::kLengthBelowMin, r, len, spec.min_length});
    } else if (len > spec.max_length) {
      report.violations.push_back(
          {ViolationKind::kLengthAboveMax, r, len, spec.max_length});
    }
    const DbUnit off = floor_mod(cross_lo(r) - cross_origin, spec.track_pitch);
    if (off != 0) {
      report.violations.push_back({ViolationKind::kOffTrack, r, off, 0});
    }

    tracks[cross_lo(r)].push_back(r);
  }

  for (auto& [ordinate, wires] : tracks) {
    std::sort(wires.begin(), wires.end(), [&](const Rect& a, const Rect& b) {
      return std::make_tuple(along_lo(a), along_hi(a)) <
             std::make_tuple(along_lo(b), along_hi(b));
    });
    for (std::size_t k = 1; k < wires.size(); ++k) {
      const Rect& prev = wires[k - 1];
      const Rect& next = wires[k];
      if (along_lo(next) < along_hi(prev)) {
        report.violations.push_back({ViolationKind::kSameTrackOverlap, next,
                                     along_hi(prev) - along_lo(next), 0});
        continue;
      }
      const DbUnit gap = along_lo(next) - along_hi(prev);
      if (gap < spec.min_t2t) {
        report.violations.push_back(
            {ViolationKind::kT2TBelowMin, next, gap, spec.min_t2t});
      } else if (gap > spec.max_t2t) {
        report.violations.push_back(
            {ViolationKind::kT2TAboveMax, next, gap, spec.max_t2t});
      } else if (floor_mod(gap - spec.min_t2t, spec.t2t_grid) != 0) {
        report.violations.push_back(
            {ViolationKind::kT2TOffGrid, next, gap, spec.t2t_grid});
      }
    }
  }
  return report;
}

namespace {

struct CoverMargins {
  bool covered = false;
  DbUnit low = 0;   // cut low edge to wire low edge
  DbUnit high = 0;  // wire high edge to cut high edge
};

// Best containing wire, preferring the largest worst-side margin on `axis`.
// Fast path buckets wires by low edge; a miss falls back to the full list.
CoverMargins cover_margins(const std::vector<Rect>& wires,
                           const std::map<DbUnit, std::vector<const Rect*>>& by_low,
                           DbUnit bucket_key, const Rect& cut, bool x_axis) {
  CoverMargins best;
  DbUnit best_min = -1;
  const auto consider = [&](const Rect& w) {
    if (!w.contains(cut)) return;
    const DbUnit lo = x_axis ? cut.x_ll - w.x_ll : cut.y_ll - w.y_ll;
    const DbUnit hi = x_axis ? w.x_ur - cut.x_ur : w.y_ur - cut.y_ur;
    if (std::min(lo, hi) > best_min) {
      best_min = std::min(lo, hi);
      best = {true, lo, hi};
    }
  };
  if (const auto it = by_low.find(bucket_key); it != by_low.end()) {
    for (const Rect* w : it->second) consider(*w);
  }
  if (!best.covered) {
    for (const Rect& w : wires) consider(w);
  }
  return best;
}

}  // namespace

DrcReport check_via(const Cell& m1, const Cell& m2, const Cell& vias,
                    const ViaSpec& spec) {
  DrcReport report;

  std::vector<Rect> m1_wires, m2_wires;
  m1_wires.reserve(m1.shapes.size());
  for (const Shape& s : m1.shapes) m1_wires.push_back(s.rect);
  m2_wires.reserve(m2.shapes.size());
  for (const Shape& s : m2.shapes) m2_wires.push_back(s.rect);

  std::map<DbUnit, std::vector<const Rect*>> m1_by_y, m2_by_x;
  for (const Rect& r : m1_wires) m1_by_y[r.y_ll].push_back(&r);
  for (const Rect& r : m2_wires) m2_by_x[r.x_ll].push_back(&r);

  for (const Shape& s : vias.shapes) {
    const Rect& cut = s.rect;
    if (cut.width() != spec.via_x) {
      report.violations.push_back(
          {ViolationKind::kViaSize, cut, cut.width(), spec.via_x});
    }
    if (cut.height() != spec.via_y) {
      report.violations.push_back(
          {ViolationKind::kViaSize, cut, cut.height(), spec.via_y});
    }

    const CoverMargins on_m1 =
        cover_margins(m1_wires, m1_by_y, cut.y_ll, cut, /*x_axis=*/true);
    if (!on_m1.covered) {
      report.violations.push_back({ViolationKind::kViaUncovered, cut, 0, 0});
    } else if (std::min(on_m1.low, on_m1.high) < spec.enc_x) {
      report.violations.push_back({ViolationKind::kViaEnclosureX, cut,
                                   std::min(on_m1.low, on_m1.high), spec.enc_x});
    }

    const CoverMargins on_m2 =
        cover_margins(m2_wires, m2_by_x, cut.x_ll, cut, /*x_axis=*/false);
    if (!on_m2.covered) {
      report.violations.push_back({ViolationKind::kViaUncovered, cut, 0, 0});
    } else if (std::min(on_m2.low, on_m2.high) < spec.enc_y) {
      report.violations.push_back({ViolationKind::kViaEnclosureY, cut,
                                   std::min(on_m2.low, on_m2.high), spec.enc_y});
    }
  }

  // Pitch between same-row / same-column cuts, center to center. Doubled
  // coordinates keep centers integral.
  if (spec.pitch_x > 0) {
    std::map<std::pair<DbUnit, DbUnit>, std::vector<const Rect*>> rows;
    for (const Shape& s : vias.shapes) {
      rows[{s.rect.y_ll, s.rect.y_ur}].push_back(&s.rect);
    }
    for (auto& [key, row] : rows) {
      std::sort(row.begin(), row.end(), [](const Rect* a, const Rect* b) {
        return a->x_ll + a->x_ur < b->x_ll + b->x_ur;
      });
      for (std::size_t k = 1; k < row.size(); ++k) {
        const DbUnit d2 = (row[k]->x_ll + row[k]->x_ur) -
                          (row[k - 1]->x_ll + row[k - 1]->x_ur);
        if (d2 < 2 * spec.pitch_x) {
          report.violations.push_back(
              {ViolationKind::kViaPitchX, *row[k], d2 / 2, spec.pitch_x});
        }
      }
    }
  }
  if (spec.pitch_y > 0) {
    std::map<std::pair<DbUnit, DbUnit>, std::vector<const Rect*>> cols;
    for (const Shape& s : vias.shapes) {
      cols[{s.rect.x_ll, s.rect.x_ur}].push_back(&s.rect);
    }
    for (auto& [key, col] : cols) {
      std::sort(col.begin(), col.end(), [](const Rect* a, const Rect* b) {
        return a->y_ll + a->y_ur < b->y_ll + b->y_ur;
      });
      for (std::size_t k = 1; k < col.size(); ++k) {
        const DbUnit d2 = (col[k]->y_ll + col[k]->y_ur) -
                          (col[k - 1]->y_ll + col[k - 1]->y_ur);
        if (d2 < 2 * spec.pitch_y) {
          report.violations.push_back(
              {ViolationKind::kViaPitchY, *col[k], d2 / 2, spec.pitch_y});
        }
      }
    }
  }
  return report;
}

ViaDensityStats via_density_stats(const Cell& m1, const Cell& m2, const Cell& vias,
                                  const ViaSpec& spec) {
  ViaDensityStats stats;
  stats.placed = static_cast<std::int64_t>(vias.shapes.size());

  std::map<DbUnit, std::vector<Rect>> m1_by_y, m2_by_x;
  for (const Shape& s : m1.shapes) m1_by_y[s.rect.y_ll].push_back(s.rect);
  for (const Shape& s : m2.shapes) m2_by_x[s.rect.x_ll].push_back(s.rect);

  const std::int64_t rows = spec.m1.track_count();
  const std::int64_t cols = spec.m2.track_count();
  for (std::int64_t i = 0; i < rows; ++i) {
    const DbUnit y = spec.m1.origin_y + i * spec.m1.track_pitch;
    const auto h = m1_by_y.find(y);
    if (h == m1_by_y.end()) continue;
    for (std::int64_t j = 0; j < cols; ++j) {
      const DbUnit x = spec.m2.origin_x + j * spec.m2.track_pitch;
      const auto v = m2_by_x.find(x);
      if (v == m2_by_x.end()) continue;
      const Rect cut{x, y, x + spec.via_x, y + spec.via_y};

      const auto fits = [](const std::vector<Rect>& wires, const Rect& c,
                           DbUnit margin, bool x_axis) {
        for (const Rect& w : wires) {
          if (!w.contains(c)) continue;
          const DbUnit lo = x_axis ? c.x_ll - w.x_ll : c.y_ll - w.y_ll;
          const DbUnit hi = x_axis ? w.x_ur - c.x_ur : w.y_ur - c.y_ur;
          if (lo >= margin && hi >= margin) return true;
        }
        return false;
      };
      if (fits(h->second, cut, spec.enc_x, true) &&
          fits(v->second, cut, spec.enc_y, false)) {
        ++stats.candidates;
      }
    }
  }

  stats.realized_fraction =
      stats.candidates == 0
          ? 0.0
          : static_cast<double>(stats.placed) / static_cast<double>(stats.candidates);
  return stats;
}

void write_report(std::ostream& os, const DrcReport& report) {
  for (const Violation& v : report.violations) {
    os << to_string(v.kind) << ' ' << v.where.x_ll << ' ' << v.where.y_ll << ' '
       << v.where.x_ur << ' ' << v.where.y_ur << ' ' << v.measured << ' '
       << v.limit << '\n';
  }
  os << "total " << report.violations.size() << " violations\n";
}

}  // namespace layoutforge
