#include "layoutforge/via.hpp"

#include <algorithm>
#include <map>

namespace layoutforge {

void ViaSpec::validate() const {
  if (via_x <= 0) throw SpecError("via1_x must be positive");
  if (via_y <= 0) throw SpecError("via1_y must be positive");
  if (enc_x < 0) throw SpecError("m1_enc must be non-negative");
  if (enc_y < 0) throw SpecError("m2_enc must be non-negative");
  if (pitch_x < 0) throw SpecError("min_via1_pitch_x must be non-negative");
  if (pitch_y < 0) throw SpecError("min_via1_pitch_y must be non-negative");
  if (fraction < 0.0 || fraction > 1.0)
    throw SpecError("via_fraction must lie in [0, 1]");
  if (m1.orientation != Orientation::kHorizontal)
    throw SpecError("m1 must be horizontal");
  if (m2.orientation != Orientation::kVertical)
    throw SpecError("m2 must be vertical");
  if (m1.wire_cd != via_y) throw SpecError("m1 wire_cd must equal via1_y");
  if (m2.wire_cd != via_x) throw SpecError("m2 wire_cd must equal via1_x");
  if (pitch_y > 0 && m1.track_pitch != pitch_y)
    throw SpecError("m1 track_pitch must equal min_via1_pitch_y");
  if (pitch_x > 0 && m2.track_pitch != pitch_x)
    throw SpecError("m2 track_pitch must equal min_via1_pitch_x");
  m1.validate();
  m2.validate();
}

AssistLayer build_assist_layer(const Cell& cell, DbUnit shrink, Orientation orientation) {
  AssistLayer out;
  out.reserve(cell.shapes.size());
  for (const Shape& s : cell.shapes) {
    Rect r = s.rect;
    if (orientation == Orientation::kHorizontal) {
      r.x_ll += shrink;
      r.x_ur -= shrink;
    } else {
      r.y_ll += shrink;
      r.y_ur -= shrink;
    }
    if (r.valid()) out.push_back(r);
  }
  return out;
}

std::int64_t CandidateMatrix::count() const {
  std::int64_t n = 0;
  for (auto b : bits_) n += b;
  return n;
}

namespace {

// Wires grouped onto tracks by their low edge on the cross axis.
std::map<DbUnit, std::vector<Rect>> bucket_by_track(const std::vector<Rect>& rects,
                                                    Orientation orientation) {
  std::map<DbUnit, std::vector<Rect>> buckets;
  for (const Rect& r : rects) {
    const DbUnit key = orientation == Orientation::kHorizontal ? r.y_ll : r.x_ll;
    buckets[key].push_back(r);
  }
  return buckets;
}

std::vector<Rect> raw_rects(const Cell& cell) {
  std::vector<Rect> out;
  out.reserve(cell.shapes.size());
  for (const Shape& s : cell.shapes) out.push_back(s.rect);
  return out;
}

}  // namespace

CandidateBuild build_candidate_matrix(const Cell& m1, const Cell& m2,
                                      const ViaSpec& spec) {
  const std::size_t rows = static_cast<std::size_t>(spec.m1.track_count());
  const std::size_t cols = static_cast<std::size_t>(spec.m2.track_count());

  CandidateBuild build;
  build.overlap = CandidateMatrix(rows, cols);
  build.legal = CandidateMatrix(rows, cols);
  build.crossing.assign(rows * cols, std::nullopt);
  build.site.assign(rows * cols, Rect{});

  const auto m1_tracks = bucket_by_track(raw_rects(m1), Orientation::kHorizontal);
  const auto m2_tracks = bucket_by_track(raw_rects(m2), Orientation::kVertical);
  const auto m1_assist = bucket_by_track(build_assist_layer(m1, spec.enc_x, Orientation::kHorizontal),
                                         Orientation::kHorizontal);
  const auto m2_assist = bucket_by_track(build_assist_layer(m2, spec.enc_y, Orientation::kVertical),
                                         Orientation::kVertical);

  const auto find = [](const std::map<DbUnit, std::vector<Rect>>& buckets,
                       DbUnit key) -> const std::vector<Rect>* {
    const auto it = buckets.find(key);
    return it == buckets.end() ? nullptr : &it->second;
  };

  for (std::size_t i = 0; i < rows; ++i) {
    const DbUnit y = spec.m1.origin_y + static_cast<DbUnit>(i) * spec.m1.track_pitch;
    for (std::size_t j = 0; j < cols; ++j) {
      const DbUnit x = spec.m2.origin_x + static_cast<DbUnit>(j) * spec.m2.track_pitch;
      const Rect cut{x, y, x + spec.via_x, y + spec.via_y};
      const std::size_t idx = i * cols + j;
      build.site[idx] = cut;

      const auto* h = find(m1_tracks, y);
      const auto* v = find(m2_tracks, x);
      if (h && v) {
        for (const Rect& hw : *h) {
          for (const Rect& vw : *v) {
            if (auto cross = rect_intersect(hw, vw)) {
              build.overlap.set(i, j, true);
              build.crossing[idx] = *cross;
              break;
            }
          }
          if (build.overlap.at(i, j)) break;
        }
      }
      if (!build.overlap.at(i, j)) continue;

      const auto* ha = find(m1_assist, y);
      const auto* va = find(m2_assist, x);
      if (!ha || !va) continue;
      bool h_ok = false;
      for (const Rect& r : *ha) {
        if (r.contains(cut)) { h_ok = true; break; }
      }
      if (!h_ok) continue;
      for (const Rect& r : *va) {
        if (r.contains(cut)) { build.legal.set(i, j, true); break; }
      }
    }
  }
  return build;
}

CandidateMatrix apply_density(const CandidateMatrix& m, double fraction, Prng& rng) {
  CandidateMatrix out = m;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!m.at(i, j)) continue;
      if (!(rng.next_unit() < fraction)) out.set(i, j, false);
    }
  }
  return out;
}

CandidateMatrix remove_pitch_conflicts(const CandidateMatrix& m) {
  CandidateMatrix out = m;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t j = 0; j < out.cols(); ++j) {
      if (i > 0 && out.at(i, j) && out.at(i - 1, j)) out.set(i, j, false);
    }
  }
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t j = 0; j < out.cols(); ++j) {
      if (j > 0 && out.at(i, j) && out.at(i, j - 1)) out.set(i, j, false);
    }
  }
  return out;
}

ViaLayout generate_via_cell(const ViaSpec& spec) {
  spec.validate();

  ViaLayout out;
  out.m1 = draw_wire_cell(spec.m1);
  out.m2 = draw_wire_cell(spec.m2);

  const CandidateBuild build = build_candidate_matrix(out.m1, out.m2, spec);
  out.stats.candidates = build.legal.count();

  Prng density_rng = Prng::for_stream(spec.seed, 3);
  CandidateMatrix kept = apply_density(build.legal, spec.fraction, density_rng);
  out.stats.post_density = kept.count();

  if (spec.pitch_x > 0 || spec.pitch_y > 0) kept = remove_pitch_conflicts(kept);
  out.stats.post_pitch = kept.count();
  out.stats.realized_fraction =
      out.stats.candidates == 0
          ? 0.0
          : static_cast<double>(out.stats.post_pitch) /
                static_cast<double>(out.stats.candidates);

  out.vias = Cell{spec.cell_name, out.m1.bbox, {}};
  out.vias.shapes.reserve(static_cast<std::size_t>(out.stats.post_pitch));
  for (std::size_t i = 0; i < kept.rows(); ++i) {
    for (std::size_t j = 0; j < kept.cols(); ++j) {
      if (kept.at(i, j)) {
        out.vias.shapes.push_back({spec.via_layer, build.site[i * kept.cols() + j]});
      }
    }
  }
  out.vias.sort_shapes();
  return out;
}

}  // namespace layoutforge
