#include "layoutforge/metal.hpp"

#include <algorithm>
#include <thread>

namespace layoutforge {

void MetalSpec::validate() const {
  if (wire_cd <= 0) throw SpecError("wire_cd must be positive");
  if (track_pitch < wire_cd) throw SpecError("track_pitch must be >= wire_cd");
  if (min_t2t < 0) throw SpecError("min_t2t must be non-negative");
  if (max_t2t < min_t2t) throw SpecError("max_t2t must be >= min_t2t");
  if (min_length < 1) throw SpecError("min_length must be at least 1 nm");
  if (max_length < min_length) throw SpecError("max_length must be >= min_length");
  if (t2t_grid <= 0) throw SpecError("t2t_grid must be positive");
  if (total_x <= 0) throw SpecError("total_x must be positive");
  if (total_y <= 0) throw SpecError("total_y must be positive");
}

Prng track_prng(const MetalSpec& spec, std::int64_t track) {
  return Prng::for_stream(spec.seed, static_cast<std::uint64_t>(track));
}

TrackFill draw_wire_track(const MetalSpec& spec, std::int64_t track, WireRandom& rng) {
  TrackFill fill{track, {}};
  const DbUnit end = spec.along_extent();
  DbUnit x = 0;
  while (end - x >= spec.min_length) {
    const DbUnit len =
        rng.wire_length(spec.min_length, std::min(spec.max_length, end - x));
    fill.wires.push_back({x, len});
    const DbUnit tail = end - (x + len);
    const auto gap =
        rng.tip_gap(spec.min_t2t, std::min(spec.max_t2t, tail), spec.t2t_grid);
    if (!gap) break;
    x += len + *gap;
    if (*gap == 0 && len == 0) break;  // unreachable with validated specs
  }
  return fill;
}

Rect wire_rect(const MetalSpec& spec, std::int64_t track, const WireSegment& wire) {
  if (spec.orientation == Orientation::kHorizontal) {
    const DbUnit y = spec.origin_y + track * spec.track_pitch;
    return {spec.origin_x + wire.start, y, spec.origin_x + wire.start + wire.length,
            y + spec.wire_cd};
  }
  const DbUnit x = spec.origin_x + track * spec.track_pitch;
  return {x, spec.origin_y + wire.start, x + spec.wire_cd,
          spec.origin_y + wire.start + wire.length};
}

Cell draw_wire_cell(const MetalSpec& spec, int threads) {
  spec.validate();
  const std::int64_t tracks = spec.track_count();
  std::vector<TrackFill> fills(static_cast<std::size_t>(tracks));

  const auto run = [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t k = lo; k < hi; ++k) {
      PrngWireRandom rng(track_prng(spec, k));
      fills[static_cast<std::size_t>(k)] = draw_wire_track(spec, k, rng);
    }
  };

  if (threads <= 1 || tracks < 2) {
    run(0, tracks);
  } else {
    const std::int64_t workers = std::min<std::int64_t>(threads, tracks);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const std::int64_t chunk = (tracks + workers - 1) / workers;
    for (std::int64_t w = 0; w < workers; ++w) {
      const std::int64_t lo = w * chunk;
      const std::int64_t hi = std::min(tracks, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(run, lo, hi);
    }
    for (auto& t : pool) t.join();
  }

  Cell cell{spec.cell_name, spec.bounds(), {}};
  std::size_t total = 0;
  for (const auto& f : fills) total += f.wires.size();
  cell.shapes.reserve(total);
  for (const auto& f : fills) {
    for (const auto& w : f.wires) {
      cell.shapes.push_back({spec.layer, wire_rect(spec, f.track, w)});
    }
  }
  cell.sort_shapes();
  return cell;
}

}  // namespace layoutforge
