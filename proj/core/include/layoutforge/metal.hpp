#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "layoutforge/geometry.hpp"
#include "layoutforge/prng.hpp"

namespace layoutforge {

enum class Orientation { kHorizontal, kVertical };

// Unidirectional wiring rules for one metal layer. Horizontal cells stack
// tracks in y and run wires in x; vertical transposes the roles.
struct MetalSpec {
  DbUnit wire_cd = 0;
  DbUnit track_pitch = 0;
  DbUnit min_t2t = 0;
  DbUnit max_t2t = 0;
  DbUnit min_length = 0;
  DbUnit max_length = 0;
  DbUnit t2t_grid = 0;
  DbUnit total_x = 0;
  DbUnit total_y = 0;
  DbUnit origin_x = 0;
  DbUnit origin_y = 0;
  Orientation orientation = Orientation::kHorizontal;
  int layer = 1;
  std::uint64_t seed = 0;
  std::string cell_name = "TOP";

  void validate() const;  // throws SpecError naming the offending field

  DbUnit along_extent() const {
    return orientation == Orientation::kHorizontal ? total_x : total_y;
  }
  DbUnit cross_extent() const {
    return orientation == Orientation::kHorizontal ? total_y : total_x;
  }
  std::int64_t track_count() const {
    if (cross_extent() < wire_cd) return 0;
    return (cross_extent() - wire_cd) / track_pitch + 1;
  }
  Rect bounds() const {
    return {origin_x, origin_y, origin_x + total_x, origin_y + total_y};
  }
};

struct WireSegment {
  DbUnit start = 0;   // along-track offset from the cell origin
  DbUnit length = 0;

  friend bool operator==(const WireSegment&, const WireSegment&) = default;
};

struct TrackFill {
  std::int64_t track = 0;
  std::vector<WireSegment> wires;

  friend bool operator==(const TrackFill&, const TrackFill&) = default;
};

// Draw source for one track; split out so tests can pin every draw.
class WireRandom {
 public:
  virtual ~WireRandom() = default;
  virtual DbUnit wire_length(DbUnit lo, DbUnit hi) = 0;
  virtual std::optional<DbUnit> tip_gap(DbUnit lo, DbUnit hi, DbUnit grid) = 0;
};

class PrngWireRandom final : public WireRandom {
 public:
  explicit PrngWireRandom(Prng prng) : prng_(prng) {}
  DbUnit wire_length(DbUnit lo, DbUnit hi) override { return rand_int(prng_, lo, hi); }
  std::optional<DbUnit> tip_gap(DbUnit lo, DbUnit hi, DbUnit grid) override {
    return rand_grid(prng_, lo, hi, grid);
  }

 private:
  Prng prng_;
};

// Per-track stream; tracks can be generated in any order or in parallel and
// still reproduce the serial result.
Prng track_prng(const MetalSpec& spec, std::int64_t track);

// Packs one track left to right: wire, gridded tip gap, wire, ... until the
// remaining span cannot hold a minimum-length wire.
TrackFill draw_wire_track(const MetalSpec& spec, std::int64_t track, WireRandom& rng);

Rect wire_rect(const MetalSpec& spec, std::int64_t track, const WireSegment& wire);

// Full cell; `threads` > 1 fans tracks across workers, output is identical to
// the serial path.
Cell draw_wire_cell(const MetalSpec& spec, int threads = 1);

}  // namespace layoutforge
