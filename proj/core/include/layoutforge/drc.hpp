#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "layoutforge/geometry.hpp"
#include "layoutforge/metal.hpp"
#include "layoutforge/via.hpp"

namespace layoutforge {

// Checks are written directly against the rule definitions and share no code
// with the generators; each check visits every shape even after earlier
// failures. All limits are inclusive: measured == limit is clean.
enum class ViolationKind {
  kWidthCd,
  kOffTrack,
  kT2TBelowMin,
  kT2TAboveMax,
  kT2TOffGrid,
  kLengthBelowMin,
  kLengthAboveMax,
  kOutOfBounds,
  kSameTrackOverlap,
  kViaSize,
  kViaEnclosureX,
  kViaEnclosureY,
  kViaPitchX,
  kViaPitchY,
  kViaUncovered,
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  Rect where;
  DbUnit measured = 0;  // offending distance for distance-type rules
  DbUnit limit = 0;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct DrcReport {
  std::vector<Violation> violations;

  bool clean() const { return violations.empty(); }
  std::map<ViolationKind, std::int64_t> counts() const;
  bool has(ViolationKind kind) const;
};

DrcReport check_metal(const Cell& cell, const MetalSpec& spec);
DrcReport check_via(const Cell& m1, const Cell& m2, const Cell& vias,
                    const ViaSpec& spec);

struct ViaDensityStats {
  std::int64_t candidates = 0;  // sites recounted from the metal geometry
  std::int64_t placed = 0;
  double realized_fraction = 0.0;
};

// Recounts legal sites straight from the wire geometry; does not consult the
// generator's candidate matrix.
ViaDensityStats via_density_stats(const Cell& m1, const Cell& m2, const Cell& vias,
                                  const ViaSpec& spec);

// One line per violation, `KIND x_ll y_ll x_ur y_ur measured limit`, then a
// summary line with the total.
void write_report(std::ostream& os, const DrcReport& report);

}  // namespace layoutforge
