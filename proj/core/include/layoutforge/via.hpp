#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "layoutforge/geometry.hpp"
#include "layoutforge/metal.hpp"
#include "layoutforge/prng.hpp"

namespace layoutforge {

// Via level between a horizontal metal (m1, below) and a vertical metal
// (m2, above). Cuts sit on track crossings; pitch_x/pitch_y of 0 disables the
// spacing constraint on that axis.
struct ViaSpec {
  DbUnit via_x = 0;
  DbUnit via_y = 0;
  DbUnit enc_x = 0;  // margin to m1 line ends
  DbUnit enc_y = 0;  // margin to m2 line ends
  DbUnit pitch_x = 0;
  DbUnit pitch_y = 0;
  double fraction = 0.0;  // survival probability per candidate site
  MetalSpec m1;
  MetalSpec m2;
  int via_layer = 3;
  std::uint64_t seed = 0;
  std::string cell_name = "VIA";

  void validate() const;
};

// Wires pulled back from their line ends; a cut is legal wherever it fits
// inside both assist layers. Segments at or below twice the shrink vanish.
using AssistLayer = std::vector<Rect>;
AssistLayer build_assist_layer(const Cell& cell, DbUnit shrink, Orientation orientation);

class CandidateMatrix {
 public:
  CandidateMatrix() = default;
  CandidateMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), bits_(rows * cols, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool at(std::size_t r, std::size_t c) const { return bits_[r * cols_ + c] != 0; }
  void set(std::size_t r, std::size_t c, bool v) { bits_[r * cols_ + c] = v ? 1 : 0; }
  std::int64_t count() const;

  friend bool operator==(const CandidateMatrix&, const CandidateMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

struct CandidateBuild {
  CandidateMatrix overlap;  // wires cross at the site, no margin applied
  CandidateMatrix legal;    // crossing covers the cut with both margins
  // Row-major per site: wire crossing when present, and the cut footprint.
  std::vector<std::optional<Rect>> crossing;
  std::vector<Rect> site;
};

// Row i is m1 track i (y ascending), column j is m2 track j (x ascending).
CandidateBuild build_candidate_matrix(const Cell& m1, const Cell& m2, const ViaSpec& spec);

// Keeps each set entry with probability `fraction`; row-major scan, one draw
// per set entry.
CandidateMatrix apply_density(const CandidateMatrix& m, double fraction, Prng& rng);

// Two row-major passes: first clears an entry whose row-neighbor (i-1, j)
// survives, then one whose column-neighbor (i, j-1) survives. Adjacent
// crossings sit exactly one pitch apart, so survivors keep clear spacing.
CandidateMatrix remove_pitch_conflicts(const CandidateMatrix& m);

struct ViaStats {
  std::int64_t candidates = 0;
  std::int64_t post_density = 0;
  std::int64_t post_pitch = 0;
  double realized_fraction = 0.0;
};

struct ViaLayout {
  Cell m1;
  Cell m2;
  Cell vias;
  ViaStats stats;
};

// Full pipeline: both metals, candidate matrix, density sampling, pitch
// pruning, cut emission. Deterministic in the spec alone.
ViaLayout generate_via_cell(const ViaSpec& spec);

}  // namespace layoutforge
