#include <sstream>

#include "doctest.h"
#include "layoutforge/drc.hpp"
#include "layoutforge/metal.hpp"
#include "layoutforge/via.hpp"

using namespace layoutforge;

namespace {

MetalSpec metal_rules() {
  MetalSpec spec;
  spec.wire_cd = 16;
  spec.track_pitch = 32;
  spec.min_t2t = 12;
  spec.max_t2t = 200;
  spec.min_length = 44;
  spec.max_length = 100;
  spec.t2t_grid = 5;
  spec.total_x = 2000;
  spec.total_y = 2000;
  spec.seed = 1;
  return spec;
}

Cell metal_fixture() {
  Cell cell{"M", {0, 0, 2000, 2000}, {}};
  cell.shapes = {
      {1, {0, 0, 44, 16}},
      {1, {56, 0, 156, 16}},
      {1, {0, 32, 100, 48}},
  };
  return cell;
}

ViaSpec via_rules() {
  ViaSpec spec;
  spec.via_x = 70;
  spec.via_y = 70;
  spec.enc_x = 20;
  spec.enc_y = 20;
  spec.pitch_x = 140;
  spec.pitch_y = 140;
  spec.fraction = 0.5;
  spec.m1.wire_cd = 70;
  spec.m1.track_pitch = 140;
  spec.m2 = spec.m1;
  spec.m2.orientation = Orientation::kVertical;
  return spec;
}

Cell bare(const char* name, std::vector<Shape> shapes) {
  return Cell{name, {-1000, -1000, 3000, 3000}, std::move(shapes)};
}

}  // namespace

TEST_CASE("clean hand-built metal passes every rule") {
  CHECK(check_metal(metal_fixture(), metal_rules()).clean());
}

TEST_CASE("limits are inclusive: measured equal to the rule is clean") {
  // Gap exactly min_t2t, lengths exactly min and max.
  Cell cell = metal_fixture();
  cell.shapes[1] = {1, {56, 0, 156, 16}};
  CHECK(check_metal(cell, metal_rules()).clean());
}

TEST_CASE("width deviation is flagged with measured and limit") {
  Cell cell = metal_fixture();
  cell.shapes[2] = {1, {0, 32, 100, 49}};
  const DrcReport report = check_metal(cell, metal_rules());
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].kind == ViolationKind::kWidthCd);
  CHECK(report.violations[0].measured == 17);
  CHECK(report.violations[0].limit == 16);
}

TEST_CASE("off-track placement reports the pitch remainder") {
  Cell cell = metal_fixture();
  cell.shapes[2] = {1, {0, 40, 100, 56}};
  const DrcReport report = check_metal(cell, metal_rules());
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].kind == ViolationKind::kOffTrack);
  CHECK(report.violations[0].measured == 8);
}

TEST_CASE("length rules catch both ends") {
  Cell cell = metal_fixture();
  cell.shapes[2] = {1, {0, 32, 43, 48}};
  CHECK(check_metal(cell, metal_rules()).has(ViolationKind::kLengthBelowMin));

  cell = metal_fixture();
  cell.shapes[2] = {1, {0, 32, 101, 48}};
  CHECK(check_metal(cell, metal_rules()).has(ViolationKind::kLengthAboveMax));
}

TEST_CASE("shapes leaving the cell bounds are flagged") {
  Cell cell = metal_fixture();
  cell.shapes[2] = {1, {1960, 32, 2004, 48}};
  CHECK(check_metal(cell, metal_rules()).has(ViolationKind::kOutOfBounds));
}

TEST_CASE("same-track overlap is flagged") {
  Cell cell = metal_fixture();
  cell.shapes.push_back({1, {40, 0, 90, 16}});
  CHECK(check_metal(cell, metal_rules()).has(ViolationKind::kSameTrackOverlap));
}

TEST_CASE("tip gaps outside the window or off grid are flagged") {
  Cell cell = metal_fixture();
  cell.shapes[1] = {1, {51, 0, 151, 16}};
  DrcReport report = check_metal(cell, metal_rules());
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].kind == ViolationKind::kT2TBelowMin);
  CHECK(report.violations[0].measured == 7);

  cell.shapes[1] = {1, {245, 0, 345, 16}};
  report = check_metal(cell, metal_rules());
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].kind == ViolationKind::kT2TAboveMax);
  CHECK(report.violations[0].measured == 201);

  cell.shapes[1] = {1, {57, 0, 157, 16}};
  report = check_metal(cell, metal_rules());
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].kind == ViolationKind::kT2TOffGrid);
  CHECK(report.violations[0].measured == 13);
  CHECK(report.violations[0].limit == 5);
}

TEST_CASE("generated cells come back clean from the checker") {
  MetalSpec spec = metal_rules();
  for (std::uint64_t seed : {1ull, 99ull, 12345ull}) {
    spec.seed = seed;
    CHECK(check_metal(draw_wire_cell(spec), spec).clean());
  }
  spec.orientation = Orientation::kVertical;
  CHECK(check_metal(draw_wire_cell(spec), spec).clean());
}

TEST_CASE("covered via with generous margins is clean") {
  const Cell m1 = bare("M1", {{1, {100, 0, 360, 70}}});
  const Cell m2 = bare("M2", {{2, {140, -200, 210, 230}}});
  const Cell vias = bare("V", {{3, {140, 0, 210, 70}}});
  CHECK(check_via(m1, m2, vias, via_rules()).clean());
}

TEST_CASE("enclosure margins exactly at the rule are clean") {
  const Cell m1 = bare("M1", {{1, {120, 0, 230, 70}}});
  const Cell m2 = bare("M2", {{2, {140, -20, 210, 90}}});
  const Cell vias = bare("V", {{3, {140, 0, 210, 70}}});
  CHECK(check_via(m1, m2, vias, via_rules()).clean());
}

TEST_CASE("wrong cut size is flagged") {
  const Cell m1 = bare("M1", {{1, {100, 0, 360, 70}}});
  const Cell m2 = bare("M2", {{2, {140, -200, 215, 230}}});
  const Cell vias = bare("V", {{3, {140, 0, 211, 70}}});
  const DrcReport report = check_via(m1, m2, vias, via_rules());
  CHECK(report.has(ViolationKind::kViaSize));
}

TEST_CASE("thin x margin is an x enclosure violation") {
  const Cell m1 = bare("M1", {{1, {100, 0, 360, 70}}});
  const Cell m2 = bare("M2", {{2, {100, -200, 190, 230}}});
  const Cell vias = bare("V", {{3, {110, 0, 180, 70}}});
  const DrcReport report = check_via(m1, m2, vias, via_rules());
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].kind == ViolationKind::kViaEnclosureX);
  CHECK(report.violations[0].measured == 10);
  CHECK(report.violations[0].limit == 20);
}

TEST_CASE("thin y margin is a y enclosure violation") {
  const Cell m1 = bare("M1", {{1, {100, 40, 360, 110}}});
  const Cell m2 = bare("M2", {{2, {140, 30, 210, 300}}});
  const Cell vias = bare("V", {{3, {140, 40, 210, 110}}});
  const DrcReport report = check_via(m1, m2, vias, via_rules());
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].kind == ViolationKind::kViaEnclosureY);
  CHECK(report.violations[0].measured == 10);
}

TEST_CASE("a cut with no wire under it is uncovered") {
  const Cell m1 = bare("M1", {});
  const Cell m2 = bare("M2", {{2, {140, -200, 210, 230}}});
  const Cell vias = bare("V", {{3, {140, 0, 210, 70}}});
  const DrcReport report = check_via(m1, m2, vias, via_rules());
  CHECK(report.has(ViolationKind::kViaUncovered));
}

TEST_CASE("same-row cuts closer than the pitch are flagged") {
  const Cell m1 = bare("M1", {{1, {-100, 0, 400, 70}}});
  const Cell m2 = bare("M2", {{2, {0, -200, 70, 230}}, {2, {100, -200, 170, 230}}});
  const Cell vias = bare("V", {{3, {0, 0, 70, 70}}, {3, {100, 0, 170, 70}}});
  const DrcReport report = check_via(m1, m2, vias, via_rules());
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].kind == ViolationKind::kViaPitchX);
  CHECK(report.violations[0].measured == 100);
  CHECK(report.violations[0].limit == 140);
}

TEST_CASE("same-column cuts closer than the pitch are flagged") {
  const Cell m1 =
      bare("M1", {{1, {-100, 0, 400, 70}}, {1, {-100, 100, 400, 170}}});
  const Cell m2 = bare("M2", {{2, {0, -200, 70, 400}}});
  const Cell vias = bare("V", {{3, {0, 0, 70, 70}}, {3, {0, 100, 70, 170}}});
  const DrcReport report = check_via(m1, m2, vias, via_rules());
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].kind == ViolationKind::kViaPitchY);
  CHECK(report.violations[0].measured == 100);
}

TEST_CASE("cuts exactly one pitch apart are clean") {
  const Cell m1 = bare("M1", {{1, {-100, 0, 400, 70}}});
  const Cell m2 = bare("M2", {{2, {0, -200, 70, 230}}, {2, {140, -200, 210, 230}}});
  const Cell vias = bare("V", {{3, {0, 0, 70, 70}}, {3, {140, 0, 210, 70}}});
  CHECK(check_via(m1, m2, vias, via_rules()).clean());
}

TEST_CASE("zero pitch disables the spacing rule") {
  ViaSpec spec = via_rules();
  spec.pitch_x = 0;
  spec.pitch_y = 0;
  const Cell m1 = bare("M1", {{1, {-100, 0, 400, 70}}});
  const Cell m2 = bare("M2", {{2, {0, -200, 70, 230}}, {2, {100, -200, 170, 230}}});
  const Cell vias = bare("V", {{3, {0, 0, 70, 70}}, {3, {100, 0, 170, 70}}});
  CHECK(check_via(m1, m2, vias, spec).clean());
}

TEST_CASE("report lines carry kind, box, measured and limit") {
  DrcReport report;
  report.violations.push_back({ViolationKind::kWidthCd, {0, 32, 100, 49}, 17, 16});
  std::ostringstream os;
  write_report(os, report);
  CHECK(os.str() == "WidthCD 0 32 100 49 17 16\ntotal 1 violations\n");

  std::ostringstream empty;
  write_report(empty, DrcReport{});
  CHECK(empty.str() == "total 0 violations\n");
}

TEST_CASE("violation kinds print their rule names") {
  CHECK(std::string(to_string(ViolationKind::kWidthCd)) == "WidthCD");
  CHECK(std::string(to_string(ViolationKind::kOffTrack)) == "OffTrack");
  CHECK(std::string(to_string(ViolationKind::kViaUncovered)) == "ViaUncovered");
  CHECK(std::string(to_string(ViolationKind::kViaPitchY)) == "ViaPitchY");
}

TEST_CASE("density recount from raw geometry matches the generator") {
  ViaSpec spec = via_rules();
  spec.m1.min_t2t = 50;
  spec.m1.max_t2t = 300;
  spec.m1.min_length = 100;
  spec.m1.max_length = 600;
  spec.m1.t2t_grid = 10;
  spec.m1.total_x = 4000;
  spec.m1.total_y = 4000;
  spec.m1.seed = 11;
  spec.m2 = spec.m1;
  spec.m2.orientation = Orientation::kVertical;
  spec.m2.layer = 2;
  spec.m2.seed = 22;
  spec.seed = 7;

  const ViaLayout layout = generate_via_cell(spec);
  const ViaDensityStats stats =
      via_density_stats(layout.m1, layout.m2, layout.vias, spec);
  CHECK(stats.candidates == layout.stats.candidates);
  CHECK(stats.placed == layout.stats.post_pitch);
  CHECK(stats.realized_fraction == doctest::Approx(layout.stats.realized_fraction));
}
