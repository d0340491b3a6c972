#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "layoutforge/geometry.hpp"

namespace layoutforge {

struct GdsError : std::runtime_error {
  GdsError(const std::string& message, std::size_t offset)
      : std::runtime_error(message + " (byte offset " + std::to_string(offset) + ")"),
        offset(offset) {}
  std::size_t offset;
};

// Fixed stamps by default so identical layouts serialize byte for byte.
struct GdsTimestamps {
  std::int16_t year = 2000;
  std::int16_t month = 1;
  std::int16_t day = 1;
  std::int16_t hour = 0;
  std::int16_t minute = 0;
  std::int16_t second = 0;

  static GdsTimestamps now();

  friend bool operator==(const GdsTimestamps&, const GdsTimestamps&) = default;
};

// Stream subset: one library, flat BOUNDARY-only structures, user unit
// 0.001 (um per db unit), database unit 1e-9 m. Names are 1-32 chars from
// [A-Z0-9_$].
struct GdsLibrary {
  std::string name = "LAYOUTFORGE";
  std::vector<Cell> cells;
  GdsTimestamps stamp;
};

// Excess-64 base-16 float; e.g. 1.0 encodes as 41 10 00 00 00 00 00 00.
std::array<std::uint8_t, 8> encode_real8(double value);
double decode_real8(const std::array<std::uint8_t, 8>& bytes);

std::vector<std::uint8_t> encode_gds(const GdsLibrary& lib);
GdsLibrary decode_gds(const std::uint8_t* data, std::size_t size);

// Returns the byte count written.
std::size_t write_gds(const GdsLibrary& lib, const std::filesystem::path& path);
GdsLibrary read_gds(const std::filesystem::path& path);

// Debug geometry: one {"layer":n,"rect":[x_ll,y_ll,x_ur,y_ur]} object per line.
void write_shapes_jsonl(std::ostream& os, const Cell& cell);
std::vector<Shape> read_shapes_jsonl(std::istream& is);

}  // namespace layoutforge
