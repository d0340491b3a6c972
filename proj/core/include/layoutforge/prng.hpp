#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "layoutforge/geometry.hpp"

namespace layoutforge {

// splitmix64 step: advances state by the 64-bit golden ratio and mixes with
// two xorshift-multiply rounds. One output per step.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class Prng {
 public:
  explicit Prng(std::uint64_t seed) : state_(seed) {}

  // Independent stream: state is the output of one splitmix64 step over
  // (seed XOR stream). Streams with distinct ids never share a sequence.
  static Prng for_stream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed ^ stream;
    return Prng(splitmix64_next(s));
  }

  std::uint64_t next() { return splitmix64_next(state_); }

  // Uniform in [0, 1), 53 mantissa bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Uniform integer in [lo, hi], both ends inclusive. Consumes exactly one draw;
// the 128-bit multiply-shift maps without rejection.
inline DbUnit rand_int(Prng& rng, DbUnit lo, DbUnit hi) {
  if (lo > hi) throw std::invalid_argument("rand_int: lo > hi");
  const std::uint64_t span =
      static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  const std::uint64_t draw = rng.next();
  if (span == 0) return static_cast<DbUnit>(draw);  // full 64-bit range
  const std::uint64_t scaled = static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(draw) * span) >> 64);
  return lo + static_cast<DbUnit>(scaled);
}

// Uniform over {lo, lo+grid, ...} clipped to hi. Empty interval reports
// nullopt without consuming a draw.
inline std::optional<DbUnit> rand_grid(Prng& rng, DbUnit lo, DbUnit hi, DbUnit grid) {
  if (grid <= 0) throw std::invalid_argument("rand_grid: grid must be positive");
  if (hi < lo) return std::nullopt;
  const DbUnit steps = (hi - lo) / grid;
  return lo + grid * rand_int(rng, 0, steps);
}

}  // namespace layoutforge
