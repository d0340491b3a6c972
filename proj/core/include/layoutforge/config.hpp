#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "layoutforge/features.hpp"
#include "layoutforge/learning.hpp"
#include "layoutforge/metal.hpp"
#include "layoutforge/via.hpp"

namespace layoutforge {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Clip extraction and feature knobs; lengths in nm after loading.
struct FeaturesConfig {
  DbUnit clip_size = 1200;
  DbUnit pixel_size = 10;
  DbUnit stride = 0;  // 0 steps by clip_size
  std::size_t blocks = 12;
  std::size_t keep = 32;
  std::size_t r_max = 40;
  std::size_t select_count = 8;
  std::size_t spacing = 2;
  int bins = 16;
  SelectDirection direction = SelectDirection::kMaximize;
  // Density labeling for demo datasets: a clip is a hotspot when the given
  // layer's pixel density exceeds the threshold. Layer 0 leaves labels out.
  int label_layer = 0;
  double label_threshold = 0.0;
};

struct TrainSettings {
  SurrogateLoss loss;
  TrainConfig sgd;
};

struct EvalSettings {
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
};

// One JSON file drives every subcommand; sections are independent. Unknown
// keys are rejected so typos cannot silently fall back to defaults. Lengths
// are microns in the file and validated to be whole nanometers.
struct RunConfig {
  std::optional<MetalSpec> metal;
  std::optional<ViaSpec> via;
  FeaturesConfig features;
  TrainSettings train;
  EvalSettings eval;
  std::uint64_t seed = 1;
  std::string output;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace layoutforge
