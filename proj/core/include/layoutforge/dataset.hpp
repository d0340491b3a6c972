#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "layoutforge/geometry.hpp"
#include "layoutforge/learning.hpp"

namespace layoutforge {

// Clip dataset on disk: one JSON-lines shape file per clip next to a manifest
// with rows `clip_id,window,label`. Windows serialize as x_ll:y_ll:x_ur:y_ur
// in nm; labels are `hotspot`, `non-hotspot`, or empty when unknown.
struct ClipEntry {
  std::string id;
  Rect window;
  int label = -1;  // 1 hotspot, 0 non-hotspot, -1 unlabeled

  friend bool operator==(const ClipEntry&, const ClipEntry&) = default;
};

std::string window_string(const Rect& window);
Rect parse_window(const std::string& text);

void write_clip_manifest(const std::filesystem::path& path,
                         const std::vector<ClipEntry>& entries);
std::vector<ClipEntry> read_clip_manifest(const std::filesystem::path& path);

// Flat training rows: `label,feature0,feature1,...` per line, label 1 or 0.
struct LabeledRow {
  int label = 0;
  std::vector<double> features;

  friend bool operator==(const LabeledRow&, const LabeledRow&) = default;
};

void write_labeled_csv(const std::filesystem::path& path,
                       const std::vector<LabeledRow>& rows);
std::vector<LabeledRow> read_labeled_csv(const std::filesystem::path& path);

ScoredDataset to_scored(const std::vector<LabeledRow>& rows);

}  // namespace layoutforge
