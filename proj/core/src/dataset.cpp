#include "layoutforge/dataset.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace layoutforge {

std::string window_string(const Rect& w) {
  std::ostringstream os;
  os << w.x_ll << ':' << w.y_ll << ':' << w.x_ur << ':' << w.y_ur;
  return os.str();
}

Rect parse_window(const std::string& text) {
  Rect w;
  char c1, c2, c3;
  std::istringstream is(text);
  if (!(is >> w.x_ll >> c1 >> w.y_ll >> c2 >> w.x_ur >> c3 >> w.y_ur) || c1 != ':' ||
      c2 != ':' || c3 != ':') {
    throw std::runtime_error("malformed window '" + text + "'");
  }
  return w;
}

void write_clip_manifest(const std::filesystem::path& path,
                         const std::vector<ClipEntry>& entries) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << "clip_id,window,label\n";
  for (const auto& e : entries) {
    os << e.id << ',' << window_string(e.window) << ','
       << (e.label == 1 ? "hotspot" : e.label == 0 ? "non-hotspot" : "") << '\n';
  }
  if (!os) throw std::runtime_error("short write to " + path.string());
}

std::vector<ClipEntry> read_clip_manifest(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::vector<ClipEntry> entries;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (first) {
      first = false;
      if (line.rfind("clip_id,", 0) == 0) continue;  // header
    }
    if (line.empty()) continue;
    std::istringstream ls(line);
    ClipEntry e;
    std::string window, label;
    if (!std::getline(ls, e.id, ',') || !std::getline(ls, window, ',')) {
      throw std::runtime_error("malformed manifest line '" + line + "'");
    }
    std::getline(ls, label);
    e.window = parse_window(window);
    e.label = label == "hotspot" ? 1 : label == "non-hotspot" ? 0 : -1;
    entries.push_back(std::move(e));
  }
  return entries;
}

void write_labeled_csv(const std::filesystem::path& path,
                       const std::vector<LabeledRow>& rows) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os.precision(17);
  for (const auto& row : rows) {
    os << row.label;
    for (double f : row.features) os << ',' << f;
    os << '\n';
  }
  if (!os) throw std::runtime_error("short write to " + path.string());
}

std::vector<LabeledRow> read_labeled_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::vector<LabeledRow> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (!std::isdigit(static_cast<unsigned char>(line[0])) && line[0] != '-' &&
        line[0] != '+') {
      continue;  // header
    }
    std::istringstream ls(line);
    LabeledRow row;
    std::string tok;
    if (!std::getline(ls, tok, ',')) continue;
    const int raw = std::stoi(tok);
    if (raw != 0 && raw != 1 && raw != -1) {
      throw std::runtime_error("label must be 1, 0 or -1 in '" + line + "'");
    }
    row.label = raw == 1 ? 1 : 0;
    while (std::getline(ls, tok, ',')) row.features.push_back(std::stod(tok));
    rows.push_back(std::move(row));
  }
  return rows;
}

ScoredDataset to_scored(const std::vector<LabeledRow>& rows) {
  ScoredDataset data;
  for (const auto& row : rows) {
    (row.label == 1 ? data.positives : data.negatives).push_back(row.features);
  }
  return data;
}

}  // namespace layoutforge
