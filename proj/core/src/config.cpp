#include "layoutforge/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace layoutforge {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed,
                  const std::set<std::string>& required) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
  for (const auto& key : required) {
    if (!obj.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  }
}

double number(const json& obj, const std::string& where, const std::string& key) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  return v.get<double>();
}

DbUnit nm_field(const json& obj, const std::string& where, const std::string& key) {
  try {
    return nm_from_um(number(obj, where, key), where + "." + key);
  } catch (const SpecError& e) {
    throw ConfigError(e.what());
  }
}

std::int64_t int_field(const json& obj, const std::string& where, const std::string& key,
                       std::int64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
  return v.get<std::int64_t>();
}

double double_field(const json& obj, const std::string& where, const std::string& key,
                    double fallback) {
  if (!obj.contains(key)) return fallback;
  return number(obj, where, key);
}

std::string name_field(const json& obj, const std::string& where, const std::string& key,
                       std::string fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + " must be a string");
  return v.get<std::string>();
}

MetalSpec parse_metal(const json& obj, const std::string& where, std::uint64_t seed) {
  require_keys(obj, where,
               {"cellname", "wire_cd", "track_pitch", "min_t2t", "max_t2t",
                "min_length", "max_length", "t2t_grid", "total_x", "total_y"},
               {"wire_cd", "track_pitch", "min_t2t", "max_t2t", "min_length",
                "max_length", "t2t_grid", "total_x", "total_y"});
  MetalSpec spec;
  spec.wire_cd = nm_field(obj, where, "wire_cd");
  spec.track_pitch = nm_field(obj, where, "track_pitch");
  spec.min_t2t = nm_field(obj, where, "min_t2t");
  spec.max_t2t = nm_field(obj, where, "max_t2t");
  spec.min_length = nm_field(obj, where, "min_length");
  spec.max_length = nm_field(obj, where, "max_length");
  spec.t2t_grid = nm_field(obj, where, "t2t_grid");
  spec.total_x = nm_field(obj, where, "total_x");
  spec.total_y = nm_field(obj, where, "total_y");
  spec.seed = seed;
  spec.cell_name = name_field(obj, where, "cellname", "TOP");
  return spec;
}

// Sub-metal of a via level: t2t/length rules from the file, geometry tied to
// the via spec. Explicit wire_cd/track_pitch must agree with the via fields.
MetalSpec parse_via_metal(const json& obj, const std::string& where, DbUnit wire_cd,
                          DbUnit track_pitch, DbUnit total_x, DbUnit total_y,
                          Orientation orientation, int layer, std::uint64_t seed) {
  require_keys(obj, where,
               {"wire_cd", "track_pitch", "min_t2t", "max_t2t", "min_length",
                "max_length", "t2t_grid"},
               {"min_t2t", "max_t2t", "min_length", "max_length", "t2t_grid"});
  MetalSpec spec;
  spec.wire_cd = wire_cd;
  spec.track_pitch = track_pitch;
  if (obj.contains("wire_cd") && nm_field(obj, where, "wire_cd") != wire_cd) {
    throw ConfigError(where + ".wire_cd conflicts with the via size");
  }
  if (obj.contains("track_pitch") && nm_field(obj, where, "track_pitch") != track_pitch) {
    throw ConfigError(where + ".track_pitch conflicts with the via pitch");
  }
  spec.min_t2t = nm_field(obj, where, "min_t2t");
  spec.max_t2t = nm_field(obj, where, "max_t2t");
  spec.min_length = nm_field(obj, where, "min_length");
  spec.max_length = nm_field(obj, where, "max_length");
  spec.t2t_grid = nm_field(obj, where, "t2t_grid");
  spec.total_x = total_x;
  spec.total_y = total_y;
  spec.orientation = orientation;
  spec.layer = layer;
  spec.seed = seed;
  return spec;
}

ViaSpec parse_via(const json& obj, const std::string& where, std::uint64_t seed) {
  require_keys(obj, where,
               {"cellname", "via1_x", "via1_y", "m1_enc", "m2_enc",
                "min_via1_pitch_x", "min_via1_pitch_y", "via_fraction", "total_x",
                "total_y", "m1", "m2"},
               {"via1_x", "via1_y", "m1_enc", "m2_enc", "min_via1_pitch_x",
                "min_via1_pitch_y", "via_fraction", "total_x", "total_y", "m1",
                "m2"});
  ViaSpec spec;
  spec.via_x = nm_field(obj, where, "via1_x");
  spec.via_y = nm_field(obj, where, "via1_y");
  spec.enc_x = nm_field(obj, where, "m1_enc");
  spec.enc_y = nm_field(obj, where, "m2_enc");
  spec.pitch_x = nm_field(obj, where, "min_via1_pitch_x");
  spec.pitch_y = nm_field(obj, where, "min_via1_pitch_y");
  spec.fraction = number(obj, where, "via_fraction");
  const DbUnit total_x = nm_field(obj, where, "total_x");
  const DbUnit total_y = nm_field(obj, where, "total_y");
  spec.seed = seed;
  spec.cell_name = name_field(obj, where, "cellname", "VIA");

  std::uint64_t s1 = seed ^ 1, s2 = seed ^ 2;
  spec.m1 = parse_via_metal(obj.at("m1"), where + ".m1", spec.via_y, spec.pitch_y,
                            total_x, total_y, Orientation::kHorizontal, 1,
                            splitmix64_next(s1));
  spec.m2 = parse_via_metal(obj.at("m2"), where + ".m2", spec.via_x, spec.pitch_x,
                            total_x, total_y, Orientation::kVertical, 2,
                            splitmix64_next(s2));
  spec.via_layer = 3;
  return spec;
}

FeaturesConfig parse_features(const json& obj, const std::string& where) {
  require_keys(obj, where,
               {"clip_size", "pixel_size", "stride", "blocks", "keep", "r_max",
                "select_count", "spacing", "bins", "direction", "label_layer",
                "label_threshold"},
               {});
  FeaturesConfig f;
  if (obj.contains("clip_size")) f.clip_size = nm_field(obj, where, "clip_size");
  if (obj.contains("pixel_size")) f.pixel_size = nm_field(obj, where, "pixel_size");
  if (obj.contains("stride")) f.stride = nm_field(obj, where, "stride");
  f.blocks = static_cast<std::size_t>(int_field(obj, where, "blocks", 12));
  f.keep = static_cast<std::size_t>(int_field(obj, where, "keep", 32));
  f.r_max = static_cast<std::size_t>(int_field(obj, where, "r_max", 40));
  f.select_count = static_cast<std::size_t>(int_field(obj, where, "select_count", 8));
  f.spacing = static_cast<std::size_t>(int_field(obj, where, "spacing", 2));
  f.bins = static_cast<int>(int_field(obj, where, "bins", 16));
  const std::string dir = name_field(obj, where, "direction", "maximize");
  if (dir == "maximize") {
    f.direction = SelectDirection::kMaximize;
  } else if (dir == "minimize") {
    f.direction = SelectDirection::kMinimize;
  } else {
    throw ConfigError(where + ".direction must be 'maximize' or 'minimize'");
  }
  f.label_layer = static_cast<int>(int_field(obj, where, "label_layer", 0));
  f.label_threshold = double_field(obj, where, "label_threshold", 0.0);
  return f;
}

TrainSettings parse_train(const json& obj, const std::string& where) {
  require_keys(obj, where,
               {"loss", "beta", "gamma", "power", "ramp_as_printed", "learning_rate",
                "decay", "batch", "decay_interval", "iterations", "log_every"},
               {});
  TrainSettings t;
  const std::string loss = name_field(obj, where, "loss", "PSL");
  if (loss == "PSL") t.loss.kind = LossKind::kPsl;
  else if (loss == "PHL") t.loss.kind = LossKind::kPhl;
  else if (loss == "PLL") t.loss.kind = LossKind::kPll;
  else if (loss == "R") t.loss.kind = LossKind::kRamp;
  else if (loss == "PCL1") t.loss.kind = LossKind::kPcl1;
  else if (loss == "PCL2") t.loss.kind = LossKind::kPcl2;
  else throw ConfigError(where + ".loss must be one of PSL PHL PLL R PCL1 PCL2");
  t.loss.beta = double_field(obj, where, "beta", 3.0);
  t.loss.gamma = double_field(obj, where, "gamma", 0.7);
  t.loss.power = double_field(obj, where, "power", 2.0);
  if (obj.contains("ramp_as_printed")) {
    if (!obj.at("ramp_as_printed").is_boolean()) {
      throw ConfigError(where + ".ramp_as_printed must be a boolean");
    }
    t.loss.ramp_as_printed = obj.at("ramp_as_printed").get<bool>();
  }
  t.sgd.learning_rate = double_field(obj, where, "learning_rate", 1e-3);
  t.sgd.decay = double_field(obj, where, "decay", 0.65);
  t.sgd.batch = static_cast<int>(int_field(obj, where, "batch", 32));
  t.sgd.decay_interval = static_cast<int>(int_field(obj, where, "decay_interval", 2000));
  t.sgd.iterations = static_cast<int>(int_field(obj, where, "iterations", 10000));
  t.sgd.log_every = static_cast<int>(int_field(obj, where, "log_every", 100));
  return t;
}

EvalSettings parse_eval(const json& obj, const std::string& where) {
  require_keys(obj, where, {"seeds"}, {});
  EvalSettings e;
  if (obj.contains("seeds")) {
    const auto& arr = obj.at("seeds");
    if (!arr.is_array() || arr.empty()) {
      throw ConfigError(where + ".seeds must be a non-empty array");
    }
    e.seeds.clear();
    for (const auto& v : arr) {
      if (!v.is_number_integer()) throw ConfigError(where + ".seeds must hold integers");
      e.seeds.push_back(v.get<std::uint64_t>());
    }
  }
  return e;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json root = json::parse(json_text, nullptr, false);
  if (root.is_discarded()) throw ConfigError("config is not valid JSON");
  require_keys(root, "config", {"metal", "via", "features", "train", "eval", "seed", "output"},
               {});

  RunConfig cfg;
  if (root.contains("seed")) {
    if (!root.at("seed").is_number_integer()) {
      throw ConfigError("config.seed must be an integer");
    }
    cfg.seed = root.at("seed").get<std::uint64_t>();
  }
  cfg.output = name_field(root, "config", "output", "");

  if (root.contains("metal")) cfg.metal = parse_metal(root.at("metal"), "metal", cfg.seed);
  if (root.contains("via")) cfg.via = parse_via(root.at("via"), "via", cfg.seed);
  if (root.contains("features")) cfg.features = parse_features(root.at("features"), "features");
  if (root.contains("train")) cfg.train = parse_train(root.at("train"), "train");
  if (root.contains("eval")) cfg.eval = parse_eval(root.at("eval"), "eval");

  try {
    if (cfg.metal) cfg.metal->validate();
    if (cfg.via) cfg.via->validate();
  } catch (const SpecError& e) {
    throw ConfigError(std::string("config validation: ") + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

}  // namespace layoutforge
