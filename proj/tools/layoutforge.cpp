// Command-line front end: generation, checking, clip extraction, features,
// training and benchmarking driven by one JSON config.
#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "layoutforge/config.hpp"
#include "layoutforge/dataset.hpp"
#include "layoutforge/drc.hpp"
#include "layoutforge/features.hpp"
#include "layoutforge/gdsii.hpp"
#include "layoutforge/learning.hpp"
#include "layoutforge/metal.hpp"
#include "layoutforge/raster.hpp"
#include "layoutforge/via.hpp"

namespace fs = std::filesystem;
using namespace layoutforge;

namespace {

constexpr int kExitClean = 0;
constexpr int kExitViolations = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct Options {
  std::string config;
  std::string out;
  std::string input;
  std::optional<std::uint64_t> seed;
  bool full = false;
};

RunConfig load(const Options& opt) {
  if (opt.config.empty()) throw ConfigError("--config is required");
  RunConfig cfg = load_config(opt.config);
  if (opt.seed) {
    cfg.seed = *opt.seed;
    // Re-derive the seed-dependent specs.
    std::ifstream is(opt.config);
    std::stringstream ss;
    ss << is.rdbuf();
    nlohmann::json root = nlohmann::json::parse(ss.str());
    root["seed"] = *opt.seed;
    cfg = parse_config(root.dump());
  }
  return cfg;
}

int worker_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

fs::path out_or(const Options& opt, const RunConfig& cfg, const std::string& fallback) {
  if (!opt.out.empty()) return opt.out;
  if (!cfg.output.empty()) return cfg.output;
  return fallback;
}

int report_and_exit_code(const DrcReport& report) {
  write_report(std::cout, report);
  return report.clean() ? kExitClean : kExitViolations;
}

int cmd_gen_metal(const Options& opt) {
  const RunConfig cfg = load(opt);
  if (!cfg.metal) throw ConfigError("gen-metal needs a 'metal' section");
  const MetalSpec& spec = *cfg.metal;

  const Cell cell = draw_wire_cell(spec, worker_threads());
  const fs::path path = out_or(opt, cfg, spec.cell_name + ".gds");
  GdsLibrary lib;
  lib.cells.push_back(cell);
  const std::size_t bytes = write_gds(lib, path);

  std::cout << "cell " << spec.cell_name << ": " << spec.track_count() << " tracks, "
            << cell.shapes.size() << " shapes, " << bytes << " bytes -> "
            << path.string() << '\n';
  return report_and_exit_code(check_metal(cell, spec));
}

int cmd_gen_via(const Options& opt) {
  const RunConfig cfg = load(opt);
  if (!cfg.via) throw ConfigError("gen-via needs a 'via' section");
  const ViaSpec& spec = *cfg.via;

  const ViaLayout layout = generate_via_cell(spec);
  const Cell merged = merge_cells(spec.cell_name, layout.m1.bbox,
                                  {&layout.m1, &layout.m2, &layout.vias});
  const fs::path path = out_or(opt, cfg, spec.cell_name + ".gds");
  GdsLibrary lib;
  lib.cells.push_back(merged);
  const std::size_t bytes = write_gds(lib, path);

  std::cout << "cell " << spec.cell_name << ": " << layout.m1.shapes.size()
            << " m1 wires, " << layout.m2.shapes.size() << " m2 wires, "
            << layout.vias.shapes.size() << " vias, " << bytes << " bytes -> "
            << path.string() << '\n';
  const ViaStats& st = layout.stats;
  std::cout << "candidates=" << st.candidates << " post_density=" << st.post_density
            << " post_pitch=" << st.post_pitch
            << " realized_fraction=" << st.realized_fraction << '\n';

  DrcReport report = check_metal(layout.m1, spec.m1);
  const DrcReport m2_report = check_metal(layout.m2, spec.m2);
  const DrcReport via_report = check_via(layout.m1, layout.m2, layout.vias, spec);
  report.violations.insert(report.violations.end(), m2_report.violations.begin(),
                           m2_report.violations.end());
  report.violations.insert(report.violations.end(), via_report.violations.begin(),
                           via_report.violations.end());
  return report_and_exit_code(report);
}

// Splits a flat cell into per-layer cells with the spec's bounds.
Cell layer_view(const Cell& merged, int layer, const Rect& bbox) {
  Cell out{merged.name, bbox, {}};
  for (const Shape& s : merged.shapes) {
    if (s.layer == layer) out.shapes.push_back(s);
  }
  return out;
}

int cmd_drc(const Options& opt) {
  const RunConfig cfg = load(opt);
  if (opt.input.empty()) throw ConfigError("drc needs a layout file argument");
  const GdsLibrary lib = read_gds(opt.input);
  if (lib.cells.empty()) throw GdsError("no cells in " + opt.input, 0);
  const Cell& top = lib.cells.front();

  if (cfg.via) {
    const ViaSpec& spec = *cfg.via;
    const Cell m1 = layer_view(top, spec.m1.layer, spec.m1.bounds());
    const Cell m2 = layer_view(top, spec.m2.layer, spec.m2.bounds());
    const Cell vias = layer_view(top, spec.via_layer, spec.m1.bounds());

    DrcReport report = check_metal(m1, spec.m1);
    const DrcReport m2_report = check_metal(m2, spec.m2);
    const DrcReport via_report = check_via(m1, m2, vias, spec);
    report.violations.insert(report.violations.end(), m2_report.violations.begin(),
                             m2_report.violations.end());
    report.violations.insert(report.violations.end(), via_report.violations.begin(),
                             via_report.violations.end());

    const ViaDensityStats density = via_density_stats(m1, m2, vias, spec);
    std::cout << "via sites: " << density.placed << " placed / " << density.candidates
              << " candidates, realized_fraction=" << density.realized_fraction
              << '\n';
    return report_and_exit_code(report);
  }
  if (cfg.metal) {
    const MetalSpec& spec = *cfg.metal;
    Cell view = top;
    view.bbox = spec.bounds();
    return report_and_exit_code(check_metal(view, spec));
  }
  throw ConfigError("drc needs a 'metal' or 'via' section");
}

Cell layout_from_config_or_file(const Options& opt, const RunConfig& cfg) {
  if (!opt.input.empty()) {
    const GdsLibrary lib = read_gds(opt.input);
    if (lib.cells.empty()) throw GdsError("no cells in " + opt.input, 0);
    return lib.cells.front();
  }
  if (cfg.via) {
    const ViaLayout layout = generate_via_cell(*cfg.via);
    return merge_cells(cfg.via->cell_name, layout.m1.bbox,
                       {&layout.m1, &layout.m2, &layout.vias});
  }
  if (cfg.metal) return draw_wire_cell(*cfg.metal, worker_threads());
  throw ConfigError("clips needs a layout file or a 'metal'/'via' section");
}

int cmd_clips(const Options& opt) {
  const RunConfig cfg = load(opt);
  const FeaturesConfig& f = cfg.features;
  const Cell cell = layout_from_config_or_file(opt, cfg);

  const fs::path dir = out_or(opt, cfg, "clips");
  fs::create_directories(dir);

  const DbUnit step = f.stride > 0 ? f.stride : f.clip_size;
  std::vector<ClipEntry> entries;
  std::size_t index = 0;
  for (DbUnit y = cell.bbox.y_ll; y + f.clip_size <= cell.bbox.y_ur; y += step) {
    for (DbUnit x = cell.bbox.x_ll; x + f.clip_size <= cell.bbox.x_ur; x += step) {
      const Rect window{x, y, x + f.clip_size, y + f.clip_size};
      ClipEntry entry;
      char id[32];
      std::snprintf(id, sizeof(id), "clip_%06zu", index++);
      entry.id = id;
      entry.window = window;

      Cell clip{entry.id, window, {}};
      for (const Shape& s : cell.shapes) {
        if (const auto cut = rect_intersect(s.rect, window)) {
          clip.shapes.push_back({s.layer, *cut});
        }
      }
      clip.sort_shapes();

      if (f.label_layer > 0) {
        Cell labeled{entry.id, window, {}};
        for (const Shape& s : clip.shapes) {
          if (s.layer == f.label_layer) labeled.shapes.push_back(s);
        }
        const RasterClip raster = rasterize_clip(labeled, window, f.pixel_size);
        entry.label = raster.density() > f.label_threshold ? 1 : 0;
      }

      std::ofstream os(dir / (entry.id + ".jsonl"));
      if (!os) throw std::runtime_error("cannot write clip " + entry.id);
      write_shapes_jsonl(os, clip);
      entries.push_back(std::move(entry));
    }
  }
  write_clip_manifest(dir / "manifest.csv", entries);
  std::cout << entries.size() << " clips -> " << dir.string() << '\n';
  return kExitClean;
}

int cmd_features(const Options& opt) {
  const RunConfig cfg = load(opt);
  const FeaturesConfig& f = cfg.features;
  if (opt.input.empty()) throw ConfigError("features needs a clip directory argument");
  const fs::path clips_dir = opt.input;
  const auto entries = read_clip_manifest(clips_dir / "manifest.csv");

  const fs::path dir = out_or(opt, cfg, "features");
  fs::create_directories(dir);

  std::ofstream manifest(dir / "features.csv");
  if (!manifest) throw std::runtime_error("cannot write features manifest");
  manifest << "clip_id,tensor,label\n";

  std::vector<std::vector<double>> samples;
  std::vector<int> labels;
  for (const auto& e : entries) {
    std::ifstream is(clips_dir / (e.id + ".jsonl"));
    if (!is) throw std::runtime_error("missing clip file for " + e.id);
    Cell clip{e.id, e.window, read_shapes_jsonl(is)};
    const RasterClip raster = rasterize_clip(clip, e.window, f.pixel_size);

    const FeatureTensor tensor = feature_tensor(raster, f.blocks, f.keep);
    const fs::path tensor_path = dir / (e.id + ".tensor");
    write_tensor(tensor_path, tensor);
    manifest << e.id << ',' << tensor_path.filename().string() << ','
             << (e.label == 1 ? "hotspot" : e.label == 0 ? "non-hotspot" : "") << '\n';

    if (e.label >= 0 && f.select_count > 0) {
      samples.push_back(ccas_sample(raster, f.r_max));
      labels.push_back(e.label);
    }
  }

  if (!samples.empty()) {
    const bool two_classes =
        std::count(labels.begin(), labels.end(), 1) > 0 &&
        std::count(labels.begin(), labels.end(), 0) > 0;
    if (two_classes) {
      CircleSelectConfig sel{f.select_count, f.spacing, f.bins, f.direction};
      const auto chosen = select_circles(samples, labels, sel);
      std::ofstream circles(dir / "circles.csv");
      circles << "circle,mi,selected\n";
      for (std::size_t i = 0; i < f.r_max; ++i) {
        std::vector<double> column(samples.size());
        for (std::size_t s = 0; s < samples.size(); ++s) column[s] = samples[s][i];
        const double mi = mutual_information(discretize(column, f.bins), labels);
        const bool selected =
            std::find(chosen.begin(), chosen.end(), i + 1) != chosen.end();
        circles << (i + 1) << ',' << mi << ',' << (selected ? 1 : 0) << '\n';
      }
    }
  }
  std::cout << entries.size() << " tensors -> " << dir.string() << '\n';
  return kExitClean;
}

int cmd_train(const Options& opt) {
  const RunConfig cfg = load(opt);
  if (opt.input.empty()) throw ConfigError("train needs a label,feature CSV argument");
  const ScoredDataset data = to_scored(read_labeled_csv(opt.input));

  TrainConfig sgd = cfg.train.sgd;
  sgd.seed = cfg.seed;
  std::vector<TrainLogRow> log;
  const LinearModel model = train_pairwise(data, cfg.train.loss, sgd, &log);

  const fs::path log_path = out_or(opt, cfg, "train_log.csv");
  std::ofstream os(log_path);
  if (!os) throw std::runtime_error("cannot write " + log_path.string());
  os << "iter,loss,auc,lr\n";
  os.precision(12);
  for (const auto& row : log) {
    os << row.iter << ',' << row.loss << ',' << row.auc << ',' << row.lr << '\n';
  }

  nlohmann::json model_json;
  model_json["weights"] = model.weights;
  model_json["bias"] = model.bias;
  model_json["loss"] = to_string(cfg.train.loss.kind);
  const fs::path model_path = log_path.string() + ".model.json";
  std::ofstream ms(model_path);
  ms << model_json.dump(2) << '\n';

  std::cout << "loss " << to_string(cfg.train.loss.kind) << ": final auc "
            << auc(model, data) << ", final loss "
            << pairwise_loss(model, cfg.train.loss, data) << ", log -> "
            << log_path.string() << '\n';
  return kExitClean;
}

int cmd_eval(const Options& opt) {
  const RunConfig cfg = load(opt);
  if (opt.input.empty()) throw ConfigError("eval needs a label,feature CSV argument");
  const auto rows = read_labeled_csv(opt.input);
  const ScoredDataset data = to_scored(rows);

  std::vector<Metrics> runs;
  std::ostringstream table;
  table << "id,accuracy,false_alarm\n";
  for (std::size_t i = 0; i < cfg.eval.seeds.size(); ++i) {
    TrainConfig sgd = cfg.train.sgd;
    sgd.seed = cfg.eval.seeds[i];
    const LinearModel model = train_pairwise(data, cfg.train.loss, sgd);

    std::vector<int> predictions, labels;
    predictions.reserve(rows.size());
    labels.reserve(rows.size());
    for (const auto& row : rows) {
      predictions.push_back(model.score(row.features) > 0.0 ? 1 : 0);
      labels.push_back(row.label);
    }
    const Metrics m = evaluate(predictions, labels);
    runs.push_back(m);
    table << (i + 1) << ',' << m.accuracy << ',' << m.false_alarm << '\n';
  }

  const VarianceReport report = variance_report(runs);
  table << "Ave," << report.accuracy.mean << ',' << report.false_alarm.mean << '\n';
  if (runs.size() > 1) {
    table << "Var," << report.accuracy.variance << ',' << report.false_alarm.variance
          << '\n';
  }

  if (!opt.out.empty()) {
    std::ofstream os(opt.out);
    if (!os) throw std::runtime_error("cannot write " + opt.out);
    os << table.str();
  }
  std::cout << table.str();
  return kExitClean;
}

int cmd_bench(const Options& opt) {
  if (opt.input.empty()) throw ConfigError("bench needs a config directory argument");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(opt.input)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ConfigError("no .json configs in " + opt.input);

  // CI-friendly default: shrink cells to 10x10 um; --full benches as filed.
  constexpr DbUnit kSmall = 10000;
  constexpr int kReps = 5;

  std::ostringstream csv;
  csv << "cell,area_um2,seconds,throughput_um2_per_s\n";
  for (const auto& file : files) {
    RunConfig cfg = load_config(file);
    std::string cell;
    DbUnit total_x = 0, total_y = 0;
    std::vector<double> seconds;

    const auto time_reps = [&](auto&& generate) {
      for (int rep = 0; rep < kReps; ++rep) {
        const auto start = std::chrono::steady_clock::now();
        generate();
        const auto stop = std::chrono::steady_clock::now();
        seconds.push_back(std::chrono::duration<double>(stop - start).count());
      }
    };

    if (cfg.metal) {
      MetalSpec spec = *cfg.metal;
      if (!opt.full) {
        spec.total_x = std::min(spec.total_x, kSmall);
        spec.total_y = std::min(spec.total_y, kSmall);
      }
      cell = spec.cell_name;
      total_x = spec.total_x;
      total_y = spec.total_y;
      time_reps([&] { draw_wire_cell(spec, 1); });
    } else if (cfg.via) {
      ViaSpec spec = *cfg.via;
      if (!opt.full) {
        spec.m1.total_x = std::min(spec.m1.total_x, kSmall);
        spec.m1.total_y = std::min(spec.m1.total_y, kSmall);
        spec.m2.total_x = spec.m1.total_x;
        spec.m2.total_y = spec.m1.total_y;
      }
      cell = spec.cell_name;
      total_x = spec.m1.total_x;
      total_y = spec.m1.total_y;
      time_reps([&] { generate_via_cell(spec); });
    } else {
      continue;
    }

    std::sort(seconds.begin(), seconds.end());
    const double median = seconds[seconds.size() / 2];
    const double area =
        um_from_nm(total_x) * um_from_nm(total_y);
    csv << cell << ',' << area << ',' << median << ',' << area / median << '\n';
  }

  if (!opt.out.empty()) {
    std::ofstream os(opt.out);
    if (!os) throw std::runtime_error("cannot write " + opt.out);
    os << csv.str();
  }
  std::cout << csv.str();
  return kExitClean;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic metal/via layout synthesis, checking and evaluation"};
  app.require_subcommand(1);

  Options opt;
  const auto add_common = [&](CLI::App* sub, bool with_input, const char* input_name) {
    sub->add_option("--config", opt.config, "JSON run configuration");
    sub->add_option("--seed", opt.seed, "override the config seed");
    sub->add_option("--out", opt.out, "output path");
    sub->add_flag("--full", opt.full, "run full-size cells");
    if (with_input) sub->add_option(input_name, opt.input, "")->required(false);
    return sub;
  };

  auto* gen_metal = add_common(app.add_subcommand("gen-metal", "generate a wire cell"),
                               false, "");
  auto* gen_via = add_common(app.add_subcommand("gen-via", "generate a via cell"),
                             false, "");
  auto* drc = add_common(app.add_subcommand("drc", "check a layout against rules"),
                         true, "layout");
  auto* clips = add_common(app.add_subcommand("clips", "slice a layout into clips"),
                           true, "layout");
  auto* features = add_common(
      app.add_subcommand("features", "extract feature tensors from clips"), true,
      "clips_dir");
  auto* train = add_common(app.add_subcommand("train", "train a pairwise ranker"),
                           true, "data_csv");
  auto* eval = add_common(app.add_subcommand("eval", "multi-seed variance table"),
                          true, "data_csv");
  auto* bench = add_common(app.add_subcommand("bench", "generation throughput table"),
                           true, "config_dir");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (gen_metal->parsed()) return cmd_gen_metal(opt);
    if (gen_via->parsed()) return cmd_gen_via(opt);
    if (drc->parsed()) return cmd_drc(opt);
    if (clips->parsed()) return cmd_clips(opt);
    if (features->parsed()) return cmd_features(opt);
    if (train->parsed()) return cmd_train(opt);
    if (eval->parsed()) return cmd_eval(opt);
    if (bench->parsed()) return cmd_bench(opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SpecError& e) {
    std::cerr << "spec error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const GdsError& e) {
    std::cerr << "stream error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}
