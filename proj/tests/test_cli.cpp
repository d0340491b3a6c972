#include <sys/wait.h>

#include <filesystem>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "layoutforge/gdsii.hpp"

using namespace layoutforge;

namespace {

int run_cli(const std::string& args, const std::string& log = "") {
  std::string cmd = std::string(LAYOUTFORGE_BIN) + " " + args;
  cmd += log.empty() ? " > /dev/null 2>&1" : " > " + log + " 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct TempFile {
  std::string path;
  explicit TempFile(std::string name) : path(std::move(name)) {}
  ~TempFile() { std::remove(path.c_str()); }
};

// Small cell so generation plus checking stays in the millisecond range.
const char* kTinyMetal = R"({
  "metal": {"cellname": "CLITEST", "wire_cd": 0.016, "track_pitch": 0.032,
            "min_t2t": 0.012, "max_t2t": 0.2, "min_length": 0.1,
            "max_length": 0.2, "t2t_grid": 0.005,
            "total_x": 3.0, "total_y": 3.0}
})";

std::string write_tiny_config(const std::string& path) {
  std::ofstream os(path);
  os << kTinyMetal;
  return path;
}

}  // namespace

TEST_CASE("help succeeds and a missing subcommand is a usage error") {
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("") == 2);
  CHECK(run_cli("no-such-command") == 2);
}

TEST_CASE("gen-metal writes a clean cell and reports it") {
  const TempFile cfg("cli_gen_test.json");
  const TempFile gds("cli_gen_test.gds");
  const TempFile log("cli_gen_test.log");
  write_tiny_config(cfg.path);

  CHECK(run_cli("gen-metal --config " + cfg.path + " --out " + gds.path,
                log.path) == 0);
  const std::string text = slurp(log.path);
  CHECK(text.find("cell CLITEST:") != std::string::npos);
  CHECK(text.find("total 0 violations") != std::string::npos);

  const GdsLibrary lib = read_gds(gds.path);
  REQUIRE(lib.cells.size() == 1);
  CHECK(lib.cells.front().name == "CLITEST");
  CHECK(!lib.cells.front().shapes.empty());
}

TEST_CASE("generation is byte-identical per seed and moves with it") {
  const TempFile cfg("cli_seed_test.json");
  const TempFile a("cli_seed_a.gds");
  const TempFile b("cli_seed_b.gds");
  const TempFile c("cli_seed_c.gds");
  write_tiny_config(cfg.path);

  CHECK(run_cli("gen-metal --config " + cfg.path + " --out " + a.path) == 0);
  CHECK(run_cli("gen-metal --config " + cfg.path + " --out " + b.path) == 0);
  CHECK(run_cli("gen-metal --config " + cfg.path + " --seed 9 --out " + c.path) == 0);

  const std::string bytes_a = slurp(a.path);
  CHECK(!bytes_a.empty());
  CHECK(bytes_a == slurp(b.path));
  CHECK(bytes_a != slurp(c.path));
}

TEST_CASE("drc re-checks a written file and flags planted violations") {
  const TempFile cfg("cli_drc_test.json");
  const TempFile gds("cli_drc_test.gds");
  const TempFile log("cli_drc_test.log");
  write_tiny_config(cfg.path);

  CHECK(run_cli("gen-metal --config " + cfg.path + " --out " + gds.path) == 0);
  CHECK(run_cli("drc --config " + cfg.path + " " + gds.path, log.path) == 0);
  CHECK(slurp(log.path).find("total 0 violations") != std::string::npos);

  // A wire one nanometer too wide on the first track.
  const Cell bad{"BADCELL", {}, {{1, {0, 0, 100, 17}}}};
  const TempFile bad_gds("cli_drc_bad.gds");
  write_gds(GdsLibrary{"LIB", {bad}}, bad_gds.path);
  CHECK(run_cli("drc --config " + cfg.path + " " + bad_gds.path,
                log.path) == 1);
  const std::string text = slurp(log.path);
  CHECK(text.find("WidthCD") != std::string::npos);
  CHECK(text.find("total 0 violations") == std::string::npos);
}

TEST_CASE("config problems exit with the usage code") {
  const TempFile bad("cli_badkey_test.json");
  {
    std::ofstream os(bad.path);
    os << R"({"metal": {"bogus": 1}})";
  }
  CHECK(run_cli("gen-metal --config " + bad.path + " --out x.gds") == 2);
  CHECK(run_cli("gen-metal --config cli_absent_5150.json --out x.gds") == 2);

  // Valid file, wrong section for the subcommand.
  const TempFile via_only("cli_noviasec_test.json");
  {
    std::ofstream os(via_only.path);
    os << R"({"seed": 3})";
  }
  CHECK(run_cli("gen-via --config " + via_only.path + " --out x.gds") == 2);
}

TEST_CASE("unreadable layout data exits with the io code") {
  const TempFile cfg("cli_io_test.json");
  const TempFile junk("cli_io_junk.gds");
  write_tiny_config(cfg.path);
  {
    std::ofstream os(junk.path, std::ios::binary);
    os << "this is not a layout stream";
  }
  CHECK(run_cli("drc --config " + cfg.path + " " + junk.path) == 3);
}

TEST_CASE("clip extraction, features and training chain together") {
  const TempFile cfg("cli_chain_test.json");
  const TempFile gds("cli_chain_test.gds");
  {
    std::ofstream os(cfg.path);
    // Label layer 1 with a density threshold near the median clip fill so
    // both classes appear among the clips.
    os << R"({
      "metal": {"cellname": "CHAIN", "wire_cd": 0.016, "track_pitch": 0.032,
                "min_t2t": 0.012, "max_t2t": 0.2, "min_length": 0.1,
                "max_length": 0.2, "t2t_grid": 0.005,
                "total_x": 3.0, "total_y": 3.0},
      "features": {"clip_size": 0.5, "pixel_size": 0.01, "blocks": 10,
                   "keep": 8, "r_max": 12, "select_count": 2, "spacing": 1,
                   "bins": 8, "label_layer": 1, "label_threshold": 0.29}
    })";
  }
  CHECK(run_cli("gen-metal --config " + cfg.path + " --out " + gds.path) == 0);

  const std::string dir = "cli_chain_clips";
  std::filesystem::remove_all(dir);
  CHECK(run_cli("clips --config " + cfg.path + " " + gds.path + " --out " + dir) == 0);
  CHECK(slurp(dir + "/manifest.csv").find("clip_id,window,label") == 0);

  CHECK(run_cli("features --config " + cfg.path + " " + dir + " --out " + dir) == 0);
  const std::string features_csv = slurp(dir + "/features.csv");
  CHECK(features_csv.find("clip_id,tensor,label") == 0);
  CHECK(features_csv.find(",hotspot") != std::string::npos);
  CHECK(features_csv.find(",non-hotspot") != std::string::npos);
  CHECK(slurp(dir + "/circles.csv").find("circle,mi,selected") == 0);

  // Train from a hand-made table: feature 0 separates the classes.
  const TempFile table("cli_train_test.csv");
  {
    std::ofstream os(table.path);
    for (int i = 0; i < 16; ++i) {
      os << "1," << 1.0 + 0.01 * i << ",0.5\n";
      os << "0," << -1.0 - 0.01 * i << ",0.5\n";
    }
  }
  const TempFile train_cfg("cli_train_cfg.json");
  {
    std::ofstream os(train_cfg.path);
    os << R"({"train": {"loss": "PSL", "learning_rate": 0.05, "batch": 8,
                        "iterations": 200, "log_every": 100}})";
  }
  const TempFile train_log("cli_train_out.csv");
  const TempFile model("cli_train_out.csv.model.json");
  const TempFile run_log("cli_train_run.log");
  CHECK(run_cli("train --config " + train_cfg.path + " " + table.path +
                    " --out " + train_log.path,
                run_log.path) == 0);
  const std::string log_text = slurp(train_log.path);
  CHECK(log_text.find("iter,loss,auc,lr") == 0);
  CHECK(log_text.find("\n200,") != std::string::npos);
  CHECK(slurp(model.path).find("weights") != std::string::npos);

  std::filesystem::remove_all(dir);
}

TEST_CASE("eval repeats training across seeds and summarizes") {
  const TempFile table("cli_eval_test.csv");
  {
    std::ofstream os(table.path);
    for (int i = 0; i < 16; ++i) {
      os << "1," << 1.0 + 0.01 * i << "\n0," << -1.0 - 0.01 * i << "\n";
    }
  }
  const TempFile cfg("cli_eval_cfg.json");
  {
    std::ofstream os(cfg.path);
    os << R"({"train": {"loss": "PHL", "learning_rate": 0.05, "batch": 8,
                        "iterations": 200, "log_every": 0},
              "eval": {"seeds": [1, 2]}})";
  }
  const TempFile out("cli_eval_out.csv");
  const TempFile log("cli_eval_run.log");
  CHECK(run_cli("eval --config " + cfg.path + " " + table.path + " --out " +
                    out.path,
                log.path) == 0);
  const std::string text = slurp(out.path);
  CHECK(text.find("id,accuracy,false_alarm") == 0);
  CHECK(text.find("\n1,1,0") != std::string::npos);
  CHECK(text.find("\n2,1,0") != std::string::npos);
  CHECK(text.find("\nAve,") != std::string::npos);
  CHECK(text.find("\nVar,") != std::string::npos);
  CHECK(slurp(log.path) == text);
}
