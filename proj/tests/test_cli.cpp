// End-to-end checks of the command-line driver, run against the built binary.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "json.hpp"

#include "ttc/image_io.hpp"
#include "ttc/rng.hpp"
#include "ttc/synth.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kWork = [] {
  fs::path p = fs::temp_directory_path() / "ttc_cli_tests";
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}();

std::string path(const std::string& name) { return (kWork / name).string(); }

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + TTC_CLI_PATH + "\" " + args +
                          " > " + path("stdout.txt") + " 2> " +
                          path("stderr.txt");
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& p) {
  std::ifstream is(p);
  return std::string((std::istreambuf_iterator<char>(is)), {});
}

json load_json(const std::string& p) {
  std::ifstream is(p);
  json j;
  is >> j;
  return j;
}

}  // namespace

TEST_CASE("golden run reproduces the committed RSE") {
  REQUIRE(run("synth --dims 32x32x3 --ranks 4,3 --fraction 0.5 --seed 21 "
              "--out-dir " +
              path("synth")) == 0);
  REQUIRE(run("complete --observations " + path("synth/observations.csv") +
              " --dims 32x32x3 --truth " + path("synth/truth.dt") +
              " --factors \"32;32;3\" --ranks 4,3 --init zero --sweeps 6"
              " --metrics-out " + path("metrics.json") + " --diag " +
              path("diag.csv") + " --out " + path("completed.dt")) == 0);
  const double rse = load_json(path("metrics.json"))["rse"];
  CHECK(std::abs(rse - 0.0017731052986859573) <= 1e-9);

  // diagnostics carry the documented columns
  const std::string diag = slurp(path("diag.csv"));
  CHECK(diag.rfind("sweep,half,residual,rse_train,lambda_1,lambda_2,seconds",
                   0) == 0);

  // metrics subcommand agrees with the run metrics
  REQUIRE(run("metrics --truth " + path("synth/truth.dt") + " --estimate " +
              path("completed.dt") + " --out " + path("metrics2.json")) == 0);
  const double rse2 = load_json(path("metrics2.json"))["rse"];
  CHECK(std::abs(rse2 - rse) < 1e-15);
}

TEST_CASE("dry run plans without solving") {
  REQUIRE(run("complete --observations " + path("synth/observations.csv") +
              " --dims 32x32x3 --r2 4 --rmid 4 --rd 3 --dry-run") == 0);
  const std::string out = slurp(path("stdout.txt"));
  CHECK(out.find("chain:") != std::string::npos);
  CHECK(out.find("ranks:") != std::string::npos);
  CHECK(out.find("residual:") == std::string::npos);
}

TEST_CASE("missing inputs exit with the config error code") {
  CHECK(run("complete --observations does_not_exist.csv --dims 4x4") == 2);
  CHECK(run("complete --image missing.ppm --fraction 0.5") == 2);
  CHECK(run("metrics --truth missing.dt --estimate missing.dt") == 2);
}

TEST_CASE("mask generation and image-based completion") {
  // a smooth little image
  ttc::rng::Engine g = ttc::rng::make_engine(5);
  ttc::DenseTensor img({12, 12, 3});
  for (ttc::Index c = 1; c <= 3; ++c)
    for (ttc::Index j = 1; j <= 12; ++j)
      for (ttc::Index i = 1; i <= 12; ++i)
        img.at({i, j, c}) = 0.5 + 0.4 * std::sin(0.3 * i + 0.2 * j + c);
  ttc::save_image(img, path("img.ppm"));

  REQUIRE(run("mask --image " + path("img.ppm") +
              " --fraction 0.5 --mode iid --seed 3 --out " +
              path("obs.csv")) == 0);
  // 72 pixels kept, every channel observed
  std::ifstream is(path("obs.csv"));
  int lines = 0;
  std::string line;
  while (std::getline(is, line))
    if (!line.empty()) ++lines;
  CHECK(lines == 216);

  REQUIRE(run("mask --dims 12x12x3 --fraction 0.5 --mode iid --seed 3 --out " +
              path("mask.ppm")) == 0);
  REQUIRE(run("complete --image " + path("img.ppm") + " --mask " +
              path("mask.ppm") +
              " --factors \"3,4;4,3;3\" --r2 3 --rmid 6 --rd 3"
              " --lambda 1.0 --sweeps 4 --metrics-out " +
              path("img_metrics.json") + " --out " + path("img_out.ppm")) ==
          0);
  const json m = load_json(path("img_metrics.json"));
  CHECK(m["rse"].get<double>() < 0.2);
  CHECK(fs::exists(path("img_out.ppm")));
}

TEST_CASE("cross-validation writes a sorted score table") {
  REQUIRE(run("cv --observations " + path("synth/observations.csv") +
              " --dims 32x32x3 --factors \"32;32;3\""
              " --candidates \"1,1,0,3;4,4,0,3\" --trials 2 --holdout 0.1"
              " --sweeps 8 --init zero --seed 4 --out " +
              path("cv.csv")) == 0);
  std::ifstream is(path("cv.csv"));
  std::string header, first;
  std::getline(is, header);
  std::getline(is, first);
  CHECK(header ==
        "r2,rmid,rdm1,rd,mean_rse,parameters,selected");
  // best row first, flagged selected
  CHECK(first.rfind("4,4", 0) == 0);
  CHECK(first.back() == '1');
}

TEST_CASE("video frames with a sensor mask complete in grouped mode") {
  ttc::rng::Engine g = ttc::rng::make_engine(6);
  fs::create_directories(path("frames"));
  for (int t = 0; t < 4; ++t) {
    ttc::DenseTensor frame({8, 8, 3});
    for (ttc::Index c = 1; c <= 3; ++c)
      for (ttc::Index j = 1; j <= 8; ++j)
        for (ttc::Index i = 1; i <= 8; ++i)
          frame.at({i, j, c}) =
              0.5 + 0.3 * std::sin(0.4 * i + 0.3 * j + 0.2 * t + c);
    char name[32];
    std::snprintf(name, sizeof(name), "frames/f%02d.ppm", t);
    ttc::save_image(frame, path(name));
  }
  REQUIRE(run("complete --frames " + path("frames") +
              " --fraction 0.75 --mask-mode sensor --seed 9 --grouped 2"
              " --factors \"8;8;4;3\" --r2 4 --rmid 4 --init zero --sweeps 8"
              " --metrics-out " + path("video_metrics.json") + " --out " +
              path("video_out")) == 0);
  CHECK(load_json(path("video_metrics.json"))["rse"].get<double>() < 0.2);
  CHECK(fs::exists(path("video_out/frame_0000.ppm")));
  CHECK(fs::exists(path("video_out/frame_0003.ppm")));
}
