#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "her2/error.hpp"
#include "her2/run_config.hpp"

namespace fs = std::filesystem;
using namespace her2;

TEST_SUITE("run_config") {

TEST_CASE("full config parses") {
  const RunConfig c = ParseRunConfig(R"(
he_slide = "he.png"
ihc_slide = "/data/ihc.tif"
case_id = "C6"
tile_size_px = 256
scoring_mode = "binary"
output_dir = "results"
workers = 4
[mapping]
kind = "affine"
scale = [1.0, -1.0]
offset = 3
[models.segment]
backend = "sidecar"
sidecar_command = "python -m sidecar"
input_size_px = 256
)",
                                     "/cfg");
  CHECK(c.he_slide_path == fs::path("/cfg/he.png"));
  CHECK(c.ihc_slide_path == fs::path("/data/ihc.tif"));
  CHECK(c.output_dir == fs::path("/cfg/results"));
  CHECK(c.case_id == "C6");
  CHECK(c.tile_size_px == 256);
  CHECK(c.workers == 4);
  CHECK(c.scoring_mode == ScoringMode::kBinary);
  CHECK(c.mapping.kind == MappingKind::kAffineGrid);
  CHECK(c.mapping.scale_col == -1.0);
  CHECK(c.mapping.offset_row == 3.0);
  CHECK(c.mapping.offset_col == 3.0);
  CHECK(c.bindings.segmenter.backend == Backend::kSidecar);
  CHECK(c.bindings.segmenter.input_size_px == 256);
  CHECK(c.bindings.tumor.backend == Backend::kBuiltinRule);
  CHECK(c.bindings.tumor.input_size_px == 244);
}

TEST_CASE("defaults") {
  const RunConfig c = ParseRunConfig("he_slide = 'a.png'\nihc_slide = 'b.png'\n");
  CHECK(c.tile_size_px == 512);
  CHECK(c.workers == 1);
  CHECK(c.mapping.kind == MappingKind::kIdentity);
  CHECK(c.scoring_mode == ScoringMode::kFourWay);
}

TEST_CASE("bad configs") {
  CHECK_THROWS_AS(ParseRunConfig("he_slide = 'a.png'\n"), Error);
  CHECK_THROWS_AS(ParseRunConfig("he_slide = 'a.png'\nihc_slide = 'b.png'\n[mapping]\nkind = 'warp'\n"),
                  Error);
  CHECK_THROWS_AS(ParseRunConfig("he_slide = 'a.png'\nihc_slide = 'b.png'\nscoring_mode = '3way'\n"),
                  Error);
  CHECK_THROWS_AS(ParseRunConfig("this is = = not toml"), Error);
}

TEST_CASE("validate checks paths and ranges") {
  RunConfig c = ParseRunConfig("he_slide = '/nonexistent/he.png'\nihc_slide = '/nonexistent/ihc.png'\n");
  try {
    c.Validate();
    FAIL("expected io error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kIo);
    CHECK(std::string(e.what()).find("/nonexistent/he.png") != std::string::npos);
  }
  const fs::path dir = fs::temp_directory_path() / "her2_cfg";
  fs::create_directories(dir);
  std::ofstream(dir / "x.png") << "";
  c.he_slide_path = c.ihc_slide_path = dir / "x.png";
  CHECK_NOTHROW(c.Validate());
  c.tile_size_px = 8;
  CHECK_THROWS_AS(c.Validate(), Error);
  c.tile_size_px = 512;
  c.workers = 0;
  CHECK_THROWS_AS(c.Validate(), Error);
  fs::remove_all(dir);
}

TEST_CASE("mapping resolution") {
  MappingParams id;
  CHECK(id.Resolve({512, 2, 2}, {512, 2, 2}).kind() == MappingKind::kIdentity);
  CHECK_THROWS_AS(id.Resolve({512, 2, 2}, {512, 3, 2}), Error);
}

TEST_CASE("load from file resolves relative paths") {
  const fs::path dir = fs::temp_directory_path() / "her2_cfg_load";
  fs::create_directories(dir);
  std::ofstream(dir / "run.toml") << "he_slide = 'he.png'\nihc_slide = 'ihc.png'\n";
  const RunConfig c = LoadRunConfig(dir / "run.toml");
  CHECK(c.he_slide_path == dir / "he.png");
  CHECK_THROWS_AS(LoadRunConfig(dir / "missing.toml"), Error);
  fs::remove_all(dir);
}

}
