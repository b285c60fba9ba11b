#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "her2/error.hpp"
#include "her2/pipeline.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace her2;

namespace {

CaseReport Run(const fixture::SlidePair& p, int workers, ScoringMode mode = ScoringMode::kFourWay,
               std::optional<fs::path> artifacts = std::nullopt) {
  ModelGateway gw(ModelBindings{});
  PipelineConfig cfg;
  cfg.tile_size_px = 64;
  cfg.workers = workers;
  cfg.mode = mode;
  cfg.artifact_root = artifacts;
  const GridSpec spec = ComputeGridSpec(p.he.width_px(), p.he.height_px(), 64);
  return RunPipeline(p.he, p.ihc, ModalityMapping::Identity(spec), gw, cfg);
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("planted case scores 3+ with quarter coverage") {
  const auto p = fixture::PlantedCase();
  const CaseReport r = Run(p, 1);
  CHECK(r.slide.wsi_score == Her2Score::k3Plus);
  CHECK(r.slide.coverage_pct == 25.0);
  CHECK(r.slide.binary_status == BinaryStatus::kPositive);
  REQUIRE(r.slide.patch_records.size() == 16);
  const auto& faint = r.slide.patch_records[3];
  CHECK(faint.coord == PatchCoord{0, 3});
  CHECK(faint.score == Her2Score::k1Plus);
  CHECK(faint.annotation == "F/1+");
  const auto& normal = r.slide.patch_records[13];
  CHECK(normal.coord == PatchCoord{3, 1});
  CHECK(normal.tumor.label == TumorLabel::kNormal);
  CHECK(normal.histogram.count(4) > 0);
  CHECK(normal.score == Her2Score::k0);
  CHECK(r.slide.patch_records[0].annotation == "S/3+");
  CHECK(r.slide.patch_records[1].annotation == "0");
}

TEST_CASE("report bytes do not depend on worker count") {
  const auto p = fixture::PlantedCase();
  const std::string one = CaseReportJson(Run(p, 1));
  CHECK(CaseReportJson(Run(p, 8)) == one);
  CHECK(one.back() == '\n');
  const auto j = nlohmann::json::parse(one);
  CHECK(j.at("wsi_score") == "3+");
  CHECK(j.at("coverage_pct") == 25.0);
  CHECK(j.at("records").size() == 16);
}

TEST_CASE("binary mode drops 1+ and 2+ pixels") {
  auto p = fixture::PlantedCase();
  // Make one strong cell weak instead: 4-way gives 2+, binary gives 0.
  p.ihc.raster.FillRect(128, 64, 64, 64, {200, 150, 80});
  const CaseReport four = Run(p, 1);
  const CaseReport bin = Run(p, 1, ScoringMode::kBinary);
  CHECK(four.slide.patch_records[6].score == Her2Score::k2Plus);
  CHECK(bin.slide.patch_records[6].score == Her2Score::k0);
  CHECK(bin.slide.coverage_pct == 18.75);
  CHECK(bin.slide.wsi_score == Her2Score::k3Plus);
  CHECK(nlohmann::json::parse(CaseReportJson(bin)).at("scoring_mode") == "binary");
}

TEST_CASE("non-bijective mapping is refused") {
  const auto p = fixture::PlantedCase();
  ModelGateway gw(ModelBindings{});
  PipelineConfig cfg;
  cfg.tile_size_px = 64;
  const GridSpec spec{64, 4, 4};
  const auto shifted = ModalityMapping::AffineGrid(1, 1, 0, 1, spec, spec);
  try {
    RunPipeline(p.he, p.ihc, shifted, gw, cfg);
    FAIL("expected not-invertible");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNotInvertible);
  }
}

TEST_CASE("mirrored mapping pairs each h&e tile with its counterpart") {
  auto p = fixture::PlantedCase();
  // Flip the IHC slide left to right and map columns c -> 3 - c.
  RgbImage flipped(p.ihc.raster.width(), p.ihc.raster.height());
  for (int y = 0; y < flipped.height(); ++y)
    for (int x = 0; x < flipped.width(); ++x)
      flipped.set(flipped.width() - 1 - x, y, p.ihc.raster.at(x, y));
  p.ihc.raster = flipped;
  const GridSpec spec{64, 4, 4};
  const auto mirror = ModalityMapping::AffineGrid(1, -1, 0, 3, spec, spec);
  ModelGateway gw(ModelBindings{});
  PipelineConfig cfg;
  cfg.tile_size_px = 64;
  const CaseReport r = RunPipeline(p.he, p.ihc, mirror, gw, cfg);
  CHECK(r.slide.wsi_score == Her2Score::k3Plus);
  CHECK(r.slide.coverage_pct == 25.0);
  const auto& rec = r.slide.patch_records[0];  // IHC (0,0) pairs with H&E (0,3)
  CHECK(rec.he_coord == PatchCoord{0, 3});
  CHECK(rec.score == Her2Score::k1Plus);
}

TEST_CASE("artifacts are written and indexed") {
  const auto p = fixture::PlantedCase();
  const fs::path root = fs::temp_directory_path() / "her2_pipeline_artifacts";
  fs::remove_all(root);
  const CaseReport r = Run(p, 2, ScoringMode::kFourWay, root);
  WriteCaseReport(r, root);
  const fs::path dir = root / "planted";
  CHECK(fs::exists(dir / "overlays" / "r0_c0.png"));
  CHECK(fs::exists(dir / "heatmaps" / "r3_c3.png"));
  CHECK(fs::exists(dir / "mosaics" / "ihc_overlay.png"));
  CHECK(fs::exists(dir / "mosaics" / "he_heatmap.png"));
  CHECK(fs::exists(dir / "report.json"));
  CHECK(std::is_sorted(r.artifacts.begin(), r.artifacts.end()));
  for (const auto& a : r.artifacts) CHECK(fs::exists(dir / a));
  const std::string csv = Slurp(dir / "report.csv");
  CHECK(csv.rfind("row,col,he_row,he_col,score,annotation", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);
  fs::remove_all(root);
}

TEST_CASE("model errors name the patch") {
  const auto p = fixture::PlantedCase();
  ModelBindings b;
  b.segmenter.backend = Backend::kSidecar;
  b.segmenter.sidecar_command = std::string(FAKE_SIDECAR) + " bad-labels";
  ModelGateway gw(b);
  PipelineConfig cfg;
  cfg.tile_size_px = 64;
  cfg.workers = 3;
  try {
    RunPipeline(p.he, p.ihc, ModalityMapping::Identity({64, 4, 4}), gw, cfg);
    FAIL("expected protocol-violation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kProtocolViolation);
    CHECK(std::string(e.what()).find("patch (0,0)") != std::string::npos);
  }
}

TEST_CASE("modality mix-ups are rejected") {
  const auto p = fixture::PlantedCase();
  ModelGateway gw(ModelBindings{});
  PipelineConfig cfg;
  cfg.tile_size_px = 64;
  CHECK_THROWS_AS(RunPipeline(p.ihc, p.he, ModalityMapping::Identity({64, 4, 4}), gw, cfg),
                  Error);
}

}
