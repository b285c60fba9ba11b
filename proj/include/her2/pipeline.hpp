#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "her2/modality_map.hpp"
#include "her2/model_gateway.hpp"
#include "her2/render.hpp"
#include "her2/scoring.hpp"
#include "her2/slide_grid.hpp"

namespace her2 {

enum class ScoringMode { kFourWay, kBinary };

std::string_view ScoringModeName(ScoringMode mode);  // "fourway" / "binary"
ScoringMode ParseScoringMode(std::string_view text);

struct PipelineConfig {
  int tile_size_px = 512;
  int workers = 1;
  // Binary mode restricts each histogram to labels 1 and 4 before fusion.
  ScoringMode mode = ScoringMode::kFourWay;
  // When set, per-patch overlays and heatmaps plus slide mosaics are written
  // under <artifact_root>/<case_id>/{overlays,heatmaps,mosaics}.
  std::optional<std::filesystem::path> artifact_root;
  bool write_mosaics = true;
  Palette palette = Palette::Default();
  HeatmapStyle heatmap_style;
};

struct CaseReport {
  std::string case_id;
  ScoringMode mode = ScoringMode::kFourWay;
  GridSpec he_spec;
  GridSpec ihc_spec;
  SlideScore slide;
  // Paths relative to <artifact_root>/<case_id>, sorted.
  std::vector<std::string> artifacts;
};

// For every H&E coordinate h with IHC counterpart c = map(h): segment and
// stain-classify the IHC patch at c, tumor-classify the H&E patch at h, fuse
// and aggregate. Output is identical for any worker count. Failures name the
// IHC coordinate; the mapping must be a bijection (kNotInvertible otherwise).
CaseReport RunPipeline(const SlideImage& he_slide, const SlideImage& ihc_slide,
                       const ModalityMapping& mapping, ModelGateway& gateway,
                       const PipelineConfig& config);

// Key order: case_id, wsi_score, coverage_pct, binary_status, scoring_mode,
// grid, records (sorted by row, col), artifacts. Compact, newline-terminated.
std::string CaseReportJson(const CaseReport& report);
// One line per patch record.
std::string CaseReportCsv(const CaseReport& report);

// Writes report.json and report.csv into <root>/<case_id>/.
void WriteCaseReport(const CaseReport& report, const std::filesystem::path& root);

}  // namespace her2
