#include "her2/pipeline.hpp"

#include <fstream>
#include <sstream>

#include "her2/error.hpp"
#include "her2/parallel.hpp"
#include "json.hpp"

namespace her2 {

using ordered_json = nlohmann::ordered_json;

std::string_view ScoringModeName(ScoringMode mode) {
  return mode == ScoringMode::kFourWay ? "fourway" : "binary";
}

ScoringMode ParseScoringMode(std::string_view text) {
  if (text == "fourway") return ScoringMode::kFourWay;
  if (text == "binary") return ScoringMode::kBinary;
  Fail(ErrorKind::kInvalidArgument, "unknown scoring mode '" + std::string(text) + "'");
}

namespace {

void CheckGrid(const SlideImage& slide, const GridSpec& expected, int tile,
               std::string_view what) {
  const GridSpec actual = ComputeGridSpec(slide.width_px(), slide.height_px(), tile);
  if (actual != expected) {
    Fail(ErrorKind::kInvalidArgument,
         std::string(what) + " slide grid " + std::to_string(actual.rows) + "x" +
             std::to_string(actual.cols) + " does not match the mapping grid " +
             std::to_string(expected.rows) + "x" + std::to_string(expected.cols));
  }
}

}  // namespace

CaseReport RunPipeline(const SlideImage& he_slide, const SlideImage& ihc_slide,
                       const ModalityMapping& mapping, ModelGateway& gateway,
                       const PipelineConfig& config) {
  if (he_slide.modality != Modality::kHE || ihc_slide.modality != Modality::kIHC) {
    Fail(ErrorKind::kInvalidArgument, "pipeline expects an H&E and an IHC slide");
  }
  if (config.workers < 1) Fail(ErrorKind::kInvalidArgument, "workers must be >= 1");
  CheckGrid(he_slide, mapping.he_spec(), config.tile_size_px, "H&E");
  CheckGrid(ihc_slide, mapping.ihc_spec(), config.tile_size_px, "IHC");
  if (!VerifyBijection(mapping).bijective()) {
    Fail(ErrorKind::kNotInvertible, "modality mapping is not a bijection");
  }

  const GridSpec& he_spec = mapping.he_spec();
  const GridSpec& ihc_spec = mapping.ihc_spec();
  const std::string& case_id = ihc_slide.case_id;

  std::optional<std::filesystem::path> case_dir;
  std::optional<MosaicCanvas> overlay_mosaic;
  std::optional<MosaicCanvas> heatmap_mosaic;
  if (config.artifact_root) {
    case_dir = *config.artifact_root / case_id;
    std::filesystem::create_directories(*case_dir / "overlays");
    std::filesystem::create_directories(*case_dir / "heatmaps");
    if (config.write_mosaics) {
      std::filesystem::create_directories(*case_dir / "mosaics");
      overlay_mosaic.emplace(ihc_spec, ihc_slide.width_px(), ihc_slide.height_px());
      heatmap_mosaic.emplace(he_spec, he_slide.width_px(), he_slide.height_px());
    }
  }

  std::vector<PatchScoreRecord> records(ihc_spec.patch_count());
  ParallelFor(he_spec.patch_count(), config.workers, [&](std::size_t i) {
    const PatchCoord he_coord = CoordAt(he_spec, i);
    const PatchCoord coord = MapCoord(he_coord, mapping);
    try {
      const Patch ihc_patch = ExtractPatch(ihc_slide, ihc_spec, coord);
      const Patch he_patch = ExtractPatch(he_slide, he_spec, he_coord);

      const LabelMap labels = gateway.Segment(ihc_patch);
      const StainPrediction stain = gateway.ClassifyStain(ihc_patch);
      const TumorPrediction tumor = gateway.ClassifyTumor(he_patch);

      PixelHistogram histogram = ComputePixelHistogram(labels);
      if (config.mode == ScoringMode::kBinary) histogram = BinaryHistogram(histogram);
      const PatchVerdict verdict = ScorePatch(histogram, tumor, stain);

      PatchScoreRecord& r = records[LinearIndex(ihc_spec, coord)];
      r.coord = coord;
      r.he_coord = he_coord;
      r.histogram = histogram;
      r.tumor = tumor;
      r.stain = stain;
      r.score = verdict.score;
      r.confidence_flag = verdict.confidence_flag;
      r.annotation = AnnotationCode(histogram, verdict.score);

      if (case_dir) {
        const RgbImage overlay = Overlay(ihc_patch.pixels, labels, config.palette);
        WriteRgbPng(*case_dir / "overlays" / PatchFileName(coord), overlay);
        WriteRgbPng(*case_dir / "heatmaps" / PatchFileName(he_coord),
                    Heatmap(he_patch.pixels, tumor, config.heatmap_style));
        if (overlay_mosaic) {
          overlay_mosaic->Place(coord, overlay);
          heatmap_mosaic->Place(he_coord,
                                HeatmapTint(he_patch.pixels, tumor, config.heatmap_style));
        }
      }
    } catch (const Error& e) {
      throw Error(e.kind(), "patch " + ToString(coord) + ": " + e.what());
    }
  });

  CaseReport report;
  report.case_id = case_id;
  report.mode = config.mode;
  report.he_spec = he_spec;
  report.ihc_spec = ihc_spec;
  report.slide = ScoreSlide(std::move(records), ihc_spec);

  if (case_dir) {
    for (const auto& r : report.slide.patch_records) {
      report.artifacts.push_back("heatmaps/" + PatchFileName(r.he_coord));
      report.artifacts.push_back("overlays/" + PatchFileName(r.coord));
    }
    if (overlay_mosaic) {
      WriteRgbPng(*case_dir / "mosaics" / "ihc_overlay.png", std::move(*overlay_mosaic).Finish());
      overlay_mosaic.reset();
      WriteRgbPng(*case_dir / "mosaics" / "he_heatmap.png", std::move(*heatmap_mosaic).Finish());
      heatmap_mosaic.reset();
      report.artifacts.push_back("mosaics/he_heatmap.png");
      report.artifacts.push_back("mosaics/ihc_overlay.png");
    }
    report.artifacts.push_back("report.csv");
    report.artifacts.push_back("report.json");
    std::sort(report.artifacts.begin(), report.artifacts.end());
  }
  return report;
}

std::string CaseReportJson(const CaseReport& report) {
  const SlideScore& s = report.slide;
  ordered_json j;
  j["case_id"] = report.case_id;
  j["wsi_score"] = ScoreText(s.wsi_score);
  j["coverage_pct"] = s.coverage_pct;
  j["binary_status"] = BinaryStatusName(s.binary_status);
  j["scoring_mode"] = ScoringModeName(report.mode);
  j["grid"] = {{"tile_size_px", report.ihc_spec.tile_size_px},
               {"rows", report.ihc_spec.rows},
               {"cols", report.ihc_spec.cols}};
  ordered_json records = ordered_json::array();
  for (const auto& r : s.patch_records) {
    ordered_json counts = ordered_json::array();
    for (auto c : r.histogram.counts) counts.push_back(c);
    records.push_back({
        {"row", r.coord.row},
        {"col", r.coord.col},
        {"he_row", r.he_coord.row},
        {"he_col", r.he_coord.col},
        {"score", ScoreText(r.score)},
        {"annotation", r.annotation},
        {"confidence_flag", ConfidenceFlagName(r.confidence_flag)},
        {"tumor", TumorLabelName(r.tumor.label)},
        {"p_tumor", r.tumor.probability(TumorLabel::kTumor)},
        {"stain", StainLabelName(r.stain.label)},
        {"p_stain",
         {r.stain.probabilities[0], r.stain.probabilities[1], r.stain.probabilities[2],
          r.stain.probabilities[3]}},
        {"pixel_counts", counts},
        {"total_px", r.histogram.total_px},
    });
  }
  j["records"] = std::move(records);
  j["artifacts"] = report.artifacts;
  return j.dump() + "\n";
}

std::string CaseReportCsv(const CaseReport& report) {
  std::ostringstream os;
  os << "row,col,he_row,he_col,score,annotation,confidence_flag,tumor,p_tumor,stain,"
        "n0,n1,n2,n3,n4,pct_2plus_3plus\n";
  for (const auto& r : report.slide.patch_records) {
    // Reuse the JSON number formatter so CSV and JSON agree digit for digit.
    os << r.coord.row << ',' << r.coord.col << ',' << r.he_coord.row << ','
       << r.he_coord.col << ',' << ScoreText(r.score) << ',' << r.annotation << ','
       << ConfidenceFlagName(r.confidence_flag) << ',' << TumorLabelName(r.tumor.label)
       << ',' << ordered_json(r.tumor.probability(TumorLabel::kTumor)).dump() << ','
       << StainLabelName(r.stain.label);
    for (auto c : r.histogram.counts) os << ',' << c;
    os << ',' << ordered_json(PatchPercentage(r.histogram, {3, 4})).dump() << '\n';
  }
  return os.str();
}

void WriteCaseReport(const CaseReport& report, const std::filesystem::path& root) {
  const auto dir = root / report.case_id;
  std::filesystem::create_directories(dir);
  auto write = [](const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) Fail(ErrorKind::kIo, "cannot write " + path.string());
    out << text;
  };
  write(dir / "report.json", CaseReportJson(report));
  write(dir / "report.csv", CaseReportCsv(report));
}

}  // namespace her2
