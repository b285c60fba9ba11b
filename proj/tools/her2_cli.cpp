// her2: command-line front end for tiling, scoring, evaluation and rendering.
//
// Exit codes: 0 success, 2 input error, 3 mapping error, 4 backend error,
// 5 metric-domain error.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "her2/error.hpp"
#include "her2/metrics.hpp"
#include "her2/modality_map.hpp"
#include "her2/pipeline.hpp"
#include "her2/render.hpp"
#include "her2/run_config.hpp"
#include "her2/slide_grid.hpp"
#include "json.hpp"

namespace {

using her2::ErrorKind;
using her2::Fail;
using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMappingOutOfRange:
    case ErrorKind::kNotInvertible: return 3;
    case ErrorKind::kBackendUnavailable:
    case ErrorKind::kProtocolViolation: return 4;
    case ErrorKind::kUndefinedRoc: return 5;
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kIncompleteGrid:
    case ErrorKind::kIo: return 2;
  }
  return 2;
}

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorKind::kIo, "cannot write " + path.string());
  out << text;
}

her2::SlideImage LoadSlide(const fs::path& path, her2::Modality modality,
                           const std::string& case_id) {
  her2::SlideImage slide;
  slide.case_id = case_id.empty() ? path.stem().string() : case_id;
  slide.modality = modality;
  slide.raster = her2::ReadRgbImage(path);
  return slide;
}

// ---------------------------------------------------------------- tile

struct TileArgs {
  std::string config;
  std::string slide;
  std::string modality = "IHC";
  std::string case_id;
  int tile_size = 512;
  std::string out = "out";
  int workers = 1;
};

int CmdTile(const TileArgs& args) {
  std::vector<std::pair<fs::path, her2::Modality>> inputs;
  std::string case_id = args.case_id;
  int tile = args.tile_size;
  fs::path out = args.out;
  if (!args.config.empty()) {
    const her2::RunConfig config = her2::LoadRunConfig(args.config);
    inputs = {{config.he_slide_path, her2::Modality::kHE},
              {config.ihc_slide_path, her2::Modality::kIHC}};
    if (case_id.empty()) case_id = config.case_id;
    tile = config.tile_size_px;
  }
  if (!args.slide.empty()) inputs.emplace_back(args.slide, her2::ParseModality(args.modality));
  if (inputs.empty()) Fail(ErrorKind::kInvalidArgument, "tile needs --slide or --config");
  if (tile < 16) Fail(ErrorKind::kInvalidArgument, "tile size must be >= 16");

  for (const auto& [path, modality] : inputs) {
    const her2::SlideImage slide =
        LoadSlide(path, modality, case_id.empty() ? path.stem().string() : case_id);
    const her2::GridSpec spec =
        her2::ComputeGridSpec(slide.width_px(), slide.height_px(), tile);
    const auto grid = her2::ExtractPatches(slide, spec, args.workers);
    const fs::path manifest = her2::WritePatchDirectory(grid, out);
    std::cout << manifest.string() << ": " << spec.rows << "x" << spec.cols << " patches\n";
  }
  return 0;
}

// ---------------------------------------------------------------- run

struct RunArgs {
  std::string config;
  int workers = 0;
  std::string mode;
  std::string out;
  std::string sidecar;
  std::string sidecar_tumor;
  std::string sidecar_stain;
  std::string sidecar_segment;
  bool no_artifacts = false;
  bool no_mosaics = false;
};

void UseSidecar(her2::ModelBinding& binding, const std::string& command) {
  if (command.empty()) return;
  binding.backend = her2::Backend::kSidecar;
  binding.sidecar_command = command;
}

int CmdRun(const RunArgs& args) {
  her2::RunConfig config = her2::LoadRunConfig(args.config);
  if (args.workers > 0) config.workers = args.workers;
  if (!args.mode.empty()) config.scoring_mode = her2::ParseScoringMode(args.mode);
  if (!args.out.empty()) config.output_dir = args.out;
  UseSidecar(config.bindings.tumor, args.sidecar);
  UseSidecar(config.bindings.stain, args.sidecar);
  UseSidecar(config.bindings.segmenter, args.sidecar);
  UseSidecar(config.bindings.tumor, args.sidecar_tumor);
  UseSidecar(config.bindings.stain, args.sidecar_stain);
  UseSidecar(config.bindings.segmenter, args.sidecar_segment);
  config.Validate();

  const std::string case_id =
      config.case_id.empty() ? config.ihc_slide_path.stem().string() : config.case_id;
  const her2::SlideImage he = LoadSlide(config.he_slide_path, her2::Modality::kHE, case_id);
  const her2::SlideImage ihc = LoadSlide(config.ihc_slide_path, her2::Modality::kIHC, case_id);
  const auto he_spec = her2::ComputeGridSpec(he.width_px(), he.height_px(), config.tile_size_px);
  const auto ihc_spec =
      her2::ComputeGridSpec(ihc.width_px(), ihc.height_px(), config.tile_size_px);
  const her2::ModalityMapping mapping = config.mapping.Resolve(he_spec, ihc_spec);
  const auto bijection = her2::VerifyBijection(mapping);
  if (!bijection.bijective()) {
    Fail(ErrorKind::kNotInvertible,
         "mapping is not a bijection (" + std::to_string(bijection.collisions.size()) +
             " collisions, " + std::to_string(bijection.unreached.size()) + " unreached, " +
             std::to_string(bijection.out_of_range.size()) + " out of range)");
  }

  her2::PipelineConfig pipeline;
  pipeline.tile_size_px = config.tile_size_px;
  pipeline.workers = config.workers;
  pipeline.mode = config.scoring_mode;
  if (!args.no_artifacts) pipeline.artifact_root = config.output_dir;
  pipeline.write_mosaics = !args.no_mosaics;

  her2::ModelGateway gateway(config.bindings, config.workers);
  const her2::CaseReport report = her2::RunPipeline(he, ihc, mapping, gateway, pipeline);
  gateway.Shutdown();
  her2::WriteCaseReport(report, config.output_dir);

  std::cout << "case " << report.case_id << ": HER2 " << her2::ScoreText(report.slide.wsi_score)
            << " (" << her2::BinaryStatusName(report.slide.binary_status) << "), coverage "
            << report.slide.coverage_pct << "%\n";
  return 0;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string pred;
  std::string truth;
  std::string positive;
  bool roc = false;
  bool dca = false;
  std::string iou_pred;
  std::string iou_truth;
  std::string out = "eval";
};

ordered_json MetricsJson(const her2::metrics::ClassificationMetrics& m) {
  return {{"tp", m.tp},           {"fp", m.fp},
          {"fn", m.fn},           {"tn", m.tn},
          {"accuracy", m.accuracy}, {"precision", m.precision},
          {"recall", m.recall},   {"sensitivity", m.sensitivity},
          {"specificity", m.specificity}, {"f1", m.f1},
          {"degenerate", m.degenerate}};
}

her2::LabelMap LoadLabelMap(const fs::path& path) {
  her2::GrayImage g = her2::ReadGrayPng(path);
  return her2::LabelMap(g.width, g.height, std::move(g.values));
}

int CmdEval(const EvalArgs& args) {
  namespace m = her2::metrics;
  const fs::path out = args.out;
  ordered_json report;

  if (!args.pred.empty()) {
    m::PredictionTable table = m::ReadPredictionCsv(args.pred);
    if (!args.truth.empty()) m::JoinTruthCsv(table, args.truth);
    for (std::size_t i = 0; i < table.ids.size(); ++i) {
      if (table.truth[i].empty()) {
        Fail(ErrorKind::kInvalidArgument,
             "no true_label for id '" + table.ids[i] + "' (add the column or pass --truth)");
      }
    }

    // Label order: probability columns first, then any other label in order
    // of first appearance.
    std::vector<std::string> labels = table.prob_labels;
    auto add = [&labels](const std::string& l) {
      if (std::find(labels.begin(), labels.end(), l) == labels.end()) labels.push_back(l);
    };
    for (std::size_t i = 0; i < table.ids.size(); ++i) {
      add(table.truth[i]);
      add(table.predicted[i]);
    }

    const m::ConfusionMatrix confusion = m::Confusion(table.truth, table.predicted, labels);
    report["samples"] = confusion.total();
    report["labels"] = labels;
    report["confusion"] = confusion.counts;
    std::uint64_t correct = 0;
    for (std::size_t k = 0; k < labels.size(); ++k) correct += confusion.counts[k][k];
    report["accuracy"] =
        confusion.total() == 0 ? 0.0 : static_cast<double>(correct) / confusion.total();

    std::vector<std::string> targets = labels;
    if (!args.positive.empty()) targets = {args.positive};
    ordered_json per_class = ordered_json::object();
    for (const auto& label : targets) {
      per_class[label] = MetricsJson(
          m::ComputeClassificationMetrics(m::OneVsRest(confusion, label), label));
    }
    report["per_class"] = std::move(per_class);

    if (args.roc) {
      std::vector<std::string> roc_labels = args.positive.empty()
                                                ? table.prob_labels
                                                : std::vector<std::string>{args.positive};
      ordered_json roc = ordered_json::object();
      std::size_t defined = 0;
      std::string last_error = "no prob_<label> columns";
      for (const auto& label : roc_labels) {
        try {
          const m::RocCurve curve = m::Roc(table.ScoresFor(label));
          std::ostringstream csv;
          csv << "threshold,fpr,tpr\n";
          for (const auto& p : curve.points) {
            csv << ordered_json(p.threshold).dump() << ',' << ordered_json(p.fpr).dump()
                << ',' << ordered_json(p.tpr).dump() << '\n';
          }
          WriteText(out / ("roc_" + label + ".csv"), csv.str());
          roc[label] = {{"auc", curve.auc}, {"points", curve.points.size()}};
          ++defined;
        } catch (const her2::Error& e) {
          if (e.kind() != ErrorKind::kUndefinedRoc) throw;
          last_error = e.what();
          roc[label] = {{"auc", nullptr}, {"error", e.what()}};
        }
      }
      if (defined == 0) Fail(ErrorKind::kUndefinedRoc, last_error);
      report["roc"] = std::move(roc);
    }

    if (args.dca) {
      const std::vector<std::string> dca_labels =
          args.positive.empty() ? table.prob_labels : std::vector<std::string>{args.positive};
      const auto thresholds = m::DefaultDcaThresholds();
      ordered_json dca = ordered_json::object();
      for (const auto& label : dca_labels) {
        const m::DcaCurve curve = m::Dca(table.ScoresFor(label), thresholds);
        std::ostringstream csv;
        csv << "threshold,model_nb,treat_all_nb,treat_none_nb\n";
        for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
          csv << ordered_json(curve.thresholds[i]).dump() << ','
              << ordered_json(curve.model_nb[i]).dump() << ','
              << ordered_json(curve.treat_all_nb[i]).dump() << ','
              << ordered_json(curve.treat_none_nb[i]).dump() << '\n';
        }
        WriteText(out / ("dca_" + label + ".csv"), csv.str());
        dca[label] = {{"thresholds", curve.thresholds.size()},
                      {"file", "dca_" + label + ".csv"}};
      }
      report["dca"] = std::move(dca);
    }
  }

  if (!args.iou_pred.empty() || !args.iou_truth.empty()) {
    if (args.iou_pred.empty() || args.iou_truth.empty()) {
      Fail(ErrorKind::kInvalidArgument, "--iou-pred and --iou-truth go together");
    }
    const auto iou = m::MeanIou(LoadLabelMap(args.iou_pred), LoadLabelMap(args.iou_truth));
    ordered_json per_label = ordered_json::object();
    for (const auto& [label, value] : iou.per_label) per_label[std::to_string(label)] = value;
    report["iou"] = {{"per_label", per_label}, {"mean_iou", iou.mean_iou}};
  }

  if (report.empty()) Fail(ErrorKind::kInvalidArgument, "eval needs --pred or --iou-pred");
  WriteText(out / "metrics.json", report.dump(2) + "\n");
  std::cout << report.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------- render

struct RenderArgs {
  std::string manifest;
  std::string labels;
  bool grid_lines = false;
  std::string tally_truth;
  std::string tally_pred;
  std::string out = "render";
};

// CSV columns: roi,row,col,tumor[,stain]. The ROI column is read from the
// truth file only.
std::map<her2::PatchCoord, her2::PatchLabels> ReadPatchLabels(
    const fs::path& path, std::vector<her2::RoiAssignment>* partition) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIo, "cannot read " + path.string());
  std::map<her2::PatchCoord, her2::PatchLabels> labels;
  std::map<std::string, std::size_t> roi_index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line_no == 1) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (f.size() < 4 || f.size() > 5) {
      Fail(ErrorKind::kInvalidArgument,
           path.string() + ":" + std::to_string(line_no) + ": expected roi,row,col,tumor[,stain]");
    }
    her2::PatchCoord c;
    try {
      c = {std::stoi(f[1]), std::stoi(f[2])};
    } catch (const std::exception&) {
      Fail(ErrorKind::kInvalidArgument,
           path.string() + ":" + std::to_string(line_no) + ": bad coordinate");
    }
    her2::PatchLabels l;
    l.tumor = her2::ParseTumorLabel(f[3]);
    if (f.size() == 5 && !f[4].empty()) l.stain = her2::ParseStainLabel(f[4]);
    if (!labels.emplace(c, l).second) {
      Fail(ErrorKind::kInvalidArgument, path.string() + ":" + std::to_string(line_no) +
                                            ": duplicate patch " + her2::ToString(c));
    }
    if (partition) {
      auto [it, inserted] = roi_index.emplace(f[0], partition->size());
      if (inserted) partition->push_back({f[0], {}});
      (*partition)[it->second].coords.push_back(c);
    }
  }
  return labels;
}

int CmdRender(const RenderArgs& args) {
  const fs::path out = args.out;
  bool did_something = false;

  if (!args.manifest.empty()) {
    const her2::PatchGrid grid = her2::ReadPatchDirectory(args.manifest);
    her2::MosaicOptions options;
    options.grid_lines = args.grid_lines;
    her2::WriteRgbPng(out / "mosaic.png", her2::Mosaic(grid, options));

    if (!args.labels.empty()) {
      const her2::Palette palette = her2::Palette::Default();
      her2::MosaicCanvas canvas(grid.spec(), grid.source().width_px,
                                grid.source().height_px, options);
      for (std::size_t i = 0; i < grid.spec().patch_count(); ++i) {
        const her2::PatchCoord c = her2::CoordAt(grid.spec(), i);
        const her2::LabelMap labels =
            LoadLabelMap(fs::path(args.labels) / her2::PatchFileName(c));
        const her2::RgbImage overlay = her2::Overlay(grid.at(c).pixels, labels, palette);
        her2::WriteRgbPng(out / "overlays" / her2::PatchFileName(c), overlay);
        canvas.Place(c, overlay);
      }
      her2::WriteRgbPng(out / "overlay_mosaic.png", std::move(canvas).Finish());
    }
    did_something = true;
  }

  if (!args.tally_truth.empty() || !args.tally_pred.empty()) {
    if (args.tally_truth.empty() || args.tally_pred.empty()) {
      Fail(ErrorKind::kInvalidArgument, "--tally-truth and --tally-pred go together");
    }
    std::vector<her2::RoiAssignment> partition;
    const auto truth = ReadPatchLabels(args.tally_truth, &partition);
    const auto pred = ReadPatchLabels(args.tally_pred, nullptr);
    const auto tallies = her2::TallyReport(truth, pred, partition);
    const std::string csv = her2::TallyCsv(tallies);
    WriteText(out / "tally.csv", csv);
    std::cout << csv;
    did_something = true;
  }

  if (!did_something) {
    Fail(ErrorKind::kInvalidArgument, "render needs --manifest or --tally-truth/--tally-pred");
  }
  return 0;
}

// ---------------------------------------------------------------- verify-mapping

struct VerifyArgs {
  std::string config;
  std::string kind = "identity";
  std::vector<double> scale;
  std::vector<double> offset;
  std::string he_grid;
  std::string ihc_grid;
};

her2::GridSpec ParseGrid(const std::string& text) {
  // "<rows>x<cols>"
  const auto x = text.find('x');
  try {
    if (x != std::string::npos) {
      return {1, std::stoi(text.substr(x + 1)), std::stoi(text.substr(0, x))};
    }
  } catch (const std::exception&) {
  }
  Fail(ErrorKind::kInvalidArgument, "grid must be written <rows>x<cols>, got '" + text + "'");
}

ordered_json CoordList(const std::vector<her2::PatchCoord>& coords) {
  ordered_json out = ordered_json::array();
  for (const auto& c : coords) out.push_back({c.row, c.col});
  return out;
}

int CmdVerifyMapping(const VerifyArgs& args) {
  her2::MappingParams params;
  her2::GridSpec he_spec, ihc_spec;
  if (!args.config.empty()) {
    const her2::RunConfig config = her2::LoadRunConfig(args.config);
    params = config.mapping;
    const auto he = her2::ReadRgbImage(config.he_slide_path);
    const auto ihc = her2::ReadRgbImage(config.ihc_slide_path);
    he_spec = her2::ComputeGridSpec(he.width(), he.height(), config.tile_size_px);
    ihc_spec = her2::ComputeGridSpec(ihc.width(), ihc.height(), config.tile_size_px);
  } else {
    if (args.he_grid.empty()) {
      Fail(ErrorKind::kInvalidArgument, "verify-mapping needs --config or --he-grid");
    }
    he_spec = ParseGrid(args.he_grid);
    ihc_spec = args.ihc_grid.empty() ? he_spec : ParseGrid(args.ihc_grid);
    if (args.kind == "identity") {
      params.kind = her2::MappingKind::kIdentity;
    } else if (args.kind == "affine") {
      params.kind = her2::MappingKind::kAffineGrid;
    } else {
      Fail(ErrorKind::kInvalidArgument, "unknown mapping kind '" + args.kind + "'");
    }
    auto pair = [](const std::vector<double>& v, double fallback) -> std::pair<double, double> {
      if (v.empty()) return {fallback, fallback};
      if (v.size() == 1) return {v[0], v[0]};
      return {v[0], v[1]};
    };
    std::tie(params.scale_row, params.scale_col) = pair(args.scale, 1.0);
    std::tie(params.offset_row, params.offset_col) = pair(args.offset, 0.0);
  }

  const her2::ModalityMapping mapping = params.Resolve(he_spec, ihc_spec);
  const her2::BijectionReport report = her2::VerifyBijection(mapping);
  ordered_json collisions = ordered_json::array();
  for (const auto& c : report.collisions) {
    collisions.push_back({{"target", {c.target.row, c.target.col}},
                          {"sources", CoordList(c.sources)}});
  }
  ordered_json j{{"injective", report.injective},
                 {"surjective", report.surjective},
                 {"bijective", report.bijective()},
                 {"collisions", collisions},
                 {"unreached", CoordList(report.unreached)},
                 {"out_of_range", CoordList(report.out_of_range)}};
  std::cout << j.dump(2) << "\n";
  return report.bijective() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HER2 whole-slide scoring"};
  app.require_subcommand(1);

  TileArgs tile;
  auto* tile_cmd = app.add_subcommand("tile", "Cut slides into a patch directory with a manifest");
  tile_cmd->add_option("--config", tile.config, "Run config (tiles both slides)");
  tile_cmd->add_option("--slide", tile.slide, "Single PNG/TIFF slide");
  tile_cmd->add_option("--modality", tile.modality, "HE or IHC")->check(CLI::IsMember({"HE", "IHC"}));
  tile_cmd->add_option("--case-id", tile.case_id, "Case id (default: file stem)");
  tile_cmd->add_option("--tile-size", tile.tile_size, "Tile size in pixels");
  tile_cmd->add_option("--out", tile.out, "Output root");
  tile_cmd->add_option("--workers", tile.workers, "Worker threads")->check(CLI::PositiveNumber);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Score a H&E/IHC slide pair end to end");
  run_cmd->add_option("--config", run.config, "Run config (TOML)")->required();
  run_cmd->add_option("--workers", run.workers, "Worker threads")->check(CLI::PositiveNumber);
  run_cmd->add_option("--mode", run.mode, "fourway or binary")
      ->check(CLI::IsMember({"fourway", "binary"}));
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--sidecar", run.sidecar, "Sidecar command for all three models");
  run_cmd->add_option("--sidecar-tumor", run.sidecar_tumor, "Sidecar command for the tumor model");
  run_cmd->add_option("--sidecar-stain", run.sidecar_stain, "Sidecar command for the stain model");
  run_cmd->add_option("--sidecar-segment", run.sidecar_segment, "Sidecar command for the segmenter");
  run_cmd->add_flag("--no-artifacts", run.no_artifacts, "Only write report.json/report.csv");
  run_cmd->add_flag("--no-mosaics", run.no_mosaics, "Skip slide-sized mosaics");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Classification and segmentation metrics");
  eval_cmd->add_option("--pred", eval.pred, "Prediction CSV: id,true_label,pred_label,prob_<label>...");
  eval_cmd->add_option("--truth", eval.truth, "Truth CSV: id,true_label");
  eval_cmd->add_option("--positive", eval.positive, "Restrict one-vs-rest metrics to this label");
  eval_cmd->add_flag("--roc", eval.roc, "Emit ROC curves and AUC");
  eval_cmd->add_flag("--dca", eval.dca, "Emit decision curves (thresholds 0.00..0.30)");
  eval_cmd->add_option("--iou-pred", eval.iou_pred, "Predicted label map (8-bit PNG)");
  eval_cmd->add_option("--iou-truth", eval.iou_truth, "Reference label map (8-bit PNG)");
  eval_cmd->add_option("--out", eval.out, "Output directory");

  RenderArgs render;
  auto* render_cmd = app.add_subcommand("render", "Mosaics, overlays and ROI tallies");
  render_cmd->add_option("--manifest", render.manifest, "Patch manifest.json");
  render_cmd->add_option("--labels", render.labels, "Directory of r<row>_c<col>.png label maps");
  render_cmd->add_flag("--grid-lines", render.grid_lines, "Separate tiles with 1 px lines");
  render_cmd->add_option("--tally-truth", render.tally_truth, "Reference CSV: roi,row,col,tumor[,stain]");
  render_cmd->add_option("--tally-pred", render.tally_pred, "Predicted CSV: roi,row,col,tumor[,stain]");
  render_cmd->add_option("--out", render.out, "Output directory");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify-mapping", "Check that a modality mapping is a bijection");
  verify_cmd->add_option("--config", verify.config, "Run config");
  verify_cmd->add_option("--kind", verify.kind, "identity or affine");
  verify_cmd->add_option("--scale", verify.scale, "Scale (one value or row col)")->expected(1, 2);
  verify_cmd->add_option("--offset", verify.offset, "Offset (one value or row col)")->expected(1, 2);
  verify_cmd->add_option("--he-grid", verify.he_grid, "H&E grid <rows>x<cols>");
  verify_cmd->add_option("--ihc-grid", verify.ihc_grid, "IHC grid <rows>x<cols>");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*tile_cmd) return CmdTile(tile);
    if (*run_cmd) return CmdRun(run);
    if (*eval_cmd) return CmdEval(eval);
    if (*render_cmd) return CmdRender(render);
    if (*verify_cmd) return CmdVerifyMapping(verify);
  } catch (const her2::Error& e) {
    std::cerr << "her2: " << her2::ErrorKindName(e.kind()) << ": " << e.what() << "\n";
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "her2: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
