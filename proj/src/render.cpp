#include "her2/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>
#include <sstream>

#include "her2/error.hpp"

namespace her2 {

Palette Palette::Default() {
  Palette p;
  p.colors = {Rgba{0, 0, 0, 0}, Rgba{0, 90, 255, 255}, Rgba{255, 220, 0, 255},
              Rgba{255, 140, 0, 255}, Rgba{220, 0, 0, 255}};
  p.overlay_alpha = 0.5;
  return p;
}

std::uint8_t Blend(std::uint8_t src, std::uint8_t color, double alpha) noexcept {
  const double v = (1.0 - alpha) * src + alpha * color;
  return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

RgbImage Overlay(const RgbImage& patch, const LabelMap& labels, const Palette& palette) {
  if (patch.width() != labels.width() || patch.height() != labels.height()) {
    Fail(ErrorKind::kInvalidArgument, "overlay: label map and patch sizes differ");
  }
  std::array<double, kPixelLabelCount> weight{};
  for (std::size_t k = 0; k < kPixelLabelCount; ++k) {
    weight[k] = std::clamp(palette.overlay_alpha, 0.0, 1.0) * palette.colors[k].a / 255.0;
  }
  RgbImage out = patch;
  auto& px = out.pixels();
  const auto values = labels.labels();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::uint8_t k = values[i];
    if (weight[k] == 0.0) continue;
    const Rgba& c = palette.colors[k];
    px[3 * i] = Blend(px[3 * i], c.r, weight[k]);
    px[3 * i + 1] = Blend(px[3 * i + 1], c.g, weight[k]);
    px[3 * i + 2] = Blend(px[3 * i + 2], c.b, weight[k]);
  }
  return out;
}

namespace {

RgbImage Tint(const RgbImage& patch, Rgb color, double alpha) {
  RgbImage out = patch;
  if (alpha <= 0.0) return out;
  for (auto it = out.pixels().begin(); it != out.pixels().end(); it += 3) {
    it[0] = Blend(it[0], color.r, alpha);
    it[1] = Blend(it[1], color.g, alpha);
    it[2] = Blend(it[2], color.b, alpha);
  }
  return out;
}

RgbImage WithCaption(const RgbImage& tinted, const std::string& caption,
                     const HeatmapStyle& style) {
  const int band = std::max(0, style.caption_height_px);
  RgbImage out(tinted.width(), tinted.height() + band, kWhite);
  for (int y = 0; y < tinted.height(); ++y) {
    std::memcpy(out.row(y).data(), tinted.row(y).data(), tinted.row(y).size());
  }
  if (band > 0) {
    DrawText(out, 2, tinted.height() + band - 5, caption, Rgb{0, 0, 0}, 0.45);
  }
  return out;
}

std::string FormatProbability(double p) {
  std::ostringstream os;
  os.precision(2);
  os << std::fixed << p;
  return os.str();
}

}  // namespace

RgbImage HeatmapTint(const RgbImage& patch, const TumorPrediction& prediction,
                     const HeatmapStyle& style) {
  if (prediction.label != TumorLabel::kTumor) return patch;
  return Tint(patch, style.tumor_color,
              style.max_alpha * prediction.probability(TumorLabel::kTumor));
}

RgbImage HeatmapTint(const RgbImage& patch, const StainPrediction& prediction,
                     const HeatmapStyle& style) {
  if (prediction.label == StainLabel::kNoStain) return patch;
  return Tint(patch, style.stain_colors[static_cast<int>(prediction.label)],
              style.max_alpha * prediction.probability(prediction.label));
}

std::string HeatmapCaption(const TumorPrediction& prediction) {
  return std::string(TumorLabelName(prediction.label)) + " " +
         FormatProbability(prediction.probability(prediction.label));
}

std::string HeatmapCaption(const StainPrediction& prediction) {
  return std::string(StainLabelName(prediction.label)) + " " +
         FormatProbability(prediction.probability(prediction.label));
}

RgbImage Heatmap(const RgbImage& patch, const TumorPrediction& prediction,
                 const HeatmapStyle& style) {
  return WithCaption(HeatmapTint(patch, prediction, style), HeatmapCaption(prediction),
                     style);
}

RgbImage Heatmap(const RgbImage& patch, const StainPrediction& prediction,
                 const HeatmapStyle& style) {
  return WithCaption(HeatmapTint(patch, prediction, style), HeatmapCaption(prediction),
                     style);
}

MosaicCanvas::MosaicCanvas(const GridSpec& spec, int width_px, int height_px,
                           MosaicOptions options)
    : spec_(spec),
      width_px_(width_px),
      height_px_(height_px),
      options_(options),
      placed_(spec.patch_count(), 0) {
  if (ComputeGridSpec(width_px, height_px, spec.tile_size_px) != spec) {
    Fail(ErrorKind::kInvalidArgument, "mosaic: grid spec does not match dimensions");
  }
  const int extra_w = options.grid_lines ? spec.cols - 1 : 0;
  const int extra_h = options.grid_lines ? spec.rows - 1 : 0;
  canvas_ = RgbImage(width_px + extra_w, height_px + extra_h,
                     options.grid_lines ? options.line_color : kWhite);
}

void MosaicCanvas::Place(PatchCoord coord, const RgbImage& tile) {
  if (!InBounds(spec_, coord)) {
    Fail(ErrorKind::kInvalidArgument, "mosaic: coordinate " + ToString(coord) + " outside grid");
  }
  const int f = spec_.tile_size_px;
  const int w = std::min(f, width_px_ - coord.col * f);
  const int h = std::min(f, height_px_ - coord.row * f);
  if (tile.width() < w || tile.height() < h) {
    Fail(ErrorKind::kInvalidArgument, "mosaic: tile smaller than its grid cell");
  }
  const int gap = options_.grid_lines ? 1 : 0;
  const int x0 = coord.col * (f + gap);
  const int y0 = coord.row * (f + gap);
  for (int y = 0; y < h; ++y) {
    std::memcpy(canvas_.row(y0 + y).data() + static_cast<std::size_t>(x0) * 3,
                tile.row(y).data(), static_cast<std::size_t>(w) * 3);
  }
  placed_[LinearIndex(spec_, coord)] = 1;
}

RgbImage MosaicCanvas::Finish() && {
  for (std::size_t i = 0; i < placed_.size(); ++i) {
    if (!placed_[i]) {
      Fail(ErrorKind::kIncompleteGrid,
           "mosaic: no tile for " + ToString(CoordAt(spec_, i)));
    }
  }
  return std::move(canvas_);
}

RgbImage Mosaic(const PatchGrid& grid, const MosaicOptions& options) {
  MosaicCanvas canvas(grid.spec(), grid.source().width_px, grid.source().height_px,
                      options);
  for (std::size_t i = 0; i < grid.spec().patch_count(); ++i) {
    const PatchCoord coord = CoordAt(grid.spec(), i);
    canvas.Place(coord, grid.at(coord).pixels);
  }
  return std::move(canvas).Finish();
}

std::vector<RoiTally> TallyReport(const std::map<PatchCoord, PatchLabels>& truth,
                                  const std::map<PatchCoord, PatchLabels>& predicted,
                                  const std::vector<RoiAssignment>& partition) {
  std::set<PatchCoord> assigned;
  std::vector<RoiTally> tallies;
  tallies.reserve(partition.size());

  for (const RoiAssignment& roi : partition) {
    RoiTally tally;
    tally.roi_id = roi.roi_id;
    for (const PatchCoord& c : roi.coords) {
      if (!assigned.insert(c).second) {
        Fail(ErrorKind::kInvalidArgument,
             "patch " + ToString(c) + " assigned to more than one ROI");
      }
      const auto t = truth.find(c);
      const auto p = predicted.find(c);
      if (t == truth.end() || p == predicted.end()) {
        Fail(ErrorKind::kInvalidArgument, "ROI " + roi.roi_id + " patch " + ToString(c) +
                                              " lacks reference or predicted labels");
      }
      (t->second.tumor == TumorLabel::kTumor ? tally.r_tumor : tally.r_normal)++;
      (p->second.tumor == TumorLabel::kTumor ? tally.p_tumor : tally.p_normal)++;
      if (t->second.stain) ++tally.r_stain[static_cast<int>(*t->second.stain)];
      if (p->second.stain) ++tally.p_stain[static_cast<int>(*p->second.stain)];
    }
    tallies.push_back(std::move(tally));
  }

  for (const auto* labels : {&truth, &predicted}) {
    for (const auto& [coord, _] : *labels) {
      if (!assigned.contains(coord)) {
        Fail(ErrorKind::kInvalidArgument,
             "patch " + ToString(coord) + " has no ROI assignment");
      }
    }
  }
  return tallies;
}

std::string TallyCsv(const std::vector<RoiTally>& tallies) {
  static constexpr std::array<const char*, kStainLabelCount> kStainRows = {
      "No-stain", "Faint-stain", "weak-stain", "strong-stain"};

  std::ostringstream os;
  os << "Image status";
  for (const auto& t : tallies) os << ',' << t.roi_id;
  os << '\n';

  auto row = [&](const std::string& name, auto field) {
    os << name;
    for (const auto& t : tallies) os << ',' << field(t);
    os << '\n';
  };
  row("R-tumor", [](const RoiTally& t) { return t.r_tumor; });
  row("P-tumor", [](const RoiTally& t) { return t.p_tumor; });
  row("R-normal", [](const RoiTally& t) { return t.r_normal; });
  row("P-normal", [](const RoiTally& t) { return t.p_normal; });
  for (std::size_t k = 0; k < kStainLabelCount; ++k) {
    row(std::string("R-") + kStainRows[k], [k](const RoiTally& t) { return t.r_stain[k]; });
  }
  for (std::size_t k = 0; k < kStainLabelCount; ++k) {
    row(std::string("P-") + kStainRows[k], [k](const RoiTally& t) { return t.p_stain[k]; });
  }
  return os.str();
}

}  // namespace her2
