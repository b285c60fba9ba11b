#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "her2/image.hpp"
#include "her2/labels.hpp"
#include "her2/slide_grid.hpp"

namespace her2 {

struct Rgba {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  std::uint8_t a = 255;
};

// Colors per pixel label 0..4. The effective blend weight of a label is
// overlay_alpha * a / 255.
struct Palette {
  std::array<Rgba, kPixelLabelCount> colors;
  double overlay_alpha = 0.5;

  // 0 transparent, 1 blue, 2 yellow, 3 orange, 4 red; alpha 0.5.
  static Palette Default();
};

// Blends `color` over `src` with weight alpha, rounding half up.
std::uint8_t Blend(std::uint8_t src, std::uint8_t color, double alpha) noexcept;

RgbImage Overlay(const RgbImage& patch, const LabelMap& labels, const Palette& palette);

struct HeatmapStyle {
  Rgb tumor_color{220, 20, 60};
  // Tint per stain category; no-stain is untinted.
  std::array<Rgb, kStainLabelCount> stain_colors{Rgb{0, 0, 0}, Rgb{0, 90, 255},
                                                 Rgb{255, 200, 0}, Rgb{200, 0, 0}};
  // Blend weight reached at probability 1.
  double max_alpha = 0.5;
  int caption_height_px = 20;
};

// Tint only: blend weight = max_alpha * winning probability for tumor (or a
// stain category other than no-stain); normal / no-stain patches are left
// unchanged.
RgbImage HeatmapTint(const RgbImage& patch, const TumorPrediction& prediction,
                     const HeatmapStyle& style = {});
RgbImage HeatmapTint(const RgbImage& patch, const StainPrediction& prediction,
                     const HeatmapStyle& style = {});

std::string HeatmapCaption(const TumorPrediction& prediction);
std::string HeatmapCaption(const StainPrediction& prediction);

// Tinted patch with a white caption band of caption_height_px appended
// below carrying the label text. The top rows are exactly HeatmapTint.
RgbImage Heatmap(const RgbImage& patch, const TumorPrediction& prediction,
                 const HeatmapStyle& style = {});
RgbImage Heatmap(const RgbImage& patch, const StainPrediction& prediction,
                 const HeatmapStyle& style = {});

struct MosaicOptions {
  // One-pixel separators between neighbouring tiles only, so a grid of
  // C x R tiles grows by C-1 columns and R-1 rows.
  bool grid_lines = false;
  Rgb line_color{0, 0, 0};
};

// Incrementally assembled mosaic. Place() calls for distinct coordinates
// touch disjoint pixels and may run concurrently.
class MosaicCanvas {
 public:
  MosaicCanvas(const GridSpec& spec, int width_px, int height_px,
               MosaicOptions options = {});

  void Place(PatchCoord coord, const RgbImage& tile);
  // Throws kIncompleteGrid naming the first unplaced coordinate.
  RgbImage Finish() &&;

 private:
  GridSpec spec_;
  int width_px_;
  int height_px_;
  MosaicOptions options_;
  RgbImage canvas_;
  std::vector<std::uint8_t> placed_;
};

RgbImage Mosaic(const PatchGrid& grid, const MosaicOptions& options = {});

// Per-patch reference or predicted labels for the ROI tally. Stain may be
// absent for patches that carry no stain annotation.
struct PatchLabels {
  TumorLabel tumor = TumorLabel::kNormal;
  std::optional<StainLabel> stain;
};

struct RoiAssignment {
  std::string roi_id;
  std::vector<PatchCoord> coords;
};

struct RoiTally {
  std::string roi_id;
  std::uint64_t r_tumor = 0;
  std::uint64_t p_tumor = 0;
  std::uint64_t r_normal = 0;
  std::uint64_t p_normal = 0;
  std::array<std::uint64_t, kStainLabelCount> r_stain{};
  std::array<std::uint64_t, kStainLabelCount> p_stain{};
};

// Tallies reference ("R-") against predicted ("P-") labels per ROI. Every
// patch in either map must belong to exactly one ROI and every ROI patch
// must have both labels; violations raise kInvalidArgument.
std::vector<RoiTally> TallyReport(const std::map<PatchCoord, PatchLabels>& truth,
                                  const std::map<PatchCoord, PatchLabels>& predicted,
                                  const std::vector<RoiAssignment>& partition);

// One column per ROI, one row per tally line (R-tumor, P-tumor, R-normal,
// P-normal, R-No-stain ... P-strong-stain).
std::string TallyCsv(const std::vector<RoiTally>& tallies);

}  // namespace her2
