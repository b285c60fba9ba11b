#pragma once

#include <cstdint>

#include "her2/image.hpp"
#include "her2/labels.hpp"

namespace her2::rules {

// Deterministic stand-ins for the trained models. The thresholds are
// fixtures: they exist so every downstream path can be exercised without
// weights, and the reference sidecar reproduces them exactly.

// Pixels whose smallest channel exceeds this are treated as glass/background.
inline constexpr int kNearWhiteMinChannel = 230;
inline constexpr double kTumorSaturationThreshold = 0.25;
// Upper bounds of the brownness bands for labels 1, 2 and 3; anything at or
// above the last bound is label 4.
inline constexpr double kFaintBound = 0.05;
inline constexpr double kWeakBound = 0.35;
inline constexpr double kStrongBound = 0.65;
// One-hot-with-epsilon calibration: every losing class gets kEpsilon.
inline constexpr double kEpsilon = 0.01;

bool IsNearWhite(Rgb c) noexcept;

// HSV saturation (max - min) / max; 0 for black.
double Saturation(Rgb c) noexcept;

// Mean saturation over non-near-white pixels (0 when there are none).
double MeanTissueSaturation(const RgbImage& image);

// Per-pixel DAB label in {0..4}.
std::uint8_t PixelStainLabel(Rgb c) noexcept;

TumorPrediction ClassifyTumor(const RgbImage& image);
StainPrediction ClassifyStain(const RgbImage& image);
LabelMap Segment(const RgbImage& image);

}  // namespace her2::rules
