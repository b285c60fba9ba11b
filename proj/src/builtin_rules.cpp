#include "her2/builtin_rules.hpp"

#include <algorithm>

namespace her2::rules {

bool IsNearWhite(Rgb c) noexcept {
  return std::min({c.r, c.g, c.b}) > kNearWhiteMinChannel;
}

double Saturation(Rgb c) noexcept {
  const int hi = std::max({c.r, c.g, c.b});
  const int lo = std::min({c.r, c.g, c.b});
  return hi == 0 ? 0.0 : static_cast<double>(hi - lo) / hi;
}

double MeanTissueSaturation(const RgbImage& image) {
  double sum = 0.0;
  std::size_t tissue = 0;
  const auto& px = image.pixels();
  for (std::size_t i = 0; i < px.size(); i += 3) {
    const Rgb c{px[i], px[i + 1], px[i + 2]};
    if (IsNearWhite(c)) continue;
    sum += Saturation(c);
    ++tissue;
  }
  return tissue == 0 ? 0.0 : sum / static_cast<double>(tissue);
}

std::uint8_t PixelStainLabel(Rgb c) noexcept {
  if (IsNearWhite(c) || !(c.r > c.g && c.g > c.b)) return 0;
  const double brownness = std::clamp((c.r - c.b) / 255.0, 0.0, 1.0);
  if (brownness < kFaintBound) return 1;
  if (brownness < kWeakBound) return 2;
  if (brownness < kStrongBound) return 3;
  return 4;
}

TumorPrediction ClassifyTumor(const RgbImage& image) {
  const bool tumor = MeanTissueSaturation(image) >= kTumorSaturationThreshold;
  const double win = 1.0 - kEpsilon;
  return MakeTumorPrediction(tumor ? std::array{win, kEpsilon}
                                   : std::array{kEpsilon, win});
}

LabelMap Segment(const RgbImage& image) {
  std::vector<std::uint8_t> labels(static_cast<std::size_t>(image.width()) *
                                   image.height());
  const auto& px = image.pixels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    labels[i] = PixelStainLabel({px[3 * i], px[3 * i + 1], px[3 * i + 2]});
  }
  return LabelMap(image.width(), image.height(), std::move(labels));
}

StainPrediction ClassifyStain(const RgbImage& image) {
  std::array<std::size_t, kPixelLabelCount> counts{};
  const auto& px = image.pixels();
  for (std::size_t i = 0; i < px.size(); i += 3) {
    ++counts[PixelStainLabel({px[i], px[i + 1], px[i + 2]})];
  }
  // Argmax over labels 1..4, ties toward the stronger stain; no stained
  // pixels at all reads as no-stain.
  std::size_t best = 1;
  for (std::size_t k = 2; k <= 4; ++k) {
    if (counts[k] >= counts[best]) best = k;
  }
  if (counts[best] == 0) best = 1;

  std::array<double, kStainLabelCount> p;
  p.fill(kEpsilon);
  p[best - 1] = 1.0 - 3 * kEpsilon;
  return MakeStainPrediction(p);
}

}  // namespace her2::rules
