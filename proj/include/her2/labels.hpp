#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace her2 {

enum class TumorLabel : int { kTumor = 0, kNormal = 1 };
inline constexpr std::size_t kTumorLabelCount = 2;

// Patch-level stain intensity, ordered weakest to strongest.
enum class StainLabel : int { kNoStain = 0, kFaint = 1, kWeak = 2, kStrong = 3 };
inline constexpr std::size_t kStainLabelCount = 4;

std::string_view TumorLabelName(TumorLabel label);   // "tumor" / "normal"
std::string_view StainLabelName(StainLabel label);   // "no-stain" / "faint" / ...

// Accepts the canonical names and loose spellings ("NoStain", "no_stain",
// "Tumor"). Throws kInvalidArgument otherwise.
TumorLabel ParseTumorLabel(std::string_view text);
StainLabel ParseStainLabel(std::string_view text);

struct TumorPrediction {
  TumorLabel label = TumorLabel::kNormal;
  std::array<double, kTumorLabelCount> probabilities{0.0, 1.0};

  double probability(TumorLabel l) const { return probabilities[static_cast<int>(l)]; }
};

struct StainPrediction {
  StainLabel label = StainLabel::kNoStain;
  std::array<double, kStainLabelCount> probabilities{1.0, 0.0, 0.0, 0.0};

  double probability(StainLabel l) const { return probabilities[static_cast<int>(l)]; }
};

// Builds a prediction from a probability vector; label is the argmax with
// ties resolved toward the later (higher) category. Throws
// kInvalidArgument when a probability is outside [0,1] or the sum is not
// 1 within `tolerance`.
TumorPrediction MakeTumorPrediction(std::array<double, kTumorLabelCount> probabilities,
                                    double tolerance = 1e-9);
StainPrediction MakeStainPrediction(std::array<double, kStainLabelCount> probabilities,
                                    double tolerance = 1e-9);

// Pixel label values: 0 background, 1..4 no/faint/weak/strong stain which
// correspond to HER2 categories 0, 1+, 2+, 3+.
inline constexpr std::uint8_t kMaxPixelLabel = 4;
inline constexpr std::size_t kPixelLabelCount = 5;

class LabelMap {
 public:
  LabelMap() = default;
  LabelMap(int width, int height);  // all background
  // Throws kInvalidArgument on a value outside {0..4} or a size mismatch.
  LabelMap(int width, int height, std::vector<std::uint8_t> labels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::uint8_t at(int x, int y) const noexcept {
    return labels_[static_cast<std::size_t>(y) * width_ + x];
  }
  void set(int x, int y, std::uint8_t label);
  std::span<const std::uint8_t> labels() const noexcept { return labels_; }

  friend bool operator==(const LabelMap&, const LabelMap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> labels_;
};

}  // namespace her2
