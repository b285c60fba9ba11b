#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "her2/labels.hpp"
#include "her2/slide_grid.hpp"

namespace her2 {

// Pixel counts per label value 0..4 of one label map.
struct PixelHistogram {
  std::array<std::uint64_t, kPixelLabelCount> counts{};
  std::uint64_t total_px = 0;

  std::uint64_t count(int label) const { return counts.at(static_cast<std::size_t>(label)); }
  // Pixels carrying any stain category (labels 1..4).
  std::uint64_t stained() const noexcept {
    return counts[1] + counts[2] + counts[3] + counts[4];
  }
  friend bool operator==(const PixelHistogram&, const PixelHistogram&) = default;
};

PixelHistogram ComputePixelHistogram(const LabelMap& labels);

// Restriction used for binary (negative/positive) scoring: only the no-stain
// and strong-stain categories survive; total_px is unchanged.
PixelHistogram BinaryHistogram(const PixelHistogram& histogram);

// Percentage of the patch covered by the given labels (each in 1..4).
double PatchPercentage(const PixelHistogram& histogram, std::span<const int> labels);
double PatchPercentage(const PixelHistogram& histogram, std::initializer_list<int> labels);

enum class Her2Score : int { k0 = 0, k1Plus = 1, k2Plus = 2, k3Plus = 3 };

std::string_view ScoreText(Her2Score score);  // "0", "1+", "2+", "3+"
Her2Score ParseScore(std::string_view text);

// Pixel label 1..4 corresponds to HER2 0..3+.
inline Her2Score ScoreForPixelLabel(int label) { return static_cast<Her2Score>(label - 1); }

enum class ConfidenceFlag { kConsistent, kModelDisagreement };
std::string_view ConfidenceFlagName(ConfidenceFlag flag);

struct PatchVerdict {
  Her2Score score = Her2Score::k0;
  ConfidenceFlag confidence_flag = ConfidenceFlag::kConsistent;
};

// Fuses segmentation, tumor and stain predictions into a patch score:
//   1. a patch the tumor model calls normal scores 0;
//   2. a patch without stained pixels scores 0;
//   3. otherwise the score is the dominant stain category among labels 1..4,
//      ties going to the stronger category.
// The stain classifier only cross-checks: disagreement with the dominant
// category sets kModelDisagreement (an unstained patch counts as no-stain).
PatchVerdict ScorePatch(const PixelHistogram& histogram, const TumorPrediction& tumor,
                        const StainPrediction& stain);

// Dominant label among 1..4, ties toward the higher label; 0 when no pixel
// carries a stain label.
int DominantStainLabel(const PixelHistogram& histogram);

// "NFW/1+" style code: one letter per stain label present (N, F, W, S in
// that order), a slash, then the score. A patch with no stained pixels is
// rendered as just "0".
std::string AnnotationCode(const PixelHistogram& histogram, Her2Score score);

struct PatchScoreRecord {
  PatchCoord coord;  // IHC grid coordinate
  PatchCoord he_coord;
  PixelHistogram histogram;
  TumorPrediction tumor;
  StainPrediction stain;
  Her2Score score = Her2Score::k0;
  std::string annotation;
  ConfidenceFlag confidence_flag = ConfidenceFlag::kConsistent;
};

enum class BinaryStatus { kNegative, kEquivocal, kPositive };
std::string_view BinaryStatusName(BinaryStatus status);
BinaryStatus BinaryStatusFor(Her2Score score);

struct SlideScore {
  Her2Score wsi_score = Her2Score::k0;
  double coverage_pct = 0.0;
  BinaryStatus binary_status = BinaryStatus::kNegative;
  std::vector<PatchScoreRecord> patch_records;  // sorted by (row, col)
};

// Slide verdict: the highest patch score among patches scoring 2+ or 3+,
// falling back to the highest score overall when none do. Coverage is the
// percentage of grid patches scoring 2+ or higher. Throws kIncompleteGrid
// unless there is exactly one record per grid coordinate.
SlideScore ScoreSlide(std::vector<PatchScoreRecord> records, const GridSpec& spec);

}  // namespace her2
