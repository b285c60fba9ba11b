#include "her2/scoring.hpp"

#include <algorithm>

#include "her2/error.hpp"

namespace her2 {

PixelHistogram ComputePixelHistogram(const LabelMap& labels) {
  PixelHistogram h;
  for (std::uint8_t v : labels.labels()) ++h.counts[v];
  h.total_px = labels.labels().size();
  return h;
}

PixelHistogram BinaryHistogram(const PixelHistogram& histogram) {
  PixelHistogram out = histogram;
  out.counts[2] = 0;
  out.counts[3] = 0;
  return out;
}

double PatchPercentage(const PixelHistogram& histogram, std::span<const int> labels) {
  if (histogram.total_px == 0) {
    Fail(ErrorKind::kInvalidArgument, "histogram has no pixels");
  }
  std::uint64_t covered = 0;
  std::array<bool, kPixelLabelCount> seen{};
  for (int label : labels) {
    if (label < 1 || label > 4) {
      Fail(ErrorKind::kInvalidArgument, "percentage labels must be in 1..4");
    }
    if (seen[label]) continue;
    seen[label] = true;
    covered += histogram.counts[label];
  }
  return static_cast<double>(covered) * 100.0 / static_cast<double>(histogram.total_px);
}

double PatchPercentage(const PixelHistogram& histogram, std::initializer_list<int> labels) {
  return PatchPercentage(histogram, std::span<const int>(labels.begin(), labels.size()));
}

std::string_view ScoreText(Her2Score score) {
  switch (score) {
    case Her2Score::k0: return "0";
    case Her2Score::k1Plus: return "1+";
    case Her2Score::k2Plus: return "2+";
    case Her2Score::k3Plus: return "3+";
  }
  return "?";
}

Her2Score ParseScore(std::string_view text) {
  for (Her2Score s : {Her2Score::k0, Her2Score::k1Plus, Her2Score::k2Plus,
                      Her2Score::k3Plus}) {
    if (ScoreText(s) == text) return s;
  }
  Fail(ErrorKind::kInvalidArgument, "unknown HER2 score '" + std::string(text) + "'");
}

std::string_view ConfidenceFlagName(ConfidenceFlag flag) {
  return flag == ConfidenceFlag::kConsistent ? "consistent" : "model-disagreement";
}

int DominantStainLabel(const PixelHistogram& histogram) {
  int best = 0;
  std::uint64_t best_count = 0;
  for (int k = 1; k <= 4; ++k) {
    if (histogram.counts[k] > 0 && histogram.counts[k] >= best_count) {
      best = k;
      best_count = histogram.counts[k];
    }
  }
  return best;
}

PatchVerdict ScorePatch(const PixelHistogram& histogram, const TumorPrediction& tumor,
                        const StainPrediction& stain) {
  const int dominant = DominantStainLabel(histogram);
  const StainLabel dominant_stain =
      dominant == 0 ? StainLabel::kNoStain : static_cast<StainLabel>(dominant - 1);

  PatchVerdict verdict;
  if (tumor.label == TumorLabel::kTumor && dominant != 0) {
    verdict.score = ScoreForPixelLabel(dominant);
  }
  verdict.confidence_flag = stain.label == dominant_stain
                                ? ConfidenceFlag::kConsistent
                                : ConfidenceFlag::kModelDisagreement;
  return verdict;
}

std::string AnnotationCode(const PixelHistogram& histogram, Her2Score score) {
  static constexpr char kLetters[] = {'N', 'F', 'W', 'S'};
  std::string letters;
  for (int k = 1; k <= 4; ++k) {
    if (histogram.counts[k] > 0) letters.push_back(kLetters[k - 1]);
  }
  if (letters.empty()) return "0";
  return letters + "/" + std::string(ScoreText(score));
}

std::string_view BinaryStatusName(BinaryStatus status) {
  switch (status) {
    case BinaryStatus::kNegative: return "negative";
    case BinaryStatus::kEquivocal: return "equivocal";
    case BinaryStatus::kPositive: return "positive";
  }
  return "?";
}

BinaryStatus BinaryStatusFor(Her2Score score) {
  switch (score) {
    case Her2Score::k0:
    case Her2Score::k1Plus: return BinaryStatus::kNegative;
    case Her2Score::k2Plus: return BinaryStatus::kEquivocal;
    case Her2Score::k3Plus: return BinaryStatus::kPositive;
  }
  return BinaryStatus::kNegative;
}

SlideScore ScoreSlide(std::vector<PatchScoreRecord> records, const GridSpec& spec) {
  if (records.size() != spec.patch_count()) {
    Fail(ErrorKind::kIncompleteGrid,
         "expected " + std::to_string(spec.patch_count()) + " patch records, got " +
             std::to_string(records.size()));
  }
  std::sort(records.begin(), records.end(),
            [](const PatchScoreRecord& a, const PatchScoreRecord& b) {
              return a.coord < b.coord;
            });
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].coord != CoordAt(spec, i)) {
      Fail(ErrorKind::kIncompleteGrid,
           "no patch record for " + ToString(CoordAt(spec, i)));
    }
  }

  SlideScore slide;
  Her2Score max_all = Her2Score::k0;
  std::size_t positive = 0;
  for (const auto& r : records) {
    max_all = std::max(max_all, r.score);
    if (r.score >= Her2Score::k2Plus) ++positive;
  }
  // With no 2+/3+ patch the overall maximum (0 or 1+) is the verdict, which
  // is what max over 2+/3+ patches would be when any exist.
  slide.wsi_score = max_all;
  slide.coverage_pct =
      100.0 * static_cast<double>(positive) / static_cast<double>(spec.patch_count());
  slide.binary_status = BinaryStatusFor(slide.wsi_score);
  slide.patch_records = std::move(records);
  return slide;
}

}  // namespace her2
