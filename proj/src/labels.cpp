#include "her2/labels.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "her2/error.hpp"

namespace her2 {

namespace {

std::string Normalize(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  return out;
}

template <std::size_t N>
std::size_t ValidatedArgmax(const std::array<double, N>& p, double tolerance) {
  double sum = 0.0;
  std::size_t best = 0;
  for (std::size_t i = 0; i < N; ++i) {
    if (!(p[i] >= 0.0 && p[i] <= 1.0)) {
      Fail(ErrorKind::kInvalidArgument, "probability outside [0,1]");
    }
    sum += p[i];
    if (p[i] >= p[best]) best = i;
  }
  if (std::abs(sum - 1.0) > tolerance) {
    Fail(ErrorKind::kInvalidArgument, "probabilities do not sum to 1");
  }
  return best;
}

}  // namespace

std::string_view TumorLabelName(TumorLabel label) {
  return label == TumorLabel::kTumor ? "tumor" : "normal";
}

std::string_view StainLabelName(StainLabel label) {
  switch (label) {
    case StainLabel::kNoStain: return "no-stain";
    case StainLabel::kFaint: return "faint";
    case StainLabel::kWeak: return "weak";
    case StainLabel::kStrong: return "strong";
  }
  return "?";
}

TumorLabel ParseTumorLabel(std::string_view text) {
  const std::string n = Normalize(text);
  if (n == "tumor" || n == "tumour" || n == "malignant") return TumorLabel::kTumor;
  if (n == "normal") return TumorLabel::kNormal;
  Fail(ErrorKind::kInvalidArgument, "unknown tumor label '" + std::string(text) + "'");
}

StainLabel ParseStainLabel(std::string_view text) {
  const std::string n = Normalize(text);
  if (n == "nostain" || n == "none") return StainLabel::kNoStain;
  if (n == "faint" || n == "faintstain") return StainLabel::kFaint;
  if (n == "weak" || n == "weakstain") return StainLabel::kWeak;
  if (n == "strong" || n == "strongstain") return StainLabel::kStrong;
  Fail(ErrorKind::kInvalidArgument, "unknown stain label '" + std::string(text) + "'");
}

TumorPrediction MakeTumorPrediction(std::array<double, kTumorLabelCount> probabilities,
                                    double tolerance) {
  // Index 0 is Tumor, so ties resolve to Normal under the generic rule;
  // tumor wins ties instead to keep borderline patches in scoring.
  ValidatedArgmax(probabilities, tolerance);
  const TumorLabel label = probabilities[0] >= probabilities[1] ? TumorLabel::kTumor
                                                                : TumorLabel::kNormal;
  return {label, probabilities};
}

StainPrediction MakeStainPrediction(std::array<double, kStainLabelCount> probabilities,
                                    double tolerance) {
  const std::size_t best = ValidatedArgmax(probabilities, tolerance);
  return {static_cast<StainLabel>(best), probabilities};
}

LabelMap::LabelMap(int width, int height) : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    Fail(ErrorKind::kInvalidArgument, "label map dimensions must be positive");
  }
  labels_.assign(static_cast<std::size_t>(width) * height, 0);
}

LabelMap::LabelMap(int width, int height, std::vector<std::uint8_t> labels)
    : width_(width), height_(height), labels_(std::move(labels)) {
  if (width < 1 || height < 1) {
    Fail(ErrorKind::kInvalidArgument, "label map dimensions must be positive");
  }
  if (labels_.size() != static_cast<std::size_t>(width) * height) {
    Fail(ErrorKind::kInvalidArgument, "label buffer length must be width*height");
  }
  if (std::any_of(labels_.begin(), labels_.end(),
                  [](std::uint8_t v) { return v > kMaxPixelLabel; })) {
    Fail(ErrorKind::kInvalidArgument, "label value outside {0..4}");
  }
}

void LabelMap::set(int x, int y, std::uint8_t label) {
  if (label > kMaxPixelLabel) {
    Fail(ErrorKind::kInvalidArgument, "label value outside {0..4}");
  }
  labels_[static_cast<std::size_t>(y) * width_ + x] = label;
}

}  // namespace her2
