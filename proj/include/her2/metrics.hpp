#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "her2/labels.hpp"

namespace her2::metrics {

struct ConfusionMatrix {
  std::vector<std::string> labels;
  // counts[truth][predicted]
  std::vector<std::vector<std::uint64_t>> counts;

  std::size_t index_of(std::string_view label) const;  // kInvalidArgument if absent
  std::uint64_t total() const;
};

ConfusionMatrix Confusion(std::span<const std::string> truth,
                          std::span<const std::string> predicted,
                          std::span<const std::string> label_order);

// Collapses a multiclass matrix to {positive, "rest"}; the sample count is
// preserved.
ConfusionMatrix OneVsRest(const ConfusionMatrix& matrix, std::string_view positive);

struct ClassificationMetrics {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
  double accuracy = 0, precision = 0, recall = 0, sensitivity = 0, specificity = 0,
         f1 = 0;
  // Set when any ratio had a zero denominator (that ratio is reported as 0).
  bool degenerate = false;
};

// Requires a 2x2 matrix; `positive_label` selects the positive class.
ClassificationMetrics ComputeClassificationMetrics(const ConfusionMatrix& matrix,
                                                   std::string_view positive_label);

struct ScoredSample {
  double probability = 0;
  bool positive = false;
};

struct RocPoint {
  double fpr = 0;
  double tpr = 0;
  // Samples with probability >= threshold are called positive; the origin
  // carries +inf.
  double threshold = std::numeric_limits<double>::infinity();
};

struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0;
};

// Sweeps every distinct score (tied scores form one step). Throws
// kUndefinedRoc unless both classes are present.
RocCurve Roc(std::span<const ScoredSample> samples);

struct IouReport {
  std::map<int, double> per_label;
  double mean_iou = 0;
};

// Averages over labels present in either map. Throws kInvalidArgument when
// dimensions differ.
IouReport MeanIou(const LabelMap& predicted, const LabelMap& truth);

struct DcaCurve {
  std::vector<double> thresholds;
  std::vector<double> model_nb;
  std::vector<double> treat_all_nb;
  std::vector<double> treat_none_nb;
};

// 0.00, 0.01, ..., 0.30.
std::vector<double> DefaultDcaThresholds();

// Net benefit NB(t) = TP/N - FP/N * t/(1-t), calling samples with
// probability >= t positive. Thresholds must lie in [0, 1).
DcaCurve Dca(std::span<const ScoredSample> samples, std::span<const double> thresholds);

// Rows of a prediction CSV: id,true_label,pred_label,prob_<label>...
struct PredictionTable {
  std::vector<std::string> ids;
  std::vector<std::string> truth;
  std::vector<std::string> predicted;
  std::vector<std::string> prob_labels;          // from prob_<label> headers
  std::vector<std::vector<double>> probabilities;  // [row][prob_labels index]

  // Scores for a one-vs-rest view of `label`; kInvalidArgument when the file
  // has no prob_<label> column.
  std::vector<ScoredSample> ScoresFor(std::string_view label) const;
};

// Throws kInvalidArgument with the 1-based line number on malformed input.
// true_label may be omitted when `truth_csv` (id,true_label) is supplied.
PredictionTable ReadPredictionCsv(const std::filesystem::path& pred_csv);
void JoinTruthCsv(PredictionTable& table, const std::filesystem::path& truth_csv);

}  // namespace her2::metrics
