#include "her2/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>
#include <unordered_map>

#include "her2/error.hpp"

namespace her2::metrics {

std::size_t ConfusionMatrix::index_of(std::string_view label) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) {
    Fail(ErrorKind::kInvalidArgument, "unknown label '" + std::string(label) + "'");
  }
  return static_cast<std::size_t>(it - labels.begin());
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t n = 0;
  for (const auto& row : counts) {
    for (auto c : row) n += c;
  }
  return n;
}

ConfusionMatrix Confusion(std::span<const std::string> truth,
                          std::span<const std::string> predicted,
                          std::span<const std::string> label_order) {
  if (truth.size() != predicted.size()) {
    Fail(ErrorKind::kInvalidArgument, "truth and prediction lengths differ");
  }
  ConfusionMatrix m;
  m.labels.assign(label_order.begin(), label_order.end());
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < m.labels.size(); ++i) {
    if (!index.emplace(m.labels[i], i).second) {
      Fail(ErrorKind::kInvalidArgument, "duplicate label '" + m.labels[i] + "'");
    }
  }
  m.counts.assign(m.labels.size(), std::vector<std::uint64_t>(m.labels.size(), 0));
  auto lookup = [&](const std::string& label) {
    const auto it = index.find(label);
    if (it == index.end()) {
      Fail(ErrorKind::kInvalidArgument, "unknown label '" + label + "'");
    }
    return it->second;
  };
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++m.counts[lookup(truth[i])][lookup(predicted[i])];
  }
  return m;
}

ConfusionMatrix OneVsRest(const ConfusionMatrix& matrix, std::string_view positive) {
  const std::size_t p = matrix.index_of(positive);
  ConfusionMatrix out;
  out.labels = {std::string(positive), "rest"};
  out.counts.assign(2, std::vector<std::uint64_t>(2, 0));
  for (std::size_t t = 0; t < matrix.labels.size(); ++t) {
    for (std::size_t q = 0; q < matrix.labels.size(); ++q) {
      out.counts[t == p ? 0 : 1][q == p ? 0 : 1] += matrix.counts[t][q];
    }
  }
  return out;
}

ClassificationMetrics ComputeClassificationMetrics(const ConfusionMatrix& matrix,
                                                   std::string_view positive_label) {
  if (matrix.labels.size() != 2) {
    Fail(ErrorKind::kInvalidArgument,
         "classification metrics need a binary matrix; use OneVsRest first");
  }
  const std::size_t p = matrix.index_of(positive_label);
  const std::size_t n = 1 - p;

  ClassificationMetrics m;
  m.tp = matrix.counts[p][p];
  m.fn = matrix.counts[p][n];
  m.fp = matrix.counts[n][p];
  m.tn = matrix.counts[n][n];

  auto ratio = [&m](std::uint64_t num, std::uint64_t den) {
    if (den == 0) {
      m.degenerate = true;
      return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
  };
  m.accuracy = ratio(m.tp + m.tn, m.tp + m.tn + m.fp + m.fn);
  m.precision = ratio(m.tp, m.tp + m.fp);
  m.recall = ratio(m.tp, m.tp + m.fn);
  m.sensitivity = m.recall;
  m.specificity = ratio(m.tn, m.tn + m.fp);
  // 2PR/(P+R) written in counts to avoid compounding rounding.
  m.f1 = ratio(2 * m.tp, 2 * m.tp + m.fp + m.fn);
  return m;
}

RocCurve Roc(std::span<const ScoredSample> samples) {
  std::vector<ScoredSample> sorted(samples.begin(), samples.end());
  const auto positives = static_cast<std::size_t>(
      std::count_if(sorted.begin(), sorted.end(), [](const auto& s) { return s.positive; }));
  const std::size_t negatives = sorted.size() - positives;
  if (positives == 0 || negatives == 0) {
    Fail(ErrorKind::kUndefinedRoc, "ROC needs at least one positive and one negative sample");
  }
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.probability > b.probability;
  });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    const double threshold = sorted[i].probability;
    for (; i < sorted.size() && sorted[i].probability == threshold; ++i) {
      (sorted[i].positive ? tp : fp)++;
    }
    const RocPoint prev = curve.points.back();
    RocPoint next{static_cast<double>(fp) / negatives, static_cast<double>(tp) / positives,
                  threshold};
    curve.auc += (next.fpr - prev.fpr) * (next.tpr + prev.tpr) / 2.0;
    curve.points.push_back(next);
  }
  return curve;
}

IouReport MeanIou(const LabelMap& predicted, const LabelMap& truth) {
  if (predicted.width() != truth.width() || predicted.height() != truth.height()) {
    Fail(ErrorKind::kInvalidArgument, "mean IoU: label map dimensions differ");
  }
  std::array<std::uint64_t, kPixelLabelCount> intersection{}, pred_count{}, truth_count{};
  const auto p = predicted.labels();
  const auto t = truth.labels();
  for (std::size_t i = 0; i < p.size(); ++i) {
    ++pred_count[p[i]];
    ++truth_count[t[i]];
    if (p[i] == t[i]) ++intersection[p[i]];
  }
  IouReport report;
  double sum = 0.0;
  for (std::size_t k = 0; k < kPixelLabelCount; ++k) {
    const std::uint64_t uni = pred_count[k] + truth_count[k] - intersection[k];
    if (uni == 0) continue;
    const double iou = static_cast<double>(intersection[k]) / static_cast<double>(uni);
    report.per_label[static_cast<int>(k)] = iou;
    sum += iou;
  }
  report.mean_iou = report.per_label.empty() ? 0.0 : sum / report.per_label.size();
  return report;
}

std::vector<double> DefaultDcaThresholds() {
  std::vector<double> t;
  for (int i = 0; i <= 30; ++i) t.push_back(i / 100.0);
  return t;
}

DcaCurve Dca(std::span<const ScoredSample> samples, std::span<const double> thresholds) {
  if (samples.empty()) Fail(ErrorKind::kInvalidArgument, "DCA needs at least one sample");
  const double n = static_cast<double>(samples.size());
  const double prevalence =
      std::count_if(samples.begin(), samples.end(), [](const auto& s) { return s.positive; }) /
      n;

  DcaCurve curve;
  for (double t : thresholds) {
    if (!(t >= 0.0 && t < 1.0)) {
      Fail(ErrorKind::kInvalidArgument, "DCA thresholds must lie in [0, 1)");
    }
    std::size_t tp = 0, fp = 0;
    for (const auto& s : samples) {
      if (s.probability >= t) (s.positive ? tp : fp)++;
    }
    const double odds = t / (1.0 - t);
    curve.thresholds.push_back(t);
    curve.model_nb.push_back(tp / n - fp / n * odds);
    curve.treat_all_nb.push_back(prevalence - (1.0 - prevalence) * odds);
    curve.treat_none_nb.push_back(0.0);
  }
  return curve;
}

namespace {

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  for (auto& f : fields) {
    const auto b = f.find_first_not_of(" \t\r");
    const auto e = f.find_last_not_of(" \t\r");
    f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
  }
  return fields;
}

[[noreturn]] void Malformed(const std::filesystem::path& path, std::size_t line,
                            const std::string& what) {
  Fail(ErrorKind::kInvalidArgument,
       path.string() + ":" + std::to_string(line) + ": " + what);
}

template <typename RowFn>
void ForEachRow(const std::filesystem::path& path,
                const std::function<void(const std::vector<std::string>&)>& header_fn,
                RowFn row_fn) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIo, "cannot read " + path.string());
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fields = SplitCsvLine(line);
    if (!have_header) {
      header_fn(fields);
      have_header = true;
      continue;
    }
    row_fn(fields, line_no);
  }
  if (!have_header) Malformed(path, 1, "missing header");
}

}  // namespace

PredictionTable ReadPredictionCsv(const std::filesystem::path& pred_csv) {
  PredictionTable table;
  int id_col = -1, true_col = -1, pred_col = -1;
  std::vector<int> prob_cols;
  std::size_t width = 0;

  ForEachRow(
      pred_csv,
      [&](const std::vector<std::string>& header) {
        width = header.size();
        for (std::size_t i = 0; i < header.size(); ++i) {
          const auto& h = header[i];
          if (h == "id") id_col = static_cast<int>(i);
          else if (h == "true_label") true_col = static_cast<int>(i);
          else if (h == "pred_label") pred_col = static_cast<int>(i);
          else if (h.rfind("prob_", 0) == 0 && h.size() > 5) {
            table.prob_labels.push_back(h.substr(5));
            prob_cols.push_back(static_cast<int>(i));
          } else {
            Malformed(pred_csv, 1, "unexpected column '" + h + "'");
          }
        }
        if (id_col < 0 || pred_col < 0) {
          Malformed(pred_csv, 1, "header must contain id and pred_label");
        }
      },
      [&](const std::vector<std::string>& f, std::size_t line) {
        if (f.size() != width) {
          Malformed(pred_csv, line, "expected " + std::to_string(width) + " fields, got " +
                                        std::to_string(f.size()));
        }
        table.ids.push_back(f[id_col]);
        table.truth.push_back(true_col >= 0 ? f[true_col] : std::string());
        table.predicted.push_back(f[pred_col]);
        std::vector<double> probs;
        for (int c : prob_cols) {
          std::size_t used = 0;
          double v = 0;
          try {
            v = std::stod(f[c], &used);
          } catch (const std::exception&) {
            used = 0;
          }
          if (used == 0 || used != f[c].size() || !(v >= 0.0 && v <= 1.0)) {
            Malformed(pred_csv, line, "probability '" + f[c] + "' is not a number in [0,1]");
          }
          probs.push_back(v);
        }
        table.probabilities.push_back(std::move(probs));
      });

  if (true_col < 0) table.truth.assign(table.ids.size(), std::string());
  return table;
}

void JoinTruthCsv(PredictionTable& table, const std::filesystem::path& truth_csv) {
  std::unordered_map<std::string, std::string> truth;
  int id_col = -1, true_col = -1;
  std::size_t width = 0;
  ForEachRow(
      truth_csv,
      [&](const std::vector<std::string>& header) {
        width = header.size();
        for (std::size_t i = 0; i < header.size(); ++i) {
          if (header[i] == "id") id_col = static_cast<int>(i);
          if (header[i] == "true_label") true_col = static_cast<int>(i);
        }
        if (id_col < 0 || true_col < 0) {
          Malformed(truth_csv, 1, "header must contain id and true_label");
        }
      },
      [&](const std::vector<std::string>& f, std::size_t line) {
        if (f.size() != width) Malformed(truth_csv, line, "wrong number of fields");
        if (!truth.emplace(f[id_col], f[true_col]).second) {
          Malformed(truth_csv, line, "duplicate id '" + f[id_col] + "'");
        }
      });
  for (std::size_t i = 0; i < table.ids.size(); ++i) {
    const auto it = truth.find(table.ids[i]);
    if (it == truth.end()) {
      Fail(ErrorKind::kInvalidArgument, truth_csv.string() + ": no truth for id '" +
                                            table.ids[i] + "'");
    }
    table.truth[i] = it->second;
  }
}

std::vector<ScoredSample> PredictionTable::ScoresFor(std::string_view label) const {
  const auto it = std::find(prob_labels.begin(), prob_labels.end(), label);
  if (it == prob_labels.end()) {
    Fail(ErrorKind::kInvalidArgument, "no prob_" + std::string(label) + " column");
  }
  const auto col = static_cast<std::size_t>(it - prob_labels.begin());
  std::vector<ScoredSample> out;
  out.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out.push_back({probabilities[i][col], truth[i] == label});
  }
  return out;
}

}  // namespace her2::metrics
