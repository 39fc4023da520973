#include "mcauc/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mcauc {

namespace {

// Shared pair-counting core. Counting greater/less as integers and forming
// 1/2 + (greater - less) / (2 * pairs) keeps the complement identity exact.
double pair_count_auc(std::span<const double> pos, std::span<const double> neg) {
  long long greater = 0;
  long long less = 0;
  for (double sp : pos)
    for (double sn : neg) {
      greater += sp > sn;
      less += sp < sn;
    }
  const double pairs = static_cast<double>(pos.size()) * static_cast<double>(neg.size());
  return 0.5 + 0.5 * static_cast<double>(greater - less) / pairs;
}

std::vector<double> column_scores_for_class(const Matrix& scores, const LabelVector& labels,
                                            int cls, std::size_t column) {
  std::vector<double> out;
  for (std::size_t r = 0; r < scores.rows(); ++r)
    if (labels[r] == cls) out.push_back(scores(r, column));
  return out;
}

std::vector<double> column_scores_for_rest(const Matrix& scores, const LabelVector& labels,
                                           int cls, std::size_t column) {
  std::vector<double> out;
  for (std::size_t r = 0; r < scores.rows(); ++r)
    if (labels[r] != cls) out.push_back(scores(r, column));
  return out;
}

void check_scores_and_labels(const Matrix& scores, const LabelVector& labels) {
  if (scores.rows() == 0 || scores.cols() < 2)
    throw std::invalid_argument("score matrix must have N >= 1 rows and c >= 2 columns");
  if (labels.size() != scores.rows())
    throw std::invalid_argument("label count does not match score row count");
  class_counts(labels, scores.cols());  // validates the label range
}

void require_class_present(const std::vector<std::size_t>& counts, int cls) {
  if (counts[static_cast<std::size_t>(cls)] == 0)
    throw std::invalid_argument("empty class " + std::to_string(cls));
}

// Directed AUC(C_i, C_j): class-i rows as targets, class-j rows as
// non-targets, both scored with column i.
double directed_auc(const Matrix& scores, const LabelVector& labels, int target,
                    int non_target) {
  const auto pos = column_scores_for_class(scores, labels, target,
                                           static_cast<std::size_t>(target));
  const auto neg = column_scores_for_class(scores, labels, non_target,
                                           static_cast<std::size_t>(target));
  return pair_count_auc(pos, neg);
}

}  // namespace

double binary_auc(const BinaryScoreSets& sets) {
  if (sets.pos.empty())
    throw std::invalid_argument("undefined AUC: positive (target) score set is empty");
  if (sets.neg.empty())
    throw std::invalid_argument("undefined AUC: negative (non-target) score set is empty");
  return pair_count_auc(sets.pos, sets.neg);
}

double pairwise_auc_hat(const Matrix& scores, const LabelVector& labels, int class_i,
                        int class_j) {
  check_scores_and_labels(scores, labels);
  if (class_i == class_j) throw std::invalid_argument("pairwise_auc_hat: classes must differ");
  if (class_i < 0 || class_j < 0 || static_cast<std::size_t>(class_i) >= scores.cols() ||
      static_cast<std::size_t>(class_j) >= scores.cols())
    throw std::invalid_argument("pairwise_auc_hat: class index out of range");
  const auto counts = class_counts(labels, scores.cols());
  require_class_present(counts, class_i);
  require_class_present(counts, class_j);
  // Symmetric by construction: the two directed terms swap roles when (i, j)
  // swaps, so the mean is identical either way.
  const int a = std::min(class_i, class_j);
  const int b = std::max(class_i, class_j);
  return 0.5 * (directed_auc(scores, labels, a, b) + directed_auc(scores, labels, b, a));
}

double auc_ovo(const Matrix& scores, const LabelVector& labels) {
  check_scores_and_labels(scores, labels);
  const auto counts = class_counts(labels, scores.cols());
  const std::size_t c = scores.cols();
  for (std::size_t i = 0; i < c; ++i) require_class_present(counts, static_cast<int>(i));
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < c; ++i)
    for (std::size_t j = i + 1; j < c; ++j)
      acc += 0.5 * (directed_auc(scores, labels, static_cast<int>(i), static_cast<int>(j)) +
                    directed_auc(scores, labels, static_cast<int>(j), static_cast<int>(i)));
  const double num_pairs = static_cast<double>(c) * static_cast<double>(c - 1) / 2.0;
  return acc / num_pairs;
}

double auc_ovr(const Matrix& scores, const LabelVector& labels) {
  check_scores_and_labels(scores, labels);
  const auto counts = class_counts(labels, scores.cols());
  const std::size_t c = scores.cols();
  double acc = 0.0;
  for (std::size_t i = 0; i < c; ++i) {
    require_class_present(counts, static_cast<int>(i));
    const auto pos = column_scores_for_class(scores, labels, static_cast<int>(i), i);
    const auto neg = column_scores_for_rest(scores, labels, static_cast<int>(i), i);
    acc += pair_count_auc(pos, neg);
  }
  return acc / static_cast<double>(c);
}

PRCurve pr_curve(std::span<const double> scores, const std::vector<bool>& is_positive) {
  if (scores.size() != is_positive.size())
    throw std::invalid_argument("pr_curve: score and label counts differ");
  if (scores.empty()) throw std::invalid_argument("pr_curve: empty input");
  std::size_t total_pos = 0;
  for (bool p : is_positive) total_pos += p;
  if (total_pos == 0) throw std::invalid_argument("undefined recall: no positive examples");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  PRCurve curve;
  curve.points.push_back({scores[order.front()], 0.0, 1.0});
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t k = 0;
  while (k < order.size()) {
    const double threshold = scores[order[k]];
    while (k < order.size() && scores[order[k]] == threshold) {
      if (is_positive[order[k]])
        ++tp;
      else
        ++fp;
      ++k;
    }
    curve.points.push_back({threshold,
                            static_cast<double>(tp) / static_cast<double>(total_pos),
                            static_cast<double>(tp) / static_cast<double>(tp + fp)});
  }
  return curve;
}

double average_precision(const PRCurve& curve) {
  if (curve.points.empty()) throw std::invalid_argument("average_precision: empty curve");
  double ap = 0.0;
  double prev_recall = curve.points.front().recall;
  for (std::size_t k = 1; k < curve.points.size(); ++k) {
    ap += (curve.points[k].recall - prev_recall) * curve.points[k].precision;
    prev_recall = curve.points[k].recall;
  }
  return ap;
}

double macro_avg_ap(const Matrix& scores, const LabelVector& labels) {
  check_scores_and_labels(scores, labels);
  const std::size_t c = scores.cols();
  std::vector<double> column(scores.rows());
  std::vector<bool> positive(scores.rows());
  double acc = 0.0;
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t r = 0; r < scores.rows(); ++r) {
      column[r] = scores(r, i);
      positive[r] = labels[r] == static_cast<int>(i);
    }
    acc += average_precision(pr_curve(column, positive));
  }
  return acc / static_cast<double>(c);
}

MetricsReport classification_report(const LabelVector& pred, const LabelVector& truth,
                                    std::size_t num_classes) {
  if (pred.size() != truth.size())
    throw std::invalid_argument("classification_report: prediction and truth lengths differ");
  if (pred.empty()) throw std::invalid_argument("classification_report: empty input");
  if (num_classes == 0) {
    int hi = 0;
    for (int y : pred) hi = std::max(hi, y);
    for (int y : truth) hi = std::max(hi, y);
    num_classes = static_cast<std::size_t>(hi) + 1;
  }
  class_counts(pred, num_classes);
  class_counts(truth, num_classes);

  std::vector<std::size_t> tp(num_classes, 0), fp(num_classes, 0), fn(num_classes, 0);
  std::size_t correct = 0;
  for (std::size_t r = 0; r < pred.size(); ++r) {
    if (pred[r] == truth[r]) {
      ++correct;
      ++tp[static_cast<std::size_t>(truth[r])];
    } else {
      ++fp[static_cast<std::size_t>(pred[r])];
      ++fn[static_cast<std::size_t>(truth[r])];
    }
  }

  MetricsReport report;
  report.accuracy = static_cast<double>(correct) / static_cast<double>(pred.size());
  report.per_class.resize(num_classes);
  for (std::size_t i = 0; i < num_classes; ++i) {
    ClassPRF& m = report.per_class[i];
    const std::size_t pred_pos = tp[i] + fp[i];
    const std::size_t true_pos = tp[i] + fn[i];
    if (pred_pos == 0) {
      m.precision = 0.0;
      m.zero_division = true;
    } else {
      m.precision = static_cast<double>(tp[i]) / static_cast<double>(pred_pos);
    }
    if (true_pos == 0) {
      m.recall = 0.0;
      m.zero_division = true;
    } else {
      m.recall = static_cast<double>(tp[i]) / static_cast<double>(true_pos);
    }
    if (m.precision + m.recall == 0.0) {
      m.f1 = 0.0;
      m.zero_division = true;
    } else {
      m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    }
    report.zero_division_warning = report.zero_division_warning || m.zero_division;
  }
  return report;
}

MetricsReport evaluate_scores(const Matrix& scores, const LabelVector& pred,
                              const LabelVector& truth) {
  MetricsReport report = classification_report(pred, truth, scores.cols());
  report.auc_ovo = auc_ovo(scores, truth);
  report.auc_ovr = auc_ovr(scores, truth);
  report.avg_pr_auc = macro_avg_ap(scores, truth);
  return report;
}

}  // namespace mcauc
