#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mcauc/matrix.hpp"

namespace mcauc {

// Target and non-target score sets for one binary comparison.
struct BinaryScoreSets {
  std::vector<double> pos;
  std::vector<double> neg;
};

// Exact AUC by pair counting. A tie counts 1/2, so
// binary_auc(pos, neg) + binary_auc(neg, pos) == 1 holds exactly.
double binary_auc(const BinaryScoreSets& sets);

// Symmetrised pairwise AUC between two classes: the mean of the two directed
// AUCs, where the directed AUC for (i, j) scores class-i rows against class-j
// rows using score column i.
double pairwise_auc_hat(const Matrix& scores, const LabelVector& labels, int class_i,
                        int class_j);

// Mean of pairwise_auc_hat over all unordered class pairs.
double auc_ovo(const Matrix& scores, const LabelVector& labels);

// Mean over classes of the binary AUC with class i as targets (score column i)
// and everything else as non-targets.
double auc_ovr(const Matrix& scores, const LabelVector& labels);

struct PRPoint {
  double threshold = 0.0;
  double recall = 0.0;
  double precision = 0.0;

  friend bool operator==(const PRPoint&, const PRPoint&) = default;
};

// Precision/recall points at every distinct score threshold, descending
// threshold order (so recall is non-decreasing along the list). The first
// point is a conventional anchor at recall 0, precision 1 carrying the top
// threshold; the last point sits at the lowest threshold with recall 1.
struct PRCurve {
  std::vector<PRPoint> points;
};

PRCurve pr_curve(std::span<const double> scores, const std::vector<bool>& is_positive);

// Step-rule area under the PR curve: sum of (R_k - R_prev) * P_k walking the
// points in increasing-recall order. No trapezoid interpolation.
double average_precision(const PRCurve& curve);

// Unweighted mean of the per-class average precisions (one-vs-rest per class).
double macro_avg_ap(const Matrix& scores, const LabelVector& labels);

struct ClassPRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool zero_division = false;  // some denominator was zero; value reported as 0
};

struct MetricsReport {
  double accuracy = 0.0;
  std::vector<ClassPRF> per_class;
  double auc_ovo = 0.0;
  double auc_ovr = 0.0;
  double avg_pr_auc = 0.0;
  bool zero_division_warning = false;
};

// Hard-decision metrics only (accuracy and per-class precision/recall/f1).
// num_classes == 0 infers c from the largest label seen.
MetricsReport classification_report(const LabelVector& pred, const LabelVector& truth,
                                    std::size_t num_classes = 0);

// Full report: hard metrics from pred vs truth plus the three score-based
// AUC metrics.
MetricsReport evaluate_scores(const Matrix& scores, const LabelVector& pred,
                              const LabelVector& truth);

}  // namespace mcauc
