#include "mcauc/losses.hpp"

#include <cmath>
#include <stdexcept>

#include "mcauc/numeric.hpp"

namespace mcauc {

namespace {

void check_slope(SigmoidSlope slope) {
  if (!(slope.delta > 0.0) || !std::isfinite(slope.delta))
    throw std::invalid_argument("sigmoid slope delta must be positive and finite");
}

// Mean sigmoid over the pos x neg pair grid, same enumeration order as the
// exact pair count so the c=2 reduction is reproducible bit for bit.
double sigmoid_pair_mean(std::span<const double> pos, std::span<const double> neg,
                         double delta) {
  double acc = 0.0;
  for (double sp : pos)
    for (double sn : neg) acc += stable_sigmoid(delta * (sp - sn));
  return acc / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

// Accumulates weight * d(aAUC)/d(score) into dpos/dneg.
void sigmoid_pair_grad(std::span<const double> pos, std::span<const double> neg, double delta,
                       double weight, std::span<double> dpos, std::span<double> dneg) {
  const double scale =
      weight * delta / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
  for (std::size_t i = 0; i < pos.size(); ++i)
    for (std::size_t j = 0; j < neg.size(); ++j) {
      const double s = stable_sigmoid(delta * (pos[i] - neg[j]));
      const double d = scale * s * (1.0 - s);
      dpos[i] += d;
      dneg[j] -= d;
    }
}

struct ClassIndex {
  std::vector<std::vector<std::size_t>> rows_of;  // row indices per class
  std::vector<int> present;                       // classes with at least one row
};

ClassIndex index_classes(const Matrix& scores, const LabelVector& labels) {
  if (scores.rows() == 0 || scores.cols() < 2)
    throw std::invalid_argument("score matrix must have N >= 1 rows and c >= 2 columns");
  if (labels.size() != scores.rows())
    throw std::invalid_argument("label count does not match score row count");
  ClassIndex index;
  index.rows_of.resize(scores.cols());
  for (std::size_t r = 0; r < scores.rows(); ++r) {
    const int y = labels[r];
    if (y < 0 || static_cast<std::size_t>(y) >= scores.cols())
      throw std::invalid_argument("label " + std::to_string(y) + " outside [0, " +
                                  std::to_string(scores.cols()) + ")");
    index.rows_of[static_cast<std::size_t>(y)].push_back(r);
  }
  for (std::size_t cls = 0; cls < index.rows_of.size(); ++cls)
    if (!index.rows_of[cls].empty()) index.present.push_back(static_cast<int>(cls));
  return index;
}

std::vector<double> gather(const Matrix& scores, const std::vector<std::size_t>& rows,
                           std::size_t column) {
  std::vector<double> out(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) out[k] = scores(rows[k], column);
  return out;
}

void scatter_add(Matrix& grad, const std::vector<std::size_t>& rows, std::size_t column,
                 std::span<const double> values) {
  for (std::size_t k = 0; k < rows.size(); ++k) grad(rows[k], column) += values[k];
}

// One directed aAUC term: targets = rows_pos scored on `column`, non-targets =
// rows_neg on the same column. Adds weight * d(term)/d(score) into grad and
// returns the term value.
double directed_aauc_term(const Matrix& scores, const std::vector<std::size_t>& rows_pos,
                          const std::vector<std::size_t>& rows_neg, std::size_t column,
                          double delta, double grad_weight, Matrix& grad) {
  const auto pos = gather(scores, rows_pos, column);
  const auto neg = gather(scores, rows_neg, column);
  std::vector<double> dpos(pos.size(), 0.0);
  std::vector<double> dneg(neg.size(), 0.0);
  sigmoid_pair_grad(pos, neg, delta, grad_weight, dpos, dneg);
  scatter_add(grad, rows_pos, column, dpos);
  scatter_add(grad, rows_neg, column, dneg);
  return sigmoid_pair_mean(pos, neg, delta);
}

}  // namespace

double stable_sigmoid(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("stable_sigmoid: non-finite input");
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double aauc_binary(const BinaryScoreSets& sets, SigmoidSlope slope) {
  check_slope(slope);
  if (sets.pos.empty())
    throw std::invalid_argument("undefined aAUC: positive (target) score set is empty");
  if (sets.neg.empty())
    throw std::invalid_argument("undefined aAUC: negative (non-target) score set is empty");
  return sigmoid_pair_mean(sets.pos, sets.neg, slope.delta);
}

BinaryScoreGrads aauc_binary_grad(const BinaryScoreSets& sets, SigmoidSlope slope) {
  check_slope(slope);
  if (sets.pos.empty())
    throw std::invalid_argument("undefined aAUC: positive (target) score set is empty");
  if (sets.neg.empty())
    throw std::invalid_argument("undefined aAUC: negative (non-target) score set is empty");
  BinaryScoreGrads grads;
  grads.pos.assign(sets.pos.size(), 0.0);
  grads.neg.assign(sets.neg.size(), 0.0);
  sigmoid_pair_grad(sets.pos, sets.neg, slope.delta, 1.0, grads.pos, grads.neg);
  return grads;
}

LossValueAndGrad aauc_ovo_loss(const Matrix& scores, const LabelVector& labels,
                               SigmoidSlope slope) {
  check_slope(slope);
  const ClassIndex index = index_classes(scores, labels);
  if (index.present.size() < 2)
    throw DegenerateBatchError("degenerate batch: fewer than 2 classes present");

  const std::size_t n_present = index.present.size();
  const double num_pairs = static_cast<double>(n_present) * (static_cast<double>(n_present) - 1.0) / 2.0;
  // loss = 1 - (1/P) sum_pairs 0.5*(A_ij + A_ji), so each directed term
  // carries gradient weight -0.5/P.
  const double grad_weight = -0.5 / num_pairs;

  LossValueAndGrad out;
  out.grad = Matrix(scores.rows(), scores.cols(), 0.0);
  double acc = 0.0;
  for (std::size_t a = 0; a + 1 < n_present; ++a)
    for (std::size_t b = a + 1; b < n_present; ++b) {
      const auto i = static_cast<std::size_t>(index.present[a]);
      const auto j = static_cast<std::size_t>(index.present[b]);
      const double a_ij = directed_aauc_term(scores, index.rows_of[i], index.rows_of[j], i,
                                             slope.delta, grad_weight, out.grad);
      const double a_ji = directed_aauc_term(scores, index.rows_of[j], index.rows_of[i], j,
                                             slope.delta, grad_weight, out.grad);
      acc += 0.5 * (a_ij + a_ji);
    }
  out.value = 1.0 - acc / num_pairs;
  return out;
}

LossValueAndGrad aauc_ovr_loss(const Matrix& scores, const LabelVector& labels,
                               SigmoidSlope slope) {
  check_slope(slope);
  const ClassIndex index = index_classes(scores, labels);
  if (index.present.size() < 2)
    throw DegenerateBatchError("degenerate batch: fewer than 2 classes present");

  const double n_terms = static_cast<double>(index.present.size());
  const double grad_weight = -1.0 / n_terms;

  LossValueAndGrad out;
  out.grad = Matrix(scores.rows(), scores.cols(), 0.0);
  double acc = 0.0;
  for (int cls : index.present) {
    const auto i = static_cast<std::size_t>(cls);
    std::vector<std::size_t> rest;
    rest.reserve(scores.rows() - index.rows_of[i].size());
    for (std::size_t r = 0; r < scores.rows(); ++r)
      if (labels[r] != cls) rest.push_back(r);
    acc += directed_aauc_term(scores, index.rows_of[i], rest, i, slope.delta, grad_weight,
                              out.grad);
  }
  out.value = 1.0 - acc / n_terms;
  return out;
}

LossValueAndGrad softmax_ce_loss(const Matrix& logits, const LabelVector& labels) {
  if (logits.rows() == 0 || logits.cols() < 2)
    throw std::invalid_argument("logit matrix must have N >= 1 rows and c >= 2 columns");
  if (labels.size() != logits.rows())
    throw std::invalid_argument("label count does not match logit row count");
  if (!all_finite(logits)) throw std::invalid_argument("softmax_ce_loss: non-finite logits");

  const double n = static_cast<double>(logits.rows());
  LossValueAndGrad out;
  out.grad = Matrix(logits.rows(), logits.cols(), 0.0);
  double total = 0.0;
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    const int y = labels[r];
    if (y < 0 || static_cast<std::size_t>(y) >= logits.cols())
      throw std::invalid_argument("label " + std::to_string(y) + " outside [0, " +
                                  std::to_string(logits.cols()) + ")");
    const auto row = logits.row(r);
    const double lse = log_sum_exp(row);
    total += lse - row[static_cast<std::size_t>(y)];
    auto grow = out.grad.row(r);
    softmax_row(row, grow);
    for (std::size_t c = 0; c < grow.size(); ++c) grow[c] /= n;
    grow[static_cast<std::size_t>(y)] -= 1.0 / n;
  }
  out.value = total / n;
  return out;
}

long long pair_count_cost(int num_classes, AucMode mode) {
  if (num_classes < 2) throw std::invalid_argument("pair_count_cost: need at least 2 classes");
  const long long c = num_classes;
  return mode == AucMode::kOvo ? c * (c - 1) : c;
}

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kSoftmaxCe: return "softmax_ce";
    case LossKind::kAaucOvo: return "aauc_ovo";
    case LossKind::kAaucOvr: return "aauc_ovr";
  }
  throw std::logic_error("unknown loss kind");
}

LossKind loss_kind_from_string(const std::string& name) {
  if (name == "softmax_ce" || name == "ce") return LossKind::kSoftmaxCe;
  if (name == "aauc_ovo" || name == "aauc-ovo") return LossKind::kAaucOvo;
  if (name == "aauc_ovr" || name == "aauc-ovr") return LossKind::kAaucOvr;
  throw std::invalid_argument("unknown loss kind '" + name +
                              "' (expected ce, aauc-ovo or aauc-ovr)");
}

}  // namespace mcauc
