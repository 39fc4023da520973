#include "mcauc/calibration.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

#include "mcauc/numeric.hpp"

namespace mcauc {

namespace {

std::vector<double> calibrated_logits(const CalibratorParams& cal,
                                      std::span<const double> score_row) {
  const std::size_t c = cal.bias.size();
  std::vector<double> logits(c, 0.0);
  for (std::size_t k = 0; k < c; ++k) {
    double acc = cal.bias[k];
    for (std::size_t m = 0; m < c; ++m) acc += cal.weight(k, m) * score_row[m];
    logits[k] = acc;
  }
  return logits;
}

}  // namespace

CalibratorParams fit_calibrator(const Matrix& scores, const LabelVector& labels,
                                const CalibratorSgdConfig& config) {
  const std::size_t c = scores.cols();
  if (scores.rows() == 0 || c < 2)
    throw std::invalid_argument("fit_calibrator: need N >= 1 rows and c >= 2 columns");
  if (labels.size() != scores.rows())
    throw std::invalid_argument("fit_calibrator: label count mismatch");
  const auto counts = class_counts(labels, c);
  for (std::size_t cls = 0; cls < c; ++cls)
    if (counts[cls] == 0)
      throw std::invalid_argument("fit_calibrator: class " + std::to_string(cls) +
                                  " missing from the calibration set");
  if (!(config.lr > 0.0)) throw std::invalid_argument("fit_calibrator: lr must be positive");
  if (config.epochs < 0) throw std::invalid_argument("fit_calibrator: negative epoch count");
  if (config.batch_size < 1)
    throw std::invalid_argument("fit_calibrator: batch size must be >= 1");

  CalibratorParams cal{Matrix::identity(c), std::vector<double>(c, 0.0)};
  if (config.epochs == 0) return cal;

  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(scores.rows());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t batch = static_cast<std::size_t>(config.batch_size);

  std::vector<double> probs(c);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t stop = std::min(start + batch, order.size());
      const double inv_b = 1.0 / static_cast<double>(stop - start);
      Matrix grad_w(c, c, 0.0);
      std::vector<double> grad_b(c, 0.0);
      for (std::size_t k = start; k < stop; ++k) {
        const std::size_t r = order[k];
        const auto logits = calibrated_logits(cal, scores.row(r));
        softmax_row(logits, probs);
        probs[static_cast<std::size_t>(labels[r])] -= 1.0;
        for (std::size_t i = 0; i < c; ++i) {
          grad_b[i] += inv_b * probs[i];
          for (std::size_t m = 0; m < c; ++m)
            grad_w(i, m) += inv_b * probs[i] * scores(r, m);
        }
      }
      for (std::size_t i = 0; i < c; ++i) {
        cal.bias[i] -= config.lr * grad_b[i];
        for (std::size_t m = 0; m < c; ++m) cal.weight(i, m) -= config.lr * grad_w(i, m);
      }
    }
  }
  return cal;
}

LabelVector calibrate_predict(const CalibratorParams& calibrator, const Matrix& scores) {
  if (calibrator.weight.rows() != calibrator.weight.cols() ||
      calibrator.bias.size() != calibrator.weight.rows())
    throw std::invalid_argument("calibrate_predict: inconsistent calibrator shape");
  if (scores.cols() != calibrator.bias.size())
    throw std::invalid_argument("calibrate_predict: score width does not match calibrator");
  LabelVector out(scores.rows());
  for (std::size_t r = 0; r < scores.rows(); ++r) {
    const auto logits = calibrated_logits(calibrator, scores.row(r));
    out[r] = static_cast<int>(argmax(logits));
  }
  return out;
}

}  // namespace mcauc
