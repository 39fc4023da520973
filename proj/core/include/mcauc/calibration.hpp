#pragma once

#include <cstdint>

#include "mcauc/matrix.hpp"

namespace mcauc {

// Multinomial logistic regression on top of classifier score vectors.
// Initialised to the identity map so an unfitted calibrator is a no-op.
struct CalibratorParams {
  Matrix weight;             // c x c
  std::vector<double> bias;  // c

  friend bool operator==(const CalibratorParams&, const CalibratorParams&) = default;
};

struct CalibratorSgdConfig {
  double lr = 0.05;
  int epochs = 200;
  int batch_size = 32;
  std::uint64_t seed = 0;
};

// Plain minibatch SGD on the softmax cross entropy of W*s + b. Deterministic
// for a given seed; zero epochs returns the identity initialisation.
CalibratorParams fit_calibrator(const Matrix& scores, const LabelVector& labels,
                                const CalibratorSgdConfig& config = {});

// Argmax of the calibrated logits; ties break toward the lowest class index.
LabelVector calibrate_predict(const CalibratorParams& calibrator, const Matrix& scores);

}  // namespace mcauc
