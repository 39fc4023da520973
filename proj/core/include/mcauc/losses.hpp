#pragma once

#include <stdexcept>
#include <string>

#include "mcauc/matrix.hpp"
#include "mcauc/metrics.hpp"

namespace mcauc {

// Slope of the sigmoid that replaces the unit step inside the approximated
// AUC. Larger values push the surrogate toward the exact pair count.
struct SigmoidSlope {
  double delta = 10.0;
};

// 1 / (1 + exp(-x)), branch-stable for large |x|. Throws on non-finite input.
double stable_sigmoid(double x);

// Mean over all (target, non-target) pairs of sigmoid(delta * (s+ - s-)).
double aauc_binary(const BinaryScoreSets& sets, SigmoidSlope slope);

struct BinaryScoreGrads {
  std::vector<double> pos;  // d(aAUC)/d(s+_i)
  std::vector<double> neg;  // d(aAUC)/d(s-_j)
};

BinaryScoreGrads aauc_binary_grad(const BinaryScoreSets& sets, SigmoidSlope slope);

struct LossValueAndGrad {
  double value = 0.0;
  Matrix grad;  // d(loss)/d(score), same shape as the score matrix
};

// Thrown when a minibatch has fewer than two classes, so no pair term is
// defined. The trainer catches this and skips the update.
class DegenerateBatchError : public std::runtime_error {
 public:
  explicit DegenerateBatchError(const std::string& what) : std::runtime_error(what) {}
};

// One-versus-one surrogate loss: 1 minus the mean symmetrised aAUC over all
// unordered pairs of classes present in the batch. Pairs with a missing class
// are dropped and the mean is renormalised over the remaining ones.
LossValueAndGrad aauc_ovo_loss(const Matrix& scores, const LabelVector& labels,
                               SigmoidSlope slope);

// One-versus-rest surrogate loss: 1 minus the mean aAUC over classes present
// in the batch, each scored on its own column against all other rows.
LossValueAndGrad aauc_ovr_loss(const Matrix& scores, const LabelVector& labels,
                               SigmoidSlope slope);

// Mean negative log-likelihood with log-sum-exp stabilisation. The gradient
// is taken with respect to the logits: (softmax - one_hot) / N.
LossValueAndGrad softmax_ce_loss(const Matrix& logits, const LabelVector& labels);

enum class AucMode { kOvo, kOvr };

// Cost model: number of directed sub-AUC evaluations per loss call.
// OVO evaluates c*(c-1) of them (quadratic in the class count), OVR evaluates
// c (linear), although each OVR term compares against a larger rest set.
long long pair_count_cost(int num_classes, AucMode mode);

enum class LossKind { kSoftmaxCe, kAaucOvo, kAaucOvr };

std::string to_string(LossKind kind);
// Accepts both the internal names (softmax_ce, aauc_ovo, aauc_ovr) and the
// CLI spellings (ce, aauc-ovo, aauc-ovr).
LossKind loss_kind_from_string(const std::string& name);

}  // namespace mcauc
