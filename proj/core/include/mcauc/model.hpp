#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mcauc/matrix.hpp"

namespace mcauc {

// Feed-forward classifier parameters: tanh hidden layers, linear output
// layer followed by a softmax head. weights[l] has shape
// (layer_sizes[l] x layer_sizes[l+1]); biases[l] matches the output width.
struct MlpParams {
  std::vector<std::size_t> layer_sizes;
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;
  std::uint64_t init_seed = 0;

  std::size_t num_layers() const { return weights.size(); }
  std::size_t input_dim() const { return layer_sizes.front(); }
  std::size_t output_dim() const { return layer_sizes.back(); }
};

// Glorot-uniform weights (+-sqrt(6/(fan_in+fan_out))), zero biases,
// deterministic for a given seed.
MlpParams init_params(const std::vector<std::size_t>& layer_sizes, std::uint64_t seed);

struct ForwardCache {
  Matrix input;
  std::vector<Matrix> pre_activations;  // one per hidden layer
  std::vector<Matrix> activations;      // tanh outputs, one per hidden layer
  Matrix logits;
  Matrix scores;  // row softmax of logits; rows sum to 1
};

ForwardCache forward(const MlpParams& params, const Matrix& batch);

struct ParamGrads {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;
};

// Backpropagation from d(loss)/d(scores): chains through the softmax head
// and the hidden layers.
ParamGrads backward(const MlpParams& params, const ForwardCache& cache,
                    const Matrix& grad_wrt_scores);

// Backpropagation from d(loss)/d(logits) for losses (softmax cross entropy)
// whose gradient already folds the softmax in.
ParamGrads backward_from_logits(const MlpParams& params, const ForwardCache& cache,
                                const Matrix& grad_wrt_logits);

ParamGrads zero_grads_like(const MlpParams& params);

// Flat coordinate view over (weights, biases) in layer order, used by the
// optimizer-independent gradient checking below.
std::size_t param_count(const MlpParams& params);
double get_param(const MlpParams& params, std::size_t flat_index);
void set_param(MlpParams& params, std::size_t flat_index, double value);
double get_grad(const ParamGrads& grads, std::size_t flat_index);

struct GradCheckReport {
  bool pass = false;
  double max_rel_error = 0.0;
  std::size_t coords_checked = 0;
  std::size_t worst_coord = 0;
};

// Compares `analytic` against central finite differences of `loss` around
// `params`. Checks every coordinate when there are at most max_coords of
// them, otherwise a seeded random subset of max_coords. The relative error
// uses denominator max(|analytic|, |fd|, denom_floor) so that coordinates
// dominated by finite-difference noise do not fail the check.
GradCheckReport grad_check(const std::function<double(const MlpParams&)>& loss,
                           const ParamGrads& analytic, const MlpParams& params,
                           double epsilon, double tolerance, std::size_t max_coords = 200,
                           std::uint64_t seed = 0, double denom_floor = 1e-4);

}  // namespace mcauc
