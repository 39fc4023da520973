#include "mcauc/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "mcauc/numeric.hpp"

namespace mcauc {

MlpParams init_params(const std::vector<std::size_t>& layer_sizes, std::uint64_t seed) {
  if (layer_sizes.size() < 2)
    throw std::invalid_argument("init_params: need at least input and output sizes");
  for (std::size_t s : layer_sizes)
    if (s == 0) throw std::invalid_argument("init_params: zero-sized layer");

  MlpParams params;
  params.layer_sizes = layer_sizes;
  params.init_seed = seed;
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    const std::size_t fan_in = layer_sizes[l];
    const std::size_t fan_out = layer_sizes[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    Matrix w(fan_in, fan_out);
    for (double& v : w.data()) v = dist(rng);
    params.weights.push_back(std::move(w));
    params.biases.emplace_back(fan_out, 0.0);
  }
  return params;
}

namespace {

Matrix affine(const Matrix& input, const Matrix& weight, const std::vector<double>& bias) {
  Matrix out = matmul(input, weight);
  for (std::size_t r = 0; r < out.rows(); ++r)
    for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) += bias[c];
  return out;
}

ParamGrads backprop_layers(const MlpParams& params, const ForwardCache& cache,
                           Matrix grad_logits) {
  ParamGrads grads = zero_grads_like(params);
  Matrix dz = std::move(grad_logits);
  for (std::size_t l = params.num_layers(); l-- > 0;) {
    const Matrix& prev = (l == 0) ? cache.input : cache.activations[l - 1];
    grads.weights[l] = matmul_tn(prev, dz);
    for (std::size_t r = 0; r < dz.rows(); ++r)
      for (std::size_t c = 0; c < dz.cols(); ++c) grads.biases[l][c] += dz(r, c);
    if (l > 0) {
      Matrix da = matmul_nt(dz, params.weights[l]);
      const Matrix& act = cache.activations[l - 1];
      for (std::size_t r = 0; r < da.rows(); ++r)
        for (std::size_t c = 0; c < da.cols(); ++c)
          da(r, c) *= 1.0 - act(r, c) * act(r, c);  // tanh'
      dz = std::move(da);
    }
  }
  return grads;
}

}  // namespace

ForwardCache forward(const MlpParams& params, const Matrix& batch) {
  if (batch.cols() != params.input_dim())
    throw std::invalid_argument("forward: batch width does not match input size");
  ForwardCache cache;
  cache.input = batch;
  const Matrix* current = &cache.input;
  for (std::size_t l = 0; l + 1 < params.num_layers(); ++l) {
    Matrix z = affine(*current, params.weights[l], params.biases[l]);
    Matrix a = z;
    for (double& v : a.data()) v = std::tanh(v);
    cache.pre_activations.push_back(std::move(z));
    cache.activations.push_back(std::move(a));
    current = &cache.activations.back();
  }
  cache.logits = affine(*current, params.weights.back(), params.biases.back());
  cache.scores = Matrix(cache.logits.rows(), cache.logits.cols());
  for (std::size_t r = 0; r < cache.logits.rows(); ++r)
    softmax_row(cache.logits.row(r), cache.scores.row(r));
  return cache;
}

ParamGrads backward(const MlpParams& params, const ForwardCache& cache,
                    const Matrix& grad_wrt_scores) {
  if (!grad_wrt_scores.same_shape(cache.scores))
    throw std::invalid_argument("backward: upstream gradient shape mismatch");
  // Softmax Jacobian: dz_k = s_k * (g_k - sum_m g_m s_m).
  Matrix dz(grad_wrt_scores.rows(), grad_wrt_scores.cols());
  for (std::size_t r = 0; r < dz.rows(); ++r) {
    double dot = 0.0;
    for (std::size_t c = 0; c < dz.cols(); ++c)
      dot += grad_wrt_scores(r, c) * cache.scores(r, c);
    for (std::size_t c = 0; c < dz.cols(); ++c)
      dz(r, c) = cache.scores(r, c) * (grad_wrt_scores(r, c) - dot);
  }
  return backprop_layers(params, cache, std::move(dz));
}

ParamGrads backward_from_logits(const MlpParams& params, const ForwardCache& cache,
                                const Matrix& grad_wrt_logits) {
  if (!grad_wrt_logits.same_shape(cache.logits))
    throw std::invalid_argument("backward_from_logits: upstream gradient shape mismatch");
  return backprop_layers(params, cache, grad_wrt_logits);
}

ParamGrads zero_grads_like(const MlpParams& params) {
  ParamGrads grads;
  for (std::size_t l = 0; l < params.num_layers(); ++l) {
    grads.weights.emplace_back(params.weights[l].rows(), params.weights[l].cols(), 0.0);
    grads.biases.emplace_back(params.biases[l].size(), 0.0);
  }
  return grads;
}

std::size_t param_count(const MlpParams& params) {
  std::size_t n = 0;
  for (std::size_t l = 0; l < params.num_layers(); ++l)
    n += params.weights[l].size() + params.biases[l].size();
  return n;
}

namespace {

// Maps a flat index to (layer, weight-or-bias, offset).
template <class Params, class Fn>
decltype(auto) with_coord(Params& params, std::size_t flat_index, Fn&& fn) {
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    if (flat_index < params.weights[l].size())
      return fn(params.weights[l].data()[flat_index]);
    flat_index -= params.weights[l].size();
    if (flat_index < params.biases[l].size()) return fn(params.biases[l][flat_index]);
    flat_index -= params.biases[l].size();
  }
  throw std::out_of_range("parameter index out of range");
}

}  // namespace

double get_param(const MlpParams& params, std::size_t flat_index) {
  return with_coord(params, flat_index, [](const double& v) { return v; });
}

void set_param(MlpParams& params, std::size_t flat_index, double value) {
  with_coord(params, flat_index, [value](double& v) { v = value; });
}

double get_grad(const ParamGrads& grads, std::size_t flat_index) {
  return with_coord(grads, flat_index, [](const double& v) { return v; });
}

GradCheckReport grad_check(const std::function<double(const MlpParams&)>& loss,
                           const ParamGrads& analytic, const MlpParams& params,
                           double epsilon, double tolerance, std::size_t max_coords,
                           std::uint64_t seed, double denom_floor) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("grad_check: epsilon must be positive");
  const std::size_t n = param_count(params);
  std::vector<std::size_t> coords(n);
  std::iota(coords.begin(), coords.end(), 0);
  if (n > max_coords) {
    std::mt19937_64 rng(seed);
    std::shuffle(coords.begin(), coords.end(), rng);
    coords.resize(max_coords);
  }

  MlpParams work = params;
  GradCheckReport report;
  for (std::size_t idx : coords) {
    const double original = get_param(work, idx);
    set_param(work, idx, original + epsilon);
    const double f_plus = loss(work);
    set_param(work, idx, original - epsilon);
    const double f_minus = loss(work);
    set_param(work, idx, original);
    if (!std::isfinite(f_plus) || !std::isfinite(f_minus))
      throw std::runtime_error("grad_check: non-finite loss at perturbed parameters");
    const double fd = (f_plus - f_minus) / (2.0 * epsilon);
    const double a = get_grad(analytic, idx);
    const double rel =
        std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), denom_floor});
    if (rel > report.max_rel_error) {
      report.max_rel_error = rel;
      report.worst_coord = idx;
    }
    ++report.coords_checked;
  }
  report.pass = report.max_rel_error <= tolerance;
  return report;
}

}  // namespace mcauc
