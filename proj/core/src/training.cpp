#include "mcauc/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "mcauc/numeric.hpp"

namespace mcauc {

namespace {

void check_config(const TrainConfig& config) {
  if (config.epochs < 1) throw std::invalid_argument("train config: epochs must be >= 1");
  if (config.batch_size < 2) throw std::invalid_argument("train config: batch size must be >= 2");
  if (!(config.lr_end > 0.0) || !(config.lr_start >= config.lr_end))
    throw std::invalid_argument("train config: need lr_start >= lr_end > 0");
}

}  // namespace

double lr_at_epoch(const TrainConfig& config, int epoch) {
  check_config(config);
  if (epoch < 0 || epoch >= config.epochs)
    throw std::out_of_range("lr_at_epoch: epoch " + std::to_string(epoch) +
                            " outside [0, " + std::to_string(config.epochs) + ")");
  if (epoch == 0 || config.epochs == 1) return config.lr_start;
  if (epoch == config.epochs - 1) return config.lr_end;
  const double t = static_cast<double>(epoch) / static_cast<double>(config.epochs - 1);
  return config.lr_start * std::pow(config.lr_end / config.lr_start, t);
}

AdamState make_adam_state(const MlpParams& params) {
  AdamState state;
  for (std::size_t l = 0; l < params.num_layers(); ++l) {
    state.m_weights.emplace_back(params.weights[l].rows(), params.weights[l].cols(), 0.0);
    state.v_weights.emplace_back(params.weights[l].rows(), params.weights[l].cols(), 0.0);
    state.m_biases.emplace_back(params.biases[l].size(), 0.0);
    state.v_biases.emplace_back(params.biases[l].size(), 0.0);
  }
  return state;
}

namespace {

void adam_update_span(std::span<double> theta, std::span<const double> grad,
                      std::span<double> m, std::span<double> v, const AdamState& state,
                      double lr, double bc1, double bc2) {
  for (std::size_t i = 0; i < theta.size(); ++i) {
    m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * grad[i];
    v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * grad[i] * grad[i];
    const double m_hat = m[i] / bc1;
    const double v_hat = v[i] / bc2;
    theta[i] -= lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
  }
}

}  // namespace

void adam_step(AdamState& state, MlpParams& params, const ParamGrads& grads, double lr) {
  if (grads.weights.size() != params.num_layers())
    throw std::invalid_argument("adam_step: gradient layer count mismatch");
  for (std::size_t l = 0; l < params.num_layers(); ++l) {
    if (!grads.weights[l].same_shape(params.weights[l]) ||
        grads.biases[l].size() != params.biases[l].size())
      throw std::invalid_argument("adam_step: gradient shape mismatch at layer " +
                                  std::to_string(l));
    if (!all_finite(grads.weights[l]))
      throw std::invalid_argument("adam_step: non-finite gradient in layer " +
                                  std::to_string(l) + " weights");
    if (!all_finite(std::span<const double>(grads.biases[l])))
      throw std::invalid_argument("adam_step: non-finite gradient in layer " +
                                  std::to_string(l) + " biases");
  }
  ++state.step;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t l = 0; l < params.num_layers(); ++l) {
    adam_update_span(params.weights[l].data(), grads.weights[l].data(),
                     state.m_weights[l].data(), state.v_weights[l].data(), state, lr, bc1, bc2);
    adam_update_span(params.biases[l], grads.biases[l], state.m_biases[l], state.v_biases[l],
                     state, lr, bc1, bc2);
  }
}

std::vector<std::vector<std::size_t>> make_batches(std::size_t n, const LabelVector& labels,
                                                   std::size_t batch_size, std::uint64_t seed,
                                                   bool stratified) {
  if (batch_size == 0) throw std::invalid_argument("make_batches: batch size must be >= 1");
  if (batch_size > n)
    throw std::invalid_argument("make_batches: batch size " + std::to_string(batch_size) +
                                " exceeds example count " + std::to_string(n));
  if (labels.size() != n) throw std::invalid_argument("make_batches: label count mismatch");

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order;
  order.reserve(n);
  if (!stratified) {
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
  } else {
    int max_label = 0;
    for (int y : labels) max_label = std::max(max_label, y);
    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(max_label) + 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (labels[i] < 0) throw std::invalid_argument("make_batches: negative label");
      by_class[static_cast<std::size_t>(labels[i])].push_back(i);
    }
    for (auto& rows : by_class) std::shuffle(rows.begin(), rows.end(), rng);
    std::vector<std::size_t> cursor(by_class.size(), 0);
    std::size_t taken = 0;
    while (taken < n)
      for (std::size_t cls = 0; cls < by_class.size() && taken < n; ++cls)
        if (cursor[cls] < by_class[cls].size()) {
          order.push_back(by_class[cls][cursor[cls]++]);
          ++taken;
        }
  }

  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t start = 0; start < n; start += batch_size) {
    const std::size_t stop = std::min(start + batch_size, n);
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(stop));
  }
  return batches;
}

namespace {

Matrix gather_rows(const Matrix& features, const std::vector<std::size_t>& rows) {
  Matrix out(rows.size(), features.cols());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < features.cols(); ++c) out(r, c) = features(rows[r], c);
  return out;
}

LabelVector gather_labels(const LabelVector& labels, const std::vector<std::size_t>& rows) {
  LabelVector out(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) out[r] = labels[rows[r]];
  return out;
}

}  // namespace

double accuracy_of(const MlpParams& params, const Dataset& dataset) {
  const ForwardCache cache = forward(params, dataset.features);
  std::size_t correct = 0;
  for (std::size_t r = 0; r < dataset.size(); ++r)
    correct += static_cast<int>(argmax(cache.scores.row(r))) == dataset.labels[r];
  return static_cast<double>(correct) / static_cast<double>(dataset.size());
}

TrainResult train(const Dataset& train_set, const Dataset& val_set,
                  const std::vector<std::size_t>& layer_sizes, const TrainConfig& config) {
  check_config(config);
  if (layer_sizes.size() < 2) throw std::invalid_argument("train: need at least 2 layer sizes");
  if (layer_sizes.front() != train_set.dims() || layer_sizes.front() != val_set.dims())
    throw std::invalid_argument("train: input layer size does not match feature dimension");
  const std::size_t c = layer_sizes.back();
  if (c < 2) throw std::invalid_argument("train: output layer needs at least 2 classes");
  const auto counts = class_counts(train_set.labels, c);
  for (std::size_t cls = 0; cls < c; ++cls)
    if (counts[cls] == 0)
      throw std::invalid_argument("train: class " + std::to_string(cls) +
                                  " missing from the training set");
  if (val_set.size() == 0) throw std::invalid_argument("train: empty validation set");
  class_counts(val_set.labels, c);
  if (static_cast<std::size_t>(config.batch_size) > train_set.size())
    throw std::invalid_argument("train: batch size exceeds training set size");

  MlpParams params = init_params(layer_sizes, config.seed);
  AdamState adam = make_adam_state(params);
  std::mt19937_64 batch_seed_rng(config.seed + 1);

  TrainResult result;
  result.history.best_epoch = 0;
  double best_accuracy = -1.0;
  MlpParams best_params = params;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = lr_at_epoch(config, epoch);
    const auto batches =
        make_batches(train_set.size(), train_set.labels,
                     static_cast<std::size_t>(config.batch_size), batch_seed_rng(),
                     config.stratified_batches());
    double loss_sum = 0.0;
    int used = 0;
    int skipped = 0;
    for (const auto& batch : batches) {
      const Matrix inputs = gather_rows(train_set.features, batch);
      const LabelVector targets = gather_labels(train_set.labels, batch);
      const ForwardCache cache = forward(params, inputs);
      LossValueAndGrad loss;
      ParamGrads grads;
      try {
        switch (config.loss) {
          case LossKind::kSoftmaxCe:
            loss = softmax_ce_loss(cache.logits, targets);
            grads = backward_from_logits(params, cache, loss.grad);
            break;
          case LossKind::kAaucOvo:
            loss = aauc_ovo_loss(cache.scores, targets, config.slope);
            grads = backward(params, cache, loss.grad);
            break;
          case LossKind::kAaucOvr:
            loss = aauc_ovr_loss(cache.scores, targets, config.slope);
            grads = backward(params, cache, loss.grad);
            break;
        }
      } catch (const DegenerateBatchError&) {
        ++skipped;
        continue;
      }
      adam_step(adam, params, grads, lr);
      loss_sum += loss.value;
      ++used;
    }
    if (used == 0)
      throw std::runtime_error("loss starved: every batch in epoch " + std::to_string(epoch) +
                               " had fewer than 2 classes; enable stratified batching");

    EpochStats stats;
    stats.train_loss = loss_sum / static_cast<double>(used);
    stats.val_accuracy = accuracy_of(params, val_set);
    stats.lr = lr;
    stats.skipped_batches = skipped;
    result.history.epochs.push_back(stats);
    if (stats.val_accuracy > best_accuracy) {
      best_accuracy = stats.val_accuracy;
      result.history.best_epoch = epoch;
      best_params = params;
    }
  }
  result.params = std::move(best_params);
  return result;
}

}  // namespace mcauc
