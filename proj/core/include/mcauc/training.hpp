#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mcauc/data.hpp"
#include "mcauc/losses.hpp"
#include "mcauc/model.hpp"

namespace mcauc {

struct TrainConfig {
  LossKind loss = LossKind::kSoftmaxCe;
  SigmoidSlope slope{10.0};
  int epochs = 20;
  int batch_size = 64;
  double lr_start = 1e-3;
  double lr_end = 1e-4;
  std::uint64_t seed = 0;
  // Unset picks the loss-dependent default: on for the aAUC losses (keeps
  // minibatch pair sets populated), off for cross entropy.
  std::optional<bool> stratified;

  bool stratified_batches() const {
    return stratified.value_or(loss != LossKind::kSoftmaxCe);
  }
};

// Geometric interpolation from lr_start at epoch 0 to lr_end at the final
// epoch. Endpoints are returned exactly.
double lr_at_epoch(const TrainConfig& config, int epoch);

struct AdamState {
  std::vector<Matrix> m_weights, v_weights;
  std::vector<std::vector<double>> m_biases, v_biases;
  long step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

AdamState make_adam_state(const MlpParams& params);

// Standard bias-corrected Adam update, in place. Throws on non-finite
// gradients, naming the offending tensor.
void adam_step(AdamState& state, MlpParams& params, const ParamGrads& grads, double lr);

// Index batches covering [0, n) exactly once. Stratified mode shuffles within
// each class and deals indices round-robin across classes before chunking, so
// every class still holding examples lands in every batch.
std::vector<std::vector<std::size_t>> make_batches(std::size_t n, const LabelVector& labels,
                                                   std::size_t batch_size, std::uint64_t seed,
                                                   bool stratified);

struct EpochStats {
  double train_loss = 0.0;  // mean over non-skipped batches
  double val_accuracy = 0.0;
  double lr = 0.0;
  int skipped_batches = 0;

  friend bool operator==(const EpochStats&, const EpochStats&) = default;
};

struct TrainHistory {
  std::vector<EpochStats> epochs;
  int best_epoch = 0;

  friend bool operator==(const TrainHistory&, const TrainHistory&) = default;
};

struct TrainResult {
  MlpParams params;  // snapshot from the best validation epoch
  TrainHistory history;
};

// Full training loop: minibatch forward/loss/backward/Adam with the
// exponential LR schedule, validation accuracy after every epoch, and
// best-epoch selection (ties break toward the earlier epoch).
TrainResult train(const Dataset& train_set, const Dataset& val_set,
                  const std::vector<std::size_t>& layer_sizes, const TrainConfig& config);

// Fraction of rows whose argmax score matches the label.
double accuracy_of(const MlpParams& params, const Dataset& dataset);

}  // namespace mcauc
