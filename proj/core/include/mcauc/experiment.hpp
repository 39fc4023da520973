#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mcauc/calibration.hpp"
#include "mcauc/data.hpp"
#include "mcauc/metrics.hpp"
#include "mcauc/training.hpp"

namespace mcauc {

// Repeated train/calibrate/evaluate comparison across loss functions.
// Exactly one of `synthetic` / `dataset_files` selects the data source.
// Run r uses seed base+r for both data generation and training, shared by
// every loss kind so the comparison is paired.
struct ExperimentConfig {
  std::optional<SyntheticSpec> synthetic;
  std::optional<std::array<std::string, 3>> dataset_files;  // train, val, test
  std::vector<LossKind> losses = {LossKind::kSoftmaxCe, LossKind::kAaucOvo,
                                  LossKind::kAaucOvr};
  std::vector<std::size_t> hidden_sizes = {32, 32};
  TrainConfig train;  // train.seed is the base seed
  CalibratorSgdConfig calibrator;
  int repeats = 10;
};

struct MetricStats {
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation over runs
  std::vector<double> runs;

  friend bool operator==(const MetricStats&, const MetricStats&) = default;
};

struct ClassStats {
  MetricStats precision, recall, f1;

  friend bool operator==(const ClassStats&, const ClassStats&) = default;
};

// PR curves are averaged across runs pointwise on a fixed recall grid of
// kPrGridSize points (precision and threshold both averaged).
inline constexpr std::size_t kPrGridSize = 101;

struct LossKindSummary {
  LossKind loss = LossKind::kSoftmaxCe;
  MetricStats accuracy, auc_ovo, auc_ovr, avg_pr_auc;
  std::vector<ClassStats> per_class;
  std::vector<std::vector<PRPoint>> mean_pr_curves;  // [class][grid index]

  friend bool operator==(const LossKindSummary&, const LossKindSummary&) = default;
};

struct ExperimentSummary {
  int repeats = 0;
  std::uint64_t base_seed = 0;
  double delta = 0.0;
  int epochs = 0;
  int batch_size = 0;
  double lr_start = 0.0;
  double lr_end = 0.0;
  std::string stratified_mode;  // "auto", "on" or "off"
  std::vector<std::size_t> hidden_sizes;
  std::string data_source;
  std::size_t num_classes = 0;
  std::vector<std::string> class_names;
  std::vector<LossKindSummary> results;

  friend bool operator==(const ExperimentSummary&, const ExperimentSummary&) = default;
};

ExperimentSummary run_experiment(const ExperimentConfig& config);

// JSON report with every summary field at full precision; emit/parse
// round-trips value-exactly and emission is byte-deterministic.
void emit_report(const ExperimentSummary& summary, const std::string& path);
ExperimentSummary parse_report(const std::string& path);

// One "class,threshold,recall,precision" CSV per loss kind, written to
// <out_dir>/pr_points_<loss>.csv. Returns the paths written.
std::vector<std::string> emit_pr_points(const ExperimentSummary& summary,
                                        const std::string& out_dir);

}  // namespace mcauc
