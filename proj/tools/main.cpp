// Command-line front end: synthetic data generation, single training runs,
// model evaluation, repeated loss-comparison experiments and gradient checks.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcauc/experiment.hpp"
#include "mcauc/model_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TrainFlags {
  std::string loss = "ce";
  double delta = 10.0;
  int epochs = 20;
  int batch = 64;
  double lr_start = 1e-3;
  double lr_end = 1e-4;
  std::uint64_t seed = 0;
  std::string stratified = "auto";
  std::vector<std::size_t> hidden = {32, 32};
};

void add_train_flags(CLI::App* cmd, TrainFlags& flags, bool with_loss = true) {
  if (with_loss)
    cmd->add_option("--loss", flags.loss, "Training loss: ce, aauc-ovo or aauc-ovr")
        ->check(CLI::IsMember({"ce", "aauc-ovo", "aauc-ovr"}));
  cmd->add_option("--delta", flags.delta, "Sigmoid slope for the aAUC losses");
  cmd->add_option("--epochs", flags.epochs, "Training epochs");
  cmd->add_option("--batch", flags.batch, "Minibatch size");
  cmd->add_option("--lr-start", flags.lr_start, "Learning rate at the first epoch");
  cmd->add_option("--lr-end", flags.lr_end, "Learning rate at the last epoch");
  cmd->add_option("--seed", flags.seed, "Base random seed");
  cmd->add_option("--stratified", flags.stratified,
                  "Stratified minibatches: on, off or auto (on for aAUC losses)")
      ->check(CLI::IsMember({"on", "off", "auto"}));
  cmd->add_option("--hidden", flags.hidden, "Hidden layer sizes")->delimiter(',');
}

mcauc::TrainConfig to_train_config(const TrainFlags& flags) {
  mcauc::TrainConfig config;
  config.loss = mcauc::loss_kind_from_string(flags.loss);
  config.slope.delta = flags.delta;
  config.epochs = flags.epochs;
  config.batch_size = flags.batch;
  config.lr_start = flags.lr_start;
  config.lr_end = flags.lr_end;
  config.seed = flags.seed;
  if (flags.stratified == "on") config.stratified = true;
  if (flags.stratified == "off") config.stratified = false;
  return config;
}

struct SyntheticFlags {
  std::size_t classes = 3;
  std::size_t dims = 2;
  std::vector<std::size_t> per_class = {100, 100, 500};
  double spread = 1.0;
  double radius = 1.0;
  std::vector<double> imbalance;
  std::uint64_t seed = 0;
};

void add_synthetic_flags(CLI::App* cmd, SyntheticFlags& flags) {
  cmd->add_option("--classes", flags.classes, "Number of classes");
  cmd->add_option("--dims", flags.dims, "Feature dimensions");
  cmd->add_option("--per-class", flags.per_class,
                  "Nominal examples per class for train,val,test")
      ->delimiter(',')
      ->expected(3);
  cmd->add_option("--spread", flags.spread, "Per-class isotropic standard deviation");
  cmd->add_option("--radius", flags.radius, "Radius of the circle holding the class means");
  cmd->add_option("--imbalance", flags.imbalance,
                  "Per-class proportions (default: 0.1660,0.3445,0.4894 for 3 classes)")
      ->delimiter(',');
  cmd->add_option("--data-seed", flags.seed, "Seed for the synthetic generator");
}

mcauc::SyntheticSpec to_synthetic_spec(const SyntheticFlags& flags) {
  mcauc::SyntheticSpec spec;
  spec.num_classes = flags.classes;
  spec.dims = flags.dims;
  spec.per_class = {flags.per_class[0], flags.per_class[1], flags.per_class[2]};
  spec.spread = flags.spread;
  spec.class_means = mcauc::ring_means(flags.classes, flags.dims, flags.radius);
  spec.imbalance = flags.imbalance;
  spec.seed = flags.seed;
  return spec;
}

json metrics_to_json(const mcauc::MetricsReport& report,
                     const std::vector<std::string>& class_names) {
  json j;
  j["accuracy"] = report.accuracy;
  j["auc_ovo"] = report.auc_ovo;
  j["auc_ovr"] = report.auc_ovr;
  j["avg_pr_auc"] = report.avg_pr_auc;
  j["zero_division_warning"] = report.zero_division_warning;
  json per_class = json::array();
  for (std::size_t cls = 0; cls < report.per_class.size(); ++cls) {
    const auto& m = report.per_class[cls];
    per_class.push_back(json{{"class", cls < class_names.size() ? class_names[cls]
                                                                : "class" + std::to_string(cls)},
                             {"precision", m.precision},
                             {"recall", m.recall},
                             {"f1", m.f1}});
  }
  j["per_class"] = std::move(per_class);
  return j;
}

int cmd_gen_data(const SyntheticFlags& flags, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const mcauc::SplitDatasets splits = mcauc::gen_synthetic(to_synthetic_spec(flags));
  mcauc::save_dataset(splits.train, out_dir + "/train.csv");
  mcauc::save_dataset(splits.val, out_dir + "/val.csv");
  mcauc::save_dataset(splits.test, out_dir + "/test.csv");
  std::cout << "wrote " << out_dir << "/{train,val,test}.csv  (" << splits.train.size() << "/"
            << splits.val.size() << "/" << splits.test.size() << " examples, "
            << splits.train.dims() << " features, " << splits.train.num_classes()
            << " classes)\n";
  return 0;
}

int cmd_train(const TrainFlags& flags, const std::string& train_path,
              const std::string& val_path, const std::string& out_dir) {
  fs::create_directories(out_dir);
  mcauc::Dataset train_set = mcauc::load_dataset(train_path);
  mcauc::Dataset val_set = mcauc::load_dataset(val_path);
  const mcauc::NormalizationParams norm = mcauc::fit_minmax(train_set);
  train_set = mcauc::apply_minmax(norm, train_set);
  val_set = mcauc::apply_minmax(norm, val_set);

  std::vector<std::size_t> layer_sizes;
  layer_sizes.push_back(train_set.dims());
  layer_sizes.insert(layer_sizes.end(), flags.hidden.begin(), flags.hidden.end());
  layer_sizes.push_back(train_set.num_classes());

  const mcauc::TrainConfig config = to_train_config(flags);
  const mcauc::TrainResult result = mcauc::train(train_set, val_set, layer_sizes, config);

  const mcauc::ForwardCache val_cache = mcauc::forward(result.params, val_set.features);
  mcauc::CalibratorSgdConfig cal_config;
  cal_config.seed = config.seed;
  const mcauc::CalibratorParams calibrator =
      mcauc::fit_calibrator(val_cache.scores, val_set.labels, cal_config);

  mcauc::save_model({result.params, calibrator, norm}, out_dir + "/model.json");

  json history;
  history["loss"] = mcauc::to_string(config.loss);
  history["seed"] = config.seed;
  history["best_epoch"] = result.history.best_epoch;
  json epochs = json::array();
  for (const auto& e : result.history.epochs)
    epochs.push_back(json{{"train_loss", e.train_loss},
                          {"val_accuracy", e.val_accuracy},
                          {"lr", e.lr},
                          {"skipped_batches", e.skipped_batches}});
  history["epochs"] = std::move(epochs);
  std::ofstream hist_out(out_dir + "/train_report.json");
  hist_out << history.dump(2) << '\n';

  const auto& best = result.history.epochs[static_cast<std::size_t>(result.history.best_epoch)];
  std::cout << "wrote " << out_dir << "/model.json and train_report.json (best epoch "
            << result.history.best_epoch << ", val accuracy " << best.val_accuracy << ")\n";
  return 0;
}

int cmd_eval(const std::string& model_path, const std::string& data_path,
             const std::string& out_dir) {
  const mcauc::ModelDocument model = mcauc::load_model(model_path);
  mcauc::Dataset data = mcauc::load_dataset(data_path);
  if (model.normalization) data = mcauc::apply_minmax(*model.normalization, data);
  const mcauc::ForwardCache cache = mcauc::forward(model.mlp, data.features);
  const mcauc::CalibratorParams calibrator =
      model.calibrator ? *model.calibrator
                       : mcauc::CalibratorParams{mcauc::Matrix::identity(cache.scores.cols()),
                                                 std::vector<double>(cache.scores.cols(), 0.0)};
  const mcauc::LabelVector pred = mcauc::calibrate_predict(calibrator, cache.scores);
  const mcauc::MetricsReport report = mcauc::evaluate_scores(cache.scores, pred, data.labels);
  const json j = metrics_to_json(report, data.class_names);
  std::cout << j.dump(2) << '\n';
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream out(out_dir + "/metrics.json");
    out << j.dump(2) << '\n';
  }
  return 0;
}

int cmd_experiment(const TrainFlags& train_flags, const SyntheticFlags& synth_flags,
                   bool use_files, const std::vector<std::string>& files,
                   const std::vector<std::string>& losses, int repeats,
                   const std::string& out_dir) {
  mcauc::ExperimentConfig config;
  if (use_files) {
    config.dataset_files = {files[0], files[1], files[2]};
  } else {
    config.synthetic = to_synthetic_spec(synth_flags);
  }
  if (!losses.empty()) {
    config.losses.clear();
    for (const std::string& name : losses)
      config.losses.push_back(mcauc::loss_kind_from_string(name));
  }
  config.hidden_sizes = train_flags.hidden;
  config.train = to_train_config(train_flags);
  config.repeats = repeats;
  config.calibrator.seed = train_flags.seed;

  const mcauc::ExperimentSummary summary = mcauc::run_experiment(config);
  fs::create_directories(out_dir);
  mcauc::emit_report(summary, out_dir + "/report.json");
  const auto pr_paths = mcauc::emit_pr_points(summary, out_dir);

  std::printf("%-12s %18s %18s %18s %18s\n", "loss", "auc_ovo", "auc_ovr", "avg_pr_auc",
              "accuracy");
  for (const auto& ls : summary.results)
    std::printf("%-12s %9.4f±%-7.4f %9.4f±%-7.4f %9.4f±%-7.4f %9.4f±%-7.4f\n",
                mcauc::to_string(ls.loss).c_str(), ls.auc_ovo.mean, ls.auc_ovo.stddev,
                ls.auc_ovr.mean, ls.auc_ovr.stddev, ls.avg_pr_auc.mean, ls.avg_pr_auc.stddev,
                ls.accuracy.mean, ls.accuracy.stddev);
  std::cout << "wrote " << out_dir << "/report.json";
  for (const auto& p : pr_paths) std::cout << ", " << p;
  std::cout << '\n';
  return 0;
}

int cmd_grad_check(std::uint64_t seed, int instances) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst[3] = {0.0, 0.0, 0.0};
  const mcauc::LossKind kinds[3] = {mcauc::LossKind::kSoftmaxCe, mcauc::LossKind::kAaucOvo,
                                    mcauc::LossKind::kAaucOvr};
  for (int inst = 0; inst < instances; ++inst) {
    const std::size_t c = 2 + rng() % 3;
    const std::size_t n = 8 + rng() % 9;
    const std::vector<std::size_t> layer_sizes = {4, 8, c};
    mcauc::MlpParams params = mcauc::init_params(layer_sizes, rng());
    mcauc::Matrix batch(n, 4);
    for (double& v : batch.data()) v = unit(rng);
    mcauc::LabelVector labels(n);
    for (std::size_t r = 0; r < n; ++r)
      labels[r] = static_cast<int>(r % c);  // every class present

    for (int k = 0; k < 3; ++k) {
      const mcauc::LossKind kind = kinds[k];
      const mcauc::SigmoidSlope slope{10.0};
      auto loss_value = [&](const mcauc::MlpParams& at) {
        const mcauc::ForwardCache cache = mcauc::forward(at, batch);
        switch (kind) {
          case mcauc::LossKind::kSoftmaxCe:
            return mcauc::softmax_ce_loss(cache.logits, labels).value;
          case mcauc::LossKind::kAaucOvo:
            return mcauc::aauc_ovo_loss(cache.scores, labels, slope).value;
          default:
            return mcauc::aauc_ovr_loss(cache.scores, labels, slope).value;
        }
      };
      const mcauc::ForwardCache cache = mcauc::forward(params, batch);
      mcauc::ParamGrads analytic;
      switch (kind) {
        case mcauc::LossKind::kSoftmaxCe:
          analytic = mcauc::backward_from_logits(
              params, cache, mcauc::softmax_ce_loss(cache.logits, labels).grad);
          break;
        case mcauc::LossKind::kAaucOvo:
          analytic = mcauc::backward(params, cache,
                                     mcauc::aauc_ovo_loss(cache.scores, labels, slope).grad);
          break;
        default:
          analytic = mcauc::backward(params, cache,
                                     mcauc::aauc_ovr_loss(cache.scores, labels, slope).grad);
          break;
      }
      const mcauc::GradCheckReport report =
          mcauc::grad_check(loss_value, analytic, params, 1e-5, 1e-4, 200, rng());
      worst[k] = std::max(worst[k], report.max_rel_error);
      if (!report.pass) {
        std::cout << "FAIL " << mcauc::to_string(kind) << " instance " << inst
                  << ": max relative error " << report.max_rel_error << '\n';
        return 1;
      }
    }
  }
  for (int k = 0; k < 3; ++k)
    std::cout << "PASS " << mcauc::to_string(kinds[k]) << ": worst relative error " << worst[k]
              << " over " << instances << " instances\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiclass AUC metrics, surrogate-loss training and experiment harness"};
  app.require_subcommand(1);

  // gen-data
  SyntheticFlags gen_flags;
  std::string gen_out = "data";
  CLI::App* gen = app.add_subcommand("gen-data", "Generate synthetic Gaussian-blob datasets");
  add_synthetic_flags(gen, gen_flags);
  gen->add_option("--out", gen_out, "Output directory");
  gen->add_option("--seed", gen_flags.seed, "Seed for the synthetic generator");

  // train
  TrainFlags train_flags;
  std::string train_path, val_path;
  std::string train_out = "run";
  CLI::App* train_cmd = app.add_subcommand("train", "Train a classifier on dataset files");
  train_cmd->add_option("--train", train_path, "Training CSV")->required();
  train_cmd->add_option("--val", val_path, "Validation CSV")->required();
  add_train_flags(train_cmd, train_flags);
  train_cmd->add_option("--out", train_out, "Output directory");

  // eval
  std::string model_path, eval_data, eval_out;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a saved model on a dataset");
  eval_cmd->add_option("--model", model_path, "Model JSON document")->required();
  eval_cmd->add_option("--data", eval_data, "Dataset CSV")->required();
  eval_cmd->add_option("--out", eval_out, "Optional output directory for metrics.json");

  // experiment
  TrainFlags exp_train_flags;
  SyntheticFlags exp_synth_flags;
  std::vector<std::string> exp_files;
  std::vector<std::string> exp_losses;
  int repeats = 10;
  std::string exp_out = "experiment";
  CLI::App* exp = app.add_subcommand(
      "experiment", "Repeated train/evaluate comparison across loss functions");
  exp->add_option("--files", exp_files, "Use dataset files: train,val,test")
      ->delimiter(',')
      ->expected(3);
  add_synthetic_flags(exp, exp_synth_flags);
  add_train_flags(exp, exp_train_flags, false);
  exp->add_option("--loss", exp_losses, "Loss kinds to compare (repeatable)")
      ->check(CLI::IsMember({"ce", "aauc-ovo", "aauc-ovr"}));
  exp->add_option("--repeats", repeats, "Number of repeated runs");
  exp->add_option("--out", exp_out, "Output directory");

  // grad-check
  std::uint64_t gc_seed = 0;
  int gc_instances = 20;
  CLI::App* gc = app.add_subcommand(
      "grad-check", "Check analytic gradients against finite differences");
  gc->add_option("--seed", gc_seed, "Random seed");
  gc->add_option("--instances", gc_instances, "Number of random instances per loss");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen_data(gen_flags, gen_out);
    if (train_cmd->parsed()) return cmd_train(train_flags, train_path, val_path, train_out);
    if (eval_cmd->parsed()) return cmd_eval(model_path, eval_data, eval_out);
    if (exp->parsed())
      return cmd_experiment(exp_train_flags, exp_synth_flags, !exp_files.empty(), exp_files,
                            exp_losses, repeats, exp_out);
    if (gc->parsed()) return cmd_grad_check(gc_seed, gc_instances);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
