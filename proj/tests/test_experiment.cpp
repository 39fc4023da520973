#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mcauc/experiment.hpp"

using mcauc::ExperimentConfig;
using mcauc::ExperimentSummary;
using mcauc::LossKind;
using mcauc::SyntheticSpec;

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig config;
  SyntheticSpec spec;
  spec.per_class = {20, 20, 40};
  spec.spread = 0.05;  // essentially separable
  spec.seed = 400;
  config.synthetic = spec;
  config.losses = {LossKind::kSoftmaxCe, LossKind::kAaucOvo};
  config.hidden_sizes = {8};
  config.train.epochs = 20;
  config.train.batch_size = 15;
  config.train.lr_start = 0.02;
  config.train.lr_end = 0.005;
  config.train.seed = 21;
  config.calibrator.epochs = 400;  // margins are thin after such a short run
  config.repeats = 2;
  return config;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("separable data earns perfect AUC metrics with zero spread across runs") {
  ExperimentConfig config = tiny_config();
  config.repeats = 1;
  const ExperimentSummary summary = mcauc::run_experiment(config);
  REQUIRE(summary.results.size() == 2);
  for (const auto& ls : summary.results) {
    CHECK(ls.auc_ovo.mean >= 0.999);
    CHECK(ls.auc_ovr.mean >= 0.999);
    CHECK(ls.avg_pr_auc.mean >= 0.999);
    CHECK(ls.auc_ovo.stddev == 0.0);
    CHECK(ls.accuracy.mean >= 0.99);
    REQUIRE(ls.per_class.size() == 3);
    REQUIRE(ls.mean_pr_curves.size() == 3);
    for (const auto& curve : ls.mean_pr_curves) {
      REQUIRE(curve.size() == mcauc::kPrGridSize);
      CHECK(curve.front().recall == 0.0);
      CHECK(curve.back().recall == 1.0);
    }
  }
}

TEST_CASE("reports are byte-identical across identical runs and round-trip") {
  const ExperimentConfig config = tiny_config();
  const ExperimentSummary first = mcauc::run_experiment(config);
  const ExperimentSummary second = mcauc::run_experiment(config);
  CHECK(first == second);

  const std::string path_a = "test_report_a.json";
  const std::string path_b = "test_report_b.json";
  mcauc::emit_report(first, path_a);
  mcauc::emit_report(second, path_b);
  CHECK(slurp(path_a) == slurp(path_b));

  const ExperimentSummary parsed = mcauc::parse_report(path_a);
  CHECK(parsed == first);
  std::remove(path_a.c_str());
  std::remove(path_b.c_str());
}

TEST_CASE("summary statistics recompute from the per-run raw values") {
  const ExperimentSummary summary = mcauc::run_experiment(tiny_config());
  for (const auto& ls : summary.results) {
    for (const auto* stats : {&ls.accuracy, &ls.auc_ovo, &ls.auc_ovr, &ls.avg_pr_auc}) {
      REQUIRE(stats->runs.size() == 2);
      double mean = 0.0;
      for (double v : stats->runs) mean += v;
      mean /= static_cast<double>(stats->runs.size());
      double var = 0.0;
      for (double v : stats->runs) var += (v - mean) * (v - mean);
      const double stddev = std::sqrt(var / static_cast<double>(stats->runs.size()));
      CHECK(std::abs(stats->mean - mean) <= 1e-12);
      CHECK(std::abs(stats->stddev - stddev) <= 1e-12);
    }
  }
}

TEST_CASE("report carries provenance and every requested metric") {
  const std::string path = "test_report_fields.json";
  const ExperimentSummary summary = mcauc::run_experiment(tiny_config());
  mcauc::emit_report(summary, path);
  const std::string text = slurp(path);
  std::remove(path.c_str());
  for (const char* field :
       {"\"repeats\"", "\"base_seed\"", "\"delta\"", "\"auc_ovo\"", "\"auc_ovr\"",
        "\"avg_pr_auc\"", "\"accuracy\"", "\"precision\"", "\"recall\"", "\"f1\"",
        "\"pr_curves\"", "\"softmax_ce\"", "\"aauc_ovo\""})
    CHECK_MESSAGE(text.find(field) != std::string::npos, "missing field ", field);
  CHECK(summary.repeats == 2);
  CHECK(summary.base_seed == 21);
}

TEST_CASE("pr point files hold one curve per class with precision 1 when perfect") {
  ExperimentConfig config = tiny_config();
  config.repeats = 1;
  config.losses = {LossKind::kAaucOvo};
  const ExperimentSummary summary = mcauc::run_experiment(config);
  const auto paths = mcauc::emit_pr_points(summary, ".");
  REQUIRE(paths.size() == 1);
  std::ifstream in(paths[0]);
  std::string header;
  std::getline(in, header);
  CHECK(header == "class,threshold,recall,precision");
  std::size_t rows = 0;
  std::string line;
  bool all_precision_one = true;
  while (std::getline(in, line)) {
    ++rows;
    const auto last_comma = line.rfind(',');
    const double precision = std::stod(line.substr(last_comma + 1));
    all_precision_one = all_precision_one && precision >= 0.999;
  }
  in.close();
  std::remove(paths[0].c_str());
  CHECK(rows == 3 * mcauc::kPrGridSize);
  CHECK(all_precision_one);  // near-separable data: every class curve is flat at 1
}

TEST_CASE("run_experiment validates its configuration") {
  ExperimentConfig config = tiny_config();
  config.repeats = 0;
  CHECK_THROWS_AS(mcauc::run_experiment(config), std::invalid_argument);
  config = tiny_config();
  config.losses.clear();
  CHECK_THROWS_AS(mcauc::run_experiment(config), std::invalid_argument);
  config = tiny_config();
  config.synthetic.reset();
  CHECK_THROWS_AS(mcauc::run_experiment(config), std::invalid_argument);
  config = tiny_config();
  config.dataset_files = {{"a.csv", "b.csv", "c.csv"}};
  CHECK_THROWS_AS(mcauc::run_experiment(config), std::invalid_argument);
}

TEST_CASE("file-based experiments reuse the same datasets across runs") {
  SyntheticSpec spec;
  spec.per_class = {15, 15, 30};
  spec.spread = 0.05;
  spec.seed = 7;
  const auto splits = mcauc::gen_synthetic(spec);
  mcauc::save_dataset(splits.train, "test_exp_train.csv");
  mcauc::save_dataset(splits.val, "test_exp_val.csv");
  mcauc::save_dataset(splits.test, "test_exp_test.csv");

  ExperimentConfig config;
  config.dataset_files = {{"test_exp_train.csv", "test_exp_val.csv", "test_exp_test.csv"}};
  config.losses = {LossKind::kAaucOvr};
  config.hidden_sizes = {8};
  config.train.epochs = 15;
  config.train.batch_size = 15;
  config.train.lr_start = 0.02;
  config.train.lr_end = 0.005;
  config.repeats = 2;
  const ExperimentSummary summary = mcauc::run_experiment(config);
  CHECK(summary.results[0].auc_ovr.mean >= 0.999);
  CHECK(summary.data_source.find("files(") == 0);

  std::remove("test_exp_train.csv");
  std::remove("test_exp_val.csv");
  std::remove("test_exp_test.csv");
}

}  // TEST_SUITE
