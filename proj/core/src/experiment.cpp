#include "mcauc/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace mcauc {

namespace {

using nlohmann::json;

MetricStats make_stats(std::vector<double> runs) {
  MetricStats stats;
  const double n = static_cast<double>(runs.size());
  double sum = 0.0;
  for (double v : runs) sum += v;
  stats.mean = sum / n;
  double var = 0.0;
  for (double v : runs) var += (v - stats.mean) * (v - stats.mean);
  stats.stddev = std::sqrt(var / n);
  stats.runs = std::move(runs);
  return stats;
}

// First curve point whose recall reaches g (points are in increasing-recall
// order; the last point always has recall 1).
const PRPoint& point_at_recall(const PRCurve& curve, double g) {
  for (const auto& p : curve.points)
    if (p.recall >= g) return p;
  return curve.points.back();
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string describe_source(const ExperimentConfig& config) {
  if (config.synthetic) {
    const SyntheticSpec& s = *config.synthetic;
    std::string out = "synthetic(classes=" + std::to_string(s.num_classes) +
                      ",dims=" + std::to_string(s.dims) + ",per_class=" +
                      std::to_string(s.per_class[0]) + "/" + std::to_string(s.per_class[1]) +
                      "/" + std::to_string(s.per_class[2]) +
                      ",spread=" + format_double(s.spread) +
                      ",seed=" + std::to_string(s.seed) + ")";
    return out;
  }
  const auto& f = *config.dataset_files;
  return "files(" + f[0] + "," + f[1] + "," + f[2] + ")";
}

struct RunRecord {
  MetricsReport metrics;
  std::vector<std::vector<PRPoint>> grid_curves;  // [class][grid index]
};

RunRecord evaluate_run(const MlpParams& params, const CalibratorParams& calibrator,
                       const Dataset& test) {
  RunRecord record;
  const ForwardCache cache = forward(params, test.features);
  const LabelVector pred = calibrate_predict(calibrator, cache.scores);
  record.metrics = evaluate_scores(cache.scores, pred, test.labels);

  const std::size_t c = test.num_classes();
  std::vector<double> column(test.size());
  std::vector<bool> positive(test.size());
  record.grid_curves.resize(c);
  for (std::size_t cls = 0; cls < c; ++cls) {
    for (std::size_t r = 0; r < test.size(); ++r) {
      column[r] = cache.scores(r, cls);
      positive[r] = test.labels[r] == static_cast<int>(cls);
    }
    const PRCurve curve = pr_curve(column, positive);
    auto& grid = record.grid_curves[cls];
    grid.reserve(kPrGridSize);
    for (std::size_t g = 0; g < kPrGridSize; ++g) {
      const double recall = static_cast<double>(g) / static_cast<double>(kPrGridSize - 1);
      PRPoint p = point_at_recall(curve, recall);
      p.recall = recall;
      grid.push_back(p);
    }
  }
  return record;
}

json stats_to_json(const MetricStats& stats) {
  return json{{"mean", stats.mean}, {"std", stats.stddev}, {"runs", stats.runs}};
}

MetricStats stats_from_json(const json& j) {
  MetricStats stats;
  stats.mean = j.at("mean").get<double>();
  stats.stddev = j.at("std").get<double>();
  stats.runs = j.at("runs").get<std::vector<double>>();
  return stats;
}

}  // namespace

ExperimentSummary run_experiment(const ExperimentConfig& config) {
  if (config.repeats < 1) throw std::invalid_argument("experiment: repeats must be >= 1");
  if (config.losses.empty()) throw std::invalid_argument("experiment: no loss kinds requested");
  if (config.synthetic.has_value() == config.dataset_files.has_value())
    throw std::invalid_argument("experiment: exactly one data source must be set");

  SplitDatasets file_data;
  if (config.dataset_files) {
    file_data.train = load_dataset((*config.dataset_files)[0]);
    file_data.val = load_dataset((*config.dataset_files)[1]);
    file_data.test = load_dataset((*config.dataset_files)[2]);
    const std::size_t c = file_data.train.num_classes();
    // Splits may individually miss high classes; widen everyone to the max.
    std::size_t hi = std::max({c, file_data.val.num_classes(), file_data.test.num_classes()});
    for (Dataset* d : {&file_data.train, &file_data.val, &file_data.test})
      for (std::size_t cls = d->num_classes(); cls < hi; ++cls)
        d->class_names.push_back("class" + std::to_string(cls));
  }

  ExperimentSummary summary;
  summary.repeats = config.repeats;
  summary.base_seed = config.train.seed;
  summary.delta = config.train.slope.delta;
  summary.epochs = config.train.epochs;
  summary.batch_size = config.train.batch_size;
  summary.lr_start = config.train.lr_start;
  summary.lr_end = config.train.lr_end;
  summary.stratified_mode = config.train.stratified.has_value()
                                ? (*config.train.stratified ? "on" : "off")
                                : "auto";
  summary.hidden_sizes = config.hidden_sizes;
  summary.data_source = describe_source(config);

  std::vector<std::vector<RunRecord>> records(config.losses.size());

  for (int run = 0; run < config.repeats; ++run) {
    SplitDatasets data;
    if (config.synthetic) {
      SyntheticSpec spec = *config.synthetic;
      spec.seed = spec.seed + static_cast<std::uint64_t>(run);
      data = gen_synthetic(spec);
    } else {
      data = file_data;
    }
    const NormalizationParams norm = fit_minmax(data.train);
    data.train = apply_minmax(norm, data.train);
    data.val = apply_minmax(norm, data.val);
    data.test = apply_minmax(norm, data.test);

    if (run == 0) {
      summary.num_classes = data.train.num_classes();
      summary.class_names = data.train.class_names;
    }

    std::vector<std::size_t> layer_sizes;
    layer_sizes.push_back(data.train.dims());
    layer_sizes.insert(layer_sizes.end(), config.hidden_sizes.begin(),
                       config.hidden_sizes.end());
    layer_sizes.push_back(data.train.num_classes());

    for (std::size_t k = 0; k < config.losses.size(); ++k) {
      try {
        TrainConfig train_config = config.train;
        train_config.loss = config.losses[k];
        train_config.seed = config.train.seed + static_cast<std::uint64_t>(run);
        const TrainResult trained = train(data.train, data.val, layer_sizes, train_config);

        const ForwardCache val_cache = forward(trained.params, data.val.features);
        CalibratorSgdConfig cal_config = config.calibrator;
        cal_config.seed = config.train.seed + static_cast<std::uint64_t>(run);
        const CalibratorParams calibrator =
            fit_calibrator(val_cache.scores, data.val.labels, cal_config);

        records[k].push_back(evaluate_run(trained.params, calibrator, data.test));
      } catch (const std::exception& e) {
        throw std::runtime_error("experiment run " + std::to_string(run) + " (" +
                                 to_string(config.losses[k]) + ") failed: " + e.what());
      }
    }
  }

  const std::size_t c = summary.num_classes;
  for (std::size_t k = 0; k < config.losses.size(); ++k) {
    LossKindSummary ls;
    ls.loss = config.losses[k];
    const auto& runs = records[k];
    const double n_runs = static_cast<double>(runs.size());

    auto collect = [&](auto&& get) {
      std::vector<double> values;
      values.reserve(runs.size());
      for (const RunRecord& r : runs) values.push_back(get(r));
      return make_stats(std::move(values));
    };
    ls.accuracy = collect([](const RunRecord& r) { return r.metrics.accuracy; });
    ls.auc_ovo = collect([](const RunRecord& r) { return r.metrics.auc_ovo; });
    ls.auc_ovr = collect([](const RunRecord& r) { return r.metrics.auc_ovr; });
    ls.avg_pr_auc = collect([](const RunRecord& r) { return r.metrics.avg_pr_auc; });
    for (std::size_t cls = 0; cls < c; ++cls) {
      ClassStats cs;
      cs.precision =
          collect([cls](const RunRecord& r) { return r.metrics.per_class[cls].precision; });
      cs.recall =
          collect([cls](const RunRecord& r) { return r.metrics.per_class[cls].recall; });
      cs.f1 = collect([cls](const RunRecord& r) { return r.metrics.per_class[cls].f1; });
      ls.per_class.push_back(std::move(cs));
    }
    ls.mean_pr_curves.assign(c, std::vector<PRPoint>(kPrGridSize));
    for (std::size_t cls = 0; cls < c; ++cls)
      for (std::size_t g = 0; g < kPrGridSize; ++g) {
        PRPoint& p = ls.mean_pr_curves[cls][g];
        p.recall = static_cast<double>(g) / static_cast<double>(kPrGridSize - 1);
        for (const RunRecord& r : runs) {
          p.precision += r.grid_curves[cls][g].precision;
          p.threshold += r.grid_curves[cls][g].threshold;
        }
        p.precision /= n_runs;
        p.threshold /= n_runs;
      }
    summary.results.push_back(std::move(ls));
  }
  return summary;
}

void emit_report(const ExperimentSummary& summary, const std::string& path) {
  json doc;
  doc["config"]["repeats"] = summary.repeats;
  doc["config"]["base_seed"] = summary.base_seed;
  doc["config"]["delta"] = summary.delta;
  doc["config"]["epochs"] = summary.epochs;
  doc["config"]["batch_size"] = summary.batch_size;
  doc["config"]["lr_start"] = summary.lr_start;
  doc["config"]["lr_end"] = summary.lr_end;
  doc["config"]["stratified"] = summary.stratified_mode;
  doc["config"]["hidden_sizes"] = summary.hidden_sizes;
  doc["config"]["data_source"] = summary.data_source;
  doc["dataset"]["num_classes"] = summary.num_classes;
  doc["dataset"]["class_names"] = summary.class_names;

  json results = json::array();
  for (const LossKindSummary& ls : summary.results) {
    json entry;
    entry["loss"] = to_string(ls.loss);
    entry["accuracy"] = stats_to_json(ls.accuracy);
    entry["auc_ovo"] = stats_to_json(ls.auc_ovo);
    entry["auc_ovr"] = stats_to_json(ls.auc_ovr);
    entry["avg_pr_auc"] = stats_to_json(ls.avg_pr_auc);
    json per_class = json::array();
    for (const ClassStats& cs : ls.per_class)
      per_class.push_back(json{{"precision", stats_to_json(cs.precision)},
                               {"recall", stats_to_json(cs.recall)},
                               {"f1", stats_to_json(cs.f1)}});
    entry["per_class"] = std::move(per_class);
    json curves = json::array();
    for (const auto& curve : ls.mean_pr_curves) {
      json points = json::array();
      for (const PRPoint& p : curve)
        points.push_back(json{{"threshold", p.threshold},
                              {"recall", p.recall},
                              {"precision", p.precision}});
      curves.push_back(std::move(points));
    }
    entry["pr_curves"] = std::move(curves);
    results.push_back(std::move(entry));
  }
  doc["results"] = std::move(results);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report file: " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing report file: " + path);
}

ExperimentSummary parse_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open report file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("report file " + path + ": " + e.what());
  }

  ExperimentSummary summary;
  const json& cfg = doc.at("config");
  summary.repeats = cfg.at("repeats").get<int>();
  summary.base_seed = cfg.at("base_seed").get<std::uint64_t>();
  summary.delta = cfg.at("delta").get<double>();
  summary.epochs = cfg.at("epochs").get<int>();
  summary.batch_size = cfg.at("batch_size").get<int>();
  summary.lr_start = cfg.at("lr_start").get<double>();
  summary.lr_end = cfg.at("lr_end").get<double>();
  summary.stratified_mode = cfg.at("stratified").get<std::string>();
  summary.hidden_sizes = cfg.at("hidden_sizes").get<std::vector<std::size_t>>();
  summary.data_source = cfg.at("data_source").get<std::string>();
  summary.num_classes = doc.at("dataset").at("num_classes").get<std::size_t>();
  summary.class_names = doc.at("dataset").at("class_names").get<std::vector<std::string>>();

  for (const auto& entry : doc.at("results")) {
    LossKindSummary ls;
    ls.loss = loss_kind_from_string(entry.at("loss").get<std::string>());
    ls.accuracy = stats_from_json(entry.at("accuracy"));
    ls.auc_ovo = stats_from_json(entry.at("auc_ovo"));
    ls.auc_ovr = stats_from_json(entry.at("auc_ovr"));
    ls.avg_pr_auc = stats_from_json(entry.at("avg_pr_auc"));
    for (const auto& cs : entry.at("per_class"))
      ls.per_class.push_back(ClassStats{stats_from_json(cs.at("precision")),
                                        stats_from_json(cs.at("recall")),
                                        stats_from_json(cs.at("f1"))});
    for (const auto& curve : entry.at("pr_curves")) {
      std::vector<PRPoint> points;
      for (const auto& p : curve)
        points.push_back(PRPoint{p.at("threshold").get<double>(),
                                 p.at("recall").get<double>(),
                                 p.at("precision").get<double>()});
      ls.mean_pr_curves.push_back(std::move(points));
    }
    summary.results.push_back(std::move(ls));
  }
  return summary;
}

std::vector<std::string> emit_pr_points(const ExperimentSummary& summary,
                                        const std::string& out_dir) {
  std::vector<std::string> paths;
  for (const LossKindSummary& ls : summary.results) {
    const std::string path = out_dir + "/pr_points_" + to_string(ls.loss) + ".csv";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write PR point file: " + path);
    out << "class,threshold,recall,precision\n";
    char buf[224];
    for (std::size_t cls = 0; cls < ls.mean_pr_curves.size(); ++cls)
      for (const PRPoint& p : ls.mean_pr_curves[cls]) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g\n", cls, p.threshold, p.recall,
                      p.precision);
        out << buf;
      }
    if (!out) throw std::runtime_error("failed writing PR point file: " + path);
    paths.push_back(path);
  }
  return paths;
}

}  // namespace mcauc
