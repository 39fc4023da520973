#include "mcauc/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mcauc {

Matrix ring_means(std::size_t num_classes, std::size_t dims, double radius) {
  Matrix means(num_classes, dims, 0.0);
  if (dims == 1) {
    for (std::size_t i = 0; i < num_classes; ++i)
      means(i, 0) = 2.0 * radius * static_cast<double>(i);
    return means;
  }
  const double two_pi = 2.0 * std::acos(-1.0);
  for (std::size_t i = 0; i < num_classes; ++i) {
    const double angle = two_pi * static_cast<double>(i) / static_cast<double>(num_classes);
    means(i, 0) = radius * std::cos(angle);
    means(i, 1) = radius * std::sin(angle);
  }
  return means;
}

namespace {

std::vector<double> resolve_proportions(const SyntheticSpec& spec) {
  std::vector<double> props = spec.imbalance;
  if (props.empty()) {
    if (spec.num_classes == 3)
      props.assign(kDefaultThreeClassMix.begin(), kDefaultThreeClassMix.end());
    else
      props.assign(spec.num_classes, 1.0 / static_cast<double>(spec.num_classes));
  }
  if (props.size() != spec.num_classes)
    throw std::invalid_argument("imbalance proportions must have one entry per class");
  double sum = 0.0;
  for (double p : props) {
    if (!(p > 0.0)) throw std::invalid_argument("imbalance proportions must be positive");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-3)
    throw std::invalid_argument("imbalance proportions must sum to 1");
  for (double& p : props) p /= sum;
  return props;
}

// Largest-remainder apportionment with a floor of one example per class.
std::vector<std::size_t> apportion(std::size_t total, const std::vector<double>& props) {
  const std::size_t c = props.size();
  if (total < c) throw std::invalid_argument("split too small to cover every class");
  std::vector<std::size_t> counts(c);
  std::vector<std::pair<double, std::size_t>> remainders(c);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < c; ++i) {
    const double exact = props[i] * static_cast<double>(total);
    counts[i] = static_cast<std::size_t>(exact);
    remainders[i] = {exact - static_cast<double>(counts[i]), i};
    assigned += counts[i];
  }
  std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned) ++counts[remainders[k % c].second];
  for (std::size_t i = 0; i < c; ++i)
    if (counts[i] == 0) {
      const std::size_t donor =
          static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) -
                                   counts.begin());
      --counts[donor];
      ++counts[i];
    }
  return counts;
}

Dataset gen_split(const SyntheticSpec& spec, const Matrix& means,
                  const std::vector<double>& props, std::size_t per_class,
                  std::mt19937_64& rng) {
  const std::size_t total = per_class * spec.num_classes;
  const auto counts = apportion(total, props);

  Dataset out;
  out.features = Matrix(total, spec.dims);
  out.labels.resize(total);
  std::normal_distribution<double> unit(0.0, 1.0);
  std::size_t row = 0;
  for (std::size_t cls = 0; cls < spec.num_classes; ++cls)
    for (std::size_t k = 0; k < counts[cls]; ++k, ++row) {
      for (std::size_t d = 0; d < spec.dims; ++d)
        out.features(row, d) = means(cls, d) + spec.spread * unit(rng);
      out.labels[row] = static_cast<int>(cls);
    }

  // Shuffle rows so files and batches do not arrive grouped by class.
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  Dataset shuffled;
  shuffled.features = Matrix(total, spec.dims);
  shuffled.labels.resize(total);
  for (std::size_t r = 0; r < total; ++r) {
    for (std::size_t d = 0; d < spec.dims; ++d)
      shuffled.features(r, d) = out.features(order[r], d);
    shuffled.labels[r] = out.labels[order[r]];
  }
  for (std::size_t d = 0; d < spec.dims; ++d)
    shuffled.feature_names.push_back("f" + std::to_string(d));
  for (std::size_t cls = 0; cls < spec.num_classes; ++cls)
    shuffled.class_names.push_back("class" + std::to_string(cls));
  return shuffled;
}

}  // namespace

SplitDatasets gen_synthetic(const SyntheticSpec& spec) {
  if (spec.num_classes < 2) throw std::invalid_argument("gen_synthetic: need at least 2 classes");
  if (spec.dims == 0) throw std::invalid_argument("gen_synthetic: need at least 1 dimension");
  if (!(spec.spread > 0.0) || !std::isfinite(spec.spread))
    throw std::invalid_argument("gen_synthetic: spread must be positive and finite");
  for (std::size_t n : spec.per_class)
    if (n == 0) throw std::invalid_argument("gen_synthetic: per_class entries must be >= 1");

  Matrix means = spec.class_means;
  if (means.empty()) means = ring_means(spec.num_classes, spec.dims, 1.0);
  if (means.rows() != spec.num_classes || means.cols() != spec.dims)
    throw std::invalid_argument("gen_synthetic: class_means must be c x D");
  const auto props = resolve_proportions(spec);

  std::mt19937_64 rng(spec.seed);
  SplitDatasets splits;
  splits.train = gen_split(spec, means, props, spec.per_class[0], rng);
  splits.val = gen_split(spec, means, props, spec.per_class[1], rng);
  splits.test = gen_split(spec, means, props, spec.per_class[2], rng);
  return splits;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_double_cell(const std::string& cell, std::size_t line_no, std::size_t col) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw std::runtime_error("non-numeric cell at line " + std::to_string(line_no) +
                             ", column " + std::to_string(col + 1));
  return value;
}

int parse_label_cell(const std::string& cell, std::size_t line_no) {
  int value = 0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || value < 0)
    throw std::runtime_error("non-integer label at line " + std::to_string(line_no));
  return value;
}

}  // namespace

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty dataset file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);
  if (header.empty() || header.back() != "label")
    throw std::runtime_error("dataset header must end with a 'label' column: " + path);
  const std::size_t dims = header.size() - 1;
  if (dims == 0) throw std::runtime_error("dataset has no feature columns: " + path);

  std::vector<double> values;
  LabelVector labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw std::runtime_error("ragged row at line " + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " cells, got " +
                               std::to_string(cells.size()));
    for (std::size_t d = 0; d < dims; ++d)
      values.push_back(parse_double_cell(cells[d], line_no, d));
    labels.push_back(parse_label_cell(cells.back(), line_no));
  }
  if (labels.empty()) throw std::runtime_error("dataset has no data rows: " + path);

  Dataset out;
  out.features = Matrix(labels.size(), dims);
  out.features.data() = std::move(values);
  out.labels = std::move(labels);
  out.feature_names.assign(header.begin(), header.end() - 1);
  const int max_label = *std::max_element(out.labels.begin(), out.labels.end());
  for (int cls = 0; cls <= max_label; ++cls)
    out.class_names.push_back("class" + std::to_string(cls));
  return out;
}

void save_dataset(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  for (std::size_t d = 0; d < dataset.dims(); ++d) {
    const std::string name =
        d < dataset.feature_names.size() ? dataset.feature_names[d] : "f" + std::to_string(d);
    out << name << ',';
  }
  out << "label\n";
  char buf[64];
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    for (std::size_t d = 0; d < dataset.dims(); ++d) {
      std::snprintf(buf, sizeof(buf), "%.17g", dataset.features(r, d));
      out << buf << ',';
    }
    out << dataset.labels[r] << '\n';
  }
  if (!out) throw std::runtime_error("failed writing dataset file: " + path);
}

NormalizationParams fit_minmax(const Dataset& train) {
  if (train.size() == 0) throw std::invalid_argument("fit_minmax: empty dataset");
  NormalizationParams params;
  params.min.assign(train.dims(), 0.0);
  params.max.assign(train.dims(), 0.0);
  for (std::size_t d = 0; d < train.dims(); ++d) {
    double lo = train.features(0, d);
    double hi = lo;
    for (std::size_t r = 1; r < train.size(); ++r) {
      lo = std::min(lo, train.features(r, d));
      hi = std::max(hi, train.features(r, d));
    }
    params.min[d] = lo;
    params.max[d] = hi;
  }
  return params;
}

Dataset apply_minmax(const NormalizationParams& params, const Dataset& dataset) {
  if (params.min.size() != dataset.dims())
    throw std::invalid_argument("apply_minmax: feature dimension mismatch");
  Dataset out = dataset;
  for (std::size_t d = 0; d < dataset.dims(); ++d) {
    const double range = params.max[d] - params.min[d];
    for (std::size_t r = 0; r < dataset.size(); ++r) {
      double v = range > 0.0 ? (dataset.features(r, d) - params.min[d]) / range : 0.0;
      out.features(r, d) = std::clamp(v, 0.0, 1.0);
    }
  }
  return out;
}

}  // namespace mcauc
