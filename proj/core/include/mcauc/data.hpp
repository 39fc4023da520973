#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mcauc/matrix.hpp"

namespace mcauc {

struct Dataset {
  Matrix features;  // N x D
  LabelVector labels;
  std::vector<std::string> feature_names;
  std::vector<std::string> class_names;

  std::size_t size() const { return features.rows(); }
  std::size_t dims() const { return features.cols(); }
  std::size_t num_classes() const { return class_names.size(); }

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

// Isotropic Gaussian blob generator. per_class holds the nominal examples per
// class for the train/val/test splits; the per-split total (per_class * c) is
// apportioned across classes by the imbalance proportions, so the defaults
// give 300 train, 300 val and 1500 test examples. An empty class_means picks
// evenly spaced means on a circle of radius 1 in the first two dimensions.
struct SyntheticSpec {
  std::size_t num_classes = 3;
  std::size_t dims = 2;
  std::array<std::size_t, 3> per_class = {100, 100, 500};  // train, val, test
  Matrix class_means;                                      // c x D, optional
  double spread = 1.0;                                     // isotropic stddev
  std::vector<double> imbalance;  // optional proportions; default: 3-class mix below
  std::uint64_t seed = 0;
};

// Default 3-class mix used by the stock benchmark (rarest class ~17%).
inline constexpr std::array<double, 3> kDefaultThreeClassMix = {0.1660, 0.3445, 0.4894};

// Evenly spaced class means on a circle of the given radius (first two
// dimensions; remaining dimensions zero). Falls back to a line for dims == 1.
Matrix ring_means(std::size_t num_classes, std::size_t dims, double radius);

struct SplitDatasets {
  Dataset train;
  Dataset val;
  Dataset test;
};

SplitDatasets gen_synthetic(const SyntheticSpec& spec);

// CSV with header "f0,...,f{D-1},label"; features are decimal reals, label is
// an integer class id in the last column.
Dataset load_dataset(const std::string& path);
void save_dataset(const Dataset& dataset, const std::string& path);

struct NormalizationParams {
  std::vector<double> min;
  std::vector<double> max;

  friend bool operator==(const NormalizationParams&, const NormalizationParams&) = default;
};

// Per-feature min/max fitted on the training split.
NormalizationParams fit_minmax(const Dataset& train);

// Maps features through (x - min) / (max - min) and clamps to [0, 1].
// Constant features map to 0.
Dataset apply_minmax(const NormalizationParams& params, const Dataset& dataset);

}  // namespace mcauc
