#pragma once

// Shared test helpers: naive pair-counting oracles kept deliberately separate
// from the library code paths, finite-difference utilities and random
// instance generators.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "mcauc/matrix.hpp"

namespace testutil {

// Naive pair-counting AUC with the tie = 1/2 rule, written in the same
// complement-exact form as the ordered pair count it checks.
inline double oracle_pair_auc(const std::vector<double>& pos, const std::vector<double>& neg) {
  long long greater = 0;
  long long less = 0;
  for (double sp : pos)
    for (double sn : neg) {
      if (sp > sn) ++greater;
      if (sp < sn) ++less;
    }
  return 0.5 + 0.5 * static_cast<double>(greater - less) /
                   (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

// Directed AUC(C_i, C_j) by triple loop straight over rows: class-i rows as
// targets and class-j rows as non-targets, both read from score column i.
inline double oracle_directed_auc(const mcauc::Matrix& scores, const mcauc::LabelVector& labels,
                                  int target, int non_target) {
  std::vector<double> pos, neg;
  for (std::size_t r = 0; r < scores.rows(); ++r) {
    if (labels[r] == target) pos.push_back(scores(r, static_cast<std::size_t>(target)));
    if (labels[r] == non_target) neg.push_back(scores(r, static_cast<std::size_t>(target)));
  }
  return oracle_pair_auc(pos, neg);
}

inline double oracle_auc_ovo(const mcauc::Matrix& scores, const mcauc::LabelVector& labels) {
  const std::size_t c = scores.cols();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < c; ++i)
    for (std::size_t j = i + 1; j < c; ++j)
      acc += 0.5 * (oracle_directed_auc(scores, labels, static_cast<int>(i), static_cast<int>(j)) +
                    oracle_directed_auc(scores, labels, static_cast<int>(j), static_cast<int>(i)));
  return acc / (static_cast<double>(c) * static_cast<double>(c - 1) / 2.0);
}

inline double oracle_auc_ovr(const mcauc::Matrix& scores, const mcauc::LabelVector& labels) {
  const std::size_t c = scores.cols();
  double acc = 0.0;
  for (std::size_t i = 0; i < c; ++i) {
    std::vector<double> pos, neg;
    for (std::size_t r = 0; r < scores.rows(); ++r) {
      if (labels[r] == static_cast<int>(i)) pos.push_back(scores(r, i));
      else neg.push_back(scores(r, i));
    }
    acc += oracle_pair_auc(pos, neg);
  }
  return acc / static_cast<double>(c);
}

// Relative error with an absolute floor so that coordinates dominated by
// finite-difference noise compare on an absolute scale.
inline double rel_err(double a, double b, double floor = 1e-4) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

// Central finite difference of f with respect to the referenced coordinate.
template <class F>
double central_diff(F&& f, double& coord, double eps = 1e-5) {
  const double original = coord;
  coord = original + eps;
  const double f_plus = f();
  coord = original - eps;
  const double f_minus = f();
  coord = original;
  return (f_plus - f_minus) / (2.0 * eps);
}

// Random score matrix + labels with every class present. Scores are drawn
// from a coarse grid so ties actually occur.
struct RandomInstance {
  mcauc::Matrix scores;
  mcauc::LabelVector labels;
};

inline RandomInstance random_instance(std::mt19937_64& rng, std::size_t n, std::size_t c,
                                      std::size_t grid = 0) {
  RandomInstance inst;
  inst.scores = mcauc::Matrix(n, c);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (grid == 0) {
    for (double& v : inst.scores.data()) v = unit(rng);
  } else {
    for (double& v : inst.scores.data())
      v = static_cast<double>(rng() % (grid + 1)) / static_cast<double>(grid);
  }
  inst.labels.resize(n);
  for (std::size_t r = 0; r < n; ++r)
    inst.labels[r] = static_cast<int>(r < c ? r : rng() % c);  // every class present
  std::shuffle(inst.labels.begin(), inst.labels.end(), rng);
  return inst;
}

}  // namespace testutil
