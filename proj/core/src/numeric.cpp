#include "mcauc/numeric.hpp"

#include <cmath>
#include <stdexcept>

namespace mcauc {

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("log_sum_exp: empty input");
  double hi = values[0];
  for (double v : values) hi = std::max(hi, v);
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - hi);
  return hi + std::log(acc);
}

void softmax_row(std::span<const double> in, std::span<double> out) {
  if (in.size() != out.size()) throw std::invalid_argument("softmax_row: size mismatch");
  if (in.empty()) return;
  double hi = in[0];
  for (double v : in) hi = std::max(hi, v);
  double sum = 0.0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    out[i] = std::exp(in[i] - hi);
    sum += out[i];
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] /= sum;
}

std::size_t argmax(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmax: empty input");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

}  // namespace mcauc
