#pragma once

#include <cstddef>
#include <span>

namespace mcauc {

double log_sum_exp(std::span<const double> values);

// Stable row softmax; in and out may alias.
void softmax_row(std::span<const double> in, std::span<double> out);

// Index of the first maximum (ties break toward the lowest index).
std::size_t argmax(std::span<const double> values);

}  // namespace mcauc
