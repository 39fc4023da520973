#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace mcauc {

// Dense row-major matrix of doubles. Everything in this library is small
// enough that a flat std::vector is the right storage.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Integer class labels, one per example, each in [0, c).
using LabelVector = std::vector<int>;

bool all_finite(std::span<const double> values);
bool all_finite(const Matrix& m);

// Per-class example counts. Throws if a label falls outside [0, num_classes).
std::vector<std::size_t> class_counts(const LabelVector& labels, std::size_t num_classes);

// a (r x k) times b (k x c).
Matrix matmul(const Matrix& a, const Matrix& b);
// a (r x k) times b^T where b is (c x k).
Matrix matmul_nt(const Matrix& a, const Matrix& b);
// a^T (k x r) times b where a is (r x k) and b is (r x c).
Matrix matmul_tn(const Matrix& a, const Matrix& b);

}  // namespace mcauc
