#ifndef ARCHIPELAGO_MATRIX_HPP
#define ARCHIPELAGO_MATRIX_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace archipelago {

/// Minimal dense row-major matrix, sized for desk-scale finite state spaces.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  const double* row(std::size_t r) const { return &data_[r * cols_]; }

  /// y = A h  (action on column vectors / functions).
  std::vector<double> apply(const std::vector<double>& h) const {
    if (h.size() != cols_) throw std::invalid_argument("Matrix::apply: size mismatch");
    std::vector<double> y(rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < cols_; ++c) acc += data_[r * cols_ + c] * h[c];
      y[r] = acc;
    }
    return y;
  }

  /// y = mu A  (action on row vectors / measures).
  std::vector<double> apply_left(const std::vector<double>& mu) const {
    if (mu.size() != rows_) throw std::invalid_argument("Matrix::apply_left: size mismatch");
    std::vector<double> y(cols_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
      const double m = mu[r];
      if (m == 0.0) continue;
      for (std::size_t c = 0; c < cols_; ++c) y[c] += m * data_[r * cols_ + c];
    }
    return y;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace archipelago

#endif  // ARCHIPELAGO_MATRIX_HPP
