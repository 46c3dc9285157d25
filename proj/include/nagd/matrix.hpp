#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "nagd/error.hpp"

namespace nagd {

using Complex = std::complex<double>;
using Vector = std::vector<double>;
using CVector = std::vector<Complex>;

// Dense row-major matrix. Small value type; the games studied here have a
// handful of players, so no attempt is made at blocking or BLAS dispatch.
template <class T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<T>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows.begin()->size() : 0;
    DenseMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) throw Error(ErrorCode::InvalidArgument, "ragged matrix rows");
      std::copy(row.begin(), row.end(), m.data_.begin() + static_cast<std::ptrdiff_t>(i * c));
      ++i;
    }
    return m;
  }

  static DenseMatrix from_row_major(std::size_t rows, std::size_t cols, std::span<const T> values) {
    if (values.size() != rows * cols) {
      throw Error(ErrorCode::InvalidArgument, "matrix entry count does not match dimensions");
    }
    DenseMatrix m(rows, cols);
    std::copy(values.begin(), values.end(), m.data_.begin());
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<const T> values() const noexcept { return data_; }
  std::span<T> values() noexcept { return data_; }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  DenseMatrix transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using Matrix = DenseMatrix<double>;
using CMatrix = DenseMatrix<Complex>;

}  // namespace nagd
