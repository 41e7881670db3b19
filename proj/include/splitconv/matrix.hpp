#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "splitconv/gf256.hpp"

namespace splitconv {

/// Dense row-major matrix over GF(2^8).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<Gf> entries);

  /// Convenience for tests and fixtures: rows of byte literals.
  static Matrix from_rows(std::initializer_list<std::initializer_list<std::uint8_t>> rows);
  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Gf& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  Gf operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  std::span<Gf> row(std::size_t r) { return {entries_.data() + r * cols_, cols_}; }
  std::span<const Gf> row(std::size_t r) const { return {entries_.data() + r * cols_, cols_}; }
  std::vector<Gf> column(std::size_t c) const;

  std::span<const Gf> entries() const { return entries_; }

  Matrix transposed() const;
  Matrix select_columns(std::span<const std::size_t> columns) const;
  Matrix select_rows(std::span<const std::size_t> rows) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Gf> entries_;
};

/// Throws Error(dimension_mismatch) when a.cols() != b.rows().
Matrix mat_mul(const Matrix& a, const Matrix& b);

/// Solves a * x = b for square a by Gaussian elimination with first-nonzero
/// pivoting. b may carry several right-hand sides. Throws SingularMatrixError
/// naming the first column that has no pivot.
Matrix solve_linear(Matrix a, Matrix b);

std::size_t rank(Matrix a);

/// Inner product of two equal-length vectors.
Gf dot(std::span<const Gf> a, std::span<const Gf> b);

/// y += c * x, elementwise.
void axpy(Gf c, std::span<const Gf> x, std::span<Gf> y);

}  // namespace splitconv
