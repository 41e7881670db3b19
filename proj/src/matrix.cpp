#include "splitconv/matrix.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "splitconv/error.hpp"

namespace splitconv {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Gf> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw Error(Errc::dimension_mismatch, "matrix entry count " + std::to_string(entries_.size()) +
                                              " does not equal " + std::to_string(rows_) + "x" +
                                              std::to_string(cols_));
  }
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<std::uint8_t>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<Gf> entries;
  entries.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw Error(Errc::dimension_mismatch, "ragged matrix literal");
    for (auto v : row) entries.emplace_back(v);
  }
  return Matrix(r, c, std::move(entries));
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Gf(1);
  return m;
}

std::vector<Gf> Matrix::column(std::size_t c) const {
  std::vector<Gf> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix Matrix::select_columns(std::span<const std::size_t> columns) const {
  Matrix out(rows_, columns.size());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t j = 0; j < columns.size(); ++j) out(r, j) = (*this)(r, columns[j]);
  return out;
}

Matrix Matrix::select_rows(std::span<const std::size_t> rows) const {
  Matrix out(rows.size(), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto src = row(rows[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

Gf dot(std::span<const Gf> a, std::span<const Gf> b) {
  if (a.size() != b.size()) throw Error(Errc::dimension_mismatch, "dot product of unequal lengths");
  Gf acc;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(Gf c, std::span<const Gf> x, std::span<Gf> y) {
  if (c.is_zero()) return;
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += c * x[i];
}

Matrix mat_mul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(Errc::dimension_mismatch, "cannot multiply " + std::to_string(a.rows()) + "x" +
                                              std::to_string(a.cols()) + " by " + std::to_string(b.rows()) +
                                              "x" + std::to_string(b.cols()));
  }
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) axpy(a(i, k), b.row(k), out.row(i));
  return out;
}

Matrix solve_linear(Matrix a, Matrix b) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw Error(Errc::dimension_mismatch, "solve_linear needs a square matrix");
  if (b.rows() != n) throw Error(Errc::dimension_mismatch, "right-hand side row count differs from matrix");

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a(pivot, col).is_zero()) ++pivot;
    if (pivot == n) throw SingularMatrixError(col);
    if (pivot != col) {
      std::swap_ranges(a.row(pivot).begin(), a.row(pivot).end(), a.row(col).begin());
      std::swap_ranges(b.row(pivot).begin(), b.row(pivot).end(), b.row(col).begin());
    }
    const Gf inv = gf_inv(a(col, col));
    for (auto& v : a.row(col)) v *= inv;
    for (auto& v : b.row(col)) v *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const Gf f = a(r, col);
      if (f.is_zero()) continue;
      axpy(f, a.row(col), a.row(r));
      axpy(f, b.row(col), b.row(r));
    }
  }
  return b;
}

std::size_t rank(Matrix a) {
  std::size_t r = 0;
  for (std::size_t col = 0; col < a.cols() && r < a.rows(); ++col) {
    std::size_t pivot = r;
    while (pivot < a.rows() && a(pivot, col).is_zero()) ++pivot;
    if (pivot == a.rows()) continue;
    if (pivot != r) std::swap_ranges(a.row(pivot).begin(), a.row(pivot).end(), a.row(r).begin());
    const Gf inv = gf_inv(a(r, col));
    for (auto& v : a.row(r)) v *= inv;
    for (std::size_t i = r + 1; i < a.rows(); ++i) axpy(a(i, col), a.row(r), a.row(i));
    ++r;
  }
  return r;
}

}  // namespace splitconv
