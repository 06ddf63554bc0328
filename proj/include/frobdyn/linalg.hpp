#pragma once

// Exact elimination over a division ring. Element types must provide
// + - * ==, and the free functions inv(x), one_like(x), is_zero(x).
// Column-vector convention: A acts on the left, scalars act on the right of
// vectors, so all row operations multiply rows on the left.

#include <algorithm>
#include <optional>
#include <vector>

#include "frobdyn/matrix.hpp"
#include "frobdyn/numeric.hpp"

namespace frobdyn {

template <typename T>
struct Echelon {
  Matrix<T> reduced;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

template <typename T>
Echelon<T> rref(Matrix<T> m, std::size_t ncols_to_reduce = static_cast<std::size_t>(-1)) {
  const std::size_t limit = std::min(ncols_to_reduce, m.cols());
  std::vector<std::size_t> piv;
  std::size_t row = 0;
  for (std::size_t c = 0; c < limit && row < m.rows(); ++c) {
    std::size_t r = row;
    while (r < m.rows() && is_zero(m(r, c))) ++r;
    if (r == m.rows()) continue;
    m.swap_rows(r, row);
    const T s = inv(m(row, c));
    for (std::size_t k = 0; k < m.cols(); ++k) m(row, k) = s * m(row, k);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || is_zero(m(i, c))) continue;
      const T f = m(i, c);
      for (std::size_t k = 0; k < m.cols(); ++k) m(i, k) = m(i, k) - f * m(row, k);
    }
    piv.push_back(c);
    ++row;
  }
  return {std::move(m), std::move(piv)};
}

template <typename T>
std::size_t rank(const Matrix<T>& m) {
  return rref(m).pivots.size();
}

// Basis of {x : A x = 0}, as the columns of the returned matrix.
template <typename T>
Matrix<T> right_kernel(const Matrix<T>& a) {
  auto e = rref(a);
  const std::size_t n = a.cols();
  std::vector<bool> is_piv(n, false);
  for (auto c : e.pivots) is_piv[c] = true;
  std::vector<std::size_t> free;
  for (std::size_t c = 0; c < n; ++c)
    if (!is_piv[c]) free.push_back(c);
  const T zero = a.zero();
  Matrix<T> k(n, free.size(), zero);
  for (std::size_t j = 0; j < free.size(); ++j) {
    k(free[j], j) = one_like(zero);
    for (std::size_t r = 0; r < e.pivots.size(); ++r)
      k(e.pivots[r], j) = zero - e.reduced(r, free[j]);
  }
  return k;
}

template <typename T>
std::optional<std::vector<T>> solve_right(const Matrix<T>& a, const std::vector<T>& b) {
  if (b.size() != a.rows()) throw std::invalid_argument("solve_right: length mismatch");
  Matrix<T> aug(a.rows(), a.cols() + 1, a.zero());
  aug.set_block(0, 0, a);
  for (std::size_t i = 0; i < b.size(); ++i) aug(i, a.cols()) = b[i];
  auto e = rref(aug);
  std::vector<T> x(a.cols(), a.zero());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] == a.cols()) return std::nullopt;
    x[e.pivots[r]] = e.reduced(r, a.cols());
  }
  return x;
}

template <typename T>
std::optional<Matrix<T>> inverse(const Matrix<T>& a) {
  if (!a.square()) throw std::invalid_argument("inverse: not square");
  const std::size_t n = a.rows();
  const T zero = a.zero();
  Matrix<T> aug(n, 2 * n, zero);
  aug.set_block(0, 0, a);
  aug.set_block(0, n, Matrix<T>::identity(n, zero, one_like(zero)));
  if (n == 0) return Matrix<T>(0, 0, zero);
  auto e = rref(aug, n);
  if (e.pivots.size() != n) return std::nullopt;
  return e.reduced.block(0, n, n, n);
}

// Basis of {y : y A = 0}, as the rows of the returned matrix. Uses column
// operations, i.e. right multiplications, so it is valid over skew fields.
template <typename T>
Matrix<T> left_kernel(Matrix<T> m) {
  const T zero = m.zero();
  std::vector<std::size_t> pivot_row;  // per reduced column
  std::size_t col = 0;
  for (std::size_t r = 0; r < m.rows() && col < m.cols(); ++r) {
    std::size_t c = col;
    while (c < m.cols() && is_zero(m(r, c))) ++c;
    if (c == m.cols()) continue;
    if (c != col)
      for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, c), m(i, col));
    const T s = inv(m(r, col));
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, col) = m(i, col) * s;
    for (std::size_t k = 0; k < m.cols(); ++k) {
      if (k == col || is_zero(m(r, k))) continue;
      const T f = m(r, k);
      for (std::size_t i = 0; i < m.rows(); ++i) m(i, k) = m(i, k) - m(i, col) * f;
    }
    pivot_row.push_back(r);
    ++col;
  }
  std::vector<bool> is_piv(m.rows(), false);
  for (auto r : pivot_row) is_piv[r] = true;
  std::vector<std::size_t> free;
  for (std::size_t r = 0; r < m.rows(); ++r)
    if (!is_piv[r]) free.push_back(r);
  Matrix<T> k(free.size(), m.rows(), zero);
  for (std::size_t j = 0; j < free.size(); ++j) {
    k(j, free[j]) = one_like(zero);
    for (std::size_t c = 0; c < pivot_row.size(); ++c)
      k(j, pivot_row[c]) = zero - m(free[j], c);
  }
  return k;
}

// Indices of columns forming a basis of the column space (left-to-right greedy).
template <typename T>
std::vector<std::size_t> pivot_columns(const Matrix<T>& a) {
  return rref(a).pivots;
}

template <typename T>
Matrix<T> hstack(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("hstack: row mismatch");
  Matrix<T> out(a.rows(), a.cols() + b.cols(), a.zero());
  out.set_block(0, 0, a);
  out.set_block(0, a.cols(), b);
  return out;
}

template <typename T>
Matrix<T> vstack(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("vstack: column mismatch");
  Matrix<T> out(a.rows() + b.rows(), a.cols(), a.zero());
  out.set_block(0, 0, a);
  out.set_block(a.rows(), 0, b);
  return out;
}

}  // namespace frobdyn
