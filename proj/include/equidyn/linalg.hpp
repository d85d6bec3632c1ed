#pragma once

#include <cstdlib>
#include <numeric>
#include <optional>
#include <vector>

#include "equidyn/scalar.hpp"

namespace equidyn {

/// In-place reduced row echelon form over the rationals. Pivots take the first
/// nonzero row in scan order (lowest-index convention), so results are
/// deterministic. Returns the pivot column list.
inline std::vector<int> exact_rref(QMatrix& m) {
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  std::vector<int> pivot_cols;
  int row = 0;
  for (int col = 0; col < cols && row < rows; ++col) {
    int pivot = -1;
    for (int r = row; r < rows; ++r)
      if (m(r, col) != Rational(0)) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    m.row(row).swap(m.row(pivot));
    const Rational inv = Rational(1) / m(row, col);
    for (int c = col; c < cols; ++c) m(row, c) *= inv;
    for (int r = 0; r < rows; ++r) {
      if (r == row || m(r, col) == Rational(0)) continue;
      const Rational f = m(r, col);
      for (int c = col; c < cols; ++c) m(r, c) -= f * m(row, c);
    }
    pivot_cols.push_back(col);
    ++row;
  }
  return pivot_cols;
}

inline int exact_rank(QMatrix m) { return static_cast<int>(exact_rref(m).size()); }

inline QMatrix to_rational(const IMatrix& m) {
  QMatrix q(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      q(i, j) = Rational(static_cast<long>(m(i, j)));
  return q;
}

inline CMatrix to_float(const QMatrix& m) {
  CMatrix c(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) c(i, j) = to_complex(m(i, j));
  return c;
}

/// Divides by the gcd and makes the first nonzero entry positive.
inline void normalize_integer_vector(IVector& v) {
  std::int64_t g = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    g = std::gcd(g, static_cast<std::int64_t>(std::abs(v[i])));
  if (g > 1)
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] /= g;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    if (v[i] < 0) v = -v;
    break;
  }
}

/// Projective canonical form of an integer matrix: content 1, first nonzero
/// entry (row-major) positive.
inline IMatrix canonical_projective_matrix(IMatrix m) {
  std::int64_t g = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      g = std::gcd(g, static_cast<std::int64_t>(std::abs(m(i, j))));
  if (g > 1) m /= g;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) == 0) continue;
      if (m(i, j) < 0) m = -m;
      return m;
    }
  return m;
}

/// Integer basis of the kernel of a rational matrix, one column per free
/// variable in ascending index order, each column content- and sign-normalized.
inline IMatrix integer_kernel_basis(QMatrix m) {
  const int cols = static_cast<int>(m.cols());
  const std::vector<int> pivot_cols = exact_rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivot_cols) is_pivot[c] = true;

  std::vector<int> free_cols;
  for (int c = 0; c < cols; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);

  IMatrix basis(cols, static_cast<int>(free_cols.size()));
  basis.setZero();
  for (std::size_t fi = 0; fi < free_cols.size(); ++fi) {
    const int f = free_cols[fi];
    QVector v = QVector::Zero(cols);
    v[f] = Rational(1);
    for (std::size_t pi = 0; pi < pivot_cols.size(); ++pi)
      v[pivot_cols[pi]] = -m(static_cast<int>(pi), f);
    Integer den(1);
    for (int c = 0; c < cols; ++c) den = lcm(den, v[c].get_den());
    IVector iv(cols);
    for (int c = 0; c < cols; ++c) {
      Rational scaled = v[c] * Rational(den);
      iv[c] = static_cast<std::int64_t>(scaled.get_num().get_si());
    }
    normalize_integer_vector(iv);
    basis.col(static_cast<int>(fi)) = iv;
  }
  return basis;
}

/// Exact inverse of a square rational matrix, or nullopt when singular.
inline std::optional<QMatrix> exact_inverse(const QMatrix& m) {
  const int n = static_cast<int>(m.rows());
  QMatrix aug(n, 2 * n);
  aug.setConstant(Rational(0));
  aug.block(0, 0, n, n) = m;
  for (int i = 0; i < n; ++i) aug(i, n + i) = Rational(1);
  const std::vector<int> pivots = exact_rref(aug);
  if (static_cast<int>(pivots.size()) != n || pivots.back() != n - 1)
    return std::nullopt;
  return QMatrix(aug.block(0, n, n, n));
}

/// Lexicographically first maximal independent row subset (greedy).
inline std::vector<int> independent_row_set(const QMatrix& m, int want) {
  std::vector<int> chosen;
  QMatrix acc(0, m.cols());
  for (int r = 0; r < m.rows() && static_cast<int>(chosen.size()) < want; ++r) {
    QMatrix trial(acc.rows() + 1, m.cols());
    if (acc.rows() > 0) trial.topRows(acc.rows()) = acc;
    trial.row(trial.rows() - 1) = m.row(r);
    if (exact_rank(trial) == static_cast<int>(trial.rows())) {
      acc = trial;
      chosen.push_back(r);
    }
  }
  return chosen;
}

}  // namespace equidyn
