#pragma once

#include <cmath>
#include <initializer_list>

#include "equidyn/polynomial.hpp"
#include "equidyn/scalar.hpp"

namespace equidyn {

/// Point of P^k held as k+1 homogeneous coordinates.
///
/// Canonical float form: sup-norm 1 and the pivot (largest-modulus coordinate,
/// lowest index on ties within 1e-12) real positive, hence exactly 1.
/// Canonical exact form: first nonzero coordinate 1.
template <typename S>
struct ProjectivePoint {
  Eigen::Matrix<S, Eigen::Dynamic, 1> coords;
  bool canonical = false;

  int dim() const { return static_cast<int>(coords.size()) - 1; }

  static ProjectivePoint from(std::initializer_list<S> values) {
    ProjectivePoint p;
    p.coords.resize(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (const S& v : values) p.coords[i++] = v;
    return p.canonicalized();
  }

  static ProjectivePoint from_vector(Eigen::Matrix<S, Eigen::Dynamic, 1> v) {
    ProjectivePoint p;
    p.coords = std::move(v);
    return p.canonicalized();
  }

  ProjectivePoint canonicalized() const {
    ProjectivePoint p = *this;
    p.canonicalize();
    return p;
  }

  void canonicalize() {
    if constexpr (is_exact_scalar_v<S>) {
      Eigen::Index lead = -1;
      for (Eigen::Index i = 0; i < coords.size(); ++i)
        if (coords[i] != S(0)) {
          lead = i;
          break;
        }
      if (lead < 0) throw HolomorphyError("projective point with all coordinates zero");
      const S inv = S(1) / coords[lead];
      for (Eigen::Index i = 0; i < coords.size(); ++i) coords[i] *= inv;
    } else {
      double max_mod = 0.0;
      for (Eigen::Index i = 0; i < coords.size(); ++i)
        max_mod = std::max(max_mod, std::abs(coords[i]));
      if (!(max_mod > 0.0) || !std::isfinite(max_mod))
        throw HolomorphyError("projective point is zero or non-finite");
      Eigen::Index pivot = 0;
      for (Eigen::Index i = 0; i < coords.size(); ++i)
        if (std::abs(coords[i]) >= max_mod - kPivotTieTol) {
          pivot = i;
          break;
        }
      const Complex scale =
          std::conj(coords[pivot]) / (std::abs(coords[pivot]) * max_mod);
      for (Eigen::Index i = 0; i < coords.size(); ++i) coords[i] *= scale;
      coords[pivot] = Complex(std::abs(coords[pivot]), 0.0);
      for (Eigen::Index i = 0; i < coords.size(); ++i)
        if (!std::isfinite(coords[i].real()) || !std::isfinite(coords[i].imag()))
          throw HolomorphyError("non-finite coordinate after canonicalization");
    }
    canonical = true;
  }

  int pivot_index() const {
    if constexpr (is_exact_scalar_v<S>) {
      for (Eigen::Index i = 0; i < coords.size(); ++i)
        if (coords[i] != S(0)) return static_cast<int>(i);
      return -1;
    } else {
      double max_mod = 0.0;
      for (Eigen::Index i = 0; i < coords.size(); ++i)
        max_mod = std::max(max_mod, std::abs(coords[i]));
      for (Eigen::Index i = 0; i < coords.size(); ++i)
        if (std::abs(coords[i]) >= max_mod - kPivotTieTol) return static_cast<int>(i);
      return -1;
    }
  }
};

using QPoint = ProjectivePoint<Rational>;
using CPoint = ProjectivePoint<Complex>;

/// Fubini-Study chordal distance in [0, 1], zero iff projectively equal.
/// Uses the wedge form, which stays accurate near zero.
inline double chordal_distance(const CVector& p, const CVector& q) {
  if (p.size() != q.size())
    throw DimensionError("chordal_distance: dimension mismatch");
  double wedge2 = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    for (Eigen::Index j = i + 1; j < p.size(); ++j) {
      wedge2 += std::norm(p[i] * q[j] - p[j] * q[i]);
    }
  }
  const double np2 = p.squaredNorm();
  const double nq2 = q.squaredNorm();
  if (!(np2 > 0.0) || !(nq2 > 0.0))
    throw HolomorphyError("chordal_distance: zero vector");
  return std::min(1.0, std::sqrt(wedge2 / (np2 * nq2)));
}

inline double chordal_distance(const CPoint& p, const CPoint& q) {
  return chordal_distance(p.coords, q.coords);
}

inline bool projectively_equal(const CPoint& p, const CPoint& q,
                               double tol = kProjectiveTol) {
  return chordal_distance(p, q) < tol;
}

/// Exact projective equality: all 2x2 minors of the coordinate pair vanish.
inline bool projectively_equal(const QPoint& p, const QPoint& q) {
  if (p.coords.size() != q.coords.size()) return false;
  for (Eigen::Index i = 0; i < p.coords.size(); ++i)
    for (Eigen::Index j = i + 1; j < p.coords.size(); ++j)
      if (p.coords[i] * q.coords[j] != p.coords[j] * q.coords[i]) return false;
  return true;
}

inline CPoint to_float(const QPoint& p) {
  CPoint r;
  r.coords.resize(p.coords.size());
  for (Eigen::Index i = 0; i < p.coords.size(); ++i)
    r.coords[i] = to_complex(p.coords[i]);
  r.canonicalize();
  return r;
}

}  // namespace equidyn
