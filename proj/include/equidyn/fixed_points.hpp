#pragma once

#include <Eigen/Eigenvalues>
#include <vector>

#include "equidyn/map.hpp"
#include "equidyn/projective.hpp"

namespace equidyn {

struct FixedPointP1 {
  CPoint point;
  Complex multiplier;
};

namespace detail {

// Dense univariate coefficients of p(z, 1), ascending in z.
inline std::vector<Complex> chart_coefficients(const QPolynomial& p) {
  std::vector<Complex> coeffs(p.degree() + 1, Complex(0.0, 0.0));
  for (const auto& [e, c] : p.terms()) coeffs[e[0]] += to_complex(c);
  return coeffs;
}

inline Complex eval_poly(const std::vector<Complex>& coeffs, Complex z) {
  Complex acc(0.0, 0.0);
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
  return acc;
}

inline std::vector<Complex> derive_poly(const std::vector<Complex>& coeffs) {
  if (coeffs.size() <= 1) return {Complex(0.0, 0.0)};
  std::vector<Complex> d(coeffs.size() - 1);
  for (std::size_t i = 1; i < coeffs.size(); ++i)
    d[i - 1] = coeffs[i] * static_cast<double>(i);
  return d;
}

}  // namespace detail

/// All fixed points of a degree-d map on P^1 with their multipliers: the d+1
/// roots (with multiplicity) of x2 g1 - x1 g2 = 0, found via the companion
/// matrix of the affine chart plus the point at infinity.
inline std::vector<FixedPointP1> find_fixed_points_dim1(const QMap& map) {
  if (map.k != 1)
    throw DimensionError("find_fixed_points_dim1: map must act on P^1");
  const int n = 2;
  const int d = map.degree;

  // Homogeneous fixed-point equation, exact.
  QPolynomial fix_eq = QPolynomial::variable(n, 1) * map.components[0] -
                       QPolynomial::variable(n, 0) * map.components[1];
  if (fix_eq.is_zero())
    throw NumericError("find_fixed_points_dim1: identity map, all points fixed");

  // Chart z = x1/x2. Exact leading coefficients decide what lives at infinity.
  std::vector<Rational> exact(d + 2, Rational(0));
  for (const auto& [e, c] : fix_eq.terms()) exact[e[0]] += c;
  int eff_degree = d + 1;
  while (eff_degree > 0 && exact[eff_degree] == Rational(0)) --eff_degree;

  std::vector<Complex> chart(eff_degree + 1);
  for (int i = 0; i <= eff_degree; ++i) chart[i] = to_complex(exact[i]);

  // Companion matrix of the monic normalization.
  std::vector<Complex> roots;
  if (eff_degree >= 1) {
    CMatrix companion = CMatrix::Zero(eff_degree, eff_degree);
    for (int i = 1; i < eff_degree; ++i) companion(i, i - 1) = Complex(1.0, 0.0);
    for (int i = 0; i < eff_degree; ++i)
      companion(i, eff_degree - 1) = -chart[i] / chart[eff_degree];
    Eigen::ComplexEigenSolver<CMatrix> solver(companion, false);
    if (solver.info() != Eigen::Success)
      throw NumericError("find_fixed_points_dim1: eigensolver did not converge");
    for (int i = 0; i < eff_degree; ++i) roots.push_back(solver.eigenvalues()[i]);
  }

  // Newton polish against the chart polynomial.
  const std::vector<Complex> chart_d = detail::derive_poly(chart);
  for (Complex& z : roots) {
    for (int it = 0; it < 8; ++it) {
      const Complex f = detail::eval_poly(chart, z);
      const Complex df = detail::eval_poly(chart_d, z);
      if (std::abs(df) < 1e-14) break;
      const Complex step = f / df;
      z -= step;
      if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) break;
    }
  }

  // Chart numerators/denominators for multipliers: f(z) = g1(z,1)/g2(z,1).
  const std::vector<Complex> num = detail::chart_coefficients(map.components[0]);
  const std::vector<Complex> den = detail::chart_coefficients(map.components[1]);
  const std::vector<Complex> num_d = detail::derive_poly(num);
  const std::vector<Complex> den_d = detail::derive_poly(den);

  std::vector<FixedPointP1> out;
  out.reserve(d + 1);
  for (const Complex z : roots) {
    const Complex dv = detail::eval_poly(den, z);
    if (std::abs(dv) < 1e-300)
      throw NumericError("find_fixed_points_dim1: chart denominator vanished");
    const Complex mult = (detail::eval_poly(num_d, z) * dv -
                          detail::eval_poly(num, z) * detail::eval_poly(den_d, z)) /
                         (dv * dv);
    CPoint p;
    p.coords.resize(2);
    p.coords[0] = z;
    p.coords[1] = Complex(1.0, 0.0);
    p.canonicalize();
    out.push_back({std::move(p), mult});
  }

  // Point at infinity, with multiplicity d+1-eff_degree; chart w = x2/x1 gives
  // the multiplier as (g2(1,w)/g1(1,w))'(0).
  if (eff_degree < d + 1) {
    QPolynomial g1_inf(2, d), g2_inf(2, d);
    for (const auto& [e, c] : map.components[0].terms())
      g1_inf.add_term({e[1], e[0]}, c);  // swap roles: w = x2, x1 = 1
    for (const auto& [e, c] : map.components[1].terms())
      g2_inf.add_term({e[1], e[0]}, c);
    const std::vector<Complex> num2 = detail::chart_coefficients(g2_inf);
    const std::vector<Complex> den2 = detail::chart_coefficients(g1_inf);
    const Complex dv = detail::eval_poly(den2, Complex(0.0, 0.0));
    if (std::abs(dv) < 1e-300)
      throw NumericError("find_fixed_points_dim1: infinity chart degenerate");
    const Complex mult =
        (detail::eval_poly(detail::derive_poly(num2), Complex(0.0, 0.0)) * dv -
         detail::eval_poly(num2, Complex(0.0, 0.0)) *
             detail::eval_poly(detail::derive_poly(den2), Complex(0.0, 0.0))) /
        (dv * dv);
    CPoint inf;
    inf.coords.resize(2);
    inf.coords[0] = Complex(1.0, 0.0);
    inf.coords[1] = Complex(0.0, 0.0);
    inf.canonicalize();
    for (int copy = 0; copy < d + 1 - eff_degree; ++copy)
      out.push_back({inf, mult});
  }

  // Residual gate: every returned point must actually be fixed.
  const CompiledMap compiled{map};
  for (const FixedPointP1& fp : out) {
    CVector image = compiled.apply(fp.point.coords);
    CPoint img;
    img.coords = image;
    img.canonicalize();
    const double residual = chordal_distance(img, fp.point);
    if (residual > 1e-6)
      throw NumericError("find_fixed_points_dim1: residual " +
                         std::to_string(residual) + " at a reported fixed point");
  }
  return out;
}

}  // namespace equidyn
