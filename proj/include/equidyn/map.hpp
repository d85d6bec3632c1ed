#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <vector>

#include "equidyn/polynomial.hpp"
#include "equidyn/projective.hpp"
#include "equidyn/scalar.hpp"

namespace equidyn {

/// Holomorphic self-map of P^k given by k+1 homogeneous components of one degree.
template <typename S>
struct PolynomialMap {
  int k = 0;
  int degree = 0;
  std::vector<HomogeneousPolynomial<S>> components;

  int n_vars() const { return k + 1; }
};

using QMap = PolynomialMap<Rational>;
using CMap = PolynomialMap<Complex>;

/// gcd of all integer coefficients across all components (0 for the zero map).
inline Integer map_content(const QMap& map) {
  Integer g(0);
  for (const auto& comp : map.components)
    for (const auto& [e, c] : comp.terms()) {
      if (c.get_den() != 1)
        throw std::logic_error("map_content: coefficients must be integers");
      g = gcd(g, c.get_num());
    }
  return abs(g);
}

/// Rescales to integer coefficients with content 1; the projective map is unchanged.
inline void normalize_content(QMap& map) {
  Integer den(1);
  for (const auto& comp : map.components)
    for (const auto& [e, c] : comp.terms()) den = lcm(den, c.get_den());
  if (den != 1) {
    const Rational scale{den};
    for (auto& comp : map.components) comp = comp * scale;
  }
  const Integer g = map_content(map);
  if (g > 1) {
    const Rational scale{Rational(1) / Rational(g)};
    for (auto& comp : map.components) comp = comp * scale;
  }
}

/// The degree-(k+3) equivariant map: component l is
///   x_l^3 * sum_{s=0..k} (-1)^s (s+1)/(s+3) x_l^s A_{k-s},
/// with A_j the degree-j elementary symmetric function of all k+1 variables.
/// Stored with the rational coefficients cleared to content-normalized integers.
inline QMap build_equivariant_map(int k, int max_k = kDefaultMaxK) {
  if (k < 1 || k > max_k)
    throw DimensionError("build_equivariant_map: k must be in [1, " +
                         std::to_string(max_k) + "]");
  const int n = k + 1;
  const int degree = k + 3;
  const auto sym = elementary_symmetric_polynomials<Rational>(n);

  // lcm(3..k+3) clears every denominator (s+3) in one pass.
  long clear = 1;
  for (int d = 3; d <= k + 3; ++d) clear = std::lcm(clear, static_cast<long>(d));

  QMap map;
  map.k = k;
  map.degree = degree;
  map.components.reserve(n);
  for (int l = 0; l < n; ++l) {
    QPolynomial comp = QPolynomial::zero(n, degree);
    for (int s = 0; s <= k; ++s) {
      const long sign = (s % 2 == 0) ? 1 : -1;
      const Rational coeff = make_rational(sign * clear * (s + 1), s + 3);
      ExponentVector e(n, 0);
      e[l] = 3 + s;
      comp += QPolynomial::monomial(n, e, coeff) * sym[k - s];
    }
    map.components.push_back(std::move(comp));
  }
  normalize_content(map);
  return map;
}

/// Raw image of a coordinate vector; no canonicalization, so exact-mode results
/// scale as lambda^degree under input scaling.
template <typename S>
Eigen::Matrix<S, Eigen::Dynamic, 1> evaluate_map_raw(
    const PolynomialMap<S>& map, const Eigen::Matrix<S, Eigen::Dynamic, 1>& x) {
  Eigen::Matrix<S, Eigen::Dynamic, 1> y(map.n_vars());
  for (int i = 0; i < map.n_vars(); ++i) y[i] = map.components[i].evaluate(x);
  return y;
}

/// Canonicalized image of a projective point. Float mode renormalizes the input
/// first so intermediate powers cannot overflow. An identically zero image is an
/// indeterminacy and must never happen for a holomorphic map.
template <typename S>
ProjectivePoint<S> evaluate_map(const PolynomialMap<S>& map,
                                const ProjectivePoint<S>& p) {
  if (p.coords.size() != map.n_vars())
    throw DimensionError("evaluate_map: point dimension mismatch");
  ProjectivePoint<S> in = p.canonical ? p : p.canonicalized();
  ProjectivePoint<S> out;
  out.coords = evaluate_map_raw(map, in.coords);
  bool all_zero = true;
  for (Eigen::Index i = 0; i < out.coords.size(); ++i)
    if (out.coords[i] != S(0)) all_zero = false;
  if (all_zero)
    throw HolomorphyError("evaluate_map: image is identically zero (indeterminacy)");
  out.canonicalize();
  return out;
}

/// map composed with the linear substitution x := m x (exact mode).
/// Rejects substitutions that collapse the map to zero.
inline QMap poly_compose_linear(const QMap& map, const IMatrix& m) {
  if (m.rows() != map.n_vars() || m.cols() != map.n_vars())
    throw DimensionError("poly_compose_linear: matrix must be (k+1)x(k+1)");
  QMap out;
  out.k = map.k;
  out.degree = map.degree;
  out.components.reserve(map.components.size());
  bool all_zero = true;
  for (const auto& comp : map.components) {
    out.components.push_back(comp.compose_linear(m));
    if (!out.components.back().is_zero()) all_zero = false;
  }
  if (all_zero)
    throw std::domain_error("poly_compose_linear: degenerate substitution, map is zero");
  return out;
}

/// The other side of equivariance: components replaced by the linear
/// combination m . (components).
inline QMap apply_matrix(const IMatrix& m, const QMap& map) {
  if (m.rows() != map.n_vars() || m.cols() != map.n_vars())
    throw DimensionError("apply_matrix: matrix must be (k+1)x(k+1)");
  QMap out;
  out.k = map.k;
  out.degree = map.degree;
  for (int i = 0; i < map.n_vars(); ++i) {
    QPolynomial acc = QPolynomial::zero(map.n_vars(), map.degree);
    for (int j = 0; j < map.n_vars(); ++j)
      if (m(i, j) != 0)
        acc += map.components[j] * Rational(static_cast<long>(m(i, j)));
    out.components.push_back(std::move(acc));
  }
  return out;
}

/// Matrix of formal partials d(component_i)/dx_j.
template <typename S>
std::vector<std::vector<HomogeneousPolynomial<S>>> jacobian_matrix(
    const PolynomialMap<S>& map) {
  const int n = map.n_vars();
  std::vector<std::vector<HomogeneousPolynomial<S>>> jac(n);
  for (int i = 0; i < n; ++i) {
    jac[i].reserve(n);
    for (int j = 0; j < n; ++j) jac[i].push_back(map.components[i].derivative(j));
  }
  return jac;
}

/// Determinant of a small matrix of polynomials by cofactor expansion.
template <typename S>
HomogeneousPolynomial<S> poly_det(
    const std::vector<std::vector<HomogeneousPolynomial<S>>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  const int n_vars = m[0][0].n_vars();
  int deg = 0;
  for (std::size_t i = 0; i < n; ++i) deg += m[i][i].degree();
  HomogeneousPolynomial<S> acc = HomogeneousPolynomial<S>::zero(n_vars, deg);
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    std::vector<std::vector<HomogeneousPolynomial<S>>> minor;
    minor.reserve(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<HomogeneousPolynomial<S>> row;
      row.reserve(n - 1);
      for (std::size_t jj = 0; jj < n; ++jj)
        if (jj != j) row.push_back(m[i][jj]);
      minor.push_back(std::move(row));
    }
    HomogeneousPolynomial<S> term = m[0][j] * poly_det(minor);
    if (j % 2 == 1) term = -term;
    acc += term;
  }
  return acc;
}

/// Exact Jacobian determinant, homogeneous of degree (k+1)(k+2). Cofactor
/// expansion is exponential in k, so this is capped at k <= 3; larger k uses
/// the numeric exponent-fit path in the dynamics layer.
inline QPolynomial jacobian_det_poly(const QMap& map) {
  if (map.k > 3)
    throw DimensionError(
        "jacobian_det_poly: unsupported for k > 3, use the numeric fallback");
  return poly_det(jacobian_matrix(map));
}

inline CPolynomial to_float(const QPolynomial& p) {
  CPolynomial r(p.n_vars(), p.degree());
  for (const auto& [e, c] : p.terms()) r.add_term(e, to_complex(c));
  return r;
}

inline CMap to_float(const QMap& map) {
  CMap out;
  out.k = map.k;
  out.degree = map.degree;
  out.components.reserve(map.components.size());
  for (const auto& c : map.components) out.components.push_back(to_float(c));
  return out;
}

// ---------------------------------------------------------------------------
// Flat float evaluators for the orbit-heavy paths.

inline constexpr int kMaxCompiledVars = 8;
inline constexpr int kMaxCompiledDegree = 15;

// Stack scratch for per-variable powers; evaluators stay stateless so the
// survey and probe loops can share one instance across threads.
using PowerTable =
    std::array<std::array<Complex, kMaxCompiledDegree + 1>, kMaxCompiledVars>;

inline void fill_power_table(PowerTable& powers, const CVector& x, int degree) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    powers[i][0] = Complex(1.0, 0.0);
    for (int d = 1; d <= degree; ++d) powers[i][d] = powers[i][d - 1] * x[i];
  }
}

struct CompiledPoly {
  struct Term {
    Complex coeff;
    std::array<std::uint8_t, kMaxCompiledVars> exps{};
  };
  int n_vars = 0;
  int degree = 0;
  std::vector<Term> terms;

  template <typename S>
  static CompiledPoly from(const HomogeneousPolynomial<S>& p) {
    if (p.n_vars() > kMaxCompiledVars)
      throw DimensionError("CompiledPoly: too many variables");
    if (p.degree() > kMaxCompiledDegree)
      throw DimensionError("CompiledPoly: degree exceeds the power-table size");
    CompiledPoly out;
    out.n_vars = p.n_vars();
    out.degree = p.degree();
    out.terms.reserve(p.term_count());
    for (const auto& [e, c] : p.terms()) {
      Term t;
      t.coeff = to_complex(c);
      for (int i = 0; i < p.n_vars(); ++i)
        t.exps[i] = static_cast<std::uint8_t>(e[i]);
      out.terms.push_back(t);
    }
    return out;
  }

  // powers[i][d] must hold point[i]^d for d <= degree.
  Complex evaluate_with_powers(const PowerTable& powers) const {
    Complex acc(0.0, 0.0);
    for (const Term& t : terms) {
      Complex m = t.coeff;
      for (int i = 0; i < n_vars; ++i)
        if (t.exps[i] > 0) m *= powers[i][t.exps[i]];
      acc += m;
    }
    return acc;
  }
};

/// Fixed-layout evaluator for a float map; the workhorse of orbit iteration.
/// Stateless after construction, safe to share between threads.
class CompiledMap {
 public:
  CompiledMap() = default;

  template <typename S>
  explicit CompiledMap(const PolynomialMap<S>& map)
      : k_(map.k), degree_(map.degree) {
    comps_.reserve(map.components.size());
    for (const auto& c : map.components) comps_.push_back(CompiledPoly::from(c));
  }

  int k() const { return k_; }
  int degree() const { return degree_; }

  // Image of x; x is assumed canonical (sup-norm 1) so powers stay bounded.
  CVector apply(const CVector& x) const {
    PowerTable powers;
    fill_power_table(powers, x, degree_);
    CVector y(k_ + 1);
    for (int i = 0; i <= k_; ++i) y[i] = comps_[i].evaluate_with_powers(powers);
    return y;
  }

 private:
  int k_ = 0;
  int degree_ = 0;
  std::vector<CompiledPoly> comps_;
};

/// Compiled partials d(g_i)/dx_j for chart-derivative work along orbits.
/// Stateless after construction, safe to share between threads.
class CompiledJacobian {
 public:
  CompiledJacobian() = default;

  explicit CompiledJacobian(const QMap& map) : n_(map.n_vars()) {
    auto jac = jacobian_matrix(map);
    entries_.reserve(n_ * n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        entries_.push_back(CompiledPoly::from(jac[i][j]));
    max_degree_ = map.degree > 0 ? map.degree - 1 : 0;
  }

  int n() const { return n_; }

  /// All partials at x as an n x n complex matrix, entry (i,j) = dg_i/dx_j.
  CMatrix at(const CVector& x) const {
    PowerTable powers;
    fill_power_table(powers, x, max_degree_);
    CMatrix out(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        out(i, j) = entries_[i * n_ + j].evaluate_with_powers(powers);
    return out;
  }

 private:
  int n_ = 0;
  int max_degree_ = 0;
  std::vector<CompiledPoly> entries_;
};

}  // namespace equidyn
