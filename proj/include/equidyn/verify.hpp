#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "equidyn/arrangement.hpp"
#include "equidyn/linalg.hpp"
#include "equidyn/map.hpp"
#include "equidyn/rng.hpp"
#include "equidyn/symmetry.hpp"

namespace equidyn {

// ---------------------------------------------------------------------------
// Hyperplane invariance

struct InvarianceCertificate {
  bool ok = false;
  int quotient_degree = -1;
  std::string witness;
};

/// g preserves {l = 0} iff the pullback l(g_1..g_{k+1}) is divisible by l.
inline InvarianceCertificate verify_invariant_hyperplane(const QMap& map,
                                                         const Hyperplane& h) {
  QPolynomial pullback = QPolynomial::zero(map.n_vars(), map.degree);
  for (int i = 0; i < map.n_vars(); ++i)
    if (h.covector[i] != 0)
      pullback += map.components[i] * Rational(static_cast<long>(h.covector[i]));
  const LinearDivision<Rational> div = divide_by_linear(pullback, h.covector);
  if (!div.exact())
    return {false, -1, "remainder " + div.remainder.to_string()};
  return {true, div.quotient.degree(), ""};
}

// ---------------------------------------------------------------------------
// Critical factorization

struct CriticalFactorization {
  bool ok = false;
  Rational constant;     // det = constant * prod l_h^mult_h
  std::vector<int> multiplicities;
  std::string witness;
};

/// Maximal trial division of det by each linear form, round robin until
/// nothing divides; succeeds iff the final quotient is a nonzero constant.
inline CriticalFactorization factor_into_linear_forms(
    const QPolynomial& det, const std::vector<IVector>& forms) {
  CriticalFactorization out;
  out.multiplicities.assign(forms.size(), 0);
  if (det.is_zero()) {
    out.witness = "determinant is identically zero";
    return out;
  }
  QPolynomial q = det;
  bool progress = true;
  while (progress && q.degree() > 0) {
    progress = false;
    for (std::size_t i = 0; i < forms.size(); ++i) {
      while (true) {
        LinearDivision<Rational> step = divide_by_linear(q, forms[i]);
        if (!step.exact()) break;
        q = std::move(step.quotient);
        out.multiplicities[i] += 1;
        progress = true;
        if (q.degree() == 0) break;
      }
      if (q.degree() == 0) break;
    }
  }
  if (q.degree() != 0 || q.is_zero()) {
    out.witness = "non-constant quotient " + q.to_string();
    return out;
  }
  out.ok = true;
  out.constant = q.leading_term().second;
  return out;
}

/// The doubly-critical certificate: det(Jacobian) equals a nonzero constant
/// times the product of all squared arrangement forms. Exact; k <= 3.
inline CriticalFactorization verify_critical_factorization(
    const QMap& map, const std::vector<Hyperplane>& arrangement) {
  const QPolynomial det = jacobian_det_poly(map);
  const int expected_degree = (map.k + 1) * (map.k + 2);
  CriticalFactorization out;
  if (det.degree() != expected_degree) {
    out.witness = "determinant degree " + std::to_string(det.degree()) +
                  " != " + std::to_string(expected_degree);
    return out;
  }
  std::vector<IVector> forms;
  forms.reserve(arrangement.size());
  for (const Hyperplane& h : arrangement) forms.push_back(h.covector);
  out = factor_into_linear_forms(det, forms);
  if (!out.ok) return out;
  for (std::size_t i = 0; i < out.multiplicities.size(); ++i) {
    if (out.multiplicities[i] != 2) {
      out.ok = false;
      out.witness = "multiplicity " + std::to_string(out.multiplicities[i]) +
                    " on " + arrangement[i].label();
      return out;
    }
  }
  return out;
}

/// Numeric fallback for k > 3: on each hyperplane, |det J| must scale like
/// eps^2 when stepping off by eps. Returns the per-hyperplane exponent fits
/// (median over sample points).
inline std::vector<double> numeric_critical_exponents(
    const QMap& map, const std::vector<Hyperplane>& arrangement,
    std::uint64_t seed, int points_per_hyperplane = 20) {
  const CompiledJacobian jac(map);
  const int n = map.n_vars();
  std::vector<double> fits;
  fits.reserve(arrangement.size());
  const double eps1 = 1e-3;
  const double eps2 = 1e-4;
  for (std::size_t hi = 0; hi < arrangement.size(); ++hi) {
    const Hyperplane& h = arrangement[hi];
    CVector normal(n);
    for (int i = 0; i < n; ++i) normal[i] = Complex(h.covector[i], 0.0);
    normal /= normal.norm();
    std::vector<double> exponents;
    SampleRng rng(seed, hi);
    for (int s = 0; s < points_per_hyperplane; ++s) {
      CVector x = rng.gaussian_vector(n);
      // Project onto the hyperplane, bilinear pairing against the real covector.
      Complex pairing(0.0, 0.0);
      double c2 = 0.0;
      for (int i = 0; i < n; ++i) {
        pairing += static_cast<double>(h.covector[i]) * x[i];
        c2 += static_cast<double>(h.covector[i] * h.covector[i]);
      }
      for (int i = 0; i < n; ++i)
        x[i] -= pairing / c2 * static_cast<double>(h.covector[i]);
      x /= x.norm();
      const double d1 = std::abs(jac.at(x + eps1 * normal).determinant());
      const double d2 = std::abs(jac.at(x + eps2 * normal).determinant());
      if (d1 <= 0.0 || d2 <= 0.0) continue;
      exponents.push_back(std::log(d1 / d2) / std::log(eps1 / eps2));
    }
    if (exponents.empty())
      throw NumericError("numeric_critical_exponents: degenerate samples");
    std::nth_element(exponents.begin(),
                     exponents.begin() + exponents.size() / 2, exponents.end());
    fits.push_back(exponents[exponents.size() / 2]);
  }
  return fits;
}

// ---------------------------------------------------------------------------
// Superattraction

struct SuperattractionCertificate {
  bool fixed = false;
  bool derivative_zero = false;
  std::string witness;
  bool ok() const { return fixed && derivative_zero; }
};

/// Exact chart derivative of the map at a fixed point p (pivot coordinate
/// removed): rows l != pivot, columns m != pivot of
///   [dg_l/dx_m * g_p - g_l * dg_p/dx_m] / g_p^2 evaluated at p.
inline QMatrix chart_derivative_exact(const QMap& map, const QPoint& p) {
  const int n = map.n_vars();
  const int pivot = p.pivot_index();
  const QVector value = evaluate_map_raw(map, p.coords);
  if (value[pivot] == Rational(0))
    throw HolomorphyError("chart_derivative_exact: pivot component vanishes");
  const auto jac = jacobian_matrix(map);
  QMatrix partials(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) partials(i, j) = jac[i][j].evaluate(p.coords);
  QMatrix d(n - 1, n - 1);
  const Rational gp2 = value[pivot] * value[pivot];
  int row = 0;
  for (int l = 0; l < n; ++l) {
    if (l == pivot) continue;
    int col = 0;
    for (int m = 0; m < n; ++m) {
      if (m == pivot) continue;
      d(row, col) =
          (partials(l, m) * value[pivot] - value[l] * partials(pivot, m)) / gp2;
      ++col;
    }
    ++row;
  }
  return d;
}

inline SuperattractionCertificate verify_superattracting(const QMap& map,
                                                         const QPoint& p) {
  SuperattractionCertificate cert;
  const QPoint image = evaluate_map(map, p);
  if (!projectively_equal(image, p)) {
    cert.witness = "not a fixed point";
    return cert;
  }
  cert.fixed = true;
  const QMatrix d = chart_derivative_exact(map, p);
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    for (Eigen::Index j = 0; j < d.cols(); ++j)
      if (d(i, j) != Rational(0)) {
        cert.witness = "chart derivative entry (" + std::to_string(i) + "," +
                       std::to_string(j) + ") = " + d(i, j).get_str();
        return cert;
      }
  cert.derivative_zero = true;
  return cert;
}

// ---------------------------------------------------------------------------
// Restriction to invariant flats

/// A hyperplane trace on a flat: the induced linear form in flat coordinates
/// together with the ambient hyperplanes inducing it.
struct InducedForm {
  IVector covector;  // length m+1, content- and sign-normalized
  std::vector<std::size_t> ambient;
};

inline std::vector<InducedForm> induced_arrangement(
    const Flat& flat, const std::vector<Hyperplane>& arrangement) {
  std::vector<InducedForm> forms;
  for (std::size_t idx = 0; idx < arrangement.size(); ++idx) {
    const Hyperplane& h = arrangement[idx];
    if (hyperplane_contains_flat(h, flat.embedding)) continue;
    IVector induced(flat.embedding.cols());
    for (Eigen::Index c = 0; c < flat.embedding.cols(); ++c) {
      std::int64_t dot = 0;
      for (Eigen::Index r = 0; r < flat.embedding.rows(); ++r)
        dot += h.covector[r] * flat.embedding(r, c);
      induced[c] = dot;
    }
    normalize_integer_vector(induced);
    bool merged = false;
    for (InducedForm& f : forms) {
      bool same = true;
      for (Eigen::Index c = 0; c < induced.size(); ++c)
        if (f.covector[c] != induced[c]) same = false;
      if (same) {
        f.ambient.push_back(idx);
        merged = true;
        break;
      }
    }
    if (!merged) forms.push_back({induced, {idx}});
  }
  return forms;
}

struct RestrictionResult {
  QMap restricted;          // self-map of P^m in flat coordinates
  Rational identity_scale;  // embedding . (restricted * stripped) = scale * (map . embedding)
  int stripped_degree = 0;
  QPolynomial stripped;     // product of stripped induced forms (constant 1 if none)
};

/// The restriction of map to an invariant flat, computed exactly: substitute
/// the embedding, solve for flat coordinates, strip induced-form common
/// factors, normalize to integer content, and certify the intertwining
/// identity. Throws FlatError when the flat is not invariant.
inline RestrictionResult restrict_map(const QMap& map, const Flat& flat,
                                      const std::vector<Hyperplane>& arrangement) {
  const int n = map.n_vars();
  const int mdim = flat.m;
  if (flat.embedding.rows() != n)
    throw DimensionError("restrict_map: embedding does not match the map");
  if (mdim == map.k) return {map, Rational(1), 0,
                             QPolynomial::constant(n, Rational(1))};
  if (mdim < 1)
    throw FlatError("restrict_map: zero-dimensional flats have no restricted map");

  for (const std::size_t idx : flat.containing) {
    if (!verify_invariant_hyperplane(map, arrangement[idx]).ok)
      throw FlatError("restrict_map: defining hyperplane not invariant: " +
                      arrangement[idx].label());
  }

  // Image of the flat parametrization under the map.
  std::vector<QPolynomial> image;
  image.reserve(n);
  for (const auto& comp : map.components)
    image.push_back(comp.compose_linear(flat.embedding));

  // Solve embedding . h = image on a maximal independent row set, exactly.
  const QMatrix embed_q = to_rational(flat.embedding);
  const std::vector<int> rows = independent_row_set(embed_q, mdim + 1);
  if (static_cast<int>(rows.size()) != mdim + 1)
    throw FlatError("restrict_map: embedding is rank-deficient");
  QMatrix sub(mdim + 1, mdim + 1);
  for (int r = 0; r <= mdim; ++r)
    for (int c = 0; c <= mdim; ++c) sub(r, c) = embed_q(rows[r], c);
  const auto inv = exact_inverse(sub);
  if (!inv) throw FlatError("restrict_map: singular row system");

  std::vector<QPolynomial> restricted;
  restricted.reserve(mdim + 1);
  for (int j = 0; j <= mdim; ++j) {
    QPolynomial acc = QPolynomial::zero(mdim + 1, map.degree);
    for (int t = 0; t <= mdim; ++t)
      if ((*inv)(j, t) != Rational(0)) acc += image[rows[t]] * (*inv)(j, t);
    restricted.push_back(std::move(acc));
  }

  // Consistency on all rows: the image must lie in the flat.
  for (int i = 0; i < n; ++i) {
    QPolynomial recomposed = QPolynomial::zero(mdim + 1, map.degree);
    for (int j = 0; j <= mdim; ++j)
      if (flat.embedding(i, j) != 0)
        recomposed +=
            restricted[j] * Rational(static_cast<long>(flat.embedding(i, j)));
    if (recomposed != image[i])
      throw FlatError("restrict_map: image not expressible in flat coordinates");
  }

  // Strip common factors among the induced arrangement forms.
  const std::vector<InducedForm> forms = induced_arrangement(flat, arrangement);
  QPolynomial stripped = QPolynomial::constant(mdim + 1, Rational(1));
  bool progress = true;
  while (progress) {
    progress = false;
    for (const InducedForm& f : forms) {
      std::vector<LinearDivision<Rational>> divs;
      divs.reserve(restricted.size());
      bool all_exact = true;
      for (const QPolynomial& comp : restricted) {
        divs.push_back(divide_by_linear(comp, f.covector));
        if (!divs.back().exact()) {
          all_exact = false;
          break;
        }
      }
      if (!all_exact) continue;
      for (std::size_t j = 0; j < restricted.size(); ++j)
        restricted[j] = std::move(divs[j].quotient);
      QPolynomial form_poly(mdim + 1, 1);
      for (int c = 0; c <= mdim; ++c)
        if (f.covector[c] != 0)
          form_poly.add_term(
              [&] {
                ExponentVector e(mdim + 1, 0);
                e[c] = 1;
                return e;
              }(),
              Rational(static_cast<long>(f.covector[c])));
      stripped = stripped * form_poly;
      progress = true;
    }
  }

  for (const QPolynomial& comp : restricted)
    if (comp.is_zero())
      throw FlatError("restrict_map: a component vanished after stripping");

  RestrictionResult out;
  out.restricted.k = mdim;
  out.restricted.degree = restricted.front().degree();
  out.restricted.components = restricted;
  normalize_content(out.restricted);
  out.stripped = stripped;
  out.stripped_degree = stripped.degree();

  // No common root among components at random sample points.
  {
    CMap probe = to_float(out.restricted);
    SampleRng rng(0x5eedu, 777);
    for (int s = 0; s < 50; ++s) {
      CVector x = rng.gaussian_vector(mdim + 1);
      x /= x.norm();
      double max_mod = 0.0;
      for (const auto& comp : probe.components)
        max_mod = std::max(max_mod, std::abs(comp.evaluate(x)));
      if (max_mod < 1e-12)
        throw FlatError("restrict_map: components share a common zero");
    }
  }

  // Intertwining certificate: embedding . (restricted * stripped) = c * image.
  Rational scale(0);
  for (int i = 0; i < n && scale == Rational(0); ++i) {
    QPolynomial lhs = QPolynomial::zero(mdim + 1, map.degree);
    for (int j = 0; j <= mdim; ++j)
      if (flat.embedding(i, j) != 0)
        lhs += (out.restricted.components[j] * stripped) *
               Rational(static_cast<long>(flat.embedding(i, j)));
    if (lhs.is_zero() != image[i].is_zero())
      throw FlatError("restrict_map: intertwining identity failed");
    if (!lhs.is_zero()) {
      const auto& [e, c] = lhs.leading_term();
      const Rational ic = image[i].coefficient(e);
      if (ic == Rational(0))
        throw FlatError("restrict_map: intertwining identity failed");
      scale = c / ic;
    }
  }
  for (int i = 0; i < n; ++i) {
    QPolynomial lhs = QPolynomial::zero(mdim + 1, map.degree);
    for (int j = 0; j <= mdim; ++j)
      if (flat.embedding(i, j) != 0)
        lhs += (out.restricted.components[j] * stripped) *
               Rational(static_cast<long>(flat.embedding(i, j)));
    if (lhs != image[i] * scale)
      throw FlatError("restrict_map: intertwining identity failed");
  }
  out.identity_scale = scale;
  return out;
}

/// Group element induced on an invariant flat: the matrix M with
/// r . embedding = embedding . M, in projective canonical integer form;
/// nullopt when r does not stabilize the flat.
inline std::optional<IMatrix> induce_on_flat(const GroupElement& r,
                                             const Flat& flat) {
  const QMatrix embed_q = to_rational(flat.embedding);
  const int cols = static_cast<int>(flat.embedding.cols());
  const std::vector<int> rows = independent_row_set(embed_q, cols);
  QMatrix sub(cols, cols);
  for (int i = 0; i < cols; ++i)
    for (int j = 0; j < cols; ++j) sub(i, j) = embed_q(rows[i], j);
  const auto inv = exact_inverse(sub);
  if (!inv) return std::nullopt;

  const QMatrix mapped = to_rational(IMatrix(r.matrix * flat.embedding));
  QMatrix target(cols, cols);
  for (int i = 0; i < cols; ++i) target.row(i) = mapped.row(rows[i]);
  const QMatrix induced = (*inv) * target;

  // Consistency on all rows.
  const QMatrix recomposed = embed_q * induced;
  for (Eigen::Index i = 0; i < mapped.rows(); ++i)
    for (Eigen::Index j = 0; j < mapped.cols(); ++j)
      if (recomposed(i, j) != mapped(i, j)) return std::nullopt;

  // Clear denominators and canonicalize projectively.
  Integer den(1);
  for (int i = 0; i < cols; ++i)
    for (int j = 0; j < cols; ++j) den = lcm(den, induced(i, j).get_den());
  IMatrix integral(cols, cols);
  for (int i = 0; i < cols; ++i)
    for (int j = 0; j < cols; ++j) {
      Rational scaled = induced(i, j) * Rational(den);
      integral(i, j) = static_cast<std::int64_t>(scaled.get_num().get_si());
    }
  return canonical_projective_matrix(integral);
}

}  // namespace equidyn
