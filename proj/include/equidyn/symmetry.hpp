#pragma once

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "equidyn/arrangement.hpp"
#include "equidyn/linalg.hpp"
#include "equidyn/map.hpp"

namespace equidyn {

/// Element of the induced "S_{k+2}" action on P^k. The matrix is stored in
/// projective canonical form; group identity is equality up to scalar.
struct GroupElement {
  IMatrix matrix;
  std::string word;

  static GroupElement identity(int k) {
    return {IMatrix::Identity(k + 1, k + 1), "e"};
  }
};

/// The matrix T of the transposition (1, k+2): first column all -1, the rest
/// the identity block.
inline GroupElement t_matrix(int k) {
  if (k < 1) throw DimensionError("t_matrix: k must be >= 1");
  IMatrix t = IMatrix::Identity(k + 1, k + 1);
  t(0, 0) = -1;
  for (int r = 1; r <= k; ++r) t(r, 0) = -1;
  return {canonical_projective_matrix(t), "T"};
}

/// Adjacent transpositions of the permutation action on x plus T.
inline std::vector<GroupElement> generators(int k) {
  if (k < 1) throw DimensionError("generators: k must be >= 1");
  std::vector<GroupElement> gens;
  gens.reserve(k + 1);
  for (int i = 0; i < k; ++i) {
    IMatrix swap = IMatrix::Identity(k + 1, k + 1);
    swap(i, i) = 0;
    swap(i + 1, i + 1) = 0;
    swap(i, i + 1) = 1;
    swap(i + 1, i) = 1;
    gens.push_back({canonical_projective_matrix(swap),
                    "s" + std::to_string(i + 1)});
  }
  gens.push_back(t_matrix(k));
  return gens;
}

namespace detail {
inline std::vector<std::int64_t> matrix_key(const IMatrix& m) {
  std::vector<std::int64_t> key;
  key.reserve(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) key.push_back(m(i, j));
  return key;
}

inline std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

inline bool matrices_equal(const IMatrix& a, const IMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}
}  // namespace detail

/// Breadth-first closure of the generators under multiplication modulo
/// projective equality; yields exactly (k+2)! elements. The 2(k+2)! cap guards
/// against scalar-duplication bugs.
inline std::vector<GroupElement> generate_group(int k, int max_k = kDefaultMaxK) {
  if (k < 1 || k > max_k)
    throw DimensionError("generate_group: k out of supported range");
  const std::vector<GroupElement> gens = generators(k);
  const std::uint64_t expected = detail::factorial(k + 2);

  std::map<std::vector<std::int64_t>, std::size_t> seen;
  std::vector<GroupElement> elements;
  std::deque<std::size_t> todo;

  GroupElement id = GroupElement::identity(k);
  seen.emplace(detail::matrix_key(id.matrix), 0);
  elements.push_back(std::move(id));
  todo.push_back(0);

  while (!todo.empty()) {
    const std::size_t current = todo.front();
    todo.pop_front();
    for (const GroupElement& g : gens) {
      IMatrix product =
          canonical_projective_matrix(elements[current].matrix * g.matrix);
      auto key = detail::matrix_key(product);
      if (seen.count(key)) continue;
      if (elements.size() + 1 > 2 * expected)
        throw std::logic_error(
            "generate_group: closure exceeded twice the group order");
      std::string word = elements[current].word == "e"
                             ? g.word
                             : elements[current].word + "*" + g.word;
      seen.emplace(std::move(key), elements.size());
      elements.push_back({std::move(product), std::move(word)});
      todo.push_back(elements.size() - 1);
    }
  }
  return elements;
}

/// Outcome of the exact equivariance identity g(rx) = c * r(g(x)).
struct EquivarianceResult {
  bool ok = false;
  Rational scale;
  std::string witness;  // first differing monomial when the identity fails
};

inline EquivarianceResult check_equivariance(const QMap& map,
                                             const GroupElement& r) {
  const QMap lhs = poly_compose_linear(map, r.matrix);
  const QMap rhs = apply_matrix(r.matrix, map);

  // Scale from the first nonzero coefficient pair.
  Rational scale(0);
  for (int i = 0; i <= map.k; ++i) {
    if (lhs.components[i].is_zero() != rhs.components[i].is_zero())
      return {false, Rational(0),
              "component " + std::to_string(i + 1) + " vanishes on one side only"};
    if (!lhs.components[i].is_zero()) {
      const auto& [le, lc] = lhs.components[i].leading_term();
      const Rational rc = rhs.components[i].coefficient(le);
      if (rc == Rational(0))
        return {false, Rational(0),
                "missing monomial in component " + std::to_string(i + 1)};
      scale = lc / rc;
      break;
    }
  }
  if (scale == Rational(0))
    return {false, Rational(0), "both sides identically zero"};

  for (int i = 0; i <= map.k; ++i) {
    const QPolynomial diff = lhs.components[i] - rhs.components[i] * scale;
    if (!diff.is_zero()) {
      const auto& [e, c] = diff.leading_term();
      return {false, Rational(0),
              "component " + std::to_string(i + 1) + ", monomial " +
                  QPolynomial::monomial(map.n_vars(), e, c).to_string()};
    }
  }
  return {true, scale, ""};
}

/// The unique arrangement hyperplane an element fixes pointwise, when the
/// element is conjugate to a transposition (eigenspace of codimension 1);
/// nullopt otherwise. Stored matrices may carry a projective sign flip, so
/// both +1 and -1 eigenvalues are inspected.
inline std::optional<Hyperplane> pointwise_fixed_hyperplane(
    const GroupElement& r, const std::vector<Hyperplane>& arrangement) {
  const int n = static_cast<int>(r.matrix.rows());
  const IMatrix sq = r.matrix * r.matrix;
  // Projective involutions square to a scalar multiple of the identity.
  if (sq(0, 0) == 0 ||
      !detail::matrices_equal(sq, IMatrix(IMatrix::Identity(n, n) * sq(0, 0))))
    return std::nullopt;
  // sq = c^2 I; eigenvalues of interest are +-c with c^2 = sq(0,0).
  std::int64_t c = 0;
  for (std::int64_t d = 1; d * d <= sq(0, 0); ++d)
    if (d * d == sq(0, 0)) c = d;
  if (c == 0) return std::nullopt;

  // On P^1 both eigenvalue shifts have rank one (two fixed points); only the
  // one matching an arrangement member is the transposition hyperplane, so
  // every candidate eigenvalue is inspected before giving up.
  for (const std::int64_t lambda : {c, -c}) {
    IMatrix shifted = r.matrix - lambda * IMatrix::Identity(n, n);
    if (exact_rank(to_rational(shifted)) != 1) continue;
    // Rank one: any nonzero row spans the annihilator of the fixed hyperplane.
    for (int row = 0; row < n; ++row) {
      IVector cov = shifted.row(row).transpose();
      bool nonzero = false;
      for (Eigen::Index t = 0; t < cov.size(); ++t)
        if (cov[t] != 0) nonzero = true;
      if (!nonzero) continue;
      normalize_integer_vector(cov);
      for (const Hyperplane& h : arrangement) {
        IVector hc = h.covector;
        normalize_integer_vector(hc);
        bool same = hc.size() == cov.size();
        for (Eigen::Index t = 0; same && t < hc.size(); ++t)
          if (hc[t] != cov[t]) same = false;
        if (same) return h;
      }
      break;  // this eigenvalue fixes a hyperplane outside the arrangement
    }
  }
  return std::nullopt;
}

}  // namespace equidyn
