#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "equidyn/symmetry.hpp"

using namespace equidyn;

TEST_CASE("T matrix layout for k=1 and k=2, and T^2 = I") {
  const GroupElement t1 = t_matrix(1);
  // Canonical form flips the sign so the first entry is positive; the
  // underlying projective element is [[-1,0],[-1,1]].
  IMatrix expected1(2, 2);
  expected1 << -1, 0, -1, 1;
  CHECK(detail::matrices_equal(t1.matrix,
                               canonical_projective_matrix(expected1)));
  CHECK(detail::matrices_equal(IMatrix(t1.matrix * t1.matrix),
                               IMatrix(IMatrix::Identity(2, 2))));

  const GroupElement t2 = t_matrix(2);
  IMatrix expected2(3, 3);
  expected2 << -1, 0, 0, -1, 1, 0, -1, 0, 1;
  CHECK(detail::matrices_equal(t2.matrix,
                               canonical_projective_matrix(expected2)));
  CHECK(detail::matrices_equal(IMatrix(t2.matrix * t2.matrix),
                               IMatrix(IMatrix::Identity(3, 3))));
}

TEST_CASE("generator counts and involutions") {
  CHECK(generators(1).size() == 2);
  CHECK(generators(2).size() == 3);
  for (int k = 1; k <= 3; ++k) {
    for (const GroupElement& g : generators(k)) {
      const IMatrix sq = g.matrix * g.matrix;
      CHECK(detail::matrices_equal(
          sq, IMatrix(IMatrix::Identity(k + 1, k + 1) * sq(0, 0))));
    }
  }
}

TEST_CASE("group closure reaches exactly (k+2)! elements") {
  CHECK(generate_group(1).size() == 6);
  CHECK(generate_group(2).size() == 24);
  CHECK(generate_group(3).size() == 120);
  CHECK(generate_group(4).size() == 720);
}

TEST_CASE("identity present and the set is closed under inverses") {
  for (int k = 1; k <= 3; ++k) {
    const auto group = generate_group(k);
    std::set<std::vector<std::int64_t>> keys;
    for (const GroupElement& g : group) keys.insert(detail::matrix_key(g.matrix));
    CHECK(keys.count(detail::matrix_key(
        canonical_projective_matrix(IMatrix::Identity(k + 1, k + 1)))));
    // For every element, some element acts as its projective inverse.
    for (const GroupElement& g : group) {
      bool has_inverse = false;
      for (const GroupElement& h : group) {
        const IMatrix prod = canonical_projective_matrix(g.matrix * h.matrix);
        if (detail::matrices_equal(
                prod, canonical_projective_matrix(IMatrix::Identity(k + 1, k + 1)))) {
          has_inverse = true;
          break;
        }
      }
      CHECK(has_inverse);
    }
  }
}

TEST_CASE("group elements are invertible over the rationals") {
  for (int k = 1; k <= 3; ++k)
    for (const GroupElement& g : generate_group(k))
      CHECK(exact_rank(to_rational(g.matrix)) == k + 1);
}

TEST_CASE("equivariance: identity scale is 1") {
  const QMap g = build_equivariant_map(2);
  const auto res = check_equivariance(g, GroupElement::identity(2));
  REQUIRE(res.ok);
  CHECK(res.scale == Rational(1));
}

TEST_CASE("equivariance under the k=1 swap exchanges components") {
  const QMap g = build_equivariant_map(1);
  IMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  const auto res = check_equivariance(g, {swap, "swap"});
  REQUIRE(res.ok);
  CHECK(res.scale == Rational(1));
  // Explicit exchange: g_1(x2, x1) equals g_2(x1, x2).
  const QMap composed = poly_compose_linear(g, swap);
  CHECK(composed.components[0] == g.components[1]);
  CHECK(composed.components[1] == g.components[0]);
}

TEST_CASE("equivariance holds for every element at k=1 and k=2") {
  for (int k = 1; k <= 2; ++k) {
    const QMap g = build_equivariant_map(k);
    for (const GroupElement& r : generate_group(k)) {
      const auto res = check_equivariance(g, r);
      CHECK(res.ok);
      CHECK(res.scale != Rational(0));
    }
  }
}

TEST_CASE("a broken map yields an equivariance witness") {
  QMap g = build_equivariant_map(1);
  // Spoil one coefficient; the swap certificate must fail with a witness.
  g.components[0] += QPolynomial::monomial(2, {2, 2}, Rational(1));
  IMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  const auto res = check_equivariance(g, {swap, "swap"});
  CHECK_FALSE(res.ok);
  CHECK_FALSE(res.witness.empty());
}

TEST_CASE("pointwise fixed hyperplanes of the standard involutions") {
  for (int k = 1; k <= 3; ++k) {
    const auto arrangement = hyperplane_arrangement(k);
    IMatrix swap = IMatrix::Identity(k + 1, k + 1);
    swap(0, 0) = 0;
    swap(1, 1) = 0;
    swap(0, 1) = 1;
    swap(1, 0) = 1;
    const auto fixed = pointwise_fixed_hyperplane({swap, "s1"}, arrangement);
    REQUIRE(fixed.has_value());
    CHECK(fixed->kind == Hyperplane::Kind::Diff);
    CHECK(fixed->i == 1);
    CHECK(fixed->j == 2);

    const auto t_fixed = pointwise_fixed_hyperplane(t_matrix(k), arrangement);
    REQUIRE(t_fixed.has_value());
    CHECK(t_fixed->kind == Hyperplane::Kind::Coord);
    CHECK(t_fixed->i == 1);

    CHECK_FALSE(pointwise_fixed_hyperplane(GroupElement::identity(k), arrangement)
                    .has_value());
  }
}

TEST_CASE("transposition-conjugates count and arrangement permutation") {
  for (int k = 1; k <= 3; ++k) {
    const auto group = generate_group(k);
    const auto arrangement = hyperplane_arrangement(k);
    int with_fixed = 0;
    for (const GroupElement& r : group)
      if (pointwise_fixed_hyperplane(r, arrangement)) ++with_fixed;
    // One per transposition of S_{k+2}.
    CHECK(with_fixed == (k + 2) * (k + 1) / 2);

    // Every element maps every covector to +- another arrangement covector.
    for (const GroupElement& r : group) {
      for (const Hyperplane& h : arrangement) {
        IVector mapped = r.matrix.transpose() * h.covector;
        normalize_integer_vector(mapped);
        bool found = false;
        for (const Hyperplane& other : arrangement) {
          IVector oc = other.covector;
          normalize_integer_vector(oc);
          bool same = true;
          for (Eigen::Index t = 0; t < oc.size(); ++t)
            if (oc[t] != mapped[t]) same = false;
          if (same) {
            found = true;
            break;
          }
        }
        CHECK(found);
      }
    }
  }
}

TEST_CASE("closure guard rejects out-of-range k") {
  CHECK_THROWS_AS(generate_group(0), DimensionError);
  CHECK_THROWS_AS(generate_group(7), DimensionError);
}
