#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "equidyn/map.hpp"
#include "equidyn/rng.hpp"

using namespace equidyn;

namespace {

QPolynomial qvar(int n, int i) { return QPolynomial::variable(n, i); }

QPoint random_rational_point(SampleRng& rng, int n) {
  QPoint p;
  p.coords.resize(n);
  bool nonzero = false;
  for (int i = 0; i < n; ++i) {
    p.coords[i] = make_rational(static_cast<long>(rng.next_u64() % 19) - 9,
                                1 + static_cast<long>(rng.next_u64() % 5));
    if (p.coords[i] != Rational(0)) nonzero = true;
  }
  if (!nonzero) p.coords[0] = Rational(1);
  return p;
}

}  // namespace

TEST_CASE("k=1 components match the degree-4 display exactly") {
  const QMap g = build_equivariant_map(1);
  const QPolynomial x1 = qvar(2, 0), x2 = qvar(2, 1);
  // x1^3 (-x1 + 2 x2) and x2^3 (2 x1 - x2)
  const QPolynomial expected1 = x1 * x1 * x1 * (x2 * Rational(2) - x1);
  const QPolynomial expected2 = x2 * x2 * x2 * (x1 * Rational(2) - x2);
  CHECK(g.degree == 4);
  CHECK(g.components[0] == expected1);
  CHECK(g.components[1] == expected2);
}

TEST_CASE("k=2 components match the cleared-denominator form") {
  // Clearing lcm(3,4,5) = 60 and dividing the content 2 gives
  //   x_l^3 (10 A_2 - 15 x_l A_1 + 18 x_l^2).
  const QMap g = build_equivariant_map(2);
  const auto sym = elementary_symmetric_polynomials<Rational>(3);
  for (int l = 0; l < 3; ++l) {
    const QPolynomial xl = qvar(3, l);
    const QPolynomial xl3 = xl * xl * xl;
    const QPolynomial expected =
        xl3 * (sym[2] * Rational(10) - xl * sym[1] * Rational(15) +
               xl * xl * Rational(18));
    CHECK(g.components[l] == expected);
  }
}

TEST_CASE("degree, divisibility by x_l^3, and content for k=1..4") {
  for (int k = 1; k <= 4; ++k) {
    const QMap g = build_equivariant_map(k);
    CHECK(g.degree == k + 3);
    CHECK(map_content(g) == 1);
    for (int l = 0; l <= k; ++l) {
      IVector axis = IVector::Zero(k + 1);
      axis[l] = 1;
      std::vector<IVector> cube{axis, axis, axis};
      const auto div =
          poly_divide_exact(g.components[l], std::span<const IVector>(cube));
      CHECK(div.ok);
    }
  }
}

TEST_CASE("out-of-range k is rejected") {
  CHECK_THROWS_AS(build_equivariant_map(0), DimensionError);
  CHECK_THROWS_AS(build_equivariant_map(-2), DimensionError);
  CHECK_THROWS_AS(build_equivariant_map(7), DimensionError);
  CHECK_NOTHROW(build_equivariant_map(7, 8));
}

TEST_CASE("evaluate: k=2 coordinate point and barycenter are fixed") {
  const QMap g = build_equivariant_map(2);
  const QPoint e1 = QPoint::from({Rational(1), Rational(0), Rational(0)});
  CHECK(projectively_equal(evaluate_map(g, e1), e1));
  const QPoint ones = QPoint::from({Rational(1), Rational(1), Rational(1)});
  // Raw image is [3:3:3] before canonicalization.
  const QVector raw = evaluate_map_raw(g, ones.coords);
  CHECK(raw[0] == Rational(3));
  CHECK(raw[1] == Rational(3));
  CHECK(raw[2] == Rational(3));
  CHECK(projectively_equal(evaluate_map(g, ones), ones));
}

TEST_CASE("evaluate: k=1 fixtures [1:1] fixed and [2:1] -> [0:1]") {
  const QMap g = build_equivariant_map(1);
  const QPoint diag = QPoint::from({Rational(1), Rational(1)});
  CHECK(projectively_equal(evaluate_map(g, diag), diag));
  const QPoint p = QPoint::from({Rational(2), Rational(1)});
  const QPoint img = evaluate_map(g, p);
  CHECK(projectively_equal(img, QPoint::from({Rational(0), Rational(1)})));
}

TEST_CASE("homogeneity: exact coordinates scale by lambda^(k+3)") {
  for (int k = 1; k <= 3; ++k) {
    const QMap g = build_equivariant_map(k);
    SampleRng rng(23, k);
    for (int rep = 0; rep < 10; ++rep) {
      const QPoint p = random_rational_point(rng, k + 1);
      const Rational lambda = make_rational(
          static_cast<long>(rng.next_u64() % 9) + 1,
          static_cast<long>(rng.next_u64() % 4) + 1);
      QVector scaled = p.coords;
      for (int i = 0; i <= k; ++i) scaled[i] *= lambda;
      const QVector img = evaluate_map_raw(g, p.coords);
      const QVector img_scaled = evaluate_map_raw(g, scaled);
      Rational factor(1);
      for (int d = 0; d < k + 3; ++d) factor *= lambda;
      for (int i = 0; i <= k; ++i) CHECK(img_scaled[i] == img[i] * factor);
    }
  }
}

TEST_CASE("float and exact evaluation agree at 100 random rational points") {
  for (int k = 1; k <= 2; ++k) {
    const QMap g = build_equivariant_map(k);
    const CompiledMap compiled(g);
    SampleRng rng(41, k);
    for (int rep = 0; rep < 100; ++rep) {
      const QPoint p = random_rational_point(rng, k + 1);
      bool exact_zero_image = false;
      QPoint exact_img;
      try {
        exact_img = evaluate_map(g, p);
      } catch (const HolomorphyError&) {
        exact_zero_image = true;  // never expected for these maps
      }
      REQUIRE_FALSE(exact_zero_image);
      CPoint float_in = to_float(p);
      CPoint float_img;
      float_img.coords = compiled.apply(float_in.coords);
      float_img.canonicalize();
      CHECK(chordal_distance(to_float(exact_img), float_img) <= 1e-10);
    }
  }
}

TEST_CASE("holomorphy spot check: no common zero at superattractor candidates") {
  for (int k = 1; k <= 3; ++k) {
    const QMap g = build_equivariant_map(k);
    for (std::uint32_t mask = 1; mask < (1u << (k + 1)); ++mask) {
      QPoint p;
      p.coords.resize(k + 1);
      for (int i = 0; i <= k; ++i)
        p.coords[i] = Rational(((mask >> (k - i)) & 1u) ? 1 : 0);
      const QVector img = evaluate_map_raw(g, p.coords);
      bool any_nonzero = false;
      for (int i = 0; i <= k; ++i)
        if (img[i] != Rational(0)) any_nonzero = true;
      CHECK(any_nonzero);
    }
  }
}

TEST_CASE("evaluate_map raises on the zero vector") {
  const QMap g = build_equivariant_map(1);
  QPoint zero;
  zero.coords.resize(2);
  zero.coords[0] = Rational(0);
  zero.coords[1] = Rational(0);
  CHECK_THROWS_AS(evaluate_map(g, zero), HolomorphyError);
}

TEST_CASE("jacobian matrix entries and the Euler degree count") {
  const QMap g = build_equivariant_map(1);
  const auto jac = jacobian_matrix(g);
  // d/dx1 of x1^3(-x1+2x2) = -4x1^3 + 6x1^2 x2
  CHECK(jac[0][0].coefficient({3, 0}) == Rational(-4));
  CHECK(jac[0][0].coefficient({2, 1}) == Rational(6));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(jac[i][j].degree() == g.degree - 1);
}

TEST_CASE("jacobian determinant: degree (k+1)(k+2) and the k cap") {
  const QMap g1 = build_equivariant_map(1);
  const QPolynomial det1 = jacobian_det_poly(g1);
  CHECK(det1.degree() == 6);

  // Substitution x1 := 0 kills the determinant identically.
  IMatrix crush = IMatrix::Identity(2, 2);
  crush(0, 0) = 0;
  CHECK(det1.compose_linear(crush).is_zero());

  const QMap g2 = build_equivariant_map(2);
  CHECK(jacobian_det_poly(g2).degree() == 12);

  const QMap g4 = build_equivariant_map(4);
  CHECK_THROWS_AS(jacobian_det_poly(g4), DimensionError);
}

TEST_CASE("poly_compose_linear: identity, swap equivariance witness, degenerate") {
  const QMap g = build_equivariant_map(1);
  const IMatrix id = IMatrix::Identity(2, 2);
  const QMap same = poly_compose_linear(g, id);
  CHECK(same.components[0] == g.components[0]);
  CHECK(same.components[1] == g.components[1]);

  IMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  const QMap left = poly_compose_linear(g, swap);   // g o swap
  const QMap right = apply_matrix(swap, g);          // swap o g
  CHECK(left.components[0] == right.components[0]);
  CHECK(left.components[1] == right.components[1]);

  IMatrix zero = IMatrix::Zero(2, 2);
  CHECK_THROWS_AS(poly_compose_linear(g, zero), std::domain_error);
}
