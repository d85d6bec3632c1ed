#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "equidyn/verify.hpp"

using namespace equidyn;

namespace {
QPolynomial qvar(int n, int i) { return QPolynomial::variable(n, i); }
}  // namespace

TEST_CASE("invariance fixtures: k=1 coordinate axis and k=2 diagonal") {
  const QMap g1 = build_equivariant_map(1);
  const auto arr1 = hyperplane_arrangement(1);
  const auto coord = verify_invariant_hyperplane(g1, arr1[0]);
  REQUIRE(coord.ok);
  CHECK(coord.quotient_degree == 3);

  const QMap g2 = build_equivariant_map(2);
  const auto arr2 = hyperplane_arrangement(2);
  // (g_1 - g_2) divisible by (x1 - x2): the Diff(1,2) certificate.
  const Hyperplane diag = Hyperplane::diff(2, 1, 2);
  const QPolynomial pulled = g2.components[0] - g2.components[1];
  const auto direct = divide_by_linear(pulled, diag.covector);
  CHECK(direct.exact());
  CHECK(verify_invariant_hyperplane(g2, diag).ok);
}

TEST_CASE("invariance holds for the whole arrangement, k=1..3") {
  for (int k = 1; k <= 3; ++k) {
    const QMap g = build_equivariant_map(k);
    for (const Hyperplane& h : hyperplane_arrangement(k)) {
      const auto cert = verify_invariant_hyperplane(g, h);
      CHECK(cert.ok);
      CHECK(cert.quotient_degree == k + 2);
    }
  }
}

TEST_CASE("a spoiled map fails invariance with a remainder witness") {
  QMap g = build_equivariant_map(1);
  g.components[0] += QPolynomial::monomial(2, {0, 4}, Rational(1));
  const auto cert = verify_invariant_hyperplane(g, Hyperplane::coord(1, 1));
  CHECK_FALSE(cert.ok);
  CHECK_FALSE(cert.witness.empty());
}

TEST_CASE("critical factorization: k=1 Wronskian equals c x1^2 x2^2 (x1-x2)^2") {
  const QMap g = build_equivariant_map(1);
  const QPolynomial det = jacobian_det_poly(g);
  // Independent symbolic oracle: assemble the product directly.
  const QPolynomial x1 = qvar(2, 0), x2 = qvar(2, 1);
  const QPolynomial product =
      x1 * x1 * x2 * x2 * (x1 - x2) * (x1 - x2);
  const auto arr = hyperplane_arrangement(1);
  const auto fact = verify_critical_factorization(g, arr);
  REQUIRE(fact.ok);
  CHECK(det == product * fact.constant);
}

TEST_CASE("critical factorization constants for k=1..3") {
  for (int k = 1; k <= 3; ++k) {
    const QMap g = build_equivariant_map(k);
    const auto arr = hyperplane_arrangement(k);
    const auto fact = verify_critical_factorization(g, arr);
    REQUIRE(fact.ok);
    CHECK(fact.constant != Rational(0));
    for (int m : fact.multiplicities) CHECK(m == 2);
    // Degree bookkeeping: 2 C(k+2,2) = (k+1)(k+2).
    CHECK(2 * static_cast<int>(arr.size()) == (k + 1) * (k + 2));
  }
}

TEST_CASE("numeric exponent fit sits at 2.0 +- 0.1 for k=4") {
  const QMap g = build_equivariant_map(4);
  const auto arr = hyperplane_arrangement(4);
  const auto fits = numeric_critical_exponents(g, arr, 2024);
  REQUIRE(fits.size() == arr.size());
  for (double fit : fits) {
    CHECK(fit >= 1.9);
    CHECK(fit <= 2.1);
  }
}

TEST_CASE("superattraction certificates, fixtures and the whole list") {
  const QMap g2 = build_equivariant_map(2);
  const QPoint ones = QPoint::from({Rational(1), Rational(1), Rational(1)});
  CHECK(verify_superattracting(g2, ones).ok());

  const QMap g1 = build_equivariant_map(1);
  const QPoint origin = QPoint::from({Rational(0), Rational(1)});
  CHECK(verify_superattracting(g1, origin).ok());

  for (int k = 1; k <= 3; ++k) {
    const QMap g = build_equivariant_map(k);
    for (const QPoint& p : enumerate_superattractors(k))
      CHECK(verify_superattracting(g, p).ok());
  }
}

TEST_CASE("non-fixed and non-superattracting points are reported") {
  const QMap g = build_equivariant_map(1);
  const QPoint moving = QPoint::from({Rational(2), Rational(1)});
  const auto cert = verify_superattracting(g, moving);
  CHECK_FALSE(cert.ok());
  CHECK_FALSE(cert.fixed);
}

TEST_CASE("restriction of g_5 to {x1=0}: the degree-5 map on the line") {
  const QMap g = build_equivariant_map(2);
  const auto arr = hyperplane_arrangement(2);
  const Flat flat = flat_from_hyperplanes(2, {0}, arr);
  const RestrictionResult res = restrict_map(g, flat, arr);
  CHECK(res.restricted.degree == 5);
  CHECK(res.stripped_degree == 0);
  CHECK(res.restricted.k == 1);
  // Supports the non-conjugacy remark: 5 != m+3 = 4.
  CHECK(res.restricted.degree != flat.m + 3);

  // y1^4 (3 y1 - 5 y2) and y2^4 (3 y2 - 5 y1), up to overall sign convention.
  const QPolynomial y1 = qvar(2, 0), y2 = qvar(2, 1);
  const QPolynomial expect1 = y1 * y1 * y1 * y1 * (y1 * Rational(3) - y2 * Rational(5));
  const QPolynomial expect2 = y2 * y2 * y2 * y2 * (y2 * Rational(3) - y1 * Rational(5));
  const bool plain = res.restricted.components[0] == expect1 &&
                     res.restricted.components[1] == expect2;
  const bool negated = res.restricted.components[0] == -expect1 &&
                       res.restricted.components[1] == -expect2;
  CHECK((plain || negated));
}

TEST_CASE("critical set of the restriction matches the three listed points") {
  const QMap g = build_equivariant_map(2);
  const auto arr = hyperplane_arrangement(2);
  const Flat flat = flat_from_hyperplanes(2, {0}, arr);
  const RestrictionResult res = restrict_map(g, flat, arr);

  const QPolynomial det = jacobian_det_poly(res.restricted);
  const auto forms = induced_arrangement(flat, arr);
  std::vector<IVector> covectors;
  for (const InducedForm& f : forms) covectors.push_back(f.covector);
  const auto fact = factor_into_linear_forms(det, covectors);
  REQUIRE(fact.ok);

  // Ambient zero points of the induced forms: {[0:1:0],[0:0:1],[0:1:1]}.
  std::vector<QPoint> critical;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    REQUIRE(fact.multiplicities[i] >= 1);
    QPoint zero;
    zero.coords.resize(2);
    zero.coords[0] = Rational(static_cast<long>(forms[i].covector[1]));
    zero.coords[1] = Rational(static_cast<long>(-forms[i].covector[0]));
    zero.canonicalize();
    QPoint ambient;
    ambient.coords.resize(3);
    for (int r = 0; r < 3; ++r)
      ambient.coords[r] =
          Rational(static_cast<long>(flat.embedding(r, 0))) * zero.coords[0] +
          Rational(static_cast<long>(flat.embedding(r, 1))) * zero.coords[1];
    ambient.canonicalize();
    critical.push_back(ambient);
  }
  const std::vector<QPoint> expected = {
      QPoint::from({Rational(0), Rational(1), Rational(0)}),
      QPoint::from({Rational(0), Rational(0), Rational(1)}),
      QPoint::from({Rational(0), Rational(1), Rational(1)})};
  REQUIRE(critical.size() == expected.size());
  for (const QPoint& want : expected) {
    bool found = false;
    for (const QPoint& got : critical)
      if (projectively_equal(got, want)) found = true;
    CHECK(found);
  }
}

TEST_CASE("restriction identity holds for every hyperplane flat, k <= 3") {
  for (int k = 2; k <= 3; ++k) {
    const QMap g = build_equivariant_map(k);
    const auto arr = hyperplane_arrangement(k);
    for (std::size_t idx = 0; idx < arr.size(); ++idx) {
      const Flat flat = flat_from_hyperplanes(k, {idx}, arr);
      const RestrictionResult res = restrict_map(g, flat, arr);
      CHECK(res.identity_scale != Rational(0));
      CHECK(res.restricted.degree + res.stripped_degree == g.degree);
      // The intrinsic superattractors of the restriction all verify.
      for (const QPoint& p : enumerate_superattractors(flat.m))
        CHECK(verify_superattracting(res.restricted, p).ok());
    }
  }
}

TEST_CASE("restriction to deeper flats of P^3 stays exact") {
  const QMap g = build_equivariant_map(3);
  const auto arr = hyperplane_arrangement(3);
  // {x1=0, x2=x3}: a line in P^3.
  std::size_t diff23 = 0;
  for (std::size_t i = 0; i < arr.size(); ++i)
    if (arr[i].kind == Hyperplane::Kind::Diff && arr[i].i == 2 && arr[i].j == 3)
      diff23 = i;
  const Flat flat = flat_from_hyperplanes(3, {0, diff23}, arr);
  REQUIRE(flat.m == 1);
  const RestrictionResult res = restrict_map(g, flat, arr);
  CHECK(res.identity_scale != Rational(0));
  CHECK(res.restricted.degree + res.stripped_degree == g.degree);
}

TEST_CASE("restricting to the full flat is the identity operation") {
  const QMap g = build_equivariant_map(2);
  const auto arr = hyperplane_arrangement(2);
  const RestrictionResult res = restrict_map(g, Flat::full(2), arr);
  CHECK(res.restricted.degree == g.degree);
  for (int i = 0; i < 3; ++i)
    CHECK(res.restricted.components[i] == g.components[i]);
}

TEST_CASE("stabilizer of {x1=0} at k=2 and its induced action on the line") {
  const QMap g = build_equivariant_map(2);
  const auto arr = hyperplane_arrangement(2);
  const Flat flat = flat_from_hyperplanes(2, {0}, arr);
  const auto group = generate_group(2);
  int stabilizer = 0;
  std::vector<IMatrix> induced;
  for (const GroupElement& r : group) {
    const auto m = induce_on_flat(r, flat);
    if (!m) continue;
    ++stabilizer;
    bool known = false;
    for (const IMatrix& seen : induced)
      if (detail::matrices_equal(seen, *m)) known = true;
    if (!known) induced.push_back(*m);
  }
  // The centralizer of a transposition in S_4 has order 4; T fixes the flat
  // pointwise, so only two distinct projective actions are induced.
  CHECK(stabilizer == 4);
  CHECK(induced.size() == 2);

  // The restriction is equivariant under every induced element.
  const RestrictionResult res = restrict_map(g, flat, arr);
  for (std::size_t i = 0; i < induced.size(); ++i) {
    const auto eq = check_equivariance(res.restricted, {induced[i], "ind"});
    CHECK(eq.ok);
  }
}
