#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "equidyn/fixed_points.hpp"
#include "equidyn/verify.hpp"

using namespace equidyn;

namespace {

const CPoint& find_near(const std::vector<FixedPointP1>& fps, const CPoint& target,
                        Complex* multiplier = nullptr) {
  for (const FixedPointP1& fp : fps)
    if (chordal_distance(fp.point, target) < 1e-6) {
      if (multiplier) *multiplier = fp.multiplier;
      return fp.point;
    }
  throw std::runtime_error("expected fixed point not found");
}

}  // namespace

TEST_CASE("the fixed-point polynomial factors as -z(z-1)(z^2-z+1)") {
  // Frozen oracle: x2 g1 - x1 g2 in the chart x2 = 1 expands to
  //   z - 2z^2 + 2z^3 - z^4  (ascending coefficients 0, 1, -2, 2, -1).
  const QMap g = build_equivariant_map(1);
  const QPolynomial fix_eq = QPolynomial::variable(2, 1) * g.components[0] -
                             QPolynomial::variable(2, 0) * g.components[1];
  const std::vector<Rational> expected = {Rational(0), Rational(1), Rational(-2),
                                          Rational(2), Rational(-1), Rational(0)};
  for (int j = 0; j <= 5; ++j) {
    Rational got(0);
    for (const auto& [e, c] : fix_eq.terms())
      if (e[0] == j) got += c;
    CHECK(got == expected[j]);
  }
}

TEST_CASE("g_4 on P^1: superattracting 0, 1, infinity and two repellers") {
  const QMap g = build_equivariant_map(1);
  const auto fps = find_fixed_points_dim1(g);
  CHECK(fps.size() == 5);  // Bezout: degree + 1 with multiplicity

  Complex mult;
  find_near(fps, CPoint::from({Complex(0.0, 0.0), Complex(1.0, 0.0)}), &mult);
  CHECK(std::abs(mult) < 1e-9);
  find_near(fps, CPoint::from({Complex(1.0, 0.0), Complex(1.0, 0.0)}), &mult);
  CHECK(std::abs(mult) < 1e-9);
  find_near(fps, CPoint::from({Complex(1.0, 0.0), Complex(0.0, 0.0)}), &mult);
  CHECK(std::abs(mult) < 1e-9);

  const double half_root3 = std::sqrt(3.0) / 2.0;
  find_near(fps, CPoint::from({Complex(0.5, half_root3), Complex(1.0, 0.0)}), &mult);
  CHECK(std::abs(mult - Complex(2.0, 0.0)) < 1e-9);
  find_near(fps, CPoint::from({Complex(0.5, -half_root3), Complex(1.0, 0.0)}), &mult);
  CHECK(std::abs(mult - Complex(2.0, 0.0)) < 1e-9);
}

TEST_CASE("every reported fixed point satisfies the residual bound") {
  const QMap g = build_equivariant_map(1);
  const CompiledMap cm(g);
  for (const FixedPointP1& fp : find_fixed_points_dim1(g)) {
    CPoint image;
    image.coords = cm.apply(fp.point.coords);
    image.canonicalize();
    CHECK(chordal_distance(image, fp.point) < 1e-9);
  }
}

TEST_CASE("fixed points of the degree-5 restriction line map") {
  // The restriction of g_5 to {x1=0} is a degree-5 critically finite map on
  // P^1; it has 6 fixed points with multiplicity, three superattracting.
  const QMap g = build_equivariant_map(2);
  const auto arr = hyperplane_arrangement(2);
  const Flat flat = flat_from_hyperplanes(2, {0}, arr);
  const RestrictionResult res = restrict_map(g, flat, arr);
  const auto fps = find_fixed_points_dim1(res.restricted);
  CHECK(fps.size() == 6);
  int superattracting = 0;
  for (const FixedPointP1& fp : fps)
    if (std::abs(fp.multiplier) < 1e-9) ++superattracting;
  CHECK(superattracting == 3);
}

TEST_CASE("dimension guard") {
  const QMap g2 = build_equivariant_map(2);
  CHECK_THROWS_AS(find_fixed_points_dim1(g2), DimensionError);
}
