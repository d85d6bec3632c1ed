#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <type_traits>

#include <gmpxx.h>
#include <Eigen/Dense>

namespace Eigen {

// Exact rational scalar for Eigen dense types, per the custom-scalar recipe.
template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  typedef mpq_class Real;
  typedef mpq_class NonInteger;
  typedef mpq_class Nested;

  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }

  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100,
  };
};

}  // namespace Eigen

namespace equidyn {

using Complex = std::complex<double>;
using Rational = mpq_class;
using Integer = mpz_class;

using IMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using QMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using QVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

template <typename S>
inline constexpr bool is_exact_scalar_v = std::is_same_v<S, Rational>;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline double to_double(const Rational& q) { return q.get_d(); }
inline Complex to_complex(const Rational& q) { return Complex(q.get_d(), 0.0); }
inline Complex to_complex(const Complex& z) { return z; }

// Projective equality in float mode shares this single tolerance.
inline constexpr double kProjectiveTol = 1e-9;
// Tie window for the float canonical pivot choice.
inline constexpr double kPivotTieTol = 1e-12;
// Supported ambient dimension cap; EQUIDYN_MAX_K raises it at the CLI.
inline constexpr int kDefaultMaxK = 6;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct HolomorphyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DivisorError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct FlatError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace equidyn
