#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "equidyn/scalar.hpp"

namespace equidyn {

// Exponents of one monomial; length is n_vars, entries sum to the degree.
using ExponentVector = std::vector<int>;

inline int exponent_sum(const ExponentVector& e) {
  return std::accumulate(e.begin(), e.end(), 0);
}

/// Sparse multivariate polynomial, homogeneous of a fixed degree.
/// Zero coefficients are never stored; the zero polynomial has no terms but
/// keeps its declared degree for bookkeeping.
template <typename S>
class HomogeneousPolynomial {
 public:
  using TermMap = std::map<ExponentVector, S>;

  HomogeneousPolynomial() : n_vars_(0), degree_(0) {}
  HomogeneousPolynomial(int n_vars, int degree)
      : n_vars_(n_vars), degree_(degree) {}

  static HomogeneousPolynomial zero(int n_vars, int degree) {
    return HomogeneousPolynomial(n_vars, degree);
  }

  static HomogeneousPolynomial constant(int n_vars, const S& c) {
    HomogeneousPolynomial p(n_vars, 0);
    p.add_term(ExponentVector(n_vars, 0), c);
    return p;
  }

  static HomogeneousPolynomial variable(int n_vars, int index) {
    HomogeneousPolynomial p(n_vars, 1);
    ExponentVector e(n_vars, 0);
    e[index] = 1;
    p.add_term(e, S(1));
    return p;
  }

  static HomogeneousPolynomial monomial(int n_vars, const ExponentVector& e,
                                        const S& c) {
    HomogeneousPolynomial p(n_vars, exponent_sum(e));
    p.add_term(e, c);
    return p;
  }

  int n_vars() const { return n_vars_; }
  int degree() const { return degree_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const TermMap& terms() const { return terms_; }

  bool is_constant() const { return degree_ == 0; }

  void add_term(const ExponentVector& e, const S& c) {
    if (c == S(0)) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == S(0)) terms_.erase(it);
    }
  }

  S coefficient(const ExponentVector& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? S(0) : it->second;
  }

  // Leading term in the map's lexicographic term order.
  const std::pair<const ExponentVector, S>& leading_term() const {
    return *terms_.begin();
  }

  HomogeneousPolynomial operator-() const {
    HomogeneousPolynomial r(n_vars_, degree_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
  }

  HomogeneousPolynomial& operator+=(const HomogeneousPolynomial& o) {
    require_same_shape(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }

  HomogeneousPolynomial& operator-=(const HomogeneousPolynomial& o) {
    require_same_shape(o);
    for (const auto& [e, c] : o.terms_) add_term(e, S(-1) * c);
    return *this;
  }

  friend HomogeneousPolynomial operator+(HomogeneousPolynomial a,
                                         const HomogeneousPolynomial& b) {
    a += b;
    return a;
  }
  friend HomogeneousPolynomial operator-(HomogeneousPolynomial a,
                                         const HomogeneousPolynomial& b) {
    a -= b;
    return a;
  }

  friend HomogeneousPolynomial operator*(const HomogeneousPolynomial& a,
                                         const HomogeneousPolynomial& b) {
    if (a.n_vars_ != b.n_vars_)
      throw DimensionError("polynomial product: variable count mismatch");
    HomogeneousPolynomial r(a.n_vars_, a.degree_ + b.degree_);
    ExponentVector e(a.n_vars_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        for (int i = 0; i < a.n_vars_; ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    }
    return r;
  }

  HomogeneousPolynomial operator*(const S& c) const {
    HomogeneousPolynomial r(n_vars_, degree_);
    if (c == S(0)) return r;
    for (const auto& [e, coeff] : terms_) r.terms_.emplace(e, coeff * c);
    return r;
  }

  friend HomogeneousPolynomial operator*(const S& c,
                                         const HomogeneousPolynomial& p) {
    return p * c;
  }

  bool operator==(const HomogeneousPolynomial& o) const {
    return n_vars_ == o.n_vars_ && degree_ == o.degree_ && terms_ == o.terms_;
  }
  bool operator!=(const HomogeneousPolynomial& o) const {
    return !(*this == o);
  }

  /// Formal partial derivative with respect to variable `index`.
  HomogeneousPolynomial derivative(int index) const {
    HomogeneousPolynomial r(n_vars_, degree_ > 0 ? degree_ - 1 : 0);
    for (const auto& [e, c] : terms_) {
      if (e[index] == 0) continue;
      ExponentVector d = e;
      d[index] -= 1;
      r.add_term(d, c * S(e[index]));
    }
    return r;
  }

  template <typename T>
  T evaluate(std::span<const T> point) const {
    // Per-variable power table up to the degree.
    std::vector<std::vector<T>> powers(n_vars_);
    for (int i = 0; i < n_vars_; ++i) {
      powers[i].resize(degree_ + 1);
      powers[i][0] = T(1);
      for (int d = 1; d <= degree_; ++d) powers[i][d] = powers[i][d - 1] * point[i];
    }
    T acc = T(0);
    for (const auto& [e, c] : terms_) {
      T m = convert_coeff<T>(c);
      for (int i = 0; i < n_vars_; ++i)
        if (e[i] > 0) m *= powers[i][e[i]];
      acc += m;
    }
    return acc;
  }

  template <typename T, int Rows>
  T evaluate(const Eigen::Matrix<T, Rows, 1>& point) const {
    return evaluate(std::span<const T>(point.data(),
                                       static_cast<std::size_t>(point.size())));
  }

  /// Substitutes x_i := sum_j M(i, j) y_j; the result lives in M.cols() variables.
  HomogeneousPolynomial compose_linear(const IMatrix& m) const {
    static_assert(is_exact_scalar_v<S>, "linear composition is exact-mode only");
    if (m.rows() != n_vars_)
      throw DimensionError("compose_linear: matrix rows must equal n_vars");
    const int new_n = static_cast<int>(m.cols());
    std::vector<HomogeneousPolynomial> forms;
    forms.reserve(n_vars_);
    for (int i = 0; i < n_vars_; ++i) {
      HomogeneousPolynomial f(new_n, 1);
      for (int j = 0; j < new_n; ++j) {
        if (m(i, j) != 0) {
          ExponentVector e(new_n, 0);
          e[j] = 1;
          f.add_term(e, S(static_cast<long>(m(i, j))));
        }
      }
      forms.push_back(std::move(f));
    }
    // Power cache per variable, filled on demand.
    std::vector<std::vector<HomogeneousPolynomial>> pow_cache(n_vars_);
    auto form_power = [&](int i, int e) -> const HomogeneousPolynomial& {
      auto& cache = pow_cache[i];
      if (cache.empty()) cache.push_back(constant(new_n, S(1)));
      while (static_cast<int>(cache.size()) <= e)
        cache.push_back(cache.back() * forms[i]);
      return cache[e];
    };
    HomogeneousPolynomial r(new_n, degree_);
    for (const auto& [e, c] : terms_) {
      HomogeneousPolynomial m_term = constant(new_n, c);
      for (int i = 0; i < n_vars_; ++i)
        if (e[i] > 0) m_term = m_term * form_power(i, e[i]);
      r += m_term;
    }
    return r;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      if (!first) out << " + ";
      first = false;
      out << coeff_to_string(c);
      for (int i = 0; i < n_vars_; ++i) {
        if (e[i] == 0) continue;
        out << "*x" << (i + 1);
        if (e[i] > 1) out << "^" << e[i];
      }
    }
    return out.str();
  }

 private:
  template <typename T>
  static T convert_coeff(const S& c) {
    if constexpr (std::is_same_v<T, S>) {
      return c;
    } else {
      return T(to_complex(c));
    }
  }

  static std::string coeff_to_string(const Rational& c) { return c.get_str(); }
  static std::string coeff_to_string(const Complex& c) {
    std::ostringstream out;
    out << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)";
    return out.str();
  }

  void require_same_shape(const HomogeneousPolynomial& o) const {
    if (n_vars_ != o.n_vars_ || degree_ != o.degree_)
      throw DimensionError("polynomial sum: shape mismatch");
  }

  int n_vars_;
  int degree_;
  TermMap terms_;
};

using QPolynomial = HomogeneousPolynomial<Rational>;
using CPolynomial = HomogeneousPolynomial<Complex>;

/// Coefficients A_0..A_n of prod_i (t + v_i); A_j is the degree-j elementary
/// symmetric function of the inputs, by the one-pass product recurrence.
template <typename T>
std::vector<T> elementary_symmetric_all(std::span<const T> values) {
  std::vector<T> a;
  a.reserve(values.size() + 1);
  a.push_back(T(1));
  for (const T& v : values) {
    a.push_back(T(0));
    for (std::size_t j = a.size() - 1; j >= 1; --j) a[j] += v * a[j - 1];
  }
  return a;
}

template <typename T>
std::vector<T> elementary_symmetric_all(const std::vector<T>& values) {
  return elementary_symmetric_all(std::span<const T>(values));
}

/// All elementary symmetric polynomials A_0..A_n in n variables, A_j of degree j.
template <typename S>
std::vector<HomogeneousPolynomial<S>> elementary_symmetric_polynomials(
    int n_vars) {
  using Poly = HomogeneousPolynomial<S>;
  std::vector<Poly> a;
  a.reserve(n_vars + 1);
  a.push_back(Poly::constant(n_vars, S(1)));
  for (int i = 0; i < n_vars; ++i) {
    const Poly x = Poly::variable(n_vars, i);
    a.push_back(Poly::zero(n_vars, static_cast<int>(a.size())));
    for (std::size_t j = a.size() - 1; j >= 1; --j) {
      Poly bumped = x * a[j - 1];
      if (a[j].is_zero())
        a[j] = std::move(bumped);
      else
        a[j] += bumped;
    }
  }
  return a;
}

template <typename S>
struct LinearDivision {
  HomogeneousPolynomial<S> quotient;
  HomogeneousPolynomial<S> remainder;
  bool exact() const { return remainder.is_zero(); }
};

/// Division of p by the linear form covector . x, via synthetic division in the
/// pivot variable (the substitution-remainder scheme). Exact.
template <typename S>
LinearDivision<S> divide_by_linear(const HomogeneousPolynomial<S>& p,
                                   const IVector& covector) {
  static_assert(is_exact_scalar_v<S>, "exact division requires exact mode");
  using Poly = HomogeneousPolynomial<S>;
  const int n = p.n_vars();
  if (covector.size() != n)
    throw DimensionError("divide_by_linear: covector length mismatch");
  int pivot = -1;
  for (int i = 0; i < n; ++i)
    if (covector[i] != 0) {
      pivot = i;
      break;
    }
  if (pivot < 0) throw DivisorError("divide_by_linear: zero covector");
  const S lead(static_cast<long>(covector[pivot]));

  // covector . x = lead * (x_pivot - alpha), alpha linear in the other variables.
  Poly alpha(n, 1);
  for (int j = 0; j < n; ++j) {
    if (j == pivot || covector[j] == 0) continue;
    ExponentVector e(n, 0);
    e[j] = 1;
    alpha.add_term(e, S(static_cast<long>(-covector[j])) / lead);
  }

  // Split p by the exponent of the pivot variable.
  const int deg = p.degree();
  std::vector<Poly> slices;
  slices.reserve(deg + 1);
  for (int d = 0; d <= deg; ++d) slices.emplace_back(n, deg - d);
  for (const auto& [e, c] : p.terms()) {
    ExponentVector r = e;
    const int d = r[pivot];
    r[pivot] = 0;
    slices[d].add_term(r, c);
  }

  // Synthetic division by (x_pivot - alpha), highest slice first.
  std::vector<Poly> q_slices;
  q_slices.reserve(deg);
  for (int d = 0; d < deg; ++d) q_slices.emplace_back(n, deg - 1 - d);
  for (int d = deg; d >= 1; --d) {
    Poly qd = slices[d];
    if (d < deg) {
      Poly lifted = alpha * q_slices[d];
      if (qd.is_zero())
        qd = std::move(lifted);
      else
        qd += lifted;
    }
    q_slices[d - 1] = std::move(qd);
  }
  Poly remainder = slices[0];
  if (deg >= 1) {
    Poly lifted = alpha * q_slices[0];
    if (remainder.is_zero())
      remainder = std::move(lifted);
    else
      remainder += lifted;
  }

  Poly quotient(n, deg > 0 ? deg - 1 : 0);
  const S inv_lead = S(1) / lead;
  for (int d = 0; d < deg; ++d) {
    for (const auto& [e, c] : q_slices[d].terms()) {
      ExponentVector r = e;
      r[pivot] = d;
      quotient.add_term(r, c * inv_lead);
    }
  }
  return {std::move(quotient), std::move(remainder)};
}

/// Divides num by a product of linear forms given factored, left to right.
/// Returns the quotient, or the failing remainder as witness.
template <typename S>
struct ExactDivision {
  bool ok = false;
  HomogeneousPolynomial<S> quotient;
  HomogeneousPolynomial<S> remainder_witness;
};

template <typename S>
ExactDivision<S> poly_divide_exact(const HomogeneousPolynomial<S>& num,
                                   std::span<const IVector> linear_factors) {
  HomogeneousPolynomial<S> q = num;
  for (const IVector& c : linear_factors) {
    LinearDivision<S> step = divide_by_linear(q, c);
    if (!step.exact()) return {false, {}, std::move(step.remainder)};
    q = std::move(step.quotient);
  }
  return {true, std::move(q), {}};
}

/// Single-polynomial divisor form of the above; the divisor must be linear
/// (composite divisors are passed pre-factored).
template <typename S>
ExactDivision<S> poly_divide_exact(const HomogeneousPolynomial<S>& num,
                                   const HomogeneousPolynomial<S>& div) {
  if (div.is_zero()) throw DivisorError("poly_divide_exact: zero divisor");
  if (div.degree() != 1)
    throw DivisorError(
        "poly_divide_exact: divisor must be a linear form or a factored "
        "product of linear forms");
  // Linear forms with rational coefficients are rescaled to integer covectors.
  Integer den(1);
  for (const auto& [e, c] : div.terms()) den = lcm(den, c.get_den());
  IVector covector = IVector::Zero(div.n_vars());
  for (const auto& [e, c] : div.terms()) {
    int idx = 0;
    for (int i = 0; i < div.n_vars(); ++i)
      if (e[i] == 1) idx = i;
    Rational scaled = c * Rational(den);
    covector[idx] = static_cast<std::int64_t>(scaled.get_num().get_si());
  }
  std::vector<IVector> factors{covector};
  ExactDivision<S> r = poly_divide_exact(num, std::span<const IVector>(factors));
  // covector = den * div, so the quotient against div picks up the factor den.
  if (r.ok) r.quotient = r.quotient * S(Rational(den));
  return r;
}

}  // namespace equidyn
