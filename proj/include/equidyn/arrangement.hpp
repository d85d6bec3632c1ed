#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "equidyn/linalg.hpp"
#include "equidyn/projective.hpp"

namespace equidyn {

/// One transposition hyperplane: {x_i = x_j} (Diff) or {x_i = 0} (Coord).
/// Indices are 1-based, matching the coordinate names x1..x_{k+1}.
struct Hyperplane {
  enum class Kind { Diff, Coord };

  Kind kind;
  int i = 0;
  int j = 0;  // unused for Coord
  IVector covector;

  static Hyperplane diff(int k, int i, int j) {
    if (!(1 <= i && i < j && j <= k + 1))
      throw DimensionError("Hyperplane::diff: need 1 <= i < j <= k+1");
    Hyperplane h{Kind::Diff, i, j, IVector::Zero(k + 1)};
    h.covector[i - 1] = 1;
    h.covector[j - 1] = -1;
    return h;
  }

  static Hyperplane coord(int k, int i) {
    if (!(1 <= i && i <= k + 1))
      throw DimensionError("Hyperplane::coord: need 1 <= i <= k+1");
    Hyperplane h{Kind::Coord, i, 0, IVector::Zero(k + 1)};
    h.covector[i - 1] = 1;
    return h;
  }

  std::string label() const {
    if (kind == Kind::Coord) return "x" + std::to_string(i) + "=0";
    return "x" + std::to_string(i) + "=x" + std::to_string(j);
  }

  bool operator==(const Hyperplane& o) const {
    return kind == o.kind && i == o.i && j == o.j;
  }
};

/// All (k+1)(k+2)/2 transposition hyperplanes: the Coord family then the Diff
/// family in lexicographic index order.
inline std::vector<Hyperplane> hyperplane_arrangement(int k) {
  if (k < 1) throw DimensionError("hyperplane_arrangement: k must be >= 1");
  std::vector<Hyperplane> hs;
  hs.reserve((k + 1) * (k + 2) / 2);
  for (int i = 1; i <= k + 1; ++i) hs.push_back(Hyperplane::coord(k, i));
  for (int i = 1; i <= k + 1; ++i)
    for (int j = i + 1; j <= k + 1; ++j) hs.push_back(Hyperplane::diff(k, i, j));
  return hs;
}

/// Superattracting fixed points are exactly the 0/1 coordinate patterns, not
/// all zero, one representative each; listed in lexicographic coordinate order.
inline std::vector<QPoint> enumerate_superattractors(int k) {
  if (k < 1) throw DimensionError("enumerate_superattractors: k must be >= 1");
  const int n = k + 1;
  std::vector<QPoint> points;
  points.reserve((1u << n) - 1);
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    QPoint p;
    p.coords.resize(n);
    for (int i = 0; i < n; ++i)
      p.coords[i] = Rational(((mask >> (n - 1 - i)) & 1u) ? 1 : 0);
    p.canonicalize();
    points.push_back(std::move(p));
  }
  return points;
}

/// An intersection flat L^m of the arrangement, parametrized by an integer
/// embedding P^m -> P^k of full column rank.
struct Flat {
  int m = 0;
  IMatrix embedding;                  // (k+1) x (m+1)
  std::vector<std::size_t> containing;  // arrangement indices containing the flat

  static Flat full(int k) {
    Flat f;
    f.m = k;
    f.embedding = IMatrix::Identity(k + 1, k + 1);
    return f;
  }
};

inline bool hyperplane_contains_flat(const Hyperplane& h, const IMatrix& embedding) {
  for (Eigen::Index c = 0; c < embedding.cols(); ++c) {
    std::int64_t dot = 0;
    for (Eigen::Index r = 0; r < embedding.rows(); ++r)
      dot += h.covector[r] * embedding(r, c);
    if (dot != 0) return false;
  }
  return true;
}

/// Common intersection of a hyperplane subset as a Flat. The embedding columns
/// form an integer column-reduced kernel basis (lowest-index pivots). Throws
/// FlatError when the intersection is empty in P^k.
inline Flat flat_from_hyperplanes(int k,
                                  const std::vector<std::size_t>& subset,
                                  const std::vector<Hyperplane>& arrangement) {
  if (subset.empty())
    throw FlatError("flat_from_hyperplanes: empty hyperplane subset");
  QMatrix covectors(static_cast<int>(subset.size()), k + 1);
  for (std::size_t r = 0; r < subset.size(); ++r)
    for (int c = 0; c <= k; ++c)
      covectors(static_cast<int>(r), c) =
          Rational(static_cast<long>(arrangement[subset[r]].covector[c]));
  const int rank = exact_rank(covectors);
  if (rank == k + 1)
    throw FlatError("flat_from_hyperplanes: intersection is empty in P^k");

  Flat flat;
  flat.m = k - rank;
  flat.embedding = integer_kernel_basis(covectors);
  for (std::size_t idx = 0; idx < arrangement.size(); ++idx)
    if (hyperplane_contains_flat(arrangement[idx], flat.embedding))
      flat.containing.push_back(idx);
  return flat;
}

/// Chordal distance from a point to a hyperplane: |<covector, x>| / (|c||x|).
inline double distance_to_hyperplane(const CVector& x, const Hyperplane& h) {
  Complex dot(0.0, 0.0);
  double cnorm2 = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    dot += static_cast<double>(h.covector[i]) * x[i];
    cnorm2 += static_cast<double>(h.covector[i] * h.covector[i]);
  }
  return std::abs(dot) / std::sqrt(cnorm2 * x.squaredNorm());
}

inline double min_distance_to_arrangement(const CVector& x,
                                          const std::vector<Hyperplane>& hs) {
  double best = 1.0;
  for (const Hyperplane& h : hs) best = std::min(best, distance_to_hyperplane(x, h));
  return best;
}

}  // namespace equidyn
