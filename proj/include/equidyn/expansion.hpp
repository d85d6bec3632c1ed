#pragma once

#include <Eigen/SVD>
#include <algorithm>
#include <chrono>
#include <optional>
#include <vector>

#include "equidyn/arrangement.hpp"
#include "equidyn/dynamics.hpp"
#include "equidyn/map.hpp"

namespace equidyn {

struct ExpansionProbeResult {
  double delta = 0.0;
  int n_steps = 0;
  std::uint64_t sample_count = 0;
  std::uint64_t seed = 0;
  std::int64_t surviving_orbits = 0;
  bool empty_result = false;  // no orbit stayed delta-clear of the critical set
  std::vector<double> growth_exponents;  // per surviving orbit, sample order
  double wall_ms = 0.0;
};

/// Chart-to-chart derivative of the map along one orbit step: source chart
/// drops the pivot of x (canonical, pivot coordinate 1), target chart drops
/// the pivot of the image. Entry (l, m) over charts is
///   [dg_l/dx_m * g_j - g_l * dg_j/dx_m] / g_j^2 at x, with j the image pivot.
inline CMatrix chart_step_derivative(const CompiledJacobian& jac,
                                     const CVector& x, const CVector& image_raw,
                                     int source_pivot, int target_pivot) {
  const int n = static_cast<int>(x.size());
  const CMatrix partials = jac.at(x);
  const Complex gj = image_raw[target_pivot];
  const Complex gj2 = gj * gj;
  CMatrix d(n - 1, n - 1);
  int row = 0;
  for (int l = 0; l < n; ++l) {
    if (l == target_pivot) continue;
    int col = 0;
    for (int m = 0; m < n; ++m) {
      if (m == source_pivot) continue;
      d(row, col) =
          (partials(l, m) * gj - image_raw[l] * partials(target_pivot, m)) / gj2;
      ++col;
    }
    ++row;
  }
  return d;
}

/// Growth exponent (1/n) log sigma_min of the accumulated chart derivative
/// along an orbit that keeps all of its first n_steps iterates at least delta
/// away from every arrangement hyperplane; nullopt when the orbit is excluded.
inline std::optional<double> probe_orbit(const CompiledMap& map,
                                         const CompiledJacobian& jac,
                                         const std::vector<Hyperplane>& arrangement,
                                         const CPoint& start, int n_steps,
                                         double delta) {
  if (delta <= 0.0) throw DimensionError("probe_orbit: delta must be positive");
  CPoint x = start.canonical ? start : start.canonicalized();
  if (min_distance_to_arrangement(x.coords, arrangement) < delta)
    return std::nullopt;

  const int n = map.k() + 1;
  CMatrix acc = CMatrix::Identity(n - 1, n - 1);
  double log_scale = 0.0;

  for (int t = 0; t < n_steps; ++t) {
    const CVector image_raw = map.apply(x.coords);
    CPoint next;
    next.coords = image_raw;
    next.canonicalize();
    if (min_distance_to_arrangement(next.coords, arrangement) < delta)
      return std::nullopt;

    const CMatrix step = chart_step_derivative(jac, x.coords, image_raw,
                                               x.pivot_index(), next.pivot_index());
    acc = step * acc;
    const double norm = acc.norm();
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw NumericError("probe_orbit: derivative product degenerated");
    acc /= norm;
    log_scale += std::log(norm);

    // Numerically periodic orbits are frozen so roundoff cannot compound.
    if (chordal_distance(next, x) < 1e-12) continue;
    x = std::move(next);
  }

  double sigma_min;
  if (acc.rows() == 1) {
    sigma_min = std::abs(acc(0, 0));
  } else {
    Eigen::JacobiSVD<CMatrix> svd(acc);
    sigma_min = svd.singularValues()[acc.rows() - 1];
  }
  if (!(sigma_min > 0.0))
    throw NumericError("probe_orbit: singular derivative product");
  return (log_scale + std::log(sigma_min)) / static_cast<double>(n_steps);
}

struct ProbeParams {
  std::uint64_t sample_count = 10000;
  std::uint64_t seed = 0;
  int n_steps = 40;
  double delta = 0.05;
  int n_threads = 1;
};

/// Samples FS-uniform points and probes each; per-sample RNG streams keep the
/// result independent of scheduling.
inline ExpansionProbeResult expansion_probe(const CompiledMap& map,
                                            const QMap& exact_map,
                                            const std::vector<Hyperplane>& arrangement,
                                            const ProbeParams& params) {
  const auto t0 = std::chrono::steady_clock::now();
  const CompiledJacobian jac(exact_map);

  std::vector<std::optional<double>> slots(params.sample_count);
  parallel_for(params.sample_count, params.n_threads,
               [&](std::size_t begin, std::size_t end) {
                 for (std::size_t i = begin; i < end; ++i) {
                   const CPoint p = sample_point(map.k(), params.seed, i);
                   slots[i] = probe_orbit(map, jac, arrangement, p,
                                          params.n_steps, params.delta);
                 }
               });

  ExpansionProbeResult out;
  out.delta = params.delta;
  out.n_steps = params.n_steps;
  out.sample_count = params.sample_count;
  out.seed = params.seed;
  for (const auto& slot : slots)
    if (slot) out.growth_exponents.push_back(*slot);
  out.surviving_orbits = static_cast<std::int64_t>(out.growth_exponents.size());
  out.empty_result = out.growth_exponents.empty();
  out.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return out;
}

}  // namespace equidyn
