#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

#include "equidyn/arrangement.hpp"
#include "equidyn/map.hpp"
#include "equidyn/projective.hpp"
#include "equidyn/rng.hpp"

namespace equidyn {

/// Runs fn(begin, end) over [0, total) split into contiguous chunks, one per
/// thread. Work per index must be independent; results written to per-index
/// slots are identical for any thread count.
inline void parallel_for(std::size_t total, int n_threads,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
  if (total == 0) return;
  const int workers =
      std::max(1, std::min<int>(n_threads, static_cast<int>(total)));
  if (workers == 1) {
    fn(0, total);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (total + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::size_t begin = static_cast<std::size_t>(w) * chunk;
    const std::size_t end = std::min(total, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

inline CPoint canonical_image(const CompiledMap& map, const CPoint& x) {
  CVector y = map.apply(x.coords);
  bool all_zero = true;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const Complex v = y[i];
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NumericError("orbit step produced a non-finite coordinate");
    if (v != Complex(0.0, 0.0)) all_zero = false;
  }
  if (all_zero)
    throw HolomorphyError("orbit step hit an indeterminacy (zero image)");
  CPoint out;
  out.coords = std::move(y);
  out.canonicalize();
  return out;
}

// ---------------------------------------------------------------------------
// Orbits

struct OrbitRecord {
  CPoint start;
  std::vector<CPoint> points;                // n+1 entries including the start
  std::vector<double> dist_to_critical;      // per point, when recorded
  double min_dist_to_critical = 1.0;
};

inline OrbitRecord iterate(const CompiledMap& map, const CPoint& start, int n,
                           bool record_critical_distance = false,
                           const std::vector<Hyperplane>* arrangement = nullptr) {
  if (n < 0) throw DimensionError("iterate: negative step count");
  OrbitRecord orbit;
  orbit.start = start.canonical ? start : start.canonicalized();
  orbit.points.reserve(n + 1);
  orbit.points.push_back(orbit.start);
  for (int t = 0; t < n; ++t)
    orbit.points.push_back(canonical_image(map, orbit.points.back()));
  if (record_critical_distance) {
    if (arrangement == nullptr)
      throw DimensionError("iterate: arrangement needed to record distances");
    orbit.dist_to_critical.reserve(orbit.points.size());
    for (const CPoint& p : orbit.points) {
      const double d = min_distance_to_arrangement(p.coords, *arrangement);
      orbit.dist_to_critical.push_back(d);
      orbit.min_dist_to_critical = std::min(orbit.min_dist_to_critical, d);
    }
  }
  return orbit;
}

// ---------------------------------------------------------------------------
// Basin classification

struct BasinLabel {
  bool captured = false;
  int attractor = -1;
  int iterations = 0;  // max_iter when unresolved

  static BasinLabel captured_at(int attractor, int iterations) {
    return {true, attractor, iterations};
  }
  static BasinLabel unresolved(int max_iter) { return {false, -1, max_iter}; }
};

/// Iterates until the orbit is within capture_tol of an attractor AND the next
/// step moves strictly closer; the confirmation step rejects false captures
/// near the Julia set.
inline BasinLabel classify_basin(const CompiledMap& map, const CPoint& start,
                                 const std::vector<CPoint>& attractors,
                                 int max_iter, double capture_tol) {
  CPoint x = start.canonical ? start : start.canonicalized();
  for (int t = 0; t <= max_iter; ++t) {
    double best = 2.0;
    int best_idx = -1;
    for (std::size_t a = 0; a < attractors.size(); ++a) {
      const double d = chordal_distance(x.coords, attractors[a].coords);
      if (d < best) {
        best = d;
        best_idx = static_cast<int>(a);
      }
    }
    if (t == max_iter) break;
    CPoint next = canonical_image(map, x);
    if (best < capture_tol) {
      const double d_next = chordal_distance(next.coords, attractors[best_idx].coords);
      // Exactly-pinned orbits (d_next == 0 within noise) count as captured.
      if (d_next < best || d_next < 1e-15)
        return BasinLabel::captured_at(best_idx, t);
    }
    x = std::move(next);
  }
  return BasinLabel::unresolved(max_iter);
}

// ---------------------------------------------------------------------------
// Monte Carlo basin survey

struct SurveyParams {
  std::uint64_t sample_count = 10000;
  std::uint64_t seed = 0;
  int max_iter = 5000;
  double capture_tol = 1e-8;
  int n_threads = 1;
};

struct BasinReport {
  int k = 0;
  int degree = 0;
  std::uint64_t sample_count = 0;
  std::uint64_t seed = 0;
  int max_iter = 0;
  double capture_tol = 0.0;
  std::vector<std::int64_t> per_attractor_counts;
  std::vector<std::int64_t> per_attractor_iteration_sums;
  std::int64_t unresolved_count = 0;
  double mean_capture_iterations = 0.0;
  double wall_ms = 0.0;
};

/// Fubini-Study-uniform sample of P^k from the per-sample stream (seed, index).
inline CPoint sample_point(int k, std::uint64_t seed, std::uint64_t index) {
  SampleRng rng(seed, index);
  CPoint p;
  p.coords = rng.gaussian_vector(k + 1);
  p.canonicalize();
  return p;
}

/// Classifies sample_count FS-uniform points. Deterministic for fixed
/// (seed, parameters) regardless of thread count: sample i derives its own RNG
/// stream and writes to its own slot; aggregation is integer-exact.
inline BasinReport basin_survey(const CompiledMap& map,
                                const std::vector<CPoint>& attractors,
                                const SurveyParams& params) {
  const auto t0 = std::chrono::steady_clock::now();
  BasinReport report;
  report.k = map.k();
  report.degree = map.degree();
  report.sample_count = params.sample_count;
  report.seed = params.seed;
  report.max_iter = params.max_iter;
  report.capture_tol = params.capture_tol;
  report.per_attractor_counts.assign(attractors.size(), 0);
  report.per_attractor_iteration_sums.assign(attractors.size(), 0);

  std::vector<BasinLabel> labels(params.sample_count);
  parallel_for(params.sample_count, params.n_threads,
               [&](std::size_t begin, std::size_t end) {
                 for (std::size_t i = begin; i < end; ++i) {
                   const CPoint p = sample_point(map.k(), params.seed, i);
                   labels[i] = classify_basin(map, p, attractors,
                                              params.max_iter, params.capture_tol);
                 }
               });

  std::int64_t captured = 0;
  std::int64_t iter_total = 0;
  for (const BasinLabel& label : labels) {
    if (label.captured) {
      report.per_attractor_counts[label.attractor] += 1;
      report.per_attractor_iteration_sums[label.attractor] += label.iterations;
      captured += 1;
      iter_total += label.iterations;
    } else {
      report.unresolved_count += 1;
    }
  }
  report.mean_capture_iterations =
      captured > 0 ? static_cast<double>(iter_total) / static_cast<double>(captured)
                   : 0.0;
  report.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  return report;
}

}  // namespace equidyn
