#pragma once

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "equidyn/dynamics.hpp"
#include "equidyn/expansion.hpp"
#include "equidyn/fixed_points.hpp"
#include "equidyn/render.hpp"
#include "equidyn/verify.hpp"

namespace equidyn {

using nlohmann::json;

inline int max_k_from_env() {
  if (const char* env = std::getenv("EQUIDYN_MAX_K")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return kDefaultMaxK;
}

struct RunConfig {
  std::string command;
  int k = 1;
  std::uint64_t seed = 0;
  std::uint64_t sample_count = 10000;
  int max_iter = 5000;
  double capture_tol = 1e-8;
  double delta = 0.05;
  int n_steps = 40;
  int threads = static_cast<int>(
      std::max(1u, std::thread::hardware_concurrency()));
  std::string output_path;
  std::string hyperplanes;
  std::string anchors;
  RenderWindow window;
  int width = 512;
  int height = 512;
  int max_k = max_k_from_env();

  void validate() const {
    if (k < 1 || k > max_k)
      throw DimensionError("k must be in [1, " + std::to_string(max_k) + "]");
    if (capture_tol <= 0.0) throw DimensionError("capture tolerance must be positive");
    if (delta <= 0.0) throw DimensionError("delta must be positive");
    if (max_iter < 0) throw DimensionError("max-iter must be nonnegative");
    if (n_steps < 0) throw DimensionError("steps must be nonnegative");
    if (threads < 1) throw DimensionError("threads must be at least 1");
    if (width < 1 || height < 1) throw DimensionError("resolution must be positive");
    if (static_cast<std::int64_t>(width) * height > 100000000)
      throw DimensionError("image exceeds the 10^8 pixel cap");
    if (window.re_min >= window.re_max || window.im_min >= window.im_max)
      throw DimensionError("window must be nonempty");
  }
};

// ---------------------------------------------------------------------------
// Small parsers for the CLI surface

inline std::string point_label(const QPoint& p) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < p.coords.size(); ++i) {
    if (i) out += ":";
    out += p.coords[i].get_str();
  }
  return out + "]";
}

/// "c:1" and "d:1,2" items in a comma list, e.g. "c:1,d:2,3".
inline std::vector<std::size_t> parse_hyperplane_spec(
    const std::string& spec, int k, const std::vector<Hyperplane>& arrangement) {
  std::vector<std::size_t> subset;
  std::size_t pos = 0;
  auto read_int = [&](void) -> int {
    std::size_t start = pos;
    while (pos < spec.size() && std::isdigit(static_cast<unsigned char>(spec[pos])))
      ++pos;
    if (start == pos) throw DimensionError("hyperplane spec: expected an index");
    return std::stoi(spec.substr(start, pos - start));
  };
  auto find_hyperplane = [&](const Hyperplane& want) -> std::size_t {
    for (std::size_t idx = 0; idx < arrangement.size(); ++idx)
      if (arrangement[idx] == want) return idx;
    throw DimensionError("hyperplane spec: not in the arrangement");
  };
  while (pos < spec.size()) {
    if (spec[pos] == ',' || spec[pos] == ' ' || spec[pos] == ';') {
      ++pos;
      continue;
    }
    const char kind = spec[pos];
    if ((kind != 'c' && kind != 'd') || pos + 1 >= spec.size() ||
        spec[pos + 1] != ':')
      throw DimensionError("hyperplane spec: expected c:<i> or d:<i>,<j>");
    pos += 2;
    const int i = read_int();
    if (kind == 'c') {
      subset.push_back(find_hyperplane(Hyperplane::coord(k, i)));
    } else {
      if (pos >= spec.size() || spec[pos] != ',')
        throw DimensionError("hyperplane spec: d needs two indices");
      ++pos;
      const int j = read_int();
      subset.push_back(find_hyperplane(Hyperplane::diff(k, i, j)));
    }
  }
  if (subset.empty()) throw DimensionError("hyperplane spec: empty");
  return subset;
}

/// "1", "-2.5", "3i", "1+2i", "0.5-1.5i".
inline Complex parse_complex(const std::string& text) {
  const std::string s = [&] {
    std::string t;
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    return t;
  }();
  if (s.empty()) throw DimensionError("empty complex literal");
  std::size_t split = std::string::npos;
  for (std::size_t i = 1; i < s.size(); ++i)
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E')
      split = i;
  try {
    if (s.back() == 'i') {
      if (split == std::string::npos) {
        std::string imag = s.substr(0, s.size() - 1);
        if (imag.empty() || imag == "+" || imag == "-") imag += "1";
        return Complex(0.0, std::stod(imag));
      }
      std::string imag = s.substr(split, s.size() - 1 - split);
      if (imag == "+" || imag == "-") imag += "1";
      return Complex(std::stod(s.substr(0, split)), std::stod(imag));
    }
    if (split != std::string::npos)
      throw DimensionError("complex literal missing the trailing i: " + text);
    return Complex(std::stod(s), 0.0);
  } catch (const std::logic_error&) {
    throw DimensionError("bad complex literal: " + text);
  }
}

/// Two anchor points "a_1,..,a_{k+1};b_1,..,b_{k+1}".
inline std::pair<CVector, CVector> parse_anchors(const std::string& text, int k) {
  const std::size_t semi = text.find(';');
  if (semi == std::string::npos)
    throw DimensionError("anchors: expected two points separated by ';'");
  auto parse_point = [&](const std::string& part) {
    std::vector<Complex> coords;
    std::stringstream ss(part);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) coords.push_back(parse_complex(item));
    if (static_cast<int>(coords.size()) != k + 1)
      throw DimensionError("anchors: each point needs k+1 coordinates");
    CVector v(k + 1);
    for (int i = 0; i <= k; ++i) v[i] = coords[i];
    if (v.norm() == 0.0) throw DimensionError("anchors: zero point");
    return v;
  };
  return {parse_point(text.substr(0, semi)), parse_point(text.substr(semi + 1))};
}

inline RenderWindow parse_window(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) vals.push_back(std::stod(item));
  if (vals.size() != 4)
    throw DimensionError("window: expected re_min,re_max,im_min,im_max");
  return {vals[0], vals[1], vals[2], vals[3]};
}

inline std::pair<int, int> parse_resolution(const std::string& text) {
  const std::size_t x = text.find('x');
  if (x == std::string::npos) throw DimensionError("resolution: expected WxH");
  return {std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
}

// ---------------------------------------------------------------------------
// Report builders (pure; the cmd_* wrappers add IO and exit codes)

namespace detail_cli {
inline double ms_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}
}  // namespace detail_cli

/// Runs the whole certificate family: equivariance over every group element,
/// invariance of every hyperplane, the critical factorization, and the
/// superattractor suite.
inline json verify_report(const RunConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const QMap map = build_equivariant_map(config.k, config.max_k);
  const auto arrangement = hyperplane_arrangement(config.k);
  const auto group = generate_group(config.k, config.max_k);
  const auto attractors = enumerate_superattractors(config.k);

  json certs = json::array();
  bool all_pass = true;
  auto push = [&](const std::string& name, bool pass, const std::string& detail,
                  double ms) {
    certs.push_back(
        {{"name", name}, {"pass", pass}, {"detail", detail}, {"ms", ms}});
    all_pass = all_pass && pass;
  };

  for (const GroupElement& r : group) {
    const auto tc = std::chrono::steady_clock::now();
    const EquivarianceResult res = check_equivariance(map, r);
    push("equivariance:" + r.word, res.ok,
         res.ok ? "scale=" + res.scale.get_str() : res.witness,
         detail_cli::ms_since(tc));
  }
  for (const Hyperplane& h : arrangement) {
    const auto tc = std::chrono::steady_clock::now();
    const InvarianceCertificate res = verify_invariant_hyperplane(map, h);
    push("invariance:" + h.label(), res.ok,
         res.ok ? "quotient_degree=" + std::to_string(res.quotient_degree)
                : res.witness,
         detail_cli::ms_since(tc));
  }
  {
    const auto tc = std::chrono::steady_clock::now();
    if (config.k <= 3) {
      const CriticalFactorization res =
          verify_critical_factorization(map, arrangement);
      push("critical-factorization", res.ok,
           res.ok ? "constant=" + res.constant.get_str() + ", all multiplicities 2"
                  : res.witness,
           detail_cli::ms_since(tc));
    } else {
      const std::vector<double> fits =
          numeric_critical_exponents(map, arrangement, config.seed);
      for (std::size_t i = 0; i < fits.size(); ++i) {
        const bool ok = std::abs(fits[i] - 2.0) <= 0.1;
        push("critical-exponent:" + arrangement[i].label(), ok,
             "fit=" + std::to_string(fits[i]), 0.0);
      }
    }
  }
  for (const QPoint& p : attractors) {
    const auto tc = std::chrono::steady_clock::now();
    const SuperattractionCertificate res = verify_superattracting(map, p);
    push("superattracting:" + point_label(p), res.ok(),
         res.ok() ? "fixed, chart derivative zero" : res.witness,
         detail_cli::ms_since(tc));
  }

  return {{"command", "verify"},
          {"k", config.k},
          {"degree", map.degree},
          {"group_order", group.size()},
          {"hyperplanes", arrangement.size()},
          {"attractors", attractors.size()},
          {"certificates", certs},
          {"pass", all_pass},
          {"wall_ms", detail_cli::ms_since(t0)}};
}

inline json basins_report(const RunConfig& config) {
  const QMap map = build_equivariant_map(config.k, config.max_k);
  const CompiledMap compiled(map);
  const auto exact_attractors = enumerate_superattractors(config.k);
  std::vector<CPoint> attractors;
  attractors.reserve(exact_attractors.size());
  for (const QPoint& p : exact_attractors) attractors.push_back(to_float(p));

  SurveyParams params;
  params.sample_count = config.sample_count;
  params.seed = config.seed;
  params.max_iter = config.max_iter;
  params.capture_tol = config.capture_tol;
  params.n_threads = config.threads;
  const BasinReport report = basin_survey(compiled, attractors, params);

  json attractor_rows = json::array();
  for (std::size_t a = 0; a < attractors.size(); ++a) {
    const std::int64_t count = report.per_attractor_counts[a];
    const double mean_iters =
        count > 0 ? static_cast<double>(report.per_attractor_iteration_sums[a]) /
                        static_cast<double>(count)
                  : 0.0;
    attractor_rows.push_back({{"point", point_label(exact_attractors[a])},
                              {"count", count},
                              {"mean_iters", mean_iters}});
  }
  return {{"command", "basins"},
          {"k", config.k},
          {"degree", map.degree},
          {"seed", config.seed},
          {"samples", config.sample_count},
          {"max_iter", config.max_iter},
          {"capture_tol", config.capture_tol},
          {"attractors", attractor_rows},
          {"unresolved", report.unresolved_count},
          {"mean_capture_iterations", report.mean_capture_iterations},
          {"wall_ms", report.wall_ms}};
}

/// Restriction report: coefficients, degree, induced critical set, and the
/// certificate suite run intrinsically on the flat (induced equivariance,
/// induced invariance, critical factorization, superattractors).
inline json restrict_report(const RunConfig& config, bool* any_failure) {
  const auto t0 = std::chrono::steady_clock::now();
  const QMap map = build_equivariant_map(config.k, config.max_k);
  const auto arrangement = hyperplane_arrangement(config.k);
  const auto subset = parse_hyperplane_spec(config.hyperplanes, config.k, arrangement);
  const Flat flat = flat_from_hyperplanes(config.k, subset, arrangement);

  json out = {{"command", "restrict"},
              {"k", config.k},
              {"flat",
               {{"m", flat.m},
                {"defining", json::array()},
                {"containing", json::array()}}}};
  for (std::size_t idx : subset)
    out["flat"]["defining"].push_back(arrangement[idx].label());
  for (std::size_t idx : flat.containing)
    out["flat"]["containing"].push_back(arrangement[idx].label());
  json embedding = json::array();
  for (Eigen::Index r = 0; r < flat.embedding.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < flat.embedding.cols(); ++c)
      row.push_back(flat.embedding(r, c));
    embedding.push_back(row);
  }
  out["flat"]["embedding"] = embedding;

  bool all_pass = true;
  if (flat.m == 0) {
    // A point flat: report it as a superattracting fixed point.
    QPoint p;
    p.coords.resize(config.k + 1);
    for (int i = 0; i <= config.k; ++i)
      p.coords[i] = Rational(static_cast<long>(flat.embedding(i, 0)));
    p.canonicalize();
    const SuperattractionCertificate cert = verify_superattracting(map, p);
    out["point"] = point_label(p);
    out["superattracting"] = cert.ok();
    all_pass = cert.ok();
  } else {
    const RestrictionResult res = restrict_map(map, flat, arrangement);
    json comps = json::array();
    for (const auto& c : res.restricted.components) comps.push_back(c.to_string());
    out["restricted"] = {{"degree", res.restricted.degree},
                         {"components", comps},
                         {"stripped_degree", res.stripped_degree},
                         {"identity_scale", res.identity_scale.get_str()}};
    out["remark_witness"] = {
        {"restricted_degree", res.restricted.degree},
        {"equivariant_degree_for_m", flat.m + 3},
        {"not_conjugate", res.restricted.degree != flat.m + 3}};

    json certs = json::array();
    auto push = [&](const std::string& name, bool pass, const std::string& detail) {
      certs.push_back({{"name", name}, {"pass", pass}, {"detail", detail}});
      all_pass = all_pass && pass;
    };

    // Induced stabilizer action, deduplicated projectively.
    const auto group = generate_group(config.k, config.max_k);
    std::vector<IMatrix> induced;
    for (const GroupElement& r : group) {
      const auto m = induce_on_flat(r, flat);
      if (!m) continue;
      bool known = false;
      for (const IMatrix& seen : induced)
        if (detail::matrices_equal(seen, *m)) known = true;
      if (!known) induced.push_back(*m);
    }
    out["induced_group_order"] = induced.size();
    for (std::size_t i = 0; i < induced.size(); ++i) {
      const GroupElement elem{induced[i], "induced#" + std::to_string(i)};
      const EquivarianceResult res_eq = check_equivariance(res.restricted, elem);
      push("equivariance:induced#" + std::to_string(i), res_eq.ok,
           res_eq.ok ? "scale=" + res_eq.scale.get_str() : res_eq.witness);
    }

    // Induced arrangement: invariance and the critical factorization.
    const auto forms = induced_arrangement(flat, arrangement);
    std::vector<IVector> covectors;
    json induced_forms = json::array();
    for (const InducedForm& f : forms) {
      covectors.push_back(f.covector);
      std::string label;
      for (Eigen::Index c = 0; c < f.covector.size(); ++c) {
        if (f.covector[c] == 0) continue;
        if (!label.empty()) label += f.covector[c] > 0 ? "+" : "-";
        else if (f.covector[c] < 0) label += "-";
        if (std::abs(f.covector[c]) != 1)
          label += std::to_string(std::abs(f.covector[c])) + "*";
        label += "y" + std::to_string(c + 1);
      }
      json ambient = json::array();
      for (std::size_t idx : f.ambient) ambient.push_back(arrangement[idx].label());
      induced_forms.push_back({{"form", label + "=0"}, {"ambient", ambient}});

      QPolynomial pullback =
          QPolynomial::zero(flat.m + 1, res.restricted.degree);
      for (int i = 0; i <= flat.m; ++i)
        if (f.covector[i] != 0)
          pullback += res.restricted.components[i] *
                      Rational(static_cast<long>(f.covector[i]));
      const auto div = divide_by_linear(pullback, f.covector);
      push("invariance:" + label + "=0", div.exact(),
           div.exact() ? "quotient_degree=" + std::to_string(div.quotient.degree())
                       : "remainder " + div.remainder.to_string());
    }
    out["induced_arrangement"] = induced_forms;

    if (flat.m <= 3) {
      const QPolynomial det = jacobian_det_poly(res.restricted);
      const CriticalFactorization fact = factor_into_linear_forms(det, covectors);
      push("critical-factorization", fact.ok,
           fact.ok ? "constant=" + fact.constant.get_str() : fact.witness);
      if (fact.ok) {
        json crit = json::array();
        for (std::size_t i = 0; i < forms.size(); ++i) {
          json entry = {{"form", induced_forms[i]["form"]},
                        {"multiplicity", fact.multiplicities[i]}};
          if (flat.m == 1) {
            // A linear form on P^1 vanishes at a single point.
            QPoint zero;
            zero.coords.resize(2);
            zero.coords[0] = Rational(static_cast<long>(forms[i].covector[1]));
            zero.coords[1] = Rational(static_cast<long>(-forms[i].covector[0]));
            zero.canonicalize();
            entry["point"] = point_label(zero);
            QPoint ambient_pt;
            ambient_pt.coords.resize(config.k + 1);
            for (int r = 0; r <= config.k; ++r)
              ambient_pt.coords[r] =
                  Rational(static_cast<long>(flat.embedding(r, 0))) * zero.coords[0] +
                  Rational(static_cast<long>(flat.embedding(r, 1))) * zero.coords[1];
            ambient_pt.canonicalize();
            entry["ambient_point"] = point_label(ambient_pt);
          }
          crit.push_back(entry);
        }
        out["critical_set"] = crit;
      }
    }

    // Superattractors of the restricted map.
    const auto sub_attractors = enumerate_superattractors(flat.m);
    for (const QPoint& p : sub_attractors) {
      const SuperattractionCertificate cert =
          verify_superattracting(res.restricted, p);
      push("superattracting:" + point_label(p), cert.ok(),
           cert.ok() ? "fixed, chart derivative zero" : cert.witness);
    }
    out["certificates"] = certs;
  }

  out["pass"] = all_pass;
  out["wall_ms"] = detail_cli::ms_since(t0);
  if (any_failure) *any_failure = !all_pass;
  return out;
}

inline json probe_report(const RunConfig& config) {
  const QMap map = build_equivariant_map(config.k, config.max_k);
  const CompiledMap compiled(map);
  const auto arrangement = hyperplane_arrangement(config.k);

  ProbeParams params;
  params.sample_count = config.sample_count;
  params.seed = config.seed;
  params.n_steps = config.n_steps;
  params.delta = config.delta;
  params.n_threads = config.threads;
  const ExpansionProbeResult res =
      expansion_probe(compiled, map, arrangement, params);

  json out = {{"command", "probe"},
              {"k", config.k},
              {"degree", map.degree},
              {"delta", res.delta},
              {"steps", res.n_steps},
              {"samples", res.sample_count},
              {"seed", res.seed},
              {"surviving", res.surviving_orbits},
              {"empty_result", res.empty_result},
              {"wall_ms", res.wall_ms}};
  if (!res.empty_result) {
    std::vector<double> sorted = res.growth_exponents;
    std::sort(sorted.begin(), sorted.end());
    out["min_exponent"] = sorted.front();
    out["median_exponent"] = sorted[sorted.size() / 2];
    out["max_exponent"] = sorted.back();
  } else {
    out["min_exponent"] = nullptr;
    out["median_exponent"] = nullptr;
    out["max_exponent"] = nullptr;
  }
  json orbits = json::array();
  for (std::size_t i = 0; i < res.growth_exponents.size() && i < 1000; ++i)
    orbits.push_back(res.growth_exponents[i]);
  out["orbits"] = orbits;
  return out;
}

// ---------------------------------------------------------------------------
// Command wrappers: write the report, map failures to exit codes
// (0 success, 1 usage/configuration, 2 certificate failure).

inline void write_json(const json& report, const std::string& path) {
  if (path.empty()) {
    std::cout << report.dump(2) << "\n";
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DimensionError("cannot open output path: " + path);
  out << report.dump(2) << "\n";
}

inline int cmd_verify(const RunConfig& config) {
  try {
    config.validate();
    const json report = verify_report(config);
    write_json(report, config.output_path);
    return report["pass"].get<bool>() ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "certificate failure: " << e.what() << "\n";
    return 2;
  }
}

inline int cmd_basins(const RunConfig& config) {
  try {
    config.validate();
    write_json(basins_report(config), config.output_path);
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 2;
  }
}

inline int cmd_restrict(const RunConfig& config) {
  try {
    config.validate();
    bool failed = false;
    const json report = restrict_report(config, &failed);
    write_json(report, config.output_path);
    return failed ? 2 : 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "certificate failure: " << e.what() << "\n";
    return 2;
  }
}

inline int cmd_probe(const RunConfig& config) {
  try {
    config.validate();
    write_json(probe_report(config), config.output_path);
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 2;
  }
}

inline std::pair<CVector, CVector> default_anchors(int k) {
  CVector a0 = CVector::Zero(k + 1);
  a0[0] = Complex(1.0, 0.0);
  CVector a1 = CVector::Zero(k + 1);
  if (k == 1) {
    a1[1] = Complex(1.0, 0.0);
  } else {
    // The line through [1:0:..:0] and [0:1:..:1] crosses several basins.
    for (int i = 1; i <= k; ++i) a1[i] = Complex(1.0, 0.0);
  }
  return {a0, a1};
}

inline int cmd_render(const RunConfig& config) {
  try {
    config.validate();
    if (config.output_path.empty())
      throw DimensionError("render needs --out <file.ppm>");

    const QMap map = build_equivariant_map(config.k, config.max_k);
    const CompiledMap compiled(map);
    const auto exact_attractors = enumerate_superattractors(config.k);
    std::vector<CPoint> attractors;
    for (const QPoint& p : exact_attractors) attractors.push_back(to_float(p));

    SliceSpec slice;
    if (config.anchors.empty()) {
      auto [a0, a1] = default_anchors(config.k);
      slice.anchor0 = a0;
      slice.anchor1 = a1;
    } else {
      auto [a0, a1] = parse_anchors(config.anchors, config.k);
      slice.anchor0 = a0;
      slice.anchor1 = a1;
    }
    if (chordal_distance(slice.anchor0, slice.anchor1) < kProjectiveTol)
      throw DimensionError("render anchors are projectively equal");
    slice.window = config.window;
    slice.width = config.width;
    slice.height = config.height;

    const ImageBuffer img = render_basin_slice(
        compiled, attractors, slice, config.max_iter, config.capture_tol,
        config.threads);
    std::ofstream out(config.output_path, std::ios::binary);
    if (!out) throw DimensionError("cannot open output path: " + config.output_path);
    write_ppm(img, out);
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace equidyn
