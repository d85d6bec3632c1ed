// equidyn: build the symmetric holomorphic maps on P^k, verify their exact
// structure, and probe their dynamics (basin surveys, expansion, rendering).

#include <CLI11.hpp>

#include "equidyn/commands.hpp"

namespace {

void add_common_flags(CLI::App* cmd, equidyn::RunConfig& config) {
  cmd->add_option("--k", config.k, "ambient projective dimension")
      ->default_val(config.k);
  cmd->add_option("--seed", config.seed, "RNG seed")->default_val(config.seed);
  cmd->add_option("--threads", config.threads, "worker thread count")
      ->default_val(config.threads);
  cmd->add_option("--out", config.output_path,
                  "output file (default: stdout for JSON)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"S_{k+2}-equivariant critically finite maps on P^k: exact "
               "structure checks and dynamical surveys"};
  app.require_subcommand(1);

  equidyn::RunConfig verify_cfg, basins_cfg, restrict_cfg, probe_cfg, render_cfg;

  CLI::App* verify = app.add_subcommand(
      "verify", "run the exact certificate suite (equivariance, invariance, "
                "critical factorization, superattractors)");
  add_common_flags(verify, verify_cfg);

  CLI::App* basins = app.add_subcommand(
      "basins", "Monte Carlo basin-of-attraction survey over P^k");
  add_common_flags(basins, basins_cfg);
  basins->add_option("--samples", basins_cfg.sample_count, "sample count")
      ->default_val(basins_cfg.sample_count);
  basins->add_option("--max-iter", basins_cfg.max_iter, "iteration cap")
      ->default_val(basins_cfg.max_iter);
  basins->add_option("--tol", basins_cfg.capture_tol, "capture tolerance")
      ->default_val(basins_cfg.capture_tol);

  CLI::App* restrict_cmd = app.add_subcommand(
      "restrict", "restrict the map to an invariant flat and rerun the "
                  "certificate suite intrinsically");
  add_common_flags(restrict_cmd, restrict_cfg);
  restrict_cmd
      ->add_option("--hyperplanes", restrict_cfg.hyperplanes,
                   "flat-defining hyperplanes, e.g. \"c:1\" or \"d:1,2\" or "
                   "\"c:1,c:2\"")
      ->required();

  CLI::App* probe = app.add_subcommand(
      "probe", "expansion probe: derivative growth along orbits that stay "
               "clear of the critical set");
  add_common_flags(probe, probe_cfg);
  probe->add_option("--samples", probe_cfg.sample_count, "sample count")
      ->default_val(probe_cfg.sample_count);
  probe->add_option("--steps", probe_cfg.n_steps, "orbit length")
      ->default_val(probe_cfg.n_steps);
  probe->add_option("--delta", probe_cfg.delta, "exclusion radius from the "
                                                "critical set")
      ->default_val(probe_cfg.delta);

  CLI::App* render = app.add_subcommand(
      "render", "render basins on a complex line through two anchor points "
                "(binary PPM)");
  add_common_flags(render, render_cfg);
  std::string resolution = "512x512";
  std::string window = "-2,2,-2,2";
  render->add_option("--anchors", render_cfg.anchors,
                     "two anchor points \"a1,..,a_{k+1};b1,..,b_{k+1}\" "
                     "(complex literals like 1, -2.5, 1+2i)");
  render->add_option("--window", window,
                     "complex window re_min,re_max,im_min,im_max")
      ->default_val(window);
  render->add_option("--res", resolution, "image size WxH")
      ->default_val(resolution);
  render->add_option("--max-iter", render_cfg.max_iter, "iteration cap")
      ->default_val(render_cfg.max_iter);
  render->add_option("--tol", render_cfg.capture_tol, "capture tolerance")
      ->default_val(render_cfg.capture_tol);

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) return equidyn::cmd_verify(verify_cfg);
    if (basins->parsed()) return equidyn::cmd_basins(basins_cfg);
    if (restrict_cmd->parsed()) return equidyn::cmd_restrict(restrict_cfg);
    if (probe->parsed()) return equidyn::cmd_probe(probe_cfg);
    if (render->parsed()) {
      render_cfg.window = equidyn::parse_window(window);
      auto [w, h] = equidyn::parse_resolution(resolution);
      render_cfg.width = w;
      render_cfg.height = h;
      return equidyn::cmd_render(render_cfg);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
