// Command-line driver: single-path simulation, Monte Carlo ensembles, the
// (alpha, beta) regime atlas, refinement studies and the functional-inequality
// sampler. Configuration comes from a key = value file plus a few overrides.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

#include "nsk1d/io.hpp"
#include "nsk1d/nsk1d.hpp"

namespace fs = std::filesystem;
using namespace nsk1d;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths;
  std::size_t threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "configuration file (key = value)");
  cmd->add_option("--out", o.out_dir, "output directory (overrides [output] dir)");
  cmd->add_option("--seed", [&o](const std::vector<std::string>& v) {
    o.seed = std::stoull(v.at(0));
    return true;
  }, "master seed override");
  cmd->add_option("--paths", [&o](const std::vector<std::string>& v) {
    o.paths = std::stoull(v.at(0));
    return true;
  }, "number of Monte Carlo paths override");
  cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)");
}

ExperimentConfig load(const CommonOpts& o) {
  ExperimentConfig cfg;
  if (!o.config_path.empty()) cfg = load_config(o.config_path);
  if (o.seed) cfg.master_seed = *o.seed;
  if (o.paths) cfg.n_paths = *o.paths;
  if (!o.out_dir.empty()) cfg.output_dir = o.out_dir;
  cfg.validate();
  return cfg;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir + "/" + name);
  if (!out) throw IoError("cannot open for writing: " + dir + "/" + name);
  return out;
}

int cmd_simulate(const CommonOpts& o) {
  const ExperimentConfig cfg = load(o);
  const State ic = make_initial_state(cfg, 0);
  const std::uint64_t seed = rng::path_seed(cfg.master_seed, 0);
  const auto res = simulate_path(ic, cfg.schedule, seed,
                                 cfg.forcing.enabled() ? &cfg.forcing : nullptr);

  const std::string dir = cfg.output_dir;
  {
    auto out = open_out(dir, "diagnostics.csv");
    write_diagnostics_csv(out, res.diagnostics);
  }
  {
    auto out = open_out(dir, "manifest.cfg");
    write_config(out, cfg);
  }
  const State& last = res.trajectory.snapshots.back();
  {
    auto out = open_out(dir, "rho_final.csv");
    write_field_csv(out, r_to_rho(last.r, cfg.params.beta));
  }
  {
    auto out = open_out(dir, "u_final.csv");
    write_field_csv(out, last.u);
  }
  {
    std::ofstream out(dir + "/state_final.bin", std::ios::binary);
    write_field_binary(out, last.r, last.time);
    write_field_binary(out, last.u, last.time);
  }
  if (cfg.params.noise.family != NoiseFamily::off) {
    NoiseSpec spec = cfg.params.noise;
    spec.seed = seed;
    WienerPath path(spec, cfg.schedule.dt);
    std::ofstream out(dir + "/noise_path.bin", std::ios::binary);
    write_noise_path_binary(out, path, cfg.schedule.n_steps());
  }

  std::cout << "simulate: " << res.diagnostics.size() << " records";
  if (res.stop.stopped)
    std::cout << ", stopped at t = " << *res.stop.tau_R << " (" << to_string(res.stop.reason)
              << ")";
  else
    std::cout << ", reached t_end = " << cfg.schedule.t_end;
  std::cout << ", outputs in " << dir << "\n";
  return 0;
}

int cmd_ensemble(const CommonOpts& o) {
  const ExperimentConfig cfg = load(o);
  const auto result = run_ensemble(cfg, o.threads);
  emit_outputs(result, cfg, cfg.output_dir);
  std::cout << "ensemble: " << cfg.n_paths << " paths, stop fraction "
            << result.stats.stop_fraction() << ", outputs in " << cfg.output_dir << "\n";
  return 0;
}

int cmd_atlas(const CommonOpts& o, double a_lo, double a_hi, double b_lo, double b_hi,
              double step) {
  ExperimentConfig cfg;
  if (!o.config_path.empty()) cfg = load_config(o.config_path);
  if (!o.out_dir.empty()) cfg.output_dir = o.out_dir;
  const auto grid = regime_atlas(a_lo, a_hi, b_lo, b_hi, step);
  auto out = open_out(cfg.output_dir, "atlas.csv");
  write_atlas_csv(out, grid);
  std::cout << "atlas: " << grid.size() << " points, " << cfg.output_dir << "/atlas.csv\n";
  return 0;
}

int cmd_study_galerkin(const CommonOpts& o, std::vector<std::size_t> orders) {
  const ExperimentConfig cfg = load(o);
  if (orders.empty()) orders = {16, 32, 64, 128};
  const auto rep = galerkin_convergence_study(cfg, orders);
  auto out = open_out(cfg.output_dir, "galerkin.csv");
  write_galerkin_report_csv(out, rep);
  std::cout << "study-galerkin:\n";
  for (const auto& r : rep.rows)
    std::cout << "  m " << r.m_coarse << " vs " << r.m_fine << ": sup-H" << rep.sobolev_index
              << " error " << r.sup_hs_error << (r.ratio > 0 ? ", ratio " : "")
              << (r.ratio > 0 ? std::to_string(r.ratio) : "") << "\n";
  return 0;
}

int cmd_study_order(const CommonOpts& o, int lev_coarse, int lev_fine) {
  const ExperimentConfig cfg = load(o);
  std::vector<double> dts;
  for (int lev = lev_fine; lev <= lev_coarse; ++lev)
    dts.push_back(cfg.schedule.t_end * std::pow(2.0, -lev));
  const auto rep = strong_order_study(cfg, dts, o.threads);
  auto out = open_out(cfg.output_dir, "order.csv");
  write_order_report_csv(out, rep);
  std::cout << "study-order: fitted strong order " << rep.fitted_order << " over "
            << rep.rows.size() << " levels, " << rep.n_paths << " paths\n";
  return 0;
}

int cmd_study_uniqueness(const CommonOpts& o, double delta) {
  const ExperimentConfig cfg = load(o);
  const auto rep = pathwise_uniqueness_check(cfg, delta);
  auto out = open_out(cfg.output_dir, "uniqueness.csv");
  out << "bitwise_identical,delta,initial_discrepancy,max_discrepancy,max_ratio,fitted_lambda\n";
  out << (rep.bitwise_identical ? 1 : 0) << "," << rep.delta << "," << rep.initial_discrepancy
      << "," << rep.max_discrepancy << "," << rep.max_ratio << "," << rep.fitted_lambda << "\n";
  std::cout << "study-uniqueness: bitwise " << (rep.bitwise_identical ? "yes" : "NO")
            << ", max ratio " << rep.max_ratio << ", fitted lambda " << rep.fitted_lambda << "\n";
  return 0;
}

int cmd_check_inequality(const CommonOpts& o, std::size_t samples, std::size_t degree,
                         std::size_t n_points, std::uint64_t seed) {
  ExperimentConfig cfg;
  if (!o.config_path.empty()) cfg = load_config(o.config_path);
  if (!o.out_dir.empty()) cfg.output_dir = o.out_dir;
  double max_ratio = 0.0;
  std::uint64_t argmax = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    std::vector<cplx> c(n_points, cplx(0.0, 0.0));
    for (std::size_t k = 1; k <= degree; ++k) {
      const double scale = std::pow(static_cast<double>(k), -1.0);
      c[k] = 0.5 * scale *
             cplx(rng::normal(seed, 2 * k, i, 2), rng::normal(seed, 2 * k + 1, i, 2));
      c[n_points - k] = std::conj(c[k]);
    }
    Field f = Field::from_spectral(std::move(c));
    std::vector<double> v = f.physical();
    const double mn = *std::min_element(v.begin(), v.end());
    for (double& z : v) z += 0.1 - mn;
    const double ratio = check_functional_inequality(Field::from_physical(std::move(v)));
    if (ratio > max_ratio) {
      max_ratio = ratio;
      argmax = i;
    }
  }
  auto out = open_out(cfg.output_dir, "inequality.csv");
  out << "samples,degree,n_points,max_ratio,bound,argmax_sample\n";
  out << samples << "," << degree << "," << n_points << "," << std::setprecision(17) << max_ratio
      << "," << 9.0 / 16.0 << "," << argmax << "\n";
  std::cout << "check-inequality: max ratio " << max_ratio << " over " << samples
            << " samples (bound 0.5625)\n";
  return max_ratio <= 9.0 / 16.0 + 1e-8 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudospectral simulator for 1D stochastic capillary fluids on the torus"};
  app.require_subcommand(1);

  CommonOpts o;

  auto* sim = app.add_subcommand("simulate", "run one seeded path and dump diagnostics");
  add_common(sim, o);

  auto* ens = app.add_subcommand("ensemble", "run a Monte Carlo ensemble");
  add_common(ens, o);

  auto* atl = app.add_subcommand("atlas", "sweep the (alpha, beta) regime classification");
  double a_lo = 0.0, a_hi = 3.0, b_lo = -4.0, b_hi = 3.0, step = 0.05;
  add_common(atl, o);
  atl->add_option("--alpha-min", a_lo);
  atl->add_option("--alpha-max", a_hi);
  atl->add_option("--beta-min", b_lo);
  atl->add_option("--beta-max", b_hi);
  atl->add_option("--step", step);

  auto* sg = app.add_subcommand("study-galerkin", "Galerkin-order refinement study");
  std::vector<std::size_t> orders;
  add_common(sg, o);
  sg->add_option("--orders", orders, "increasing Galerkin orders (default 16 32 64 128)");

  auto* so = app.add_subcommand("study-order", "strong-order study on a shared Wiener path");
  int lev_coarse = 9, lev_fine = 13;
  add_common(so, o);
  so->add_option("--level-coarse", lev_coarse, "coarsest dt = 2^-level * t_end");
  so->add_option("--level-fine", lev_fine, "finest dt = 2^-level * t_end (reference)");

  auto* su = app.add_subcommand("study-uniqueness", "same-path determinism and IC sensitivity");
  double delta = 1e-8;
  add_common(su, o);
  su->add_option("--delta", delta, "initial-condition perturbation size");

  auto* ci = app.add_subcommand("check-inequality", "sample the L4/L2 curvature ratio bound");
  std::size_t samples = 1000, degree = 16, n_points = 256;
  std::uint64_t ci_seed = 2024;
  add_common(ci, o);
  ci->add_option("--samples", samples);
  ci->add_option("--degree", degree);
  ci->add_option("--points", n_points);
  ci->add_option("--sample-seed", ci_seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(o);
    if (ens->parsed()) return cmd_ensemble(o);
    if (atl->parsed()) return cmd_atlas(o, a_lo, a_hi, b_lo, b_hi, step);
    if (sg->parsed()) return cmd_study_galerkin(o, orders);
    if (so->parsed()) return cmd_study_order(o, lev_coarse, lev_fine);
    if (su->parsed()) return cmd_study_uniqueness(o, delta);
    if (ci->parsed()) return cmd_check_inequality(o, samples, degree, n_points, ci_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
