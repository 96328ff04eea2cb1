#pragma once

// Monte Carlo driver and scheme-validation studies: seeded ensembles with
// order-independent aggregation, Galerkin and strong-order refinement
// studies, and the pathwise determinism / continuity-in-data check.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "nsk1d/config.hpp"
#include "nsk1d/diagnostics.hpp"
#include "nsk1d/integrator.hpp"
#include "nsk1d/noise.hpp"

namespace nsk1d {

// ---- initial conditions -----------------------------------------------------

namespace detail {

// Random smooth deviation with per-mode coefficients that do not depend on the
// grid size, so coarser Galerkin levels see the projection of one fixed field.
inline Field random_deviation(std::size_t n, const IcSpec& ic, std::uint64_t seed,
                              double amplitude) {
  std::vector<cplx> c(n, cplx(0.0, 0.0));
  const std::size_t kmax = std::min<std::size_t>(n / 2 - 1, 256);
  for (std::size_t k = 1; k <= kmax; ++k) {
    const double scale = ic.decay_law == DecayLaw::power
                             ? std::pow(static_cast<double>(k), -ic.decay)
                             : std::exp(-ic.decay * static_cast<double>(k));
    const double re = rng::normal(seed, 2 * k, 0, 1);
    const double im = rng::normal(seed, 2 * k + 1, 0, 1);
    c[k] = 0.5 * scale * cplx(re, im);
    c[n - k] = std::conj(c[k]);
  }
  Field dev = Field::from_spectral(std::move(c));
  const double m = dev.max_abs();
  if (m > 0.0) dev *= amplitude / m;  // bounded family: sup |dev| = amplitude
  return dev;
}

}  // namespace detail

// Initial state on the configured grid, projected onto the Galerkin span.
// random_smooth draws a fresh field per path index; the other families are
// deterministic in the configuration alone.
inline State make_initial_state(const ExperimentConfig& cfg, std::uint64_t path_index = 0) {
  const std::size_t n = cfg.grid_points();
  const IcSpec& ic = cfg.ic;
  Field rho, u;
  switch (ic.family) {
    case IcFamily::equilibrium:
      rho = Field::sample(n, [](double) { return 1.0; });
      u = Field(n);
      break;
    case IcFamily::single_mode: {
      const double a = ic.amplitude, b = ic.velocity_amplitude;
      const auto k = static_cast<double>(ic.wavenumber);
      rho = Field::sample(n, [a, k](double x) { return 1.0 + a * std::cos(kTwoPi * k * x); });
      u = Field::sample(n, [b, k](double x) { return b * std::sin(kTwoPi * k * x); });
      break;
    }
    case IcFamily::random_smooth: {
      const std::uint64_t s_rho = rng::path_seed(ic.seed, 2 * path_index);
      const std::uint64_t s_u = rng::path_seed(ic.seed, 2 * path_index + 1);
      Field one = Field::sample(n, [](double) { return 1.0; });
      rho = one + detail::random_deviation(n, ic, s_rho, ic.amplitude);
      u = detail::random_deviation(n, ic, s_u, ic.velocity_amplitude);
      break;
    }
  }
  State s;
  s.params = cfg.params;
  s.r = project(rho_to_r(rho, cfg.params.beta, cfg.params.density_floor), cfg.params.galerkin_order);
  s.u = project(u, cfg.params.galerkin_order);
  s.time = 0.0;
  return s;
}

// ---- parallel map over path indices ------------------------------------------

inline void parallel_for(std::size_t n_tasks, std::size_t n_threads,
                         const std::function<void(std::size_t)>& fn) {
  if (n_threads == 0) n_threads = std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min(n_threads, n_tasks);
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < n_tasks; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  workers.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) {
    workers.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n_tasks) return;
        fn(i);
      }
    });
  }
  for (auto& w : workers) w.join();
}

// ---- ensemble statistics ------------------------------------------------------

// Empirical E[X^p] over samples. The emitters report mean-of-powers and
// power-of-mean side by side; finite samples make high p noisy.
inline double moment_estimate(const std::vector<double>& samples, int p) {
  if (samples.empty()) throw std::invalid_argument("moment_estimate: empty sample set");
  if (p < 1) throw std::invalid_argument("moment_estimate: p must be >= 1");
  double acc = 0.0;
  for (double x : samples) acc += std::pow(x, p);
  return acc / static_cast<double>(samples.size());
}

struct ColumnStats {
  double mean = 0.0, q05 = 0.0, q50 = 0.0, q95 = 0.0;
};

struct MomentRow {
  std::string quantity;
  int p = 1;
  double mean_of_powers = 0.0;
  double power_of_mean = 0.0;
};

struct EnsembleStats {
  std::vector<double> times;              // recorded time grid (union)
  std::vector<std::size_t> alive;         // paths contributing at each time
  // per time index, per diagnostics column (order of DiagnosticsRecord fields)
  std::vector<std::array<ColumnStats, 13>> columns;
  std::vector<MomentRow> moments;
  std::size_t n_paths = 0;
  std::size_t stopped_norm = 0;
  std::size_t stopped_floor = 0;
  std::size_t stopped_nonfinite = 0;
  double stop_fraction() const {
    return static_cast<double>(stopped_norm + stopped_floor + stopped_nonfinite) /
           static_cast<double>(n_paths);
  }
};

inline const std::array<const char*, 13>& diagnostics_column_names() {
  static const std::array<const char*, 13> names = {
      "t", "H", "E", "D_ag", "D_ab", "visc", "mass", "rho_min", "rho_max", "inv_rho_max",
      "y", "theta", "a1"};
  return names;
}

inline std::array<double, 13> diagnostics_row(const DiagnosticsRecord& r) {
  return {r.t, r.H, r.E, r.D_ag, r.D_ab, r.visc, r.mass, r.rho_min,
          r.rho_max, r.inv_rho_max, r.y, r.theta, r.a1};
}

namespace detail {

inline double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return (1.0 - w) * v[lo] + w * v[hi];
}

}  // namespace detail

struct EnsembleResult {
  EnsembleStats stats;
  std::vector<PathResult> paths;  // indexed by path, scheduling-invariant
};

inline EnsembleResult run_ensemble(const ExperimentConfig& cfg, std::size_t n_threads = 0) {
  cfg.validate();
  EnsembleResult result;
  result.paths.resize(cfg.n_paths);

  parallel_for(cfg.n_paths, n_threads, [&](std::size_t i) {
    const State ic = make_initial_state(cfg, i);
    const std::uint64_t seed = rng::path_seed(cfg.master_seed, i);
    try {
      result.paths[i] = simulate_path(ic, cfg.schedule, seed,
                                      cfg.forcing.enabled() ? &cfg.forcing : nullptr);
    } catch (const std::exception&) {
      result.paths[i].stop = {true, ic.time, StopReason::nonfinite, 0.0};
    }
  });

  // aggregation in fixed path order, independent of worker scheduling
  EnsembleStats& st = result.stats;
  st.n_paths = cfg.n_paths;
  std::size_t longest = 0;
  for (const auto& p : result.paths) {
    longest = std::max(longest, p.diagnostics.size());
    if (p.stop.stopped) {
      switch (p.stop.reason) {
        case StopReason::norm_threshold: ++st.stopped_norm; break;
        case StopReason::density_floor: ++st.stopped_floor; break;
        default: ++st.stopped_nonfinite; break;
      }
    }
  }

  for (std::size_t ti = 0; ti < longest; ++ti) {
    std::array<std::vector<double>, 13> cols;
    double t_here = 0.0;
    for (const auto& p : result.paths) {
      if (ti >= p.diagnostics.size()) continue;
      const auto row = diagnostics_row(p.diagnostics[ti]);
      t_here = row[0];
      for (std::size_t c = 0; c < 13; ++c) cols[c].push_back(row[c]);
    }
    if (cols[0].empty()) continue;
    st.times.push_back(t_here);
    st.alive.push_back(cols[0].size());
    std::array<ColumnStats, 13> row_stats;
    for (std::size_t c = 0; c < 13; ++c) {
      double mean = 0.0;
      for (double v : cols[c]) mean += v;
      mean /= static_cast<double>(cols[c].size());
      row_stats[c] = {mean, detail::quantile(cols[c], 0.05), detail::quantile(cols[c], 0.50),
                      detail::quantile(cols[c], 0.95)};
    }
    st.columns.push_back(row_stats);
  }

  // moment estimates of sup_t H and sup_t E
  std::vector<double> sup_h, sup_e;
  for (const auto& p : result.paths) {
    double h = 0.0, e = 0.0;
    for (const auto& rec : p.diagnostics) {
      h = std::max(h, rec.H);
      e = std::max(e, rec.E);
    }
    if (!p.diagnostics.empty()) {
      sup_h.push_back(h);
      sup_e.push_back(e);
    }
  }
  for (int p : cfg.moments) {
    if (!sup_h.empty()) {
      st.moments.push_back({"sup_H", p, moment_estimate(sup_h, p),
                            std::pow(moment_estimate(sup_h, 1), p)});
      st.moments.push_back({"sup_E", p, moment_estimate(sup_e, p),
                            std::pow(moment_estimate(sup_e, 1), p)});
    }
  }
  return result;
}

// ---- state distances ----------------------------------------------------------

// H^s distance of (r, u) pairs living on possibly different grids, compared
// spectrally with absent modes treated as zero.
inline double hs_distance_pair(const State& a, const State& b, double s) {
  auto comp = [s](const Field& f, const Field& g) {
    const std::size_t nf = f.size(), ng = g.size();
    const Grid gf(nf), gg(ng);
    const auto& cf = f.spectral();
    const auto& cg = g.spectral();
    const long long half = static_cast<long long>(std::max(nf, ng) / 2);
    auto coef = [](const std::vector<cplx>& c, std::size_t n, long long k) -> cplx {
      const long long h = static_cast<long long>(n / 2);
      if (k >= h || k <= -h) return {0.0, 0.0};  // treat Nyquist as absent
      return k >= 0 ? c[static_cast<std::size_t>(k)]
                    : c[static_cast<std::size_t>(static_cast<long long>(n) + k)];
    };
    double acc = 0.0;
    for (long long k = -half + 1; k < half; ++k) {
      const double xi = kTwoPi * static_cast<double>(k);
      acc += std::pow(1.0 + xi * xi, s) * std::norm(coef(cf, nf, k) - coef(cg, ng, k));
    }
    (void)gf;
    (void)gg;
    return acc;
  };
  return std::sqrt(comp(a.r, b.r) + comp(a.u, b.u));
}

inline double l2_distance_pair(const State& a, const State& b) {
  return hs_distance_pair(a, b, 0.0);
}

// ---- Galerkin convergence study ------------------------------------------------

struct GalerkinStudyRow {
  std::size_t m_coarse = 0, m_fine = 0;
  double sup_hs_error = 0.0;
  double ratio = 0.0;  // vs the previous row, 0 for the first
};

struct GalerkinStudyReport {
  std::vector<GalerkinStudyRow> rows;
  double sobolev_index = 3.0;
};

// Runs the same path configuration at each Galerkin order (shared noise
// increments, shared dt) and compares consecutive levels in sup-over-time
// H^s. IC coefficients are grid-independent, so each level sees the
// projection of one fixed initial field.
inline GalerkinStudyReport galerkin_convergence_study(const ExperimentConfig& cfg,
                                                      const std::vector<std::size_t>& m_list,
                                                      double sobolev_index = 3.0) {
  if (m_list.size() < 2) throw std::invalid_argument("galerkin study: need at least two orders");
  for (std::size_t i = 1; i < m_list.size(); ++i)
    if (m_list[i] <= m_list[i - 1])
      throw std::invalid_argument("galerkin study: orders must be increasing");

  NoiseSpec spec = cfg.params.noise;
  spec.seed = rng::path_seed(cfg.master_seed, 0);
  WienerPath path(spec, cfg.schedule.dt);

  std::vector<PathResult> runs(m_list.size());
  for (std::size_t li = 0; li < m_list.size(); ++li) {
    ExperimentConfig level = cfg;
    level.params.galerkin_order = m_list[li];
    level.n_points = 0;  // default 4m per level
    level.params.noise.seed = spec.seed;
    const State ic = make_initial_state(level, 0);
    runs[li] = simulate_path(ic, level.schedule, path, 1,
                             cfg.forcing.enabled() ? &cfg.forcing : nullptr);
  }

  GalerkinStudyReport rep;
  rep.sobolev_index = sobolev_index;
  for (std::size_t li = 0; li + 1 < m_list.size(); ++li) {
    const auto& A = runs[li].trajectory;
    const auto& B = runs[li + 1].trajectory;
    const std::size_t nt = std::min(A.snapshots.size(), B.snapshots.size());
    double sup = 0.0;
    for (std::size_t ti = 0; ti < nt; ++ti)
      sup = std::max(sup, hs_distance_pair(A.snapshots[ti], B.snapshots[ti], sobolev_index));
    GalerkinStudyRow row;
    row.m_coarse = m_list[li];
    row.m_fine = m_list[li + 1];
    row.sup_hs_error = sup;
    row.ratio = rep.rows.empty() ? 0.0 : sup / rep.rows.back().sup_hs_error;
    rep.rows.push_back(row);
  }
  return rep;
}

// ---- strong order study --------------------------------------------------------

struct StrongOrderRow {
  double dt = 0.0;
  double mean_error = 0.0;  // E || X_dt(T) - X_ref(T) ||
};

struct StrongOrderReport {
  std::vector<StrongOrderRow> rows;
  double fitted_order = 0.0;
  double dt_ref = 0.0;
  std::size_t n_paths = 0;
};

// Strong error against the finest-dt reference on refinement-consistent
// noise; all dt must be dyadic multiples of the finest.
inline StrongOrderReport strong_order_study(const ExperimentConfig& cfg,
                                            const std::vector<double>& dt_list,
                                            std::size_t n_threads = 0) {
  if (dt_list.size() < 3) throw std::invalid_argument("order study: need >= 3 dt levels");
  std::vector<double> dts = dt_list;
  std::sort(dts.begin(), dts.end());
  const double dt_ref = dts.front();
  std::vector<std::uint64_t> substeps;
  for (std::size_t i = 1; i < dts.size(); ++i) {
    const double q = dts[i] / dt_ref;
    const auto iq = static_cast<std::uint64_t>(std::llround(q));
    if (std::abs(q - static_cast<double>(iq)) > 1e-9 || (iq & (iq - 1)) != 0)
      throw std::invalid_argument("order study: dt levels must be dyadic multiples of the finest");
    substeps.push_back(iq);
  }

  const std::size_t n_levels = dts.size() - 1;
  std::vector<std::vector<double>> errors(cfg.n_paths, std::vector<double>(n_levels, 0.0));

  parallel_for(cfg.n_paths, n_threads, [&](std::size_t pi) {
    NoiseSpec spec = cfg.params.noise;
    spec.seed = rng::path_seed(cfg.master_seed, pi);
    WienerPath path(spec, dt_ref);
    const State ic = make_initial_state(cfg, pi);

    Schedule fine = cfg.schedule;
    fine.dt = dt_ref;
    fine.record_every = 1 << 30;
    const auto ref = simulate_path(ic, fine, path, 1);

    for (std::size_t li = 0; li < n_levels; ++li) {
      Schedule coarse = cfg.schedule;
      coarse.dt = dts[li + 1];
      coarse.record_every = 1 << 30;
      const auto run = simulate_path(ic, coarse, path, substeps[li]);
      errors[pi][li] =
          l2_distance_pair(run.trajectory.snapshots.back(), ref.trajectory.snapshots.back());
    }
  });

  StrongOrderReport rep;
  rep.dt_ref = dt_ref;
  rep.n_paths = cfg.n_paths;
  for (std::size_t li = 0; li < n_levels; ++li) {
    double mean = 0.0;
    for (std::size_t pi = 0; pi < cfg.n_paths; ++pi) mean += errors[pi][li];
    mean /= static_cast<double>(cfg.n_paths);
    rep.rows.push_back({dts[li + 1], mean});
  }
  // least-squares slope in log-log
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = static_cast<double>(rep.rows.size());
  for (const auto& row : rep.rows) {
    const double x = std::log(row.dt), y = std::log(std::max(row.mean_error, 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  rep.fitted_order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return rep;
}

// ---- pathwise determinism / continuity in data ---------------------------------

struct UniquenessReport {
  bool bitwise_identical = false;
  double delta = 0.0;
  double initial_discrepancy = 0.0;
  double max_discrepancy = 0.0;
  double max_ratio = 0.0;      // max over time of d(t)/d(0)
  double fitted_lambda = 0.0;  // least-squares growth exponent of log d(t)
};

inline UniquenessReport pathwise_uniqueness_check(const ExperimentConfig& cfg, double delta) {
  UniquenessReport rep;
  rep.delta = delta;

  const State ic = make_initial_state(cfg, 0);
  const std::uint64_t seed = rng::path_seed(cfg.master_seed, 0);

  const auto a = simulate_path(ic, cfg.schedule, seed);
  const auto b = simulate_path(ic, cfg.schedule, seed);
  rep.bitwise_identical = a.trajectory.snapshots.size() == b.trajectory.snapshots.size();
  if (rep.bitwise_identical) {
    for (std::size_t i = 0; i < a.trajectory.snapshots.size(); ++i) {
      if (!(a.trajectory.snapshots[i].r.spectral() == b.trajectory.snapshots[i].r.spectral()) ||
          !(a.trajectory.snapshots[i].u.spectral() == b.trajectory.snapshots[i].u.spectral())) {
        rep.bitwise_identical = false;
        break;
      }
    }
  }
  if (delta == 0.0) {
    rep.max_discrepancy = 0.0;
    rep.max_ratio = rep.bitwise_identical ? 0.0 : 1.0;
    return rep;
  }

  State perturbed = ic;
  const std::size_t n = ic.grid_size();
  perturbed.u = project(
      ic.u + Field::sample(n, [delta](double x) { return delta * std::cos(kTwoPi * x); }),
      cfg.params.galerkin_order);
  const auto c = simulate_path(perturbed, cfg.schedule, seed);

  const std::size_t nt = std::min(a.trajectory.snapshots.size(), c.trajectory.snapshots.size());
  std::vector<double> t_grid, d_grid;
  for (std::size_t i = 0; i < nt; ++i) {
    const double d = l2_distance_pair(a.trajectory.snapshots[i], c.trajectory.snapshots[i]);
    t_grid.push_back(a.trajectory.times[i]);
    d_grid.push_back(d);
  }
  rep.initial_discrepancy = d_grid.front();
  for (double d : d_grid) rep.max_discrepancy = std::max(rep.max_discrepancy, d);
  rep.max_ratio = rep.max_discrepancy / std::max(rep.initial_discrepancy, 1e-300);

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto cnt = static_cast<double>(nt);
  for (std::size_t i = 0; i < nt; ++i) {
    const double y = std::log(std::max(d_grid[i], 1e-300));
    sx += t_grid[i];
    sy += y;
    sxx += t_grid[i] * t_grid[i];
    sxy += t_grid[i] * y;
  }
  rep.fitted_lambda = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  return rep;
}

}  // namespace nsk1d
