#pragma once

// Serialization: CSV emitters (UTF-8, comma separator, '.' decimal), the raw
// little-endian binary field snapshot format, and the noise-path dump.

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "nsk1d/diagnostics.hpp"
#include "nsk1d/ensemble.hpp"
#include "nsk1d/field.hpp"
#include "nsk1d/noise.hpp"
#include "nsk1d/params.hpp"

namespace nsk1d {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

inline void write_le_u64(std::ostream& out, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

inline void write_le_f64(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  write_le_u64(out, bits);
}

inline std::uint64_t read_le_u64(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  if (!in) throw IoError("unexpected end of binary stream");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

inline double read_le_f64(std::istream& in) {
  const std::uint64_t bits = read_le_u64(in);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace detail

// ---- field snapshots --------------------------------------------------------

// CSV with header x,value.
inline void write_field_csv(std::ostream& out, const Field& f) {
  out << "x,value\n";
  out << std::setprecision(17);
  const Grid g = f.grid();
  const auto& v = f.physical();
  for (std::size_t j = 0; j < f.size(); ++j) out << g.x(j) << "," << v[j] << "\n";
}

// Binary snapshot: u64 n_points, f64 time, then n_points little-endian f64
// collocation values.
inline void write_field_binary(std::ostream& out, const Field& f, double time) {
  detail::write_le_u64(out, f.size());
  detail::write_le_f64(out, time);
  for (double v : f.physical()) detail::write_le_f64(out, v);
}

inline std::pair<Field, double> read_field_binary(std::istream& in) {
  const std::uint64_t n = detail::read_le_u64(in);
  const double time = detail::read_le_f64(in);
  std::vector<double> v(n);
  for (std::uint64_t j = 0; j < n; ++j) v[j] = detail::read_le_f64(in);
  return {Field::from_physical(std::move(v)), time};
}

// ---- diagnostics ------------------------------------------------------------

inline const char* diagnostics_csv_header() {
  return "t,H,E,D_ag,D_ab,visc,mass,rho_min,rho_max,inv_rho_max,y,theta,a1";
}

inline void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& recs) {
  out << diagnostics_csv_header() << "\n";
  out << std::setprecision(17);
  for (const auto& r : recs) {
    out << r.t << "," << r.H << "," << r.E << "," << r.D_ag << "," << r.D_ab << "," << r.visc
        << "," << r.mass << "," << r.rho_min << "," << r.rho_max << "," << r.inv_rho_max << ","
        << r.y << "," << r.theta << "," << r.a1 << "\n";
  }
}

// ---- regime atlas -----------------------------------------------------------

inline void write_atlas_csv(std::ostream& out, const std::vector<RegimeReport>& reports) {
  out << "alpha,beta,scc,nv,c_ab,discriminant,degenerate\n";
  out << std::setprecision(17);
  for (const auto& r : reports) {
    out << r.alpha << "," << r.beta << "," << (r.scc ? 1 : 0) << "," << (r.nv ? 1 : 0) << ","
        << r.c_ab << "," << r.discriminant << "," << (r.degenerate_theta ? 1 : 0) << "\n";
  }
}

// ---- noise path dump --------------------------------------------------------

// Binary layout: u64 mode_count, u64 steps, f64 dt_base, then steps x K
// little-endian f64 increments (step-major).
inline void write_noise_path_binary(std::ostream& out, const WienerPath& path,
                                    std::uint64_t steps) {
  detail::write_le_u64(out, path.spec().mode_count);
  detail::write_le_u64(out, steps);
  detail::write_le_f64(out, path.dt_base());
  for (std::uint64_t s = 0; s < steps; ++s) {
    const auto inc = path.increment(s);
    for (double v : inc.dW) detail::write_le_f64(out, v);
  }
}

// ---- ensemble reports ---------------------------------------------------------

inline void write_ensemble_stats_csv(std::ostream& out, const EnsembleStats& st) {
  out << "t,alive";
  for (const char* name : diagnostics_column_names()) {
    if (std::string(name) == "t") continue;
    out << "," << name << "_mean," << name << "_q05," << name << "_q50," << name << "_q95";
  }
  out << "\n" << std::setprecision(17);
  for (std::size_t i = 0; i < st.times.size(); ++i) {
    out << st.times[i] << "," << st.alive[i];
    for (std::size_t c = 1; c < 13; ++c) {
      const auto& cs = st.columns[i][c];
      out << "," << cs.mean << "," << cs.q05 << "," << cs.q50 << "," << cs.q95;
    }
    out << "\n";
  }
}

inline void write_moments_csv(std::ostream& out, const EnsembleStats& st) {
  out << "quantity,p,mean_of_powers,power_of_mean\n" << std::setprecision(17);
  for (const auto& m : st.moments)
    out << m.quantity << "," << m.p << "," << m.mean_of_powers << "," << m.power_of_mean << "\n";
}

inline void write_stops_csv(std::ostream& out, const EnsembleStats& st) {
  out << "reason,count,fraction\n" << std::setprecision(17);
  const auto frac = [&](std::size_t c) {
    return static_cast<double>(c) / static_cast<double>(st.n_paths);
  };
  out << "norm_threshold," << st.stopped_norm << "," << frac(st.stopped_norm) << "\n";
  out << "density_floor," << st.stopped_floor << "," << frac(st.stopped_floor) << "\n";
  out << "nonfinite," << st.stopped_nonfinite << "," << frac(st.stopped_nonfinite) << "\n";
  out << "total," << (st.stopped_norm + st.stopped_floor + st.stopped_nonfinite) << ","
      << st.stop_fraction() << "\n";
}

inline void write_galerkin_report_csv(std::ostream& out, const GalerkinStudyReport& rep) {
  out << "m_coarse,m_fine,sup_hs_error,ratio\n" << std::setprecision(17);
  for (const auto& r : rep.rows)
    out << r.m_coarse << "," << r.m_fine << "," << r.sup_hs_error << "," << r.ratio << "\n";
}

inline void write_order_report_csv(std::ostream& out, const StrongOrderReport& rep) {
  out << "dt,mean_error\n" << std::setprecision(17);
  for (const auto& r : rep.rows) out << r.dt << "," << r.mean_error << "\n";
  out << "# fitted_order = " << rep.fitted_order << ", dt_ref = " << rep.dt_ref
      << ", n_paths = " << rep.n_paths << "\n";
}

// Full output bundle for one ensemble run: stats, moments, stop summary,
// per-path diagnostics, and the manifest that reproduces the run.
inline void emit_outputs(const EnsembleResult& result, const ExperimentConfig& cfg,
                         const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    auto out = detail::open_out(dir + "/stats.csv");
    write_ensemble_stats_csv(out, result.stats);
  }
  {
    auto out = detail::open_out(dir + "/moments.csv");
    write_moments_csv(out, result.stats);
  }
  {
    auto out = detail::open_out(dir + "/stops.csv");
    write_stops_csv(out, result.stats);
  }
  for (std::size_t i = 0; i < result.paths.size(); ++i) {
    std::ostringstream name;
    name << dir << "/path_" << std::setw(4) << std::setfill('0') << i << ".csv";
    auto out = detail::open_out(name.str());
    write_diagnostics_csv(out, result.paths[i].diagnostics);
  }
  {
    auto out = detail::open_out(dir + "/manifest.cfg");
    write_config(out, cfg);
  }
}

}  // namespace nsk1d
