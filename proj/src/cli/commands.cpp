#include "cli/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "cli/config.hpp"
#include "cli/csv.hpp"
#include "zeno/corrections.hpp"
#include "zeno/errors.hpp"
#include "zeno/golden_rule.hpp"
#include "zeno/lines.hpp"
#include "zeno/mc_sweep.hpp"
#include "zeno/spectral.hpp"
#include "zeno/trajectory.hpp"
#include "zeno/units.hpp"

#ifndef ZENO_VERSION
#define ZENO_VERSION "0.0.0"
#endif

namespace zeno::cli {

namespace fs = std::filesystem;

std::string tool_version() { return ZENO_VERSION; }

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Context {
  RunConfig cfg;
  std::uint64_t seed = 1;
  std::optional<std::size_t> trajectories;
  int threads = 0;
  fs::path out;
  std::string hash;
  std::vector<std::string> written;

  std::string comment(bool stochastic, std::size_t n_traj = 0) const {
    std::ostringstream os;
    os << "zeno " << tool_version() << " config_sha256=" << hash;
    if (stochastic) os << " seed=" << seed << " trajectories=" << n_traj;
    return os.str();
  }

  fs::path file(const std::string& name) const { return out / name; }

  void finish(CsvWriter& w, const fs::path& p) {
    w.close();
    written.push_back(p.string());
  }
};

std::string rate_label(double rate) {
  std::string s = format_number(rate);
  for (char& c : s) {
    if (c == '.') c = 'p';
  }
  return s;
}

// Seed family per measurement setting, independent of list order.
std::uint64_t setting_key(MeasurementKind kind, double rate_mhz) {
  return static_cast<std::uint64_t>(kind) * 1000003u + static_cast<std::uint64_t>(std::llround(rate_mhz * 1e4));
}

SimConfig base_sim(const Context& ctx) {
  const RunConfig& c = ctx.cfg;
  SimConfig s;
  s.dt = c.numerics.dt_us;
  s.n_traj = ctx.trajectories.value_or(c.numerics.trajectories);
  s.seed = ctx.seed;
  s.duration = c.sweep.duration_us;
  s.time_points = c.sweep.time_points;
  if (c.numerics.coupling) s.coupling_g = *c.numerics.coupling;
  s.device = c.device;
  s.bath = c.bath();
  s.threads = ctx.threads;
  return s;
}

void require_grid(const std::vector<double>& v, const std::string& what) {
  if (v.empty()) throw ConfigError(what + " is empty");
}

// ---------------------------------------------------------------- theory-sweep

void theory_sweep(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  require_grid(c.sweep.detunings_mhz, "sweep.detunings_mhz");
  const SweepResult r = sweep(c.bath(), c.sweep.detunings_mhz, c.sweep.rates_mhz, c.device.t1_spont_us);
  for (const SweepRow& row : r.rows) {
    if (!row.ok()) {
      std::ostringstream os;
      os << "theory-sweep: detuning " << row.detuning_mhz << " MHz, rate " << row.rate_mhz << " MHz: " << row.status;
      throw NumericalError(os.str());
    }
  }
  const fs::path p = ctx.file("theory_sweep.csv");
  CsvWriter w(p.string(), ctx.comment(false), {"detuning_mhz", "rate_mhz", "t1_us", "t1_zero_us", "dt1_frac"});
  for (const SweepRow& row : r.rows) {
    w.num(row.detuning_mhz).num(row.rate_mhz).num(row.t1_us).num(row.t1_zero_us).num(row.delta_t1_frac);
    w.end_row();
  }
  ctx.finish(w, p);
}

// -------------------------------------------------------------------- mc-sweep

void write_curve(Context& ctx, const fs::path& p, const PopulationCurve& curve, std::size_t n_traj) {
  CsvWriter w(p.string(), ctx.comment(true, n_traj), {"time_us", "p_e", "stderr"});
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    w.num(curve.times[i]).num(curve.p_e[i]).num(curve.stderr_[i]);
    w.end_row();
  }
  ctx.finish(w, p);
}

void mc_sweep_cmd(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  require_grid(c.sweep.detunings_mhz, "sweep.detunings_mhz");
  const SimConfig base = base_sim(ctx);

  // Every point is validated before any trajectory runs.
  std::vector<std::pair<MeasurementKind, double>> settings;
  for (MeasurementKind k : c.sweep.kinds) {
    for (double r : c.sweep.rates_mhz) settings.emplace_back(k, r);
  }
  for (double det : c.sweep.detunings_mhz) {
    SimConfig probe = base;
    probe.bath = base.bath.with_detuning(to_angular(det));
    probe.validate();
    for (const auto& [k, r] : settings) {
      probe.schedule = c.schedule(k, r);
      probe.validate();
      (void)inversion_recovery_plan(probe);
    }
  }

  const fs::path curves = ctx.out / "mc_curves";
  fs::create_directories(curves);

  const std::vector<McPoint> baseline_pts = mc_sweep(base, c.sweep.detunings_mhz, MeasurementSchedule::none());
  const Baseline baseline = baseline_of(baseline_pts);

  const fs::path p = ctx.file("mc_sweep.csv");
  CsvWriter w(p.string(), ctx.comment(true, base.n_traj),
              {"kind", "rate_mhz", "detuning_mhz", "t1_us", "t1_sigma_us", "t1_zero_us", "dt1_frac", "dt1_sigma",
               "corr_detuning_mhz", "corr_t1_us", "corr_t1_sigma_us", "corr_t1_zero_us", "corr_dt1_frac",
               "corr_dt1_sigma", "status"});
  const fs::path sp = ctx.file("mc_corrections.csv");
  CsvWriter s(sp.string(), ctx.comment(true, base.n_traj),
              {"kind", "rate_mhz", "wing_rate_per_us", "wing_sigma_per_us", "wing_rows", "stark_shift_mhz",
               "duty_factor", "status"});

  auto curve_files = [&](const std::string& tag, const std::vector<McPoint>& pts) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      write_curve(ctx, curves / (tag + "_d" + std::to_string(i) + ".csv"), pts[i].estimate.curve, base.n_traj);
    }
  };

  for (const McPoint& pt : baseline_pts) {
    const bool ok = pt.estimate.ok();
    const double t1 = ok ? pt.estimate.t1 : kNaN;
    const double sg = ok ? pt.estimate.t1_sigma : kNaN;
    w.text("none").num(kNoMeasurement).num(pt.detuning_mhz).num(t1).num(sg).num(t1).num(ok ? 0.0 : kNaN).num(ok ? 0.0 : kNaN);
    w.num(pt.detuning_mhz).num(t1).num(sg).num(t1).num(ok ? 0.0 : kNaN).num(ok ? 0.0 : kNaN).text(pt.estimate.status);
    w.end_row();
  }
  curve_files("none", baseline_pts);

  for (const auto& [kind, rate] : settings) {
    const MeasurementSchedule sched = c.schedule(kind, rate);
    const std::vector<McPoint> pts = mc_sweep(base, c.sweep.detunings_mhz, sched);
    const SweepResult raw = raw_rows(pts, baseline);

    CorrectedSweep corr;
    std::string corr_status = "ok";
    double duty = 1.0;
    try {
      if (kind == MeasurementKind::projective) {
        corr = correct_projective(raw.rows, baseline, c.corrections);
      } else {
        const auto f = c.corrections.duty_factor(rate);
        duty = f ? *f : duty_cycle_correct(1.0, sched.pulse_tm, sched.period_tm);
        corr = correct_quasi(raw.rows, baseline, c.corrections, sched.pulse_tm, sched.period_tm);
      }
    } catch (const PreconditionError& e) {
      corr_status = std::string("correction: ") + e.what();
    }

    const std::string name(to_string(kind));
    for (std::size_t i = 0; i < raw.rows.size(); ++i) {
      const SweepRow& r = raw.rows[i];
      const bool rok = r.ok();
      w.text(name).num(rate).num(r.detuning_mhz);
      w.num(r.t1_us).num(r.t1_sigma_us);
      w.num(rok ? r.t1_zero_us : kNaN).num(rok ? r.delta_t1_frac : kNaN).num(rok ? r.sigma : kNaN);
      std::string status = r.status;
      if (corr_status == "ok") {
        const SweepRow& k = corr.rows.rows[i];
        const bool kok = k.ok();
        w.num(k.detuning_mhz).num(kok ? k.t1_us : kNaN).num(kok ? k.t1_sigma_us : kNaN);
        w.num(kok ? k.t1_zero_us : kNaN).num(kok ? k.delta_t1_frac : kNaN).num(kok ? k.sigma : kNaN);
        if (rok && !kok) status = "correction: " + k.status;
      } else {
        for (int j = 0; j < 6; ++j) w.num(kNaN);
        if (rok) status = corr_status;
      }
      w.text(status);
      w.end_row();
    }
    curve_files(name + "_r" + rate_label(rate), pts);

    s.text(name).num(rate);
    if (kind == MeasurementKind::projective && corr_status == "ok") {
      s.num(corr.wing.rate).num(corr.wing.sigma).integer(static_cast<long long>(corr.wing.rows)).num(corr.stark_shift_mhz);
      s.num(kNaN);
    } else if (kind == MeasurementKind::projective) {
      s.num(kNaN).num(kNaN).integer(0).num(c.corrections.stark_shift(rate)).num(kNaN);
    } else {
      s.num(kNaN).num(kNaN).integer(0).num(0.0).num(duty);
    }
    s.text(corr_status);
    s.end_row();
  }
  ctx.finish(w, p);
  ctx.finish(s, sp);
}

// ---------------------------------------------------------------- spectroscopy

void spectroscopy_cmd(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const SpectroscopySection& sp = c.spectroscopy;
  require_grid(sp.detunings_mhz, "spectroscopy.detunings_mhz");
  SimConfig base = base_sim(ctx);
  base.dt = sp.dt_us;
  base.n_traj = ctx.trajectories.value_or(sp.trajectories);
  base.bath_enabled = sp.bath;

  std::vector<std::pair<MeasurementKind, double>> settings{{MeasurementKind::none, kNoMeasurement}};
  for (MeasurementKind k : sp.kinds) {
    for (double r : sp.rates_mhz) settings.emplace_back(k, r);
  }
  double widest = 0.0;
  for (double d : sp.detunings_mhz) widest = std::max(widest, std::abs(d));
  std::vector<SimConfig> sims;
  for (const auto& [k, r] : settings) {
    SimConfig s = base;
    s.schedule = c.schedule(k, r);
    s.seed = derive_seed(ctx.seed, setting_key(k, r));
    s.validate(widest);
    sims.push_back(s);
  }

  const fs::path p = ctx.file("spectroscopy.csv");
  CsvWriter w(p.string(), ctx.comment(true, base.n_traj), {"kind", "rate_mhz", "probe_detuning_mhz", "p_e", "stderr"});
  const fs::path q = ctx.file("spectroscopy_summary.csv");
  CsvWriter s(q.string(), ctx.comment(true, base.n_traj),
              {"kind", "rate_mhz", "peak_count", "center_mhz", "fwhm_mhz", "centers_mhz", "status"});
  for (std::size_t i = 0; i < settings.size(); ++i) {
    const auto [kind, rate] = settings[i];
    const SpectroscopyCurve curve = run_spectroscopy(sims[i], sp.detunings_mhz, sp.probe_rabi_mhz, sp.duration_us);
    const std::string name(to_string(kind));
    for (std::size_t j = 0; j < curve.p_e.size(); ++j) {
      w.text(name).num(rate).num(curve.probe_detunings_mhz[j]).num(curve.p_e[j]).num(curve.stderr_[j]);
      w.end_row();
    }
    s.text(name).num(rate);
    try {
      const LineMetrics m = line_metrics(curve.probe_detunings_mhz, curve.p_e);
      const std::size_t main = m.main_peak();
      std::string centers;
      for (double x : m.centers) centers += (centers.empty() ? "" : ";") + format_number(x);
      s.integer(static_cast<long long>(m.peak_count)).num(m.centers[main]).num(m.fwhm[main]).text(centers).text("ok");
    } catch (const NoLineFound& e) {
      s.integer(0).num(kNaN).num(kNaN).text("").text(e.what());
    }
    s.end_row();
  }
  ctx.finish(w, p);
  ctx.finish(s, q);
}

// ---------------------------------------------------------------------- ramsey

void ramsey_cmd(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const RamseySection& rs = c.ramsey;
  SimConfig base = base_sim(ctx);
  base.n_traj = ctx.trajectories.value_or(rs.trajectories);
  base.validate();
  std::vector<double> phases(rs.phases);
  for (std::size_t k = 0; k < rs.phases; ++k) {
    phases[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(rs.phases);
  }

  const fs::path p = ctx.file("ramsey.csv");
  CsvWriter w(p.string(), ctx.comment(true, base.n_traj), {"theta1", "theta2", "phase", "p_e", "stderr"});
  const fs::path q = ctx.file("ramsey_summary.csv");
  CsvWriter s(q.string(), ctx.comment(true, base.n_traj),
              {"theta1", "theta2", "offset", "expected_offset", "visibility"});
  for (std::size_t i = 0; i < rs.theta_pairs.size(); ++i) {
    const auto [t1, t2] = rs.theta_pairs[i];
    SimConfig sim = base;
    sim.seed = derive_seed(ctx.seed, i);
    const RamseyFringe f = run_ramsey(sim, t1, t2, phases, rs.wait_us);
    for (std::size_t k = 0; k < phases.size(); ++k) {
      w.num(t1).num(t2).num(f.phases[k]).num(f.p_e[k]).num(f.stderr_[k]);
      w.end_row();
    }
    const double two_pi = 2.0 * std::numbers::pi;
    double expected = std::fmod(t2 - t1 + std::numbers::pi, two_pi);
    if (expected < 0.0) expected += two_pi;
    s.num(t1).num(t2).num(f.offset).num(expected).num(f.visibility);
    s.end_row();
  }
  ctx.finish(w, p);
  ctx.finish(s, q);
}

// ------------------------------------------------------------------------- psd

void psd_cmd(Context& ctx, const std::string& input) {
  const NumericTable t = read_numeric_csv(input, {"time_us", "t1_us"});
  {
    std::ifstream in(input, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    ctx.hash = sha256_hex(ctx.cfg.text + ss.str());
  }
  const SpectralEstimate e = fluctuation_psd(t.columns[0], t.columns[1]);
  const fs::path p = ctx.file("psd.csv");
  CsvWriter w(p.string(), ctx.comment(false), {"freq_mhz", "psd"});
  for (std::size_t i = 0; i < e.freqs.size(); ++i) {
    w.num(e.freqs[i]).num(e.psd[i]);
    w.end_row();
  }
  const fs::path q = ctx.file("psd_summary.csv");
  CsvWriter s(q.string(), ctx.comment(false), {"n_samples", "alpha", "alpha_sigma", "variance"});
  s.integer(static_cast<long long>(t.columns[0].size())).num(e.alpha).num(e.alpha_sigma).num(e.variance);
  s.end_row();
  ctx.finish(w, p);
  ctx.finish(s, q);
}

}  // namespace

int run_command(const std::string& name, const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  static const std::map<std::string, std::function<void(Context&)>> table{
      {"theory-sweep", theory_sweep},
      {"mc-sweep", mc_sweep_cmd},
      {"spectroscopy", spectroscopy_cmd},
      {"ramsey", ramsey_cmd},
  };
  try {
    Context ctx;
    ctx.cfg = opts.config_path ? load_config(*opts.config_path) : default_config();
    ctx.hash = sha256_hex(ctx.cfg.text);
    ctx.seed = opts.seed.value_or(ctx.cfg.seed);
    ctx.trajectories = opts.trajectories;
    if (ctx.trajectories && *ctx.trajectories < 2) throw ConfigError("--trajectories must be >= 2");
    ctx.threads = opts.threads;
    ctx.out = opts.out_dir.value_or(ctx.cfg.output_dir);
    fs::create_directories(ctx.out);

    if (name == "psd") {
      if (!opts.input) throw ConfigError("psd: --input <csv> is required");
      psd_cmd(ctx, *opts.input);
    } else {
      const auto it = table.find(name);
      if (it == table.end()) throw ConfigError("unknown command '" + name + "'");
      it->second(ctx);
    }
    for (const auto& f : ctx.written) out << f << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const CsvError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PreconditionError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace zeno::cli
