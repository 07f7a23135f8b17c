#include "cli/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "zeno/errors.hpp"
#include "zeno/units.hpp"

namespace zeno::cli {

namespace {

std::vector<double> linspace(double start, double stop, std::size_t count) {
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) {
    v[i] = count == 1 ? start : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return v;
}

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Mark& mark, const std::string& msg) const {
    std::ostringstream os;
    os << source_;
    if (!mark.is_null()) os << ":" << mark.line + 1 << ":" << mark.column + 1;
    os << ": " << msg;
    throw ConfigError(os.str());
  }
  [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const { fail(node.Mark(), msg); }

  /// Rejects keys outside `allowed`; returns false when the node is absent.
  bool section(const YAML::Node& node, const std::string& name, std::initializer_list<const char*> allowed) const {
    if (!node || node.IsNull()) return false;
    if (!node.IsMap()) fail(node, "'" + name + "' must be a mapping");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& kv : node) {
      const std::string key = kv.first.as<std::string>();
      if (!ok.count(key)) {
        std::string list;
        for (const auto& k : ok) list += (list.empty() ? "" : ", ") + k;
        fail(kv.first, "unknown key '" + key + "' in '" + name + "' (allowed: " + list + ")");
      }
    }
    return true;
  }

  double number(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) fail(node, what + " must be a number");
    try {
      const double v = node.as<double>();
      if (!std::isfinite(v)) fail(node, what + " must be finite");
      return v;
    } catch (const YAML::BadConversion&) {
      fail(node, what + " must be a number, got '" + node.Scalar() + "'");
    }
  }

  double positive(const YAML::Node& node, const std::string& what) const {
    const double v = number(node, what);
    if (!(v > 0.0)) fail(node, what + " must be > 0");
    return v;
  }

  double non_negative(const YAML::Node& node, const std::string& what) const {
    const double v = number(node, what);
    if (!(v >= 0.0)) fail(node, what + " must be >= 0");
    return v;
  }

  std::size_t count(const YAML::Node& node, const std::string& what, std::size_t min) const {
    const double v = number(node, what);
    if (v != std::floor(v) || v < static_cast<double>(min) || v > 1e9) {
      fail(node, what + " must be an integer >= " + std::to_string(min));
    }
    return static_cast<std::size_t>(v);
  }

  bool boolean(const YAML::Node& node, const std::string& what) const {
    try {
      return node.as<bool>();
    } catch (const YAML::BadConversion&) {
      fail(node, what + " must be true or false");
    }
  }

  std::uint64_t seed(const YAML::Node& node) const {
    try {
      return node.as<std::uint64_t>();
    } catch (const YAML::BadConversion&) {
      fail(node, "seed must be an unsigned 64-bit integer");
    }
  }

  std::vector<double> numbers(const YAML::Node& node, const std::string& what) const {
    if (!node.IsSequence() || node.size() == 0) fail(node, what + " must be a non-empty list");
    std::vector<double> v;
    for (const auto& n : node) v.push_back(number(n, what + " entry"));
    return v;
  }

  std::vector<double> positive_list(const YAML::Node& node, const std::string& what) const {
    std::vector<double> v;
    for (const auto& n : node) {
      if (!node.IsSequence()) break;
      v.push_back(positive(n, what + " entry"));
    }
    if (!node.IsSequence() || v.empty()) fail(node, what + " must be a non-empty list");
    return v;
  }

  /// Either a list or {start, stop, count}.
  std::vector<double> grid(const YAML::Node& node, const std::string& what) const {
    if (node.IsSequence()) {
      std::vector<double> v = numbers(node, what);
      for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] > v[i - 1])) fail(node[i], what + " must increase strictly");
      }
      return v;
    }
    if (!section(node, what, {"start", "stop", "count"})) fail(node, what + " must be a list or {start, stop, count}");
    for (const char* k : {"start", "stop", "count"}) {
      if (!node[k]) fail(node, what + " is missing '" + k + "'");
    }
    const double a = number(node["start"], what + ".start");
    const double b = number(node["stop"], what + ".stop");
    const std::size_t n = count(node["count"], what + ".count", 1);
    if (n > 1 && !(b > a)) fail(node["stop"], what + ".stop must exceed start");
    return linspace(a, b, n);
  }

  std::map<double, double> rate_map(const YAML::Node& node, const std::string& what) const {
    if (!node.IsMap()) fail(node, what + " must map measurement rate (MHz) to a value");
    std::map<double, double> m;
    for (const auto& kv : node) {
      const double rate = positive(kv.first, what + " rate key");
      m[rate] = number(kv.second, what + " value");
    }
    return m;
  }

  std::vector<MeasurementKind> kinds(const YAML::Node& node, const std::string& what, bool allow_none) const {
    if (!node.IsSequence() || node.size() == 0) fail(node, what + " must be a non-empty list");
    std::vector<MeasurementKind> out;
    for (const auto& n : node) {
      const auto k = parse_measurement_kind(n.Scalar());
      if (!k || (!allow_none && *k == MeasurementKind::none)) {
        fail(n, "unknown measurement kind '" + n.Scalar() +
                    "' (expected projective, quasi-random-phase or quasi-fixed-phase)");
      }
      out.push_back(*k);
    }
    return out;
  }

 private:
  std::string source_;
};

void read_device(const Reader& r, const YAML::Node& n, DeviceParams& d) {
  if (!r.section(n, "device", {"omega_ge_mhz", "chi_mhz", "kappa_mhz", "eta", "nbar", "t1_spont_us"})) return;
  if (n["omega_ge_mhz"]) d.omega_ge_mhz = r.positive(n["omega_ge_mhz"], "device.omega_ge_mhz");
  if (n["chi_mhz"]) d.chi_mhz = r.number(n["chi_mhz"], "device.chi_mhz");
  if (n["kappa_mhz"]) d.kappa_mhz = r.positive(n["kappa_mhz"], "device.kappa_mhz");
  if (n["eta"]) d.eta = r.number(n["eta"], "device.eta");
  if (n["nbar"]) d.nbar = r.non_negative(n["nbar"], "device.nbar");
  if (n["t1_spont_us"]) d.t1_spont_us = r.positive(n["t1_spont_us"], "device.t1_spont_us");
  try {
    d.validate();
  } catch (const PreconditionError& e) {
    r.fail(n, e.what());
  }
}

void read_bath(const Reader& r, const YAML::Node& n, RunConfig& c) {
  if (!r.section(n, "bath", {"width_mhz", "thermal_photons", "strength"})) return;
  if (n["width_mhz"]) c.bath_width_mhz = r.positive(n["width_mhz"], "bath.width_mhz");
  if (n["thermal_photons"] && n["strength"]) r.fail(n["strength"], "give either bath.thermal_photons or bath.strength, not both");
  if (n["thermal_photons"]) c.thermal_photons = r.non_negative(n["thermal_photons"], "bath.thermal_photons");
  if (n["strength"]) {
    c.strength = r.non_negative(n["strength"], "bath.strength");
    c.thermal_photons.reset();
  }
}

void read_sweep(const Reader& r, const YAML::Node& n, SweepSection& s) {
  if (!r.section(n, "sweep", {"detunings_mhz", "rates_mhz", "kinds", "time_points", "duration_us"})) return;
  if (n["detunings_mhz"]) s.detunings_mhz = r.grid(n["detunings_mhz"], "sweep.detunings_mhz");
  if (n["rates_mhz"]) s.rates_mhz = r.positive_list(n["rates_mhz"], "sweep.rates_mhz");
  if (n["kinds"]) s.kinds = r.kinds(n["kinds"], "sweep.kinds", false);
  if (n["time_points"]) s.time_points = r.count(n["time_points"], "sweep.time_points", 5);
  if (n["duration_us"]) s.duration_us = r.positive(n["duration_us"], "sweep.duration_us");
}

void read_measurement(const Reader& r, const YAML::Node& n, MeasurementSection& m) {
  if (!r.section(n, "measurement", {"pulse_us", "suspend_during_pulse", "nonqnd_rate_per_us", "stark_shift_mhz",
                                    "fixed_theta1", "fixed_theta2"})) {
    return;
  }
  if (n["pulse_us"]) m.pulse_us = r.non_negative(n["pulse_us"], "measurement.pulse_us");
  if (n["suspend_during_pulse"]) m.suspend_during_pulse = r.boolean(n["suspend_during_pulse"], "measurement.suspend_during_pulse");
  if (n["nonqnd_rate_per_us"]) {
    m.nonqnd_rate_per_us = r.rate_map(n["nonqnd_rate_per_us"], "measurement.nonqnd_rate_per_us");
    for (const auto& [k, v] : m.nonqnd_rate_per_us) {
      if (v < 0.0) r.fail(n["nonqnd_rate_per_us"], "measurement.nonqnd_rate_per_us values must be >= 0");
    }
  }
  if (n["stark_shift_mhz"]) m.stark_shift_mhz = r.rate_map(n["stark_shift_mhz"], "measurement.stark_shift_mhz");
  if (n["fixed_theta1"]) m.fixed_theta1 = r.number(n["fixed_theta1"], "measurement.fixed_theta1");
  if (n["fixed_theta2"]) m.fixed_theta2 = r.number(n["fixed_theta2"], "measurement.fixed_theta2");
}

void read_numerics(const Reader& r, const YAML::Node& n, RunConfig& c) {
  if (!r.section(n, "numerics", {"dt_us", "trajectories", "coupling", "seed"})) return;
  if (n["dt_us"]) c.numerics.dt_us = r.positive(n["dt_us"], "numerics.dt_us");
  if (n["trajectories"]) c.numerics.trajectories = r.count(n["trajectories"], "numerics.trajectories", 2);
  if (n["coupling"]) {
    if (n["coupling"].Scalar() != "analytic") c.numerics.coupling = r.positive(n["coupling"], "numerics.coupling");
  }
  if (n["seed"]) c.seed = r.seed(n["seed"]);
}

void read_corrections(const Reader& r, const YAML::Node& n, RunConfig& c) {
  CorrectionSpec& s = c.corrections;
  s.stark_shift_per_setting = c.measurement.stark_shift_mhz;
  if (!r.section(n, "corrections", {"wing_threshold_mhz", "duty_factor_override", "nonqnd_rate_override",
                                    "stark_shift_mhz"})) {
    return;
  }
  if (n["wing_threshold_mhz"]) s.wing_threshold_mhz = r.positive(n["wing_threshold_mhz"], "corrections.wing_threshold_mhz");
  if (n["duty_factor_override"]) {
    s.duty_factor_per_setting = r.rate_map(n["duty_factor_override"], "corrections.duty_factor_override");
    for (const auto& [k, v] : s.duty_factor_per_setting) {
      if (!(v > 0.0 && v <= 1.0)) r.fail(n["duty_factor_override"], "duty factors must lie in (0, 1]");
    }
  }
  if (n["nonqnd_rate_override"]) {
    s.nonqnd_rate_per_setting = r.rate_map(n["nonqnd_rate_override"], "corrections.nonqnd_rate_override");
    for (const auto& [k, v] : s.nonqnd_rate_per_setting) {
      if (v < 0.0) r.fail(n["nonqnd_rate_override"], "nonqnd rates must be >= 0");
    }
  }
  if (n["stark_shift_mhz"]) s.stark_shift_per_setting = r.rate_map(n["stark_shift_mhz"], "corrections.stark_shift_mhz");
}

void read_spectroscopy(const Reader& r, const YAML::Node& n, SpectroscopySection& s) {
  if (!r.section(n, "spectroscopy", {"detunings_mhz", "rates_mhz", "kinds", "probe_rabi_mhz", "duration_us",
                                     "dt_us", "bath", "trajectories"})) {
    return;
  }
  if (n["detunings_mhz"]) s.detunings_mhz = r.grid(n["detunings_mhz"], "spectroscopy.detunings_mhz");
  if (n["rates_mhz"]) s.rates_mhz = r.positive_list(n["rates_mhz"], "spectroscopy.rates_mhz");
  if (n["kinds"]) s.kinds = r.kinds(n["kinds"], "spectroscopy.kinds", false);
  if (n["probe_rabi_mhz"]) s.probe_rabi_mhz = r.positive(n["probe_rabi_mhz"], "spectroscopy.probe_rabi_mhz");
  if (n["duration_us"]) s.duration_us = r.positive(n["duration_us"], "spectroscopy.duration_us");
  if (n["dt_us"]) s.dt_us = r.positive(n["dt_us"], "spectroscopy.dt_us");
  if (n["bath"]) s.bath = r.boolean(n["bath"], "spectroscopy.bath");
  if (n["trajectories"]) s.trajectories = r.count(n["trajectories"], "spectroscopy.trajectories", 1);
}

void read_ramsey(const Reader& r, const YAML::Node& n, RamseySection& s) {
  if (!r.section(n, "ramsey", {"theta_pairs", "phases", "wait_us", "trajectories"})) return;
  if (n["theta_pairs"]) {
    const YAML::Node& p = n["theta_pairs"];
    if (!p.IsSequence() || p.size() == 0) r.fail(p, "ramsey.theta_pairs must be a non-empty list of [theta1, theta2]");
    s.theta_pairs.clear();
    for (const auto& e : p) {
      if (!e.IsSequence() || e.size() != 2) r.fail(e, "each ramsey.theta_pairs entry must be [theta1, theta2]");
      s.theta_pairs.emplace_back(r.number(e[0], "theta1"), r.number(e[1], "theta2"));
    }
  }
  if (n["phases"]) s.phases = r.count(n["phases"], "ramsey.phases", 4);
  if (n["wait_us"]) s.wait_us = r.non_negative(n["wait_us"], "ramsey.wait_us");
  if (n["trajectories"]) s.trajectories = r.count(n["trajectories"], "ramsey.trajectories", 1);
}

}  // namespace

BathSpec RunConfig::bath() const {
  const double B = to_angular(bath_width_mhz);
  if (strength) return {*strength, B, 0.0};
  const double n = thermal_photons.value_or(0.0);
  if (n == 0.0) return {0.0, B, 0.0};
  return {calibrate_strength(thermal_t1(n, device.t1_spont_us), device.t1_spont_us, B), B, 0.0};
}

MeasurementSchedule RunConfig::schedule(MeasurementKind kind, double rate_mhz) const {
  auto lookup = [rate_mhz](const std::map<double, double>& m) {
    for (const auto& [k, v] : m) {
      if (std::abs(k - rate_mhz) <= 1e-9 * std::max(1.0, k)) return v;
    }
    return 0.0;
  };
  MeasurementSchedule s;
  switch (kind) {
    case MeasurementKind::none:
      return MeasurementSchedule::none();
    case MeasurementKind::projective:
      s = MeasurementSchedule::projective(rate_mhz, lookup(measurement.nonqnd_rate_per_us),
                                          lookup(measurement.stark_shift_mhz));
      break;
    case MeasurementKind::quasi_random_phase:
      s = MeasurementSchedule::quasi_random(rate_mhz, measurement.pulse_us);
      break;
    case MeasurementKind::quasi_fixed_phase:
      s = MeasurementSchedule::quasi_fixed(rate_mhz, measurement.fixed_theta1, measurement.fixed_theta2,
                                           measurement.pulse_us);
      break;
  }
  s.suspend_during_pulse = measurement.suspend_during_pulse;
  return s;
}

RunConfig default_config() {
  RunConfig c;
  c.source = "<defaults>";
  c.sweep.detunings_mhz = linspace(-5.0, 5.0, 41);
  c.spectroscopy.detunings_mhz = linspace(-2.5, 2.5, 201);
  c.corrections.stark_shift_per_setting = c.measurement.stark_shift_mhz;
  return c;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  const Reader r(source);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    r.fail(e.mark, "YAML syntax error: " + e.msg);
  }
  RunConfig c = default_config();
  c.source = source;
  c.text = text;
  if (!root || root.IsNull()) return c;
  if (!r.section(root, "top level", {"seed", "output", "device", "bath", "sweep", "measurement", "numerics",
                                     "corrections", "spectroscopy", "ramsey"})) {
    return c;
  }
  try {
    if (root["seed"]) c.seed = r.seed(root["seed"]);
    if (r.section(root["output"], "output", {"dir"})) {
      if (root["output"]["dir"]) c.output_dir = root["output"]["dir"].as<std::string>();
    }
    read_device(r, root["device"], c.device);
    read_bath(r, root["bath"], c);
    read_sweep(r, root["sweep"], c.sweep);
    read_measurement(r, root["measurement"], c.measurement);
    read_numerics(r, root["numerics"], c);
    read_corrections(r, root["corrections"], c);
    read_spectroscopy(r, root["spectroscopy"], c.spectroscopy);
    read_ramsey(r, root["ramsey"], c.ramsey);
  } catch (const YAML::Exception& e) {
    r.fail(e.mark, e.msg);
  }

  // Cross-field checks that need the full document.
  for (double rate : c.sweep.rates_mhz) {
    if (c.measurement.pulse_us >= 1.0 / rate) {
      r.fail(root["measurement"] ? root["measurement"]["pulse_us"] : root, "measurement.pulse_us must be shorter than every measurement period");
    }
  }
  if (c.bath_width_mhz > 0.0 && c.thermal_photons) {
    try {
      (void)c.bath();
    } catch (const PreconditionError& e) {
      r.fail(root["bath"], e.what());
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace zeno::cli
