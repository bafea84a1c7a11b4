#include "cfi/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cfi::config {
namespace {

constexpr double kSpeedOfLight = 299792458.0;  // m/s

std::string loc(const std::string& name, std::size_t line) {
  return name + ":" + std::to_string(line) + ": ";
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

struct KeyValue {
  std::string section;
  std::string key;
  std::string value;
  std::size_t line;
};

double parse_number(const KeyValue& kv, const std::string& name) {
  const char* p = kv.value.c_str();
  char* end = nullptr;
  const double v = std::strtod(p, &end);
  if (end == p || *end != '\0' || !std::isfinite(v))
    throw std::invalid_argument(loc(name, kv.line) + "value of '" + kv.key +
                                "' is not a finite number: '" + kv.value +
                                "'");
  return v;
}

std::uint64_t parse_count(const KeyValue& kv, const std::string& name) {
  const char* p = kv.value.c_str();
  if (*p < '0' || *p > '9')
    throw std::invalid_argument(loc(name, kv.line) + "value of '" + kv.key +
                                "' is not a non-negative integer: '" +
                                kv.value + "'");
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(p, &end, 10);
  if (*end != '\0' || errno == ERANGE)
    throw std::invalid_argument(loc(name, kv.line) + "value of '" + kv.key +
                                "' is not a non-negative integer: '" +
                                kv.value + "'");
  return v;
}

[[noreturn]] void fail_choice(const KeyValue& kv, const std::string& name,
                              const char* choices) {
  throw std::invalid_argument(loc(name, kv.line) + "value of '" + kv.key +
                              "' must be one of " + choices + ", got '" +
                              kv.value + "'");
}

class Parser {
 public:
  explicit Parser(std::string name) : name_(std::move(name)) {}

  void feed(const KeyValue& kv, RunConfig& cfg) {
    const std::string full = kv.section + "." + kv.key;
    if (!seen_.insert({full, kv.line}).second)
      throw std::invalid_argument(loc(name_, kv.line) + "duplicate key '" +
                                  kv.key + "' in [" + kv.section +
                                  "] (first at line " +
                                  std::to_string(seen_[full]) + ")");
    if (kv.section == "state")
      feed_state(kv, cfg.state);
    else if (kv.section == "cfi")
      feed_cfi(kv, cfg.cfi);
    else if (kv.section == "detector")
      feed_detector(kv, cfg.detector);
    else if (kv.section == "simulation")
      feed_simulation(kv, cfg.simulation);
    else if (kv.section == "output")
      feed_output(kv, cfg.output);
    else
      throw std::invalid_argument(loc(name_, kv.line) + "unknown section [" +
                                  kv.section + "]");
  }

  bool has(const char* full_key) const { return seen_.count(full_key) != 0; }

  void finish(RunConfig& cfg) const {
    if (!has("state.kind"))
      throw std::invalid_argument(name_ +
                                  ": missing required key 'kind' in [state]");
    switch (cfg.state.kind) {
      case StateKind::gaussian:
        require("state.sigma_cor_s", "sigma_cor_s", "a gaussian state");
        forbid_flat_top("a gaussian state");
        forbid("state.path", "path", "a gaussian state");
        break;
      case StateKind::flat_top:
        require("state.band_edge_hz", "band_edge_hz", "a flat_top state");
        require("state.phase_edge_hz", "phase_edge_hz", "a flat_top state");
        forbid("state.sigma_cor_s", "sigma_cor_s", "a flat_top state");
        forbid("state.path", "path", "a flat_top state");
        break;
      case StateKind::tabulated:
        require("state.path", "path", "a tabulated state");
        forbid("state.sigma_cor_s", "sigma_cor_s", "a tabulated state");
        forbid_flat_top("a tabulated state");
        forbid("state.grid_n", "grid_n", "a tabulated state");
        forbid("state.grid_span_hz", "grid_span_hz", "a tabulated state");
        break;
    }
    validate(cfg);
  }

 private:
  void require(const char* full, const char* key, const char* what) const {
    if (!has(full))
      throw std::invalid_argument(name_ + ": " + what + " needs '" + key +
                                  "' in [state]");
  }
  void forbid(const char* full, const char* key, const char* what) const {
    if (has(full))
      throw std::invalid_argument(name_ + ": key '" + key +
                                  "' does not belong to " + what);
  }
  void forbid_flat_top(const char* what) const {
    forbid("state.band_edge_hz", "band_edge_hz", what);
    forbid("state.phase_edge_hz", "phase_edge_hz", what);
    forbid("state.phi_rad", "phi_rad", what);
  }

  void feed_state(const KeyValue& kv, StateSection& s) {
    if (kv.key == "kind") {
      if (kv.value == "gaussian")
        s.kind = StateKind::gaussian;
      else if (kv.value == "flat_top")
        s.kind = StateKind::flat_top;
      else if (kv.value == "tabulated")
        s.kind = StateKind::tabulated;
      else
        fail_choice(kv, name_, "gaussian, flat_top, tabulated");
    } else if (kv.key == "grid_n") {
      s.grid_n = static_cast<std::size_t>(parse_count(kv, name_));
    } else if (kv.key == "grid_span_hz") {
      s.grid_span_hz = parse_number(kv, name_);
    } else if (kv.key == "sigma_cor_s") {
      s.sigma_cor_s = parse_number(kv, name_);
    } else if (kv.key == "band_edge_hz") {
      s.band_edge_hz = parse_number(kv, name_);
    } else if (kv.key == "phase_edge_hz") {
      s.phase_edge_hz = parse_number(kv, name_);
    } else if (kv.key == "phi_rad") {
      s.phi_rad = parse_number(kv, name_);
    } else if (kv.key == "path") {
      if (kv.value.empty())
        throw std::invalid_argument(loc(name_, kv.line) +
                                    "'path' must not be empty");
      s.path = kv.value;
    } else {
      unknown(kv);
    }
  }

  void feed_cfi(const KeyValue& kv, CfiSection& c) {
    if (kv.key == "delta_omega_hz")
      c.delta_omega_hz = parse_number(kv, name_);
    else if (kv.key == "phi_s_rad")
      c.phi_s_rad = parse_number(kv, name_);
    else if (kv.key == "phi_i_rad")
      c.phi_i_rad = parse_number(kv, name_);
    else if (kv.key == "eta")
      c.eta = parse_number(kv, name_);
    else if (kv.key == "dispersion_ns_per_nm")
      c.dispersion_ns_per_nm = parse_number(kv, name_);
    else if (kv.key == "center_wavelength_nm")
      c.center_wavelength_nm = parse_number(kv, name_);
    else
      unknown(kv);
  }

  void feed_detector(const KeyValue& kv, sim::DetectorModel& d) {
    if (kv.key == "efficiency")
      d.efficiency = parse_number(kv, name_);
    else if (kv.key == "jitter_sigma_s")
      d.jitter_sigma = parse_number(kv, name_);
    else if (kv.key == "dark_rate_hz")
      d.dark_rate = parse_number(kv, name_);
    else if (kv.key == "tick_s")
      d.tick = parse_number(kv, name_);
    else
      unknown(kv);
  }

  void feed_simulation(const KeyValue& kv, SimulationSection& s) {
    if (kv.key == "pair_rate_hz")
      s.pair_rate_hz = parse_number(kv, name_);
    else if (kv.key == "duration_s")
      s.duration_s = parse_number(kv, name_);
    else if (kv.key == "bins")
      s.bins = static_cast<std::size_t>(parse_count(kv, name_));
    else if (kv.key == "scan") {
      if (kv.value == "drift")
        s.scan = ScanKind::drift;
      else if (kv.value == "pzt")
        s.scan = ScanKind::pzt;
      else
        fail_choice(kv, name_, "drift, pzt");
    } else if (kv.key == "seed")
      s.seed = parse_count(kv, name_);
    else if (kv.key == "max_points")
      s.max_points = static_cast<std::size_t>(parse_count(kv, name_));
    else if (kv.key == "carrier_suppression_db")
      s.carrier_suppression_db = parse_number(kv, name_);
    else if (kv.key == "drift_rate_rad_s")
      s.drift_rate_rad_s = parse_number(kv, name_);
    else if (kv.key == "drift_phi0_rad")
      s.drift_phi0_rad = parse_number(kv, name_);
    else if (kv.key == "insertion_loss_db_s")
      s.insertion_loss_db_s = parse_number(kv, name_);
    else if (kv.key == "insertion_loss_db_i")
      s.insertion_loss_db_i = parse_number(kv, name_);
    else if (kv.key == "multi_pair_penalty")
      s.multi_pair_penalty = parse_number(kv, name_);
    else if (kv.key == "modulator_dispersion_penalty")
      s.modulator_dispersion_penalty = parse_number(kv, name_);
    else if (kv.key == "extra_sideband_penalty")
      s.extra_sideband_penalty = parse_number(kv, name_);
    else if (kv.key == "phase_blur_sigma_rad")
      s.phase_blur_sigma_rad = parse_number(kv, name_);
    else if (kv.key == "visibility_override")
      s.visibility_override = parse_number(kv, name_);
    else
      unknown(kv);
  }

  void feed_output(const KeyValue& kv, OutputSection& o) {
    if (kv.key == "directory") {
      if (kv.value.empty())
        throw std::invalid_argument(loc(name_, kv.line) +
                                    "'directory' must not be empty");
      o.directory = kv.value;
    } else if (kv.key == "prefix") {
      if (kv.value.empty())
        throw std::invalid_argument(loc(name_, kv.line) +
                                    "'prefix' must not be empty");
      o.prefix = kv.value;
    } else {
      unknown(kv);
    }
  }

  [[noreturn]] void unknown(const KeyValue& kv) const {
    throw std::invalid_argument(loc(name_, kv.line) + "unknown key '" +
                                kv.key + "' in [" + kv.section + "]");
  }

  void validate(RunConfig& cfg) const {
    const StateSection& st = cfg.state;
    if (st.kind != StateKind::tabulated) {
      if (st.grid_n < 8 || (st.grid_n & (st.grid_n - 1)) != 0)
        fail("grid_n must be a power of two, at least 8");
      if (!(st.grid_span_hz > 0.0)) fail("grid_span_hz must be positive");
    }
    if (st.kind == StateKind::gaussian && !(st.sigma_cor_s > 0.0))
      fail("sigma_cor_s must be positive");
    if (st.kind == StateKind::flat_top) {
      if (!(st.band_edge_hz > 0.0)) fail("band_edge_hz must be positive");
      if (!(st.phase_edge_hz > 0.0) || !(st.phase_edge_hz < st.band_edge_hz))
        fail("need 0 < phase_edge_hz < band_edge_hz");
      if (!std::isfinite(st.phi_rad)) fail("phi_rad must be finite");
    }

    to_cfi_config(cfg.cfi).validate();
    cfg.detector.validate();
    to_sim_options(cfg.simulation).validate();
    to_shifter(cfg.simulation).validate();
    to_drift(cfg.simulation).validate();
    const SimulationSection& sim = cfg.simulation;
    if (!(sim.pair_rate_hz >= 0.0)) fail("pair_rate_hz must be >= 0");
    if (!(sim.duration_s > 0.0)) fail("duration_s must be positive");
    if (sim.bins == 0) fail("bins must be positive");
    if (sim.max_points == 0) fail("max_points must be positive");
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw std::invalid_argument(name_ + ": " + message);
  }

  std::string name_;
  std::map<std::string, std::size_t> seen_;
};

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path);
}

RunConfig parse_config(const std::string& text, const std::string& name) {
  RunConfig cfg;
  Parser parser(name);
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::size_t comment = raw.find_first_of("#;");
    const std::string stripped =
        trim(comment == std::string::npos ? raw : raw.substr(0, comment));
    if (stripped.empty()) continue;
    if (stripped.front() == '[') {
      if (stripped.back() != ']')
        throw std::invalid_argument(loc(name, line) +
                                    "malformed section header '" + stripped +
                                    "'");
      section = trim(stripped.substr(1, stripped.size() - 2));
      if (section.empty())
        throw std::invalid_argument(loc(name, line) + "empty section name");
      continue;
    }
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(loc(name, line) +
                                  "expected 'key = value', got '" + stripped +
                                  "'");
    if (section.empty())
      throw std::invalid_argument(loc(name, line) +
                                  "key outside of any [section]");
    KeyValue kv{section, trim(stripped.substr(0, eq)),
                trim(stripped.substr(eq + 1)), line};
    if (kv.key.empty())
      throw std::invalid_argument(loc(name, line) + "empty key");
    parser.feed(kv, cfg);
  }
  parser.finish(cfg);
  return cfg;
}

double beta2_from_dispersion(double ns_per_nm, double wavelength_nm) {
  if (!std::isfinite(ns_per_nm) || !(wavelength_nm > 0.0))
    throw std::invalid_argument(
        "beta2_from_dispersion: need finite dispersion and positive "
        "wavelength");
  const double d = ns_per_nm;  // ns/nm = s/m
  const double lambda = wavelength_nm * 1e-9;
  return d * lambda * lambda / (2.0 * std::numbers::pi * kSpeedOfLight);
}

CfiConfig to_cfi_config(const CfiSection& cfi) {
  CfiConfig out;
  out.delta_omega = 2.0 * std::numbers::pi * cfi.delta_omega_hz;
  out.phi_s = cfi.phi_s_rad;
  out.phi_i = cfi.phi_i_rad;
  out.eta = cfi.eta;
  out.beta2 =
      beta2_from_dispersion(cfi.dispersion_ns_per_nm, cfi.center_wavelength_nm);
  return out;
}

sim::SimOptions to_sim_options(const SimulationSection& s) {
  sim::SimOptions opts;
  opts.insertion_loss_db_s = s.insertion_loss_db_s;
  opts.insertion_loss_db_i = s.insertion_loss_db_i;
  opts.multi_pair_penalty = s.multi_pair_penalty;
  opts.modulator_dispersion_penalty = s.modulator_dispersion_penalty;
  opts.extra_sideband_penalty = s.extra_sideband_penalty;
  opts.phase_blur_sigma = s.phase_blur_sigma_rad;
  opts.visibility_override = s.visibility_override;
  return opts;
}

sim::ShifterModel to_shifter(const SimulationSection& s) {
  sim::ShifterModel shifter;
  shifter.carrier_suppression_db = s.carrier_suppression_db;
  return shifter;
}

sim::DriftModel to_drift(const SimulationSection& s) {
  sim::DriftModel drift;
  drift.rate = s.drift_rate_rad_s;
  drift.phi0 = s.drift_phi0_rad;
  return drift;
}

TabulatedState build_state(const RunConfig& cfg) {
  const StateSection& st = cfg.state;
  switch (st.kind) {
    case StateKind::tabulated:
      return tabulated_jsa(st.path);
    case StateKind::gaussian:
    case StateKind::flat_top:
      break;
  }
  const double d_omega =
      2.0 * std::numbers::pi * st.grid_span_hz / static_cast<double>(st.grid_n);
  const FrequencyGrid grid(st.grid_n, d_omega, 0.0);
  if (st.kind == StateKind::gaussian)
    return gaussian_cw_jsa(st.sigma_cor_s, grid);
  const FlatTopPhaseParams params{2.0 * std::numbers::pi * st.band_edge_hz,
                                  2.0 * std::numbers::pi * st.phase_edge_hz,
                                  st.phi_rad};
  return flat_top_jsa(params, grid,
                      2.0 * std::numbers::pi * cfg.cfi.delta_omega_hz);
}

SpectralAmplitude1D build_state_1d(const RunConfig& cfg) {
  TabulatedState state = build_state(cfg);
  if (auto* one_d = std::get_if<SpectralAmplitude1D>(&state))
    return std::move(*one_d);
  throw std::invalid_argument(
      cfg.state.path +
      ": holds a 2-D joint amplitude; this command needs a 1-D state");
}

std::string output_path(const OutputSection& out, const std::string& suffix) {
  std::string dir = out.directory;
  if (!dir.empty() && dir.back() != '/') dir += '/';
  return dir + out.prefix + suffix;
}

}  // namespace cfi::config
