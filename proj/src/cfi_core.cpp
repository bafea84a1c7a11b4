#include "cfi/cfi_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <string>

#include "cfi/kernels.hpp"

namespace cfi {
namespace {

void check_detuning(double delta_omega) {
  if (!(delta_omega >= 0.0) || !std::isfinite(delta_omega))
    throw std::invalid_argument("delta_omega must be finite and >= 0");
}

void check_normalized(double integral, const char* what) {
  if (std::abs(integral - 1.0) > 1e-6)
    throw std::invalid_argument(std::string(what) +
                                ": intensity is not normalized (integral " +
                                std::to_string(integral) + ")");
}

double clamp_visibility(double v) { return std::clamp(v, -1.0, 1.0); }

}  // namespace

void CfiConfig::validate() const {
  check_detuning(delta_omega);
  if (!std::isfinite(phi_s) || !std::isfinite(phi_i))
    throw std::invalid_argument("CfiConfig: phases must be finite");
  if (!(eta >= 0.0) || !(eta <= 1.0))
    throw std::invalid_argument("CfiConfig: eta must lie in [0, 1]");
  if (!std::isfinite(beta2))
    throw std::invalid_argument("CfiConfig: beta2 must be finite");
}

double cfi_visibility_cw(const TemporalIntensity1D& jti, double delta_omega) {
  check_detuning(delta_omega);
  const TimeGrid& g = jti.grid();
  const auto& K = kernels::active();
  check_normalized(K.sum(jti.values().data(), g.n) * g.d_t,
                   "cfi_visibility_cw");
  const double fringe =
      K.cos_weighted_sum(jti.values().data(), g.n, delta_omega * g.point(0),
                         delta_omega * g.d_t) *
      g.d_t;
  return clamp_visibility(fringe);
}

double cfi_visibility_cw(const TemporalAmplitude1D& psi, double delta_omega) {
  return cfi_visibility_cw(TemporalIntensity1D::of(psi), delta_omega);
}

double cfi_probability_cw(const TemporalIntensity1D& jti,
                          const CfiConfig& cfg) {
  cfg.validate();
  const TimeGrid& g = jti.grid();
  const auto& K = kernels::active();
  check_normalized(K.sum(jti.values().data(), g.n) * g.d_t,
                   "cfi_probability_cw");
  const double fringe =
      K.cos_weighted_sum(jti.values().data(), g.n,
                         cfg.delta_omega * g.point(0) + cfg.phi_t(),
                         cfg.delta_omega * g.d_t) *
      g.d_t;
  const double p = cfg.eta * cfg.eta / 8.0 * (1.0 + fringe);
  return std::clamp(p, 0.0, cfg.eta * cfg.eta / 4.0);
}

SnappedOverlap cfi_visibility_freq(const SpectralAmplitude1D& jsa,
                                   double delta_omega) {
  check_detuning(delta_omega);
  const FrequencyGrid& g = jsa.grid();
  const long long m = std::llround(delta_omega / g.d_omega);
  if (m < 0 || static_cast<std::size_t>(m) >= g.n)
    throw std::invalid_argument(
        "cfi_visibility_freq: detuning exceeds the grid span");
  const std::size_t shift = static_cast<std::size_t>(m);
  const auto& K = kernels::active();
  const double* flat = kernels::flat(jsa.values().data());
  const std::size_t kept = g.n - shift;
  const double neglected =
      K.dot(flat + 2 * kept, flat + 2 * kept, 2 * shift) * g.d_omega;
  if (neglected > 1e-12)
    throw std::invalid_argument(
        "cfi_visibility_freq: " + std::to_string(neglected) +
        " of the spectral mass lies above the shifted window; widen the "
        "guard band");
  const double overlap =
      K.dot(flat, flat + 2 * shift, 2 * kept) * g.d_omega;
  const double used = static_cast<double>(m) * g.d_omega;
  return {clamp_visibility(overlap), used, delta_omega - used};
}

double cfi_probability_2d(const JointTemporalIntensity2D& jti,
                          const CfiConfig& cfg) {
  cfg.validate();
  const TimeGrid& gs = jti.signal();
  const TimeGrid& gi = jti.idler();
  const auto& K = kernels::active();
  check_normalized(
      K.sum(jti.values().data(), jti.values().size()) * gs.d_t * gi.d_t,
      "cfi_probability_2d");
  double fringe = 0.0;
  for (std::size_t s = 0; s < gs.n; ++s) {
    const double theta0 = cfg.delta_omega * (gs.point(s) - gi.point(0)) +
                          cfg.phi_t();
    fringe += K.cos_weighted_sum(jti.values().data() + s * gi.n, gi.n, theta0,
                                 -cfg.delta_omega * gi.d_t);
  }
  fringe *= gs.d_t * gi.d_t;
  const double p = cfg.eta * cfg.eta / 8.0 * (1.0 + fringe);
  return std::clamp(p, 0.0, cfg.eta * cfg.eta / 4.0);
}

double cfi_probability_2d(const JointTemporalAmplitude2D& jta,
                          const CfiConfig& cfg) {
  return cfi_probability_2d(JointTemporalIntensity2D::of(jta), cfg);
}

double cfi_probability_freq_2d(const JointSpectralAmplitude2D& jsa,
                               const CfiConfig& cfg) {
  cfg.validate();
  const FrequencyGrid& gs = jsa.signal();
  const FrequencyGrid& gi = jsa.idler();
  const long long ms = std::llround(cfg.delta_omega / gs.d_omega);
  const long long mi = std::llround(cfg.delta_omega / gi.d_omega);
  if (ms < 0 || static_cast<std::size_t>(ms) >= gs.n || mi < 0 ||
      static_cast<std::size_t>(mi) >= gi.n)
    throw std::invalid_argument(
        "cfi_probability_freq_2d: detuning exceeds a grid span");
  const std::size_t ss = static_cast<std::size_t>(ms);
  const std::size_t si = static_cast<std::size_t>(mi);

  double neglected = 0.0;
  cplx overlap = 0.0;
  for (std::size_t s = 0; s < gs.n; ++s) {
    const cplx* row = jsa.values().data() + s * gi.n;
    if (s + ss >= gs.n) {
      for (std::size_t i = 0; i < gi.n; ++i) neglected += std::norm(row[i]);
      continue;
    }
    const cplx* shifted = jsa.values().data() + (s + ss) * gi.n + si;
    for (std::size_t i = 0; i + si < gi.n; ++i)
      overlap += std::conj(row[i]) * shifted[i];
    for (std::size_t i = gi.n - si; i < gi.n; ++i)
      neglected += std::norm(row[i]);
  }
  const double measure = gs.d_omega * gi.d_omega;
  if (neglected * measure > 1e-12)
    throw std::invalid_argument(
        "cfi_probability_freq_2d: spectral mass above the shifted window; "
        "widen the guard band");
  const cplx phase{std::cos(cfg.phi_t()), std::sin(cfg.phi_t())};
  const double fringe = (phase * overlap * measure).real();
  const double p = cfg.eta * cfg.eta / 8.0 * (1.0 + fringe);
  return std::clamp(p, 0.0, cfg.eta * cfg.eta / 4.0);
}

double gaussian_visibility_closed_form(double sigma_cor, double delta_omega) {
  if (!(sigma_cor > 0.0) || !std::isfinite(sigma_cor))
    throw std::invalid_argument(
        "gaussian_visibility_closed_form: sigma_cor must be positive");
  check_detuning(delta_omega);
  const double x = delta_omega * sigma_cor;
  return std::exp(-x * x / 2.0);
}

void write_phi_sweep_csv(const PhiSweep& sweep, const std::string& path) {
  if (sweep.phi.size() != sweep.visibility.size())
    throw std::invalid_argument(
        "write_phi_sweep_csv: phi and visibility sizes differ");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "phi_rad,visibility\n";
  char buf[80];
  for (std::size_t k = 0; k < sweep.phi.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", sweep.phi[k],
                  sweep.visibility[k]);
    out << buf;
  }
  if (!out) throw std::runtime_error("error writing " + path);
}

PhiSweep read_phi_sweep_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");
  const auto loc = [&path](std::size_t line) {
    return path + ":" + std::to_string(line) + ": ";
  };
  PhiSweep sweep;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty()) continue;
    if (line == 1) {
      if (text != "phi_rad,visibility")
        throw std::invalid_argument(loc(line) + "expected header "
                                    "'phi_rad,visibility', got '" + text + "'");
      continue;
    }
    double cols[2];
    const char* p = text.c_str();
    for (int c = 0; c < 2; ++c) {
      char* end = nullptr;
      cols[c] = std::strtod(p, &end);
      if (end == p)
        throw std::invalid_argument(loc(line) + "malformed number in '" +
                                    text + "'");
      p = end;
      if (c == 0) {
        if (*p != ',')
          throw std::invalid_argument(loc(line) + "expected 2 columns in '" +
                                      text + "'");
        ++p;
      } else if (*p != '\0') {
        throw std::invalid_argument(loc(line) + "unexpected character in '" +
                                    text + "'");
      }
    }
    sweep.phi.push_back(cols[0]);
    sweep.visibility.push_back(cols[1]);
  }
  if (line == 0) throw std::invalid_argument(path + ": missing header row");
  return sweep;
}

}  // namespace cfi
