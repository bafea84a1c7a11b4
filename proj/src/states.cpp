#include "cfi/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "cfi/amplitude_io.hpp"

namespace cfi {
namespace {

void check_gaussian_params(const GaussianBiphotonParams& p) {
  if (!(p.sigma_coh > 0.0) || !std::isfinite(p.sigma_coh))
    throw std::invalid_argument("gaussian state: sigma_coh must be positive");
  if (!(p.sigma_cor > 0.0) || !std::isfinite(p.sigma_cor))
    throw std::invalid_argument("gaussian state: sigma_cor must be positive");
  if (!std::isfinite(p.omega_s0) || !std::isfinite(p.omega_i0))
    throw std::invalid_argument("gaussian state: carriers must be finite");
}

/// Reach of the grid rectangle along the rotated +/- directions, measured
/// from the state center (difference and sum of the axis coordinates).
template <typename Grid>
double rotated_reach(const Grid& a, const Grid& b, bool difference,
                     double center_shift) {
  const double a_min = a.point(0), a_max = a.point(a.n - 1);
  const double b_min = b.point(0), b_max = b.point(b.n - 1);
  double lo, hi;
  if (difference) {
    lo = a_min - b_max;
    hi = a_max - b_min;
  } else {
    lo = a_min + b_min;
    hi = a_max + b_max;
  }
  lo -= center_shift;
  hi -= center_shift;
  return std::min(-lo, hi);
}

void check_rms_fit(double reach, double rms, const char* direction,
                   const char* what) {
  if (!(reach >= 6.0 * rms))
    throw std::invalid_argument(
        std::string(what) + ": grid too narrow along the " + direction +
        " direction (need 6 rms = " + std::to_string(6.0 * rms) +
        ", reachable " + std::to_string(reach) + ")");
}

void check_tail_mass(double raw, double analytic, const char* tight_direction,
                     const char* what) {
  if (raw < (1.0 - 1e-6) * analytic)
    throw std::invalid_argument(std::string(what) +
                                ": more than 1e-6 of the probability mass "
                                "falls off-grid, worst along the " +
                                std::string(tight_direction) + " direction");
}

}  // namespace

JointSpectralAmplitude2D gaussian_jsa(const GaussianBiphotonParams& params,
                                      const FrequencyGrid& signal,
                                      const FrequencyGrid& idler) {
  check_gaussian_params(params);
  const double rms_minus = 1.0 / (2.0 * params.sigma_coh);
  const double rms_plus = 1.0 / params.sigma_cor;
  const double reach_minus = rotated_reach(signal, idler, true, 0.0);
  const double reach_plus = rotated_reach(signal, idler, false, 0.0);
  check_rms_fit(reach_minus, rms_minus, "omega_S - omega_I", "gaussian_jsa");
  check_rms_fit(reach_plus, rms_plus, "omega_S + omega_I", "gaussian_jsa");

  std::vector<cplx> values(signal.n * idler.n);
  for (std::size_t s = 0; s < signal.n; ++s) {
    const double ws = signal.point(s);
    for (std::size_t i = 0; i < idler.n; ++i) {
      const double wi = idler.point(i);
      const double minus = ws - wi, plus = ws + wi;
      values[s * idler.n + i] =
          std::exp(-minus * minus * params.sigma_coh * params.sigma_coh -
                   plus * plus * params.sigma_cor * params.sigma_cor / 4.0);
    }
  }
  const double raw = norm_l2(signal, idler, values);
  const double analytic =
      std::numbers::pi / (2.0 * params.sigma_coh * params.sigma_cor);
  const char* tight = (reach_minus / rms_minus < reach_plus / rms_plus)
                          ? "omega_S - omega_I"
                          : "omega_S + omega_I";
  check_tail_mass(raw, analytic, tight, "gaussian_jsa");
  return JointSpectralAmplitude2D::normalized(signal, idler, std::move(values));
}

JointTemporalAmplitude2D gaussian_jta(const GaussianBiphotonParams& params,
                                      const TimeGrid& signal,
                                      const TimeGrid& idler, Carrier carrier) {
  check_gaussian_params(params);
  const double rms_plus = 2.0 * params.sigma_coh;
  const double rms_minus = params.sigma_cor;
  const double reach_plus = rotated_reach(signal, idler, false, 0.0);
  const double reach_minus = rotated_reach(signal, idler, true, 0.0);
  check_rms_fit(reach_plus, rms_plus, "t_S + t_I", "gaussian_jta");
  check_rms_fit(reach_minus, rms_minus, "t_S - t_I", "gaussian_jta");

  std::vector<cplx> values(signal.n * idler.n);
  for (std::size_t s = 0; s < signal.n; ++s) {
    const double ts = signal.point(s);
    for (std::size_t i = 0; i < idler.n; ++i) {
      const double ti = idler.point(i);
      const double plus = ts + ti, minus = ts - ti;
      values[s * idler.n + i] = std::exp(
          -plus * plus / (16.0 * params.sigma_coh * params.sigma_coh) -
          minus * minus / (4.0 * params.sigma_cor * params.sigma_cor));
    }
  }
  const double raw = norm_l2(signal, idler, values);
  const double analytic =
      2.0 * std::numbers::pi * params.sigma_coh * params.sigma_cor;
  const char* tight = (reach_plus / rms_plus < reach_minus / rms_minus)
                          ? "t_S + t_I"
                          : "t_S - t_I";
  check_tail_mass(raw, analytic, tight, "gaussian_jta");

  CarrierInfo info{params.omega_s0, params.omega_i0,
                   carrier == Carrier::apply};
  if (info.applied) {
    for (std::size_t s = 0; s < signal.n; ++s) {
      const double phase_s = -info.omega_s0 * signal.point(s);
      const cplx fs{std::cos(phase_s), std::sin(phase_s)};
      for (std::size_t i = 0; i < idler.n; ++i) {
        const double phase_i = -info.omega_i0 * idler.point(i);
        values[s * idler.n + i] *= fs * cplx{std::cos(phase_i), std::sin(phase_i)};
      }
    }
  }
  return JointTemporalAmplitude2D::normalized(signal, idler, std::move(values),
                                              info);
}

SpectralAmplitude1D gaussian_cw_jsa(double sigma_cor,
                                    const FrequencyGrid& grid) {
  if (!(sigma_cor > 0.0) || !std::isfinite(sigma_cor))
    throw std::invalid_argument("gaussian_cw_jsa: sigma_cor must be positive");
  if (grid.center != 0.0)
    throw std::invalid_argument(
        "gaussian_cw_jsa: needs a zero-centered frequency grid");
  const double rms = 1.0 / (2.0 * sigma_cor);  // of the spectral intensity
  const double reach = std::min(-grid.point(0), grid.point(grid.n - 1));
  check_rms_fit(reach, rms, "omega", "gaussian_cw_jsa");

  std::vector<cplx> values(grid.n);
  for (std::size_t k = 0; k < grid.n; ++k) {
    const double w = grid.point(k);
    values[k] = std::exp(-sigma_cor * sigma_cor * w * w);
  }
  const double raw = norm_l2(grid, values);
  const double analytic = std::sqrt(std::numbers::pi / 2.0) / sigma_cor;
  check_tail_mass(raw, analytic, "omega", "gaussian_cw_jsa");
  return SpectralAmplitude1D::normalized(grid, std::move(values));
}

SpectralAmplitude1D flat_top_jsa(const FlatTopPhaseParams& params,
                                 const FrequencyGrid& grid,
                                 double guard_band) {
  if (!(params.omega_max > 0.0) || !std::isfinite(params.omega_max))
    throw std::invalid_argument("flat_top_jsa: omega_max must be positive");
  if (!(params.omega_1 > 0.0) || !(params.omega_1 < params.omega_max))
    throw std::invalid_argument(
        "flat_top_jsa: need 0 < omega_1 < omega_max");
  if (!std::isfinite(params.phi))
    throw std::invalid_argument("flat_top_jsa: phi must be finite");
  if (!(guard_band >= 0.0))
    throw std::invalid_argument("flat_top_jsa: guard_band must be >= 0");
  if (grid.center != 0.0)
    throw std::invalid_argument(
        "flat_top_jsa: grid must be centered on zero detuning");
  const double needed = params.omega_max + guard_band;
  if (grid.half_span() < needed)
    throw std::invalid_argument(
        "flat_top_jsa: grid half-span " + std::to_string(grid.half_span()) +
        " rad/s cannot hold the support plus guard band (need >= " +
        std::to_string(needed) + ")");

  const double phi = std::remainder(params.phi, 2.0 * std::numbers::pi);
  const cplx outer{std::cos(phi), std::sin(phi)};
  std::vector<cplx> values(grid.n);
  for (std::size_t k = 0; k < grid.n; ++k) {
    const double a = std::abs(grid.point(k));
    if (a > params.omega_max)
      values[k] = 0.0;
    else if (a > params.omega_1)
      values[k] = outer;
    else
      values[k] = 1.0;
  }
  return SpectralAmplitude1D::normalized(grid, std::move(values));
}

TabulatedState tabulated_jsa(const std::string& path) {
  io::AnyAmplitude amp = io::read_amplitude_csv(path);
  if (std::holds_alternative<SpectralAmplitude1D>(amp))
    return std::get<SpectralAmplitude1D>(std::move(amp));
  return std::get<JointSpectralAmplitude2D>(std::move(amp));
}

}  // namespace cfi
