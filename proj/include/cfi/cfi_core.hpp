#pragma once

#include <string>
#include <vector>

#include "cfi/amplitudes.hpp"

namespace cfi {

/// Conjugate interferometer settings. The signal arm shifts its long path
/// by +delta_omega, the idler arm by -delta_omega; phi_s and phi_i only
/// ever enter through their sum phi_t(). beta2 is the group-delay
/// dispersion that maps detuning to arrival time in the event simulator
/// and in histogram calibration; it does not alter the fringe functionals.
struct CfiConfig {
  double delta_omega = 0.0;  // rad/s
  double phi_s = 0.0;        // rad
  double phi_i = 0.0;        // rad
  double eta = 1.0;          // measurement efficiency per arm, [0, 1]
  double beta2 = 0.0;        // s^2

  double phi_t() const { return phi_s + phi_i; }
  void validate() const;
};

/// Fringe visibility V = Int JTI(t) cos(delta_omega t) dt of a normalized
/// difference-time intensity. Result clamped to [-1, 1].
double cfi_visibility_cw(const TemporalIntensity1D& jti, double delta_omega);
double cfi_visibility_cw(const TemporalAmplitude1D& psi, double delta_omega);

/// Central-peak coincidence probability
///     P = (eta^2/8) (1 + Int JTI(t) cos(delta_omega t + phi_t) dt),
/// clamped to [0, eta^2/4].
double cfi_probability_cw(const TemporalIntensity1D& jti, const CfiConfig& cfg);

/// Frequency-domain visibility Re Int Psi*(omega) Psi(omega + shift) domega
/// with the shift snapped to a whole number of grid steps.
struct SnappedOverlap {
  double visibility;
  double delta_omega_used;  // the snapped shift actually applied
  double snap_error;        // requested minus applied
};

/// Throws when more than 1e-12 of the spectral mass would shift past the
/// top of the grid (insufficient guard band).
SnappedOverlap cfi_visibility_freq(const SpectralAmplitude1D& jsa,
                                   double delta_omega);

/// 2-D form, P = (eta^2/8)(1 + IntInt JTI(t_S, t_I)
///                   cos(delta_omega (t_S - t_I) + phi_t) dt_S dt_I).
double cfi_probability_2d(const JointTemporalIntensity2D& jti,
                          const CfiConfig& cfg);
double cfi_probability_2d(const JointTemporalAmplitude2D& jta,
                          const CfiConfig& cfg);

/// Same probability evaluated in the frequency domain through the shifted
/// overlap IntInt Psi*(omega_S, omega_I) Psi(omega_S + shift,
/// omega_I + shift); equivalent to the time-domain form on dual grids.
double cfi_probability_freq_2d(const JointSpectralAmplitude2D& jsa,
                               const CfiConfig& cfg);

/// V = exp(-delta_omega^2 sigma_cor^2 / 2) for the Gaussian biphoton.
double gaussian_visibility_closed_form(double sigma_cor, double delta_omega);

/// Calculated visibility-versus-phase table (e.g. a flat-top phase
/// sweep). CSV rows are "phi_rad,visibility", doubles printed with
/// round-tripping precision, so emitted files re-read bit-exactly.
struct PhiSweep {
  std::vector<double> phi;         // rad
  std::vector<double> visibility;  // signed
};

void write_phi_sweep_csv(const PhiSweep& sweep, const std::string& path);
PhiSweep read_phi_sweep_csv(const std::string& path);

}  // namespace cfi
