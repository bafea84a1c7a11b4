#pragma once

#include <string>
#include <variant>

#include "cfi/amplitudes.hpp"
#include "cfi/transforms.hpp"

namespace cfi {

/// Gaussian biphoton model. In the spectral picture (detunings from the
/// carriers)
///     Psi ~ exp(-(omega_S - omega_I)^2 sigma_coh^2)
///         * exp(-(omega_S + omega_I)^2 sigma_cor^2 / 4)
/// so the JSI has rms 1/(2 sigma_coh) along the difference axis and
/// 1/sigma_cor along the sum axis. The temporal picture is
///     psi ~ exp(-(t_S + t_I)^2 / (16 sigma_coh^2))
///         * exp(-(t_S - t_I)^2 / (4 sigma_cor^2))
/// with JTI rms 2 sigma_coh along t_S + t_I and sigma_cor along t_S - t_I.
struct GaussianBiphotonParams {
  double sigma_coh;       // s
  double sigma_cor;       // s
  double omega_s0 = 0.0;  // rad/s, signal carrier
  double omega_i0 = 0.0;  // rad/s, idler carrier
};

/// Evaluates the spectral Gaussian on the grids. Throws when the grids
/// cannot hold 6 rms widths of the JSI in either rotated direction or the
/// on-grid probability mass misses more than 1e-6 of the analytic total;
/// the message names the offending direction.
JointSpectralAmplitude2D gaussian_jsa(const GaussianBiphotonParams& params,
                                      const FrequencyGrid& signal,
                                      const FrequencyGrid& idler);

/// Evaluates the temporal Gaussian on the grids, with the same 6 rms and
/// tail-mass requirements in the rotated time directions.
JointTemporalAmplitude2D gaussian_jta(const GaussianBiphotonParams& params,
                                      const TimeGrid& signal,
                                      const TimeGrid& idler,
                                      Carrier carrier = Carrier::omit);

/// cw-pumped limit of the Gaussian biphoton on the difference-frequency
/// axis: Psi(omega) ~ exp(-sigma_cor^2 omega^2). Its temporal intensity
/// is Gaussian with rms sigma_cor, so the fringe visibility at detuning
/// DeltaOmega is exp(-DeltaOmega^2 sigma_cor^2 / 2). Requires a
/// zero-centered grid wide enough for 6 rms of the spectral intensity,
/// with the same 1e-6 tail-mass bound as the 2-D builders.
SpectralAmplitude1D gaussian_cw_jsa(double sigma_cor,
                                    const FrequencyGrid& grid);

/// Flat-top phase-step spectrum on the difference-frequency axis:
/// |Psi| = const on |omega| <= omega_max, phase phi applied on
/// omega_1 < |omega| <= omega_max, zero elsewhere. phi is reduced
/// modulo 2 pi (std::remainder), so phi and phi + 2 pi build identical
/// states.
struct FlatTopPhaseParams {
  double omega_max;  // rad/s, support half-width
  double omega_1;    // rad/s, inner band edge
  double phi;        // rad, outer-band phase
};

/// guard_band reserves extra half-span beyond omega_max so later shifted
/// overlaps Psi(omega + DeltaOmega) stay on-grid; pass the detuning that
/// will be used. Throws when (n/2) d_omega < omega_max + guard_band.
SpectralAmplitude1D flat_top_jsa(const FlatTopPhaseParams& params,
                                 const FrequencyGrid& grid,
                                 double guard_band = 0.0);

using TabulatedState = std::variant<SpectralAmplitude1D, JointSpectralAmplitude2D>;

/// Reads a 1-D (omega_rad_s,re,im) or 2-D (omega_s,omega_i,re,im) CSV
/// amplitude, chosen by header, and normalizes it. The raw norm of the
/// file contents is available through raw_norm() on the result.
TabulatedState tabulated_jsa(const std::string& path);

}  // namespace cfi
