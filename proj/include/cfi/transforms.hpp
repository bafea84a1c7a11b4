#pragma once

#include "cfi/amplitudes.hpp"

namespace cfi {

/// Unitary Fourier transforms between the spectral and temporal pictures.
///
/// 1-D difference axis:
///     psi(t) = (1/sqrt{2 pi}) Int Psi(omega) e^{-i omega t} domega
/// 2-D, the idler axis carrying the opposite sign:
///     psi(t_S, t_I) = (1/2 pi) IntInt Psi(omega_S, omega_I)
///                       e^{-i(omega_S t_S - omega_I t_I)} domega_S domega_I
///
/// Discrete form on dual grids (d_t * d_omega * n = 2 pi):
///     psi_j = (d_omega/sqrt{2 pi}) (-1)^j sum_k (-1)^k Psi_k e^{-2 pi i jk/n}
/// which preserves the discrete norm exactly. Nonzero grid centers are
/// folded in as exact phase factors. See grids.hpp for the factor-of-two
/// convention note.

/// Forward 1-D transform. target, when given, must be dual to the input
/// grid (same n, product rule within 1e-9); otherwise the zero-centered
/// dual grid is used.
TemporalAmplitude1D jsa_to_jta_cw(const SpectralAmplitude1D& jsa,
                                  const TimeGrid* target = nullptr);

/// Inverse 1-D transform.
SpectralAmplitude1D jta_to_jsa_cw(const TemporalAmplitude1D& jta,
                                  const FrequencyGrid* target = nullptr);

enum class Carrier { omit, apply };

/// Forward 2-D transform. omega_s0/omega_i0 are the physical carrier
/// frequencies recorded in the output metadata; Carrier::apply multiplies
/// the carrier factor e^{-i(omega_s0 t_S + omega_i0 t_I)} into the values.
JointTemporalAmplitude2D jsa_to_jta_2d(const JointSpectralAmplitude2D& jsa,
                                       double omega_s0 = 0.0,
                                       double omega_i0 = 0.0,
                                       Carrier carrier = Carrier::omit);

/// Inverse 2-D transform; removes an applied carrier before inverting.
/// Optional targets must be dual to the JTA grids per axis.
JointSpectralAmplitude2D jta_to_jsa_2d(const JointTemporalAmplitude2D& jta,
                                       const FrequencyGrid* target_signal = nullptr,
                                       const FrequencyGrid* target_idler = nullptr);

/// Same amplitude with the carrier factor multiplied in or divided out.
JointTemporalAmplitude2D with_carrier(const JointTemporalAmplitude2D& jta,
                                      bool applied);

}  // namespace cfi
