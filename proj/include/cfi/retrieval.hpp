#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cfi/amplitudes.hpp"

namespace cfi::retrieval {

/// Spectral phase recovered by alternating projections. phase covers the
/// whole frequency grid but is meaningful only where support is set
/// (|Psi| > 1e-3 of its maximum); off-support entries are zeroed.
/// magnitude_residual is the L2 distance between the achieved and target
/// time-domain magnitudes, sqrt(Int (|psi_ach| - |psi_tgt|)^2 dt).
struct RetrievalResult {
  std::vector<double> phase;  // rad
  std::vector<bool> support;
  double magnitude_residual = 0.0;
  std::size_t iterations = 0;  // spent by the attempt that won
  bool converged = false;
};

struct RetrievalOptions {
  /// Extra attempts with random initial phase, launched in parallel when
  /// the first attempt stagnates short of tol. The best residual wins.
  std::size_t max_restarts = 8;
  /// Base seed for the restart phases (attempt k derives its own).
  std::uint64_t seed = 1;
  /// When set, the first attempt also starts from a random phase drawn
  /// from this seed instead of zero phase.
  std::optional<std::uint64_t> random_init_seed;
  /// An attempt stagnates when its best residual improves by less than
  /// stagnation_tol over stagnation_window iterations.
  double stagnation_tol = 1e-8;
  std::size_t stagnation_window = 50;
};

/// Gerchberg-Saxton between |Psi(omega)| and |psi(t)| on dual grids:
/// impose the spectral magnitude, transform to time, impose the temporal
/// magnitude, transform back, repeat until the residual reaches tol or
/// max_iter. Only the moduli of the two inputs are used. The returned
/// residual is never above the initial one (best iterate wins).
RetrievalResult gerchberg_saxton(const SpectralAmplitude1D& jsi_mag,
                                 const TemporalAmplitude1D& jti_mag,
                                 std::size_t max_iter, double tol,
                                 const RetrievalOptions& opts = {});

/// Single attempt from a caller-supplied initial phase (no restarts).
RetrievalResult gerchberg_saxton_from(const SpectralAmplitude1D& jsi_mag,
                                      const TemporalAmplitude1D& jti_mag,
                                      const std::vector<double>& initial_phase,
                                      std::size_t max_iter, double tol);

/// Quotients out the trivial ambiguities, in place on a copy:
/// subtracts the linear ramp that recenters the temporal intensity
/// centroid, zeroes the phase at omega = 0, and conjugate-reflects
/// (phase[k] -> -phase[(n-k) mod n], valid for the symmetric magnitudes
/// this applies to) when the phase slope at the first band edge is
/// negative. Idempotent up to roundoff.
RetrievalResult canonicalize(const RetrievalResult& result,
                             const SpectralAmplitude1D& jsi_mag);

/// The state |mag| e^{i phase} — how a RetrievalResult turns back into
/// an amplitude for functional checks (e.g. its fringe visibility).
SpectralAmplitude1D apply_phase(const SpectralAmplitude1D& jsi_mag,
                                const std::vector<double>& phase);

/// Recovered phase on its frequency grid. CSV rows are
/// "omega_rad_s,phase_rad" (off-support phase is written as its stored
/// zero); doubles print with round-tripping precision so emitted files
/// re-read bit-exactly.
struct PhaseTable {
  FrequencyGrid grid;
  std::vector<double> phase;
};

void write_phase_csv(const FrequencyGrid& grid, const RetrievalResult& result,
                     const std::string& path);
PhaseTable read_phase_csv(const std::string& path);

}  // namespace cfi::retrieval
