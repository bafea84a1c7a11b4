#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cfi/amplitudes.hpp"
#include "cfi/cfi_core.hpp"

namespace cfi::sim {

/// Detector chain for one channel pair: efficiency is applied as Bernoulli
/// thinning per photon, jitter as Gaussian timing noise, dark counts as an
/// independent Poisson background, and tick is the tagger quantization.
struct DetectorModel {
  double efficiency = 0.8;     // [0, 1]
  double jitter_sigma = 120e-12;  // s
  double dark_rate = 0.0;      // counts/s per channel
  double tick = 128e-12;       // s
  void validate() const;
};

/// Serrodyne frequency shifter: carrier_suppression_db sets the probability
/// 10^(-dB/10) that a long-path photon passes unshifted and lands at the
/// central delay instead of its side peak.
struct ShifterModel {
  double carrier_suppression_db = 25.0;
  double leak_probability() const;
  void validate() const;
};

/// Linear interferometer phase drift phi0 + rate * t, added to the
/// configured phi_t.
struct DriftModel {
  double rate = 0.0;  // rad/s
  double phi0 = 0.0;  // rad
  double phi_t(double t) const { return phi0 + rate * t; }
  void validate() const;
};

struct TimeTag {
  std::uint8_t channel;  // 0 signal, 1 idler
  std::uint64_t ticks;
};

struct TimeTagStream {
  double tick = 128e-12;  // s
  double duration = 0.0;  // s
  std::vector<TimeTag> tags;  // sorted by time, then channel
};

struct FringePoint {
  double phi_t;               // rad, commanded total phase
  std::uint64_t coincidences;
  double integration;         // s
};

enum class ScanSource { drift, pzt };

struct FringeScan {
  std::vector<FringePoint> points;
  ScanSource source = ScanSource::drift;
};

/// Effects carried as simple multiplicative visibility penalties plus
/// optional per-channel insertion losses (folded into the thinning).
struct SimOptions {
  double insertion_loss_db_s = 0.0;
  double insertion_loss_db_i = 0.0;
  double multi_pair_penalty = 0.004;
  double modulator_dispersion_penalty = 0.0;
  double extra_sideband_penalty = 0.0;
  double phase_blur_sigma = 0.0;  // rad, per event/bin
  /// Bypasses the state visibility computation when set.
  std::optional<double> visibility_override;
  void validate() const;
};

struct ExpectedRates {
  double central_peak;    // coincidences/s at the configured phi_t
  double side_peak_each;  // coincidences/s in each side peak
  double singles_s;       // counts/s, phase independent
  double singles_i;
};

/// Fringe visibility of the state after the configured penalties.
double effective_visibility(const SpectralAmplitude1D& state,
                            const CfiConfig& cfg, const SimOptions& opts);

/// Mean rates of the generative model:
///   central = pair_rate * eta_s eta_i / 8 * (1 + V cos phi_t)
///   side    = pair_rate * eta_s eta_i / 8 each
///   singles = pair_rate * eta_ch / 2 + dark_rate
/// with eta_ch = cfg.eta * detector efficiency * insertion loss.
ExpectedRates expected_rates(const SpectralAmplitude1D& state,
                             const CfiConfig& cfg, const DetectorModel& det,
                             double pair_rate, const SimOptions& opts = {});

/// Event-level Monte Carlo. Pairs arrive as a Poisson process; each pair
/// samples its detuning from the 1-D JSI, an interferometer class
/// (central 1/2, each side 1/4), and correlated exit ports whose central
/// joint carries the (1 +/- V cos phi_t)/4 fringe while keeping both
/// singles marginals flat. Arrival times are t0 + beta2 * detuning, long
/// paths adding beta2 * delta_omega, then jitter, thinning, dark counts
/// and tick quantization. Identical seeds give identical streams.
/// Generation runs in 1 s slices whose RNGs derive from the seed by a
/// splitmix64 step, so the stream does not depend on how slices are
/// scheduled.
TimeTagStream simulate_timetags(const SpectralAmplitude1D& state,
                                const CfiConfig& cfg, const DetectorModel& det,
                                const ShifterModel& shifter,
                                const DriftModel& drift, double pair_rate,
                                double duration, std::uint64_t seed,
                                const SimOptions& opts = {});

/// Central-peak counts per drift bin, Poisson about the expected rate at
/// the bin-center phase.
FringeScan simulate_drift_scan(const SpectralAmplitude1D& state,
                               const CfiConfig& cfg, const DetectorModel& det,
                               const DriftModel& drift, double pair_rate,
                               double bin_seconds, std::size_t n_bins,
                               std::uint64_t seed, const SimOptions& opts = {});

/// Stepped phase scan from the configured phi_t, choosing each step with
/// next_phase_step until the relative phase passes 2 pi or max_points.
FringeScan simulate_pzt_scan(const SpectralAmplitude1D& state,
                             const CfiConfig& cfg, const DetectorModel& det,
                             double pair_rate, double bin_seconds,
                             std::size_t max_points, std::uint64_t seed,
                             const SimOptions& opts = {});

/// 0.15 rad when the count sits within 10% of either running extremum,
/// else 0.52 rad. With no history yet (running_max < running_min, e.g.
/// max = -inf, min = +inf) returns the coarse step.
double next_phase_step(double current_count, double running_max,
                       double running_min);

}  // namespace cfi::sim
