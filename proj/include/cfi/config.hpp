#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cfi/cfi_core.hpp"
#include "cfi/simulator.hpp"
#include "cfi/states.hpp"

namespace cfi::config {

/// Run configuration: an INI-style text file of [section] blocks with
/// key = value lines. '#' and ';' start comments. Unknown sections,
/// unknown keys, and duplicate keys are errors with file:line positions,
/// so typos in physics parameters cannot pass silently. All frequencies
/// are plain Hz and times seconds here; conversion to angular units
/// happens in the accessors below.
///
/// Sections and keys (defaults in parentheses; * marks required keys):
///   [state]    kind*               gaussian | flat_top | tabulated
///              grid_n (8192)       points, power of two
///              grid_span_hz (640e9) full width of the frequency grid
///              sigma_cor_s*        gaussian: rms correlation time
///              band_edge_hz*       flat_top: |f| <= band_edge is flat
///              phase_edge_hz*      flat_top: |f| > phase_edge gets phi
///              phi_rad (0)         flat_top: outer-band phase
///              path*               tabulated: amplitude CSV
///   [cfi]      delta_omega_hz (15.65e9), phi_s_rad (0), phi_i_rad (0),
///              eta (1), dispersion_ns_per_nm (10),
///              center_wavelength_nm (1560)
///   [detector] efficiency (0.8), jitter_sigma_s (120e-12),
///              dark_rate_hz (0), tick_s (128e-12)
///   [simulation]
///              pair_rate_hz (1e4), duration_s (30), bins (40),
///              scan (drift) drift | pzt, seed (unset), max_points (100),
///              carrier_suppression_db (25), drift_rate_rad_s (0.005),
///              drift_phi0_rad (0), insertion_loss_db_s (0),
///              insertion_loss_db_i (0), multi_pair_penalty (0.004),
///              modulator_dispersion_penalty (0),
///              extra_sideband_penalty (0), phase_blur_sigma_rad (0),
///              visibility_override (unset)
///   [output]   directory (.), prefix (cfi)
enum class StateKind { gaussian, flat_top, tabulated };
enum class ScanKind { drift, pzt };

struct StateSection {
  StateKind kind = StateKind::gaussian;
  std::size_t grid_n = 8192;
  double grid_span_hz = 640e9;
  double sigma_cor_s = 0.0;
  double band_edge_hz = 0.0;
  double phase_edge_hz = 0.0;
  double phi_rad = 0.0;
  std::string path;
};

struct CfiSection {
  double delta_omega_hz = 15.65e9;
  double phi_s_rad = 0.0;
  double phi_i_rad = 0.0;
  double eta = 1.0;
  double dispersion_ns_per_nm = 10.0;
  double center_wavelength_nm = 1560.0;
};

struct SimulationSection {
  double pair_rate_hz = 1e4;
  double duration_s = 30.0;
  std::size_t bins = 40;
  ScanKind scan = ScanKind::drift;
  std::optional<std::uint64_t> seed;
  std::size_t max_points = 100;
  double carrier_suppression_db = 25.0;
  double drift_rate_rad_s = 0.005;
  double drift_phi0_rad = 0.0;
  double insertion_loss_db_s = 0.0;
  double insertion_loss_db_i = 0.0;
  double multi_pair_penalty = 0.004;
  double modulator_dispersion_penalty = 0.0;
  double extra_sideband_penalty = 0.0;
  double phase_blur_sigma_rad = 0.0;
  std::optional<double> visibility_override;
};

struct OutputSection {
  std::string directory = ".";
  std::string prefix = "cfi";
};

struct RunConfig {
  StateSection state;
  CfiSection cfi;
  sim::DetectorModel detector;
  SimulationSection simulation;
  OutputSection output;
};

RunConfig load_config(const std::string& path);
/// Parses from a string; `name` stands in for the path in error messages.
RunConfig parse_config(const std::string& text, const std::string& name);

/// beta2 = D lambda^2 / (2 pi c) for D in ns/nm and lambda in nm.
double beta2_from_dispersion(double ns_per_nm, double wavelength_nm);

CfiConfig to_cfi_config(const CfiSection& cfi);
sim::SimOptions to_sim_options(const SimulationSection& s);
sim::ShifterModel to_shifter(const SimulationSection& s);
sim::DriftModel to_drift(const SimulationSection& s);

/// Builds the configured state. build_state_1d rejects 2-D tabulated
/// amplitudes (the stream simulation and cw visibility pipelines are 1-D).
TabulatedState build_state(const RunConfig& cfg);
SpectralAmplitude1D build_state_1d(const RunConfig& cfg);

/// directory + "/" + prefix + suffix
std::string output_path(const OutputSection& out, const std::string& suffix);

}  // namespace cfi::config
