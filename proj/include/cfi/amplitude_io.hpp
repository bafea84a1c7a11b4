#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cfi/amplitudes.hpp"

namespace cfi::io {

/// CSV schemas, one row per grid point, doubles printed with enough digits
/// to round-trip bit-exactly:
///   1-D spectral amplitude: omega_rad_s,re,im
///   1-D temporal amplitude: t_sec,re,im
///   2-D spectral amplitude: omega_s,omega_i,re,im   (signal-major order)
///   2-D temporal amplitude: ts_sec,ti_sec,re,im
///   1-D spectral density:   omega_rad_s,value
///   1-D temporal density:   t_sec,value
/// Readers reject malformed rows, non-uniform spacing and unknown headers
/// with messages naming the line.

void write_csv(const SpectralAmplitude1D& amp, const std::string& path);
void write_csv(const TemporalAmplitude1D& amp, const std::string& path);
void write_csv(const JointSpectralAmplitude2D& amp, const std::string& path);
void write_csv(const JointTemporalAmplitude2D& amp, const std::string& path);

SpectralAmplitude1D read_spectral_csv(const std::string& path);
TemporalAmplitude1D read_temporal_csv(const std::string& path);
JointSpectralAmplitude2D read_joint_spectral_csv(const std::string& path);

using AnyAmplitude = std::variant<SpectralAmplitude1D, JointSpectralAmplitude2D>;
/// Reads either spectral schema, chosen by the header row.
AnyAmplitude read_amplitude_csv(const std::string& path);

void write_density_csv(const FrequencyGrid& grid,
                       const std::vector<double>& values,
                       const std::string& path);
void write_density_csv(const TimeGrid& grid, const std::vector<double>& values,
                       const std::string& path);
std::pair<FrequencyGrid, std::vector<double>> read_spectral_density_csv(
    const std::string& path);
std::pair<TimeGrid, std::vector<double>> read_temporal_density_csv(
    const std::string& path);

}  // namespace cfi::io
