#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "cfi/grids.hpp"

namespace cfi {

using cplx = std::complex<double>;

/// Discretized integral of |v|^2 over the grid measure (midpoint rule).
/// This is the quantity normalization drives to 1; scaling values by a
/// scales it by a^2.
double norm_l2(const FrequencyGrid& grid, const std::vector<cplx>& values);
double norm_l2(const TimeGrid& grid, const std::vector<cplx>& values);
double norm_l2(const FrequencyGrid& signal, const FrequencyGrid& idler,
               const std::vector<cplx>& values);
double norm_l2(const TimeGrid& signal, const TimeGrid& idler,
               const std::vector<cplx>& values);

/// Spectral amplitude Psi(omega) on a frequency grid, unit norm.
/// raw_norm() reports the discretized norm_l2 of the values handed to
/// normalized() before rescaling.
class SpectralAmplitude1D {
 public:
  static SpectralAmplitude1D normalized(FrequencyGrid grid,
                                        std::vector<cplx> values);

  const FrequencyGrid& grid() const { return grid_; }
  const std::vector<cplx>& values() const { return values_; }
  double raw_norm() const { return raw_norm_; }

 private:
  SpectralAmplitude1D(FrequencyGrid grid, std::vector<cplx> values, double raw);
  FrequencyGrid grid_;
  std::vector<cplx> values_;
  double raw_norm_;
};

/// Temporal amplitude psi(t) on a time grid, unit norm.
class TemporalAmplitude1D {
 public:
  static TemporalAmplitude1D normalized(TimeGrid grid, std::vector<cplx> values);

  const TimeGrid& grid() const { return grid_; }
  const std::vector<cplx>& values() const { return values_; }
  double raw_norm() const { return raw_norm_; }

 private:
  TemporalAmplitude1D(TimeGrid grid, std::vector<cplx> values, double raw);
  TimeGrid grid_;
  std::vector<cplx> values_;
  double raw_norm_;
};

/// Joint spectral amplitude Psi(omega_S, omega_I), row-major with the
/// signal axis outer: values()[s * idler().n + i].
class JointSpectralAmplitude2D {
 public:
  static JointSpectralAmplitude2D normalized(FrequencyGrid signal,
                                             FrequencyGrid idler,
                                             std::vector<cplx> values);

  const FrequencyGrid& signal() const { return signal_; }
  const FrequencyGrid& idler() const { return idler_; }
  const std::vector<cplx>& values() const { return values_; }
  double raw_norm() const { return raw_norm_; }
  cplx at(std::size_t s, std::size_t i) const {
    return values_[s * idler_.n + i];
  }

 private:
  JointSpectralAmplitude2D(FrequencyGrid s, FrequencyGrid i,
                           std::vector<cplx> v, double raw);
  FrequencyGrid signal_;
  FrequencyGrid idler_;
  std::vector<cplx> values_;
  double raw_norm_;
};

/// Detector-frame carrier e^{-i(omega_S0 t_S + omega_I0 t_I)} metadata for a
/// joint temporal amplitude. The carrier never changes the JTI; applied
/// records whether the values include the factor.
struct CarrierInfo {
  double omega_s0 = 0.0;
  double omega_i0 = 0.0;
  bool applied = false;
};

/// Joint temporal amplitude psi(t_S, t_I), same layout as the JSA.
class JointTemporalAmplitude2D {
 public:
  static JointTemporalAmplitude2D normalized(TimeGrid signal, TimeGrid idler,
                                             std::vector<cplx> values,
                                             CarrierInfo carrier = {});

  const TimeGrid& signal() const { return signal_; }
  const TimeGrid& idler() const { return idler_; }
  const std::vector<cplx>& values() const { return values_; }
  const CarrierInfo& carrier() const { return carrier_; }
  double raw_norm() const { return raw_norm_; }
  cplx at(std::size_t s, std::size_t i) const {
    return values_[s * idler_.n + i];
  }

 private:
  JointTemporalAmplitude2D(TimeGrid s, TimeGrid i, std::vector<cplx> v,
                           CarrierInfo carrier, double raw);
  TimeGrid signal_;
  TimeGrid idler_;
  std::vector<cplx> values_;
  CarrierInfo carrier_;
  double raw_norm_;
};

/// Joint temporal intensity collapsed to the difference-time axis, or any
/// 1-D temporal probability density; integrates to 1 over dt.
class TemporalIntensity1D {
 public:
  static TemporalIntensity1D normalized(TimeGrid grid,
                                        std::vector<double> values);
  static TemporalIntensity1D of(const TemporalAmplitude1D& amp);

  const TimeGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double raw_norm() const { return raw_norm_; }

 private:
  TemporalIntensity1D(TimeGrid grid, std::vector<double> values, double raw);
  TimeGrid grid_;
  std::vector<double> values_;
  double raw_norm_;
};

/// |psi(t_S, t_I)|^2, integrates to 1 over dt_S dt_I.
class JointTemporalIntensity2D {
 public:
  static JointTemporalIntensity2D normalized(TimeGrid signal, TimeGrid idler,
                                             std::vector<double> values);
  static JointTemporalIntensity2D of(const JointTemporalAmplitude2D& amp);

  const TimeGrid& signal() const { return signal_; }
  const TimeGrid& idler() const { return idler_; }
  const std::vector<double>& values() const { return values_; }
  double raw_norm() const { return raw_norm_; }

 private:
  JointTemporalIntensity2D(TimeGrid s, TimeGrid i, std::vector<double> v,
                           double raw);
  TimeGrid signal_;
  TimeGrid idler_;
  std::vector<double> values_;
  double raw_norm_;
};

}  // namespace cfi
