#include "cfi/amplitudes.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cfi/kernels.hpp"

namespace cfi {
namespace {

void check_size(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got)
    throw std::invalid_argument(std::string(what) + ": expected " +
                                std::to_string(expected) + " values, got " +
                                std::to_string(got));
}

double squared_sum(const std::vector<cplx>& v) {
  const double* flat = kernels::flat(v.data());
  return kernels::active().dot(flat, flat, 2 * v.size());
}

double checked_raw(double raw, const char* what) {
  if (!std::isfinite(raw))
    throw std::invalid_argument(std::string(what) + ": values are not finite");
  if (raw <= 0.0)
    throw std::invalid_argument(std::string(what) + ": zero norm");
  return raw;
}

// Unit-norm input (within 1e-12) is kept bit-identical so that emitted
// CSVs round-trip exactly through the readers.
void rescale(std::vector<cplx>& v, double raw) {
  if (std::abs(raw - 1.0) <= 1e-12) return;
  kernels::active().scale(kernels::flat(v.data()), 2 * v.size(),
                          1.0 / std::sqrt(raw));
}

void rescale_density(std::vector<double>& v, double raw) {
  if (std::abs(raw - 1.0) <= 1e-12) return;
  kernels::active().scale(v.data(), v.size(), 1.0 / raw);
}

}  // namespace

double norm_l2(const FrequencyGrid& grid, const std::vector<cplx>& values) {
  check_size(grid.n, values.size(), "norm_l2");
  return squared_sum(values) * grid.d_omega;
}

double norm_l2(const TimeGrid& grid, const std::vector<cplx>& values) {
  check_size(grid.n, values.size(), "norm_l2");
  return squared_sum(values) * grid.d_t;
}

double norm_l2(const FrequencyGrid& signal, const FrequencyGrid& idler,
               const std::vector<cplx>& values) {
  check_size(signal.n * idler.n, values.size(), "norm_l2");
  return squared_sum(values) * signal.d_omega * idler.d_omega;
}

double norm_l2(const TimeGrid& signal, const TimeGrid& idler,
               const std::vector<cplx>& values) {
  check_size(signal.n * idler.n, values.size(), "norm_l2");
  return squared_sum(values) * signal.d_t * idler.d_t;
}

SpectralAmplitude1D::SpectralAmplitude1D(FrequencyGrid grid,
                                         std::vector<cplx> values, double raw)
    : grid_(grid), values_(std::move(values)), raw_norm_(raw) {}

SpectralAmplitude1D SpectralAmplitude1D::normalized(FrequencyGrid grid,
                                                    std::vector<cplx> values) {
  const double raw =
      checked_raw(norm_l2(grid, values), "SpectralAmplitude1D");
  rescale(values, raw);
  return SpectralAmplitude1D(grid, std::move(values), raw);
}

TemporalAmplitude1D::TemporalAmplitude1D(TimeGrid grid,
                                         std::vector<cplx> values, double raw)
    : grid_(grid), values_(std::move(values)), raw_norm_(raw) {}

TemporalAmplitude1D TemporalAmplitude1D::normalized(TimeGrid grid,
                                                    std::vector<cplx> values) {
  const double raw =
      checked_raw(norm_l2(grid, values), "TemporalAmplitude1D");
  rescale(values, raw);
  return TemporalAmplitude1D(grid, std::move(values), raw);
}

JointSpectralAmplitude2D::JointSpectralAmplitude2D(FrequencyGrid s,
                                                   FrequencyGrid i,
                                                   std::vector<cplx> v,
                                                   double raw)
    : signal_(s), idler_(i), values_(std::move(v)), raw_norm_(raw) {}

JointSpectralAmplitude2D JointSpectralAmplitude2D::normalized(
    FrequencyGrid signal, FrequencyGrid idler, std::vector<cplx> values) {
  const double raw =
      checked_raw(norm_l2(signal, idler, values), "JointSpectralAmplitude2D");
  rescale(values, raw);
  return JointSpectralAmplitude2D(signal, idler, std::move(values), raw);
}

JointTemporalAmplitude2D::JointTemporalAmplitude2D(TimeGrid s, TimeGrid i,
                                                   std::vector<cplx> v,
                                                   CarrierInfo carrier,
                                                   double raw)
    : signal_(s), idler_(i), values_(std::move(v)), carrier_(carrier),
      raw_norm_(raw) {}

JointTemporalAmplitude2D JointTemporalAmplitude2D::normalized(
    TimeGrid signal, TimeGrid idler, std::vector<cplx> values,
    CarrierInfo carrier) {
  const double raw =
      checked_raw(norm_l2(signal, idler, values), "JointTemporalAmplitude2D");
  rescale(values, raw);
  return JointTemporalAmplitude2D(signal, idler, std::move(values), carrier,
                                  raw);
}

TemporalIntensity1D::TemporalIntensity1D(TimeGrid grid,
                                         std::vector<double> values,
                                         double raw)
    : grid_(grid), values_(std::move(values)), raw_norm_(raw) {}

TemporalIntensity1D TemporalIntensity1D::normalized(
    TimeGrid grid, std::vector<double> values) {
  check_size(grid.n, values.size(), "TemporalIntensity1D");
  for (double v : values)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument(
          "TemporalIntensity1D: values must be finite and non-negative");
  const double raw = checked_raw(
      kernels::active().sum(values.data(), values.size()) * grid.d_t,
      "TemporalIntensity1D");
  rescale_density(values, raw);
  return TemporalIntensity1D(grid, std::move(values), raw);
}

TemporalIntensity1D TemporalIntensity1D::of(const TemporalAmplitude1D& amp) {
  std::vector<double> intensity(amp.grid().n);
  kernels::active().abs2(kernels::flat(amp.values().data()), intensity.data(),
                         intensity.size());
  return normalized(amp.grid(), std::move(intensity));
}

JointTemporalIntensity2D::JointTemporalIntensity2D(TimeGrid s, TimeGrid i,
                                                   std::vector<double> v,
                                                   double raw)
    : signal_(s), idler_(i), values_(std::move(v)), raw_norm_(raw) {}

JointTemporalIntensity2D JointTemporalIntensity2D::normalized(
    TimeGrid signal, TimeGrid idler, std::vector<double> values) {
  check_size(signal.n * idler.n, values.size(), "JointTemporalIntensity2D");
  for (double v : values)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument(
          "JointTemporalIntensity2D: values must be finite and non-negative");
  const double raw = checked_raw(
      kernels::active().sum(values.data(), values.size()) * signal.d_t * idler.d_t,
      "JointTemporalIntensity2D");
  rescale_density(values, raw);
  return JointTemporalIntensity2D(signal, idler, std::move(values), raw);
}

JointTemporalIntensity2D JointTemporalIntensity2D::of(
    const JointTemporalAmplitude2D& amp) {
  std::vector<double> intensity(amp.values().size());
  kernels::active().abs2(kernels::flat(amp.values().data()), intensity.data(),
                         intensity.size());
  return normalized(amp.signal(), amp.idler(), std::move(intensity));
}

}  // namespace cfi
