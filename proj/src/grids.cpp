#include "cfi/grids.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "cfi/kernels.hpp"

namespace cfi {
namespace {

void check_axis(std::size_t n, double step, const char* what) {
  if (n < 8 || !kernels::is_pow2(n))
    throw std::invalid_argument(std::string(what) +
                                ": n must be a power of two >= 8, got " +
                                std::to_string(n));
  if (!(step > 0.0) || !std::isfinite(step))
    throw std::invalid_argument(std::string(what) +
                                ": step must be positive and finite");
}

}  // namespace

FrequencyGrid::FrequencyGrid(std::size_t n_, double d_omega_, double center_)
    : n(n_), d_omega(d_omega_), center(center_) {
  check_axis(n, d_omega, "FrequencyGrid");
  if (!std::isfinite(center))
    throw std::invalid_argument("FrequencyGrid: center must be finite");
}

TimeGrid::TimeGrid(std::size_t n_, double d_t_, double center_)
    : n(n_), d_t(d_t_), center(center_) {
  check_axis(n, d_t, "TimeGrid");
  if (!std::isfinite(center))
    throw std::invalid_argument("TimeGrid: center must be finite");
}

std::pair<FrequencyGrid, TimeGrid> make_dual_grids(std::size_t n,
                                                   double omega_span,
                                                   GridConvention /*convention*/) {
  if (!(omega_span > 0.0) || !std::isfinite(omega_span))
    throw std::invalid_argument("make_dual_grids: omega_span must be positive");
  FrequencyGrid f(n, omega_span / static_cast<double>(n));
  TimeGrid t(n, 2.0 * std::numbers::pi / omega_span);
  return {f, t};
}

bool grids_are_dual(const FrequencyGrid& f, const TimeGrid& t, double rel_tol) {
  if (f.n != t.n) return false;
  const double product =
      f.d_omega * t.d_t * static_cast<double>(f.n) / (2.0 * std::numbers::pi);
  return std::abs(product - 1.0) <= rel_tol;
}

TimeGrid dual_time_grid(const FrequencyGrid& f) {
  return TimeGrid(f.n, 2.0 * std::numbers::pi / (f.d_omega * static_cast<double>(f.n)));
}

FrequencyGrid dual_frequency_grid(const TimeGrid& t) {
  return FrequencyGrid(t.n, 2.0 * std::numbers::pi / (t.d_t * static_cast<double>(t.n)));
}

}  // namespace cfi
