#pragma once

#include <cstddef>
#include <utility>

namespace cfi {

/// Uniform angular-frequency grid. Point k lies at
/// center + (k - n/2) * d_omega, so the grid is the standard FFT layout:
/// one extra sample on the low side, none past center + span/2 - d_omega.
/// n must be a power of two, n >= 8.
struct FrequencyGrid {
  FrequencyGrid(std::size_t n, double d_omega, double center = 0.0);

  std::size_t n;
  double d_omega;  // rad/s
  double center;   // rad/s

  double point(std::size_t k) const {
    return center + (static_cast<double>(k) - static_cast<double>(n) / 2.0) * d_omega;
  }
  double span() const { return static_cast<double>(n) * d_omega; }
  double half_span() const { return span() / 2.0; }
};

/// Uniform time grid, same layout as FrequencyGrid.
struct TimeGrid {
  TimeGrid(std::size_t n, double d_t, double center = 0.0);

  std::size_t n;
  double d_t;     // s
  double center;  // s

  double point(std::size_t k) const {
    return center + (static_cast<double>(k) - static_cast<double>(n) / 2.0) * d_t;
  }
  double span() const { return static_cast<double>(n) * d_t; }
};

/// Intent marker for a dual grid pair: pulsed_2d for the per-axis
/// (t_S, t_I) transforms, cw_tminus for the 1-D difference-time axis.
enum class GridConvention { pulsed_2d, cw_tminus };

/// Frequency/time grid pair for the unitary transform pair used here,
/// psi(t) = (1/sqrt{2 pi}) Integral Psi(omega) e^{-i omega t} domega.
/// Both conventions share the single duality rule
///
///     d_t * d_omega * n = 2 * pi
///
/// A common alternative writes the difference-time kernel with
/// e^{-i omega t/2}, which dilates the time axis by 2 and turns fringe
/// integrals into cos(DeltaOmega t / 2). This library does not: the plain
/// kernel is used everywhere, fringe integrals take cos(DeltaOmega t + phi)
/// directly against the JTI, and a flat spectrum of half-width omega_max
/// transforms to sqrt(omega_max/pi) * sinc(omega_max t). Check factors of
/// two against this rule before changing anything near the transforms.
std::pair<FrequencyGrid, TimeGrid> make_dual_grids(std::size_t n,
                                                   double omega_span,
                                                   GridConvention convention);

/// True when the grids satisfy the duality rule to relative tolerance.
bool grids_are_dual(const FrequencyGrid& f, const TimeGrid& t,
                    double rel_tol = 1e-9);

/// Dual time grid (centered at zero) of a frequency grid.
TimeGrid dual_time_grid(const FrequencyGrid& f);
/// Dual frequency grid (centered at zero) of a time grid.
FrequencyGrid dual_frequency_grid(const TimeGrid& t);

}  // namespace cfi
