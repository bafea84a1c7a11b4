#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <variant>
#include <vector>

#include "cfi/amplitude_io.hpp"
#include "cfi/amplitudes.hpp"
#include "cfi/states.hpp"
#include "cfi/transforms.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cfi;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double intensity_rms(const FrequencyGrid& grid,
                     const std::vector<cplx>& values) {
  double mass = 0.0;
  double second = 0.0;
  for (std::size_t k = 0; k < grid.n; ++k) {
    const double w = std::norm(values[k]) * grid.d_omega;
    mass += w;
    second += grid.point(k) * grid.point(k) * w;
  }
  return std::sqrt(second / mass);
}

double intensity_rms(const TimeGrid& grid, const std::vector<cplx>& values) {
  double mass = 0.0;
  double second = 0.0;
  for (std::size_t k = 0; k < grid.n; ++k) {
    const double w = std::norm(values[k]) * grid.d_t;
    mass += w;
    second += grid.point(k) * grid.point(k) * w;
  }
  return std::sqrt(second / mass);
}

}  // namespace

TEST_CASE("flat-top state: support, phase pattern, and unit norm") {
  const FrequencyGrid grid(4096, kTwoPi * 640e9 / 4096.0, 0.0);
  const double omega_max = kTwoPi * 160e9;
  const double omega_1 = kTwoPi * 7.825e9;
  const double phi = 1.1;
  const SpectralAmplitude1D state =
      flat_top_jsa({omega_max, omega_1, phi}, grid);

  CHECK(norm_l2(grid, state.values()) == doctest::Approx(1.0).epsilon(1e-12));

  double inner_mag = -1.0;
  for (std::size_t k = 0; k < grid.n; ++k) {
    const double w = grid.point(k);
    const cplx v = state.values()[k];
    if (std::abs(w) > omega_max) {
      CHECK(v == cplx(0.0));
    } else {
      CHECK(std::abs(v) > 0.0);
      if (inner_mag < 0.0) inner_mag = std::abs(v);
      // Flat top: constant magnitude across the whole support.
      CHECK(std::abs(v) == doctest::Approx(inner_mag).epsilon(1e-12));
      const double want_phase = std::abs(w) <= omega_1 ? 0.0 : phi;
      CHECK(std::arg(v) == doctest::Approx(want_phase).epsilon(1e-12));
    }
  }
}

TEST_CASE("flat-top phase wraps by remainder so phi = 2 pi equals phi = 0") {
  const FrequencyGrid grid(1024, kTwoPi * 640e9 / 1024.0, 0.0);
  const FlatTopPhaseParams a{kTwoPi * 160e9, kTwoPi * 7.825e9, 0.0};
  const FlatTopPhaseParams b{kTwoPi * 160e9, kTwoPi * 7.825e9, kTwoPi};
  const SpectralAmplitude1D sa = flat_top_jsa(a, grid);
  const SpectralAmplitude1D sb = flat_top_jsa(b, grid);
  for (std::size_t k = 0; k < grid.n; ++k) {
    CHECK(sa.values()[k] == sb.values()[k]);
  }
}

TEST_CASE("flat-top state validates its grid reach and band ordering") {
  const FrequencyGrid grid(1024, kTwoPi * 640e9 / 1024.0, 0.0);
  const double omega_max = kTwoPi * 160e9;
  const double omega_1 = kTwoPi * 7.825e9;

  // Support plus guard band must fit inside the grid half-span (320 GHz).
  CHECK_NOTHROW(flat_top_jsa({omega_max, omega_1, 0.0}, grid, kTwoPi * 160e9));
  CHECK_THROWS_AS(
      flat_top_jsa({omega_max, omega_1, 0.0}, grid, kTwoPi * 160.1e9),
      std::invalid_argument);
  CHECK_THROWS_AS(flat_top_jsa({kTwoPi * 321e9, omega_1, 0.0}, grid),
                  std::invalid_argument);
  // Band edges out of order or degenerate.
  CHECK_THROWS_AS(flat_top_jsa({omega_max, omega_max, 0.0}, grid),
                  std::invalid_argument);
  CHECK_THROWS_AS(flat_top_jsa({-1.0, omega_1, 0.0}, grid),
                  std::invalid_argument);
}

TEST_CASE("cw Gaussian: analytic raw norm and both rms widths") {
  const double sigma = 10e-12;
  const FrequencyGrid grid(4096, kTwoPi * 320e9 / 4096.0, 0.0);
  const SpectralAmplitude1D state = gaussian_cw_jsa(sigma, grid);

  // Raw values are e^{-sigma^2 omega^2}; the discretized integral of
  // their square must match Int e^{-2 sigma^2 omega^2} = sqrt(pi/2)/sigma.
  const double analytic = std::sqrt(std::numbers::pi / 2.0) / sigma;
  CHECK(state.raw_norm() == doctest::Approx(analytic).epsilon(1e-9));

  // Spectral intensity rms is 1/(2 sigma).
  CHECK(intensity_rms(grid, state.values()) ==
        doctest::Approx(1.0 / (2.0 * sigma)).epsilon(1e-9));

  // Temporal intensity rms is sigma itself.
  const TemporalAmplitude1D psi = jsa_to_jta_cw(state);
  CHECK(intensity_rms(psi.grid(), psi.values()) ==
        doctest::Approx(sigma).epsilon(1e-9));
}

TEST_CASE("cw Gaussian validates arguments and grid reach") {
  const FrequencyGrid grid(4096, kTwoPi * 320e9 / 4096.0, 0.0);
  CHECK_THROWS_AS(gaussian_cw_jsa(0.0, grid), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_cw_jsa(-1e-12, grid), std::invalid_argument);
  // Too narrow in time -> too wide in frequency for this grid.
  CHECK_THROWS_AS(gaussian_cw_jsa(0.3e-12, grid), std::invalid_argument);
  const FrequencyGrid off_center(4096, kTwoPi * 320e9 / 4096.0, 1e9);
  CHECK_THROWS_AS(gaussian_cw_jsa(10e-12, off_center), std::invalid_argument);
}

TEST_CASE("2-D Gaussian: analytic raw norm and joint rms widths") {
  const double sigma_coh = 2e-12;
  const double sigma_cor = 20e-12;
  const std::size_t n = 256;
  // Frequency reach must cover the anti-diagonal width 1/(2 sigma_coh).
  const auto [fgrid, tgrid] =
      make_dual_grids(n, 16.0 / sigma_coh, GridConvention::pulsed_2d);
  const GaussianBiphotonParams params{sigma_coh, sigma_cor};
  const JointSpectralAmplitude2D jsa = gaussian_jsa(params, fgrid, fgrid);

  const double analytic =
      std::numbers::pi / (2.0 * sigma_coh * sigma_cor);
  CHECK(jsa.raw_norm() == doctest::Approx(analytic).epsilon(1e-6));

  const JointTemporalAmplitude2D jta = jsa_to_jta_2d(jsa);
  const JointTemporalIntensity2D jti = JointTemporalIntensity2D::of(jta);
  double sum_p = 0.0;
  double sum_m = 0.0;
  double mass = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      const double w = jti.values()[s * n + i];
      const double ts = jti.signal().point(s);
      const double ti = jti.idler().point(i);
      mass += w;
      sum_p += (ts + ti) * (ts + ti) * w;
      sum_m += (ts - ti) * (ts - ti) * w;
    }
  }
  // t_S + t_I spreads as 2 sigma_coh; t_S - t_I as sigma_cor.
  CHECK(std::sqrt(sum_p / mass) ==
        doctest::Approx(2.0 * sigma_coh).epsilon(1e-6));
  CHECK(std::sqrt(sum_m / mass) ==
        doctest::Approx(sigma_cor).epsilon(1e-6));

  // The dedicated temporal builder agrees with the transform route.
  const JointTemporalAmplitude2D direct =
      gaussian_jta(params, jta.signal(), jta.idler());
  double max_err = 0.0;
  for (std::size_t k = 0; k < direct.values().size(); ++k) {
    max_err = std::max(max_err,
                       std::abs(direct.values()[k] - jta.values()[k]));
  }
  CHECK(max_err < 1e-9);
}

TEST_CASE("tabulated states round-trip through amplitude CSVs") {
  test::TempDir tmp;

  const FrequencyGrid grid(256, kTwoPi * 640e9 / 256.0, 0.0);
  const SpectralAmplitude1D one_d = test::random_smooth_state(4, grid);
  const std::string path_1d = tmp.file("state1d.csv");
  io::write_csv(one_d, path_1d);
  const TabulatedState loaded_1d = tabulated_jsa(path_1d);
  REQUIRE(std::holds_alternative<SpectralAmplitude1D>(loaded_1d));
  const auto& got_1d = std::get<SpectralAmplitude1D>(loaded_1d);
  REQUIRE(got_1d.grid().n == grid.n);
  double max_err = 0.0;
  for (std::size_t k = 0; k < grid.n; ++k) {
    max_err = std::max(max_err,
                       std::abs(got_1d.values()[k] - one_d.values()[k]));
  }
  CHECK(max_err < 1e-15);

  const auto [fs, ts] = make_dual_grids(16, 2e11, GridConvention::pulsed_2d);
  std::vector<cplx> values(16 * 16);
  for (std::size_t s = 0; s < 16; ++s) {
    for (std::size_t i = 0; i < 16; ++i) {
      const double ws = fs.point(s) / (fs.half_span() / 3.0);
      const double wi = fs.point(i) / (fs.half_span() / 3.0);
      values[s * 16 + i] = std::polar(std::exp(-ws * ws - wi * wi), 0.1 * ws);
    }
  }
  const JointSpectralAmplitude2D two_d =
      JointSpectralAmplitude2D::normalized(fs, fs, values);
  const std::string path_2d = tmp.file("state2d.csv");
  io::write_csv(two_d, path_2d);
  const TabulatedState loaded_2d = tabulated_jsa(path_2d);
  REQUIRE(std::holds_alternative<JointSpectralAmplitude2D>(loaded_2d));
  const auto& got_2d = std::get<JointSpectralAmplitude2D>(loaded_2d);
  max_err = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    max_err = std::max(max_err,
                       std::abs(got_2d.values()[k] - two_d.values()[k]));
  }
  CHECK(max_err < 1e-15);

  CHECK_THROWS_AS(tabulated_jsa(tmp.file("missing.csv")),
                  std::runtime_error);
}
