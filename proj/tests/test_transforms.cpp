#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cfi/amplitudes.hpp"
#include "cfi/grids.hpp"
#include "cfi/transforms.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cfi;

namespace {

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  REQUIRE(a.size() == b.size());
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    m = std::max(m, std::abs(a[k] - b[k]));
  }
  return m;
}

}  // namespace

TEST_CASE("1-D transform matches the direct sum on random smooth states") {
  const auto [fgrid, tgrid] =
      make_dual_grids(128, 8e11, GridConvention::cw_tminus);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const SpectralAmplitude1D jsa = test::random_smooth_state(seed, fgrid);
    const TemporalAmplitude1D psi = jsa_to_jta_cw(jsa);
    const std::vector<cplx> want =
        test::naive_dft(jsa.values(), fgrid, psi.grid());
    CHECK(max_abs_diff(psi.values(), want) < 1e-10);
  }
}

TEST_CASE("1-D transform is unitary and inverts") {
  const auto [fgrid, tgrid] =
      make_dual_grids(512, 2e12, GridConvention::cw_tminus);
  const SpectralAmplitude1D jsa = test::random_smooth_state(7, fgrid);
  const TemporalAmplitude1D psi = jsa_to_jta_cw(jsa);

  // A unit-norm input transforms to raw norm 1 before any rescale.
  CHECK(psi.raw_norm() == doctest::Approx(1.0).epsilon(1e-12));

  const SpectralAmplitude1D back = jta_to_jsa_cw(psi, &fgrid);
  CHECK(back.grid().center == fgrid.center);
  CHECK(max_abs_diff(back.values(), jsa.values()) < 1e-12);
}

TEST_CASE("flat spectrum transforms to sqrt(omega_max/pi) sinc") {
  const std::size_t n = 4096;
  const auto [fgrid, tgrid] =
      make_dual_grids(n, 4e12, GridConvention::cw_tminus);
  const double omega_max = fgrid.half_span() / 2.0;  // quarter of the span

  std::vector<cplx> values(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(fgrid.point(k)) <= omega_max) {
      values[k] = 1.0 / std::sqrt(2.0 * omega_max);
    }
  }
  const SpectralAmplitude1D jsa =
      SpectralAmplitude1D::normalized(fgrid, values);
  const TemporalAmplitude1D psi = jsa_to_jta_cw(jsa);

  const double peak = std::sqrt(omega_max / std::numbers::pi);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = psi.grid().point(j);
    const double x = omega_max * t;
    if (std::abs(x) > 8.0) continue;
    const double sinc = x == 0.0 ? 1.0 : std::sin(x) / x;
    CHECK(std::abs(psi.values()[j] - peak * sinc) < 2e-3 * peak);
  }
}

TEST_CASE("nonzero frequency center becomes an exact phase factor") {
  const std::size_t n = 256;
  const auto [f0, t0] = make_dual_grids(n, 8e11, GridConvention::cw_tminus);
  const SpectralAmplitude1D base = test::random_smooth_state(21, f0);

  const double omega0 = 40.0 * f0.d_omega;  // on-grid carrier offset
  const FrequencyGrid shifted(n, f0.d_omega, omega0);
  const SpectralAmplitude1D carried =
      SpectralAmplitude1D::normalized(shifted, base.values());

  const TemporalAmplitude1D psi0 = jsa_to_jta_cw(base);
  const TemporalAmplitude1D psi1 = jsa_to_jta_cw(carried);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx want =
        psi0.values()[j] * std::polar(1.0, -omega0 * psi0.grid().point(j));
    CHECK(std::abs(psi1.values()[j] - want) < 1e-12);
  }
}

TEST_CASE("off-center target time grid matches the direct sum") {
  const std::size_t n = 128;
  const auto [fgrid, tgrid] =
      make_dual_grids(n, 8e11, GridConvention::cw_tminus);
  const SpectralAmplitude1D jsa = test::random_smooth_state(5, fgrid);

  const TimeGrid shifted(n, tgrid.d_t, 16.0 * tgrid.d_t);
  const TemporalAmplitude1D psi = jsa_to_jta_cw(jsa, &shifted);
  const std::vector<cplx> want =
      test::naive_dft(jsa.values(), fgrid, shifted);

  // The shifted-grid values are no longer unit-norm over the window, so
  // compare after undoing the normalization rescale.
  const double raw = psi.raw_norm();
  double m = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    m = std::max(m, std::abs(psi.values()[j] * std::sqrt(raw) - want[j]));
  }
  CHECK(m < 1e-9);
}

TEST_CASE("transform rejects non-dual target grids") {
  const auto [fgrid, tgrid] =
      make_dual_grids(64, 4e11, GridConvention::cw_tminus);
  const SpectralAmplitude1D jsa = test::random_smooth_state(3, fgrid);

  const TimeGrid wrong_step(64, tgrid.d_t * 1.01, 0.0);
  CHECK_THROWS_AS(jsa_to_jta_cw(jsa, &wrong_step), std::invalid_argument);
  const TimeGrid wrong_n(128, tgrid.d_t / 2.0, 0.0);
  CHECK_THROWS_AS(jsa_to_jta_cw(jsa, &wrong_n), std::invalid_argument);
}

TEST_CASE("2-D transform matches the direct double sum") {
  const std::size_t n = 32;
  const auto [fs, ts] = make_dual_grids(n, 4e11, GridConvention::pulsed_2d);
  const auto [fi, ti] = make_dual_grids(n, 4e11, GridConvention::pulsed_2d);

  // Smooth two-bump joint amplitude.
  std::vector<cplx> values(n * n);
  const double s0 = fs.half_span() / 3.0;
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      const double ws = fs.point(s) / s0;
      const double wi = fi.point(i) / s0;
      values[s * n + i] =
          std::polar(std::exp(-ws * ws - wi * wi - 0.5 * ws * wi),
                     0.3 * ws - 0.2 * wi * wi);
    }
  }
  const JointSpectralAmplitude2D jsa =
      JointSpectralAmplitude2D::normalized(fs, fi, values);
  const JointTemporalAmplitude2D jta = jsa_to_jta_2d(jsa);
  CHECK(jta.raw_norm() == doctest::Approx(1.0).epsilon(1e-12));

  // psi(tS, tI) = (1/2pi) sum Psi e^{-i(wS tS - wI tI)} dwS dwI: the
  // idler axis transforms with the opposite sign.
  const double scale =
      fs.d_omega * fi.d_omega / (2.0 * std::numbers::pi);
  double max_err = 0.0;
  for (std::size_t js = 0; js < n; js += 5) {
    for (std::size_t ji = 0; ji < n; ji += 5) {
      const double tS = jta.signal().point(js);
      const double tI = jta.idler().point(ji);
      cplx acc = 0.0;
      for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
          acc += jsa.values()[s * n + i] *
                 std::polar(1.0, -(fs.point(s) * tS - fi.point(i) * tI));
        }
      }
      max_err = std::max(
          max_err, std::abs(jta.values()[js * n + ji] - acc * scale));
    }
  }
  CHECK(max_err < 1e-10);

  const JointSpectralAmplitude2D back = jta_to_jsa_2d(jta, &fs, &fi);
  CHECK(max_abs_diff(back.values(), jsa.values()) < 1e-12);
}

TEST_CASE("carrier factor toggles without changing the intensity") {
  const std::size_t n = 16;
  const auto [fs, ts] = make_dual_grids(n, 2e11, GridConvention::pulsed_2d);
  std::vector<cplx> values(n * n);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      const double ws = fs.point(s) / (fs.half_span() / 3.0);
      const double wi = fs.point(i) / (fs.half_span() / 3.0);
      values[s * n + i] = std::exp(-ws * ws - wi * wi);
    }
  }
  const JointSpectralAmplitude2D jsa =
      JointSpectralAmplitude2D::normalized(fs, fs, values);

  const double ws0 = 1.2e15;
  const double wi0 = 1.1e15;
  const JointTemporalAmplitude2D plain =
      jsa_to_jta_2d(jsa, ws0, wi0, Carrier::omit);
  CHECK(!plain.carrier().applied);
  CHECK(plain.carrier().omega_s0 == ws0);

  const JointTemporalAmplitude2D carried =
      jsa_to_jta_2d(jsa, ws0, wi0, Carrier::apply);
  CHECK(carried.carrier().applied);
  for (std::size_t js = 0; js < n; js += 3) {
    for (std::size_t ji = 0; ji < n; ji += 3) {
      const cplx want =
          plain.values()[js * n + ji] *
          std::polar(1.0, -(ws0 * plain.signal().point(js) +
                            wi0 * plain.idler().point(ji)));
      CHECK(std::abs(carried.values()[js * n + ji] - want) < 1e-12);
    }
  }

  const JointTemporalAmplitude2D removed = with_carrier(carried, false);
  CHECK(!removed.carrier().applied);
  CHECK(max_abs_diff(removed.values(), plain.values()) < 1e-12);

  // The JTI never sees the carrier.
  const JointTemporalIntensity2D i_plain = JointTemporalIntensity2D::of(plain);
  const JointTemporalIntensity2D i_carried =
      JointTemporalIntensity2D::of(carried);
  double m = 0.0;
  for (std::size_t k = 0; k < i_plain.values().size(); ++k) {
    m = std::max(m, std::abs(i_plain.values()[k] - i_carried.values()[k]));
  }
  CHECK(m < 1e-12);

  // Round trip through the inverse removes an applied carrier first.
  const JointSpectralAmplitude2D back = jta_to_jsa_2d(carried, &fs, &fs);
  CHECK(max_abs_diff(back.values(), jsa.values()) < 1e-11);
}
