#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "cfi/kernels.hpp"
#include "doctest.h"

using namespace cfi::kernels;
using cplx = std::complex<double>;

namespace {

std::vector<double> random_reals(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> out(n);
  for (double& v : out) v = uni(rng);
  return out;
}

std::vector<cplx> random_complex(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<cplx> out(n);
  for (cplx& v : out) v = {uni(rng), uni(rng)};
  return out;
}

}  // namespace

TEST_CASE("registry lists scalar first and the active set") {
  const auto& sets = available();
  REQUIRE(!sets.empty());
  CHECK(std::string(sets[0]->name) == "scalar");
  CHECK(find("scalar") == &scalar_ops());
  CHECK(find("no-such-backend") == nullptr);
  bool active_listed = false;
  for (const Ops* ops : sets) active_listed |= (ops == &active());
  CHECK(active_listed);
}

TEST_CASE("every backend matches straightforward loops") {
  // Sizes around SIMD widths to exercise the tail handling.
  for (const std::size_t n :
       {std::size_t{1}, std::size_t{2}, std::size_t{3}, std::size_t{4},
        std::size_t{5}, std::size_t{7}, std::size_t{8}, std::size_t{9},
        std::size_t{15}, std::size_t{16}, std::size_t{17}, std::size_t{31},
        std::size_t{100}, std::size_t{1023}}) {
    const std::vector<double> x = random_reals(11 * n + 1, n);
    const std::vector<double> y = random_reals(13 * n + 2, n);

    double want_sum = 0.0;
    double want_dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      want_sum += x[i];
      want_dot += x[i] * y[i];
    }
    const double theta0 = 0.37;
    const double dtheta = 0.011;
    double want_cos = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      want_cos += x[i] * std::cos(theta0 + static_cast<double>(i) * dtheta);
    }

    for (const Ops* ops : available()) {
      INFO(ops->name, " n=", n);
      CHECK(ops->sum(x.data(), n) ==
            doctest::Approx(want_sum).epsilon(1e-12));
      CHECK(ops->dot(x.data(), y.data(), n) ==
            doctest::Approx(want_dot).epsilon(1e-12));
      CHECK(ops->cos_weighted_sum(x.data(), n, theta0, dtheta) ==
            doctest::Approx(want_cos).epsilon(1e-11));

      const std::vector<cplx> z = random_complex(17 * n + 3, n);
      std::vector<double> got_abs2(n);
      ops->abs2(flat(z.data()), got_abs2.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(got_abs2[i] == doctest::Approx(std::norm(z[i])).epsilon(1e-14));
      }

      std::vector<double> scaled = x;
      ops->scale(scaled.data(), n, 1.375);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(scaled[i] == x[i] * 1.375);  // exact: power-of-two mantissa
      }

      std::vector<cplx> alt = z;
      ops->alternate_sign(flat(alt.data()), n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(alt[i] == (i % 2 == 0 ? z[i] : -z[i]));
      }
    }
  }
}

TEST_CASE("fft matches the direct transform and inverts") {
  const std::size_t n = 64;
  const std::vector<cplx> z = random_complex(99, n);
  const auto roots_c = fft_roots(n);
  const double* roots = flat(roots_c.data());

  // Direct O(n^2) oracle for dir < 0: X_j = sum_k z_k e^{-2 pi i jk/n}.
  std::vector<cplx> want(n);
  for (std::size_t j = 0; j < n; ++j) {
    cplx acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double ang = -2.0 * std::numbers::pi *
                         static_cast<double>(j * k % n) /
                         static_cast<double>(n);
      acc += z[k] * std::polar(1.0, ang);
    }
    want[j] = acc;
  }

  for (const Ops* ops : available()) {
    INFO(ops->name);
    std::vector<cplx> got = z;
    ops->fft(flat(got.data()), n, roots, -1);
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(std::abs(got[j] - want[j]) < 1e-11);
    }

    // Backward transform with 1/n recovers the input.
    ops->fft(flat(got.data()), n, roots, +1);
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(std::abs(got[k] / static_cast<double>(n) - z[k]) < 1e-13);
    }
  }
}

TEST_CASE("fft_roots are the forward n-th roots") {
  const std::size_t n = 16;
  const auto roots = fft_roots(n);
  REQUIRE(roots.size() == n / 2);
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const cplx want = std::polar(
        1.0, -2.0 * std::numbers::pi * static_cast<double>(k) /
                 static_cast<double>(n));
    CHECK(std::abs(roots[k] - want) < 1e-15);
  }
}
