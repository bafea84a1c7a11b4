#include <numbers>
#include <stdexcept>

#include "cfi/grids.hpp"
#include "doctest.h"

using namespace cfi;

TEST_CASE("grid layout and validation") {
  const FrequencyGrid f(8, 1.0, 0.0);
  CHECK(f.point(0) == -4.0);
  CHECK(f.point(4) == 0.0);
  CHECK(f.point(7) == 3.0);
  CHECK(f.span() == 8.0);
  CHECK(f.half_span() == 4.0);

  CHECK_THROWS_AS(FrequencyGrid(7, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(FrequencyGrid(4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(FrequencyGrid(8, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(FrequencyGrid(8, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid(8, 0.0), std::invalid_argument);
}

TEST_CASE("dual grids satisfy d_t d_omega n = 2 pi for both conventions") {
  for (const auto convention :
       {GridConvention::pulsed_2d, GridConvention::cw_tminus}) {
    const auto [f, t] = make_dual_grids(1024, 2e12, convention);
    CHECK(f.n == 1024);
    CHECK(t.n == 1024);
    CHECK(f.d_omega * static_cast<double>(f.n) == doctest::Approx(2e12));
    CHECK(t.d_t * f.d_omega * static_cast<double>(f.n) ==
          doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-12));
    CHECK(grids_are_dual(f, t));
  }
}

TEST_CASE("dual grid helpers invert each other") {
  const FrequencyGrid f(256, 3.5e9, 0.0);
  const TimeGrid t = dual_time_grid(f);
  CHECK(grids_are_dual(f, t));
  const FrequencyGrid f2 = dual_frequency_grid(t);
  CHECK(f2.n == f.n);
  CHECK(f2.d_omega == doctest::Approx(f.d_omega).epsilon(1e-14));

  const TimeGrid t_bad(256, t.d_t * 1.001, 0.0);
  CHECK(!grids_are_dual(f, t_bad));
}
