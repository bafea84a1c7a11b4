#include "support.hpp"

#include <stdlib.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace cfi::test {

TempDir::TempDir() {
  std::string tmpl =
      (std::filesystem::temp_directory_path() / "cfi-test-XXXXXX").string();
  if (mkdtemp(tmpl.data()) == nullptr) {
    throw std::runtime_error("mkdtemp failed for " + tmpl);
  }
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

double gamma_p(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) {
    throw std::invalid_argument("gamma_p: need a > 0, x >= 0");
  }
  if (x == 0.0) return 0.0;
  const double log_prefactor = -x + a * std::log(x) - std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 1000; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(log_prefactor);
  }
  // Continued fraction for Q(a, x), modified Lentz.
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return 1.0 - std::exp(log_prefactor) * h;
}

double chi2_sf(double x, double k) { return 1.0 - gamma_p(k / 2.0, x / 2.0); }

std::vector<cplx> naive_dft(const std::vector<cplx>& values,
                            const FrequencyGrid& fgrid,
                            const TimeGrid& tgrid) {
  if (values.size() != fgrid.n) {
    throw std::invalid_argument("naive_dft: size mismatch");
  }
  const double scale = fgrid.d_omega / std::sqrt(2.0 * std::numbers::pi);
  std::vector<cplx> out(tgrid.n);
  for (std::size_t j = 0; j < tgrid.n; ++j) {
    const double t = tgrid.point(j);
    cplx acc = 0.0;
    for (std::size_t k = 0; k < fgrid.n; ++k) {
      const double omega = fgrid.point(k);
      acc += values[k] * std::polar(1.0, -omega * t);
    }
    out[j] = acc * scale;
  }
  return out;
}

SpectralAmplitude1D random_smooth_state(std::uint64_t seed,
                                        const FrequencyGrid& grid) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double reach = grid.half_span();
  const int bumps = 2 + static_cast<int>(rng() % 3);

  struct Bump {
    double center, sigma, amp, phase;
  };
  std::vector<Bump> shape;
  for (int b = 0; b < bumps; ++b) {
    shape.push_back({(uni(rng) - 0.5) * reach / 2.0,
                     reach / 40.0 + uni(rng) * reach / 15.0,
                     0.3 + 0.7 * uni(rng),
                     2.0 * std::numbers::pi * uni(rng)});
  }
  const double chirp1 = (uni(rng) - 0.5) * 6.0;
  const double chirp2 = (uni(rng) - 0.5) * 6.0;

  std::vector<cplx> values(grid.n);
  for (std::size_t k = 0; k < grid.n; ++k) {
    const double omega = grid.point(k);
    cplx v = 0.0;
    for (const Bump& b : shape) {
      const double d = (omega - b.center) / b.sigma;
      v += b.amp * std::polar(std::exp(-0.5 * d * d), b.phase);
    }
    const double u = omega / reach;
    values[k] = v * std::polar(1.0, chirp1 * u + chirp2 * u * u);
  }
  return SpectralAmplitude1D::normalized(grid, values);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace cfi::test
