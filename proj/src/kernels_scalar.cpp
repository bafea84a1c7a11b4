#include "cfi/kernels.hpp"

#include <cmath>
#include <utility>

namespace cfi::kernels {
namespace {

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += x[k];
  return acc;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += x[k] * y[k];
  return acc;
}

void abs2_scalar(const double* z, double* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double re = z[2 * k], im = z[2 * k + 1];
    out[k] = re * re + im * im;
  }
}

void scale_scalar(double* x, std::size_t n, double a) {
  for (std::size_t k = 0; k < n; ++k) x[k] *= a;
}

void alternate_sign_scalar(double* z, std::size_t n) {
  for (std::size_t k = 1; k < n; k += 2) {
    z[2 * k] = -z[2 * k];
    z[2 * k + 1] = -z[2 * k + 1];
  }
}

double cos_weighted_sum_scalar(const double* w, std::size_t n, double theta0,
                               double dtheta) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    acc += w[k] * std::cos(theta0 + static_cast<double>(k) * dtheta);
  return acc;
}

void fft_scalar(double* z, std::size_t n, const double* roots, int dir) {
  auto* c = reinterpret_cast<std::complex<double>*>(z);
  const auto* w = reinterpret_cast<const std::complex<double>*>(roots);
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(c[i], c[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2, step = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        std::complex<double> tw = w[j * step];
        if (dir > 0) tw = std::conj(tw);
        const std::complex<double> u = c[start + j];
        const std::complex<double> t = tw * c[start + j + half];
        c[start + j] = u + t;
        c[start + j + half] = u - t;
      }
    }
  }
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops = {
      "scalar",
      sum_scalar,
      dot_scalar,
      abs2_scalar,
      scale_scalar,
      alternate_sign_scalar,
      cos_weighted_sum_scalar,
      fft_scalar,
  };
  return ops;
}

}  // namespace cfi::kernels
