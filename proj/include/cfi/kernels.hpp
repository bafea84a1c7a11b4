#pragma once

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

namespace cfi::kernels {

/// Data-parallel primitives behind the grid sums, discrete transforms and
/// fringe integrals. A scalar reference implementation always exists; wider
/// variants (AVX2) are registered when the build and the host support them.
/// The active set is chosen at runtime; set CFI_KERNELS=scalar|avx2 to force
/// one. Complex arrays are interleaved re,im pairs (std::complex layout),
/// passed as double* with the complex element count.
struct Ops {
  const char* name;
  /// sum of n doubles
  double (*sum)(const double* x, std::size_t n);
  /// dot product of n doubles; dot(z, z, 2n) is a complex squared norm and
  /// dot(a, b, 2n) is Re sum conj(a_k) b_k for interleaved complex data
  double (*dot)(const double* x, const double* y, std::size_t n);
  /// out[k] = |z[k]|^2 for n complex elements
  void (*abs2)(const double* z, double* out, std::size_t n);
  /// x[k] *= a for n doubles
  void (*scale)(double* x, std::size_t n, double a);
  /// z[k] *= (-1)^k for n complex elements
  void (*alternate_sign)(double* z, std::size_t n);
  /// sum_k w[k] * cos(theta0 + k*dtheta)
  double (*cos_weighted_sum)(const double* w, std::size_t n, double theta0,
                             double dtheta);
  /// in-place radix-2 FFT of n complex elements, n a power of two.
  /// roots holds the n/2 forward roots e^{-2 pi i k/n} (see fft_roots);
  /// dir < 0 applies e^{-2 pi i jk/n}, dir > 0 the conjugate. Unnormalized.
  void (*fft)(double* z, std::size_t n, const double* roots, int dir);
};

const Ops& scalar_ops();
#if CFI_HAVE_AVX2_KERNELS
const Ops& avx2_ops();
#endif

/// Set chosen at startup: CFI_KERNELS override, else the widest supported.
const Ops& active();
/// nullptr when no set with that name is registered.
const Ops* find(std::string_view name);
/// All registered sets (scalar first); used by the equivalence tests.
const std::vector<const Ops*>& available();

/// e^{-2 pi i k/n} for k in [0, n/2)
std::vector<std::complex<double>> fft_roots(std::size_t n);

constexpr bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline const double* flat(const std::complex<double>* z) {
  return reinterpret_cast<const double*>(z);
}
inline double* flat(std::complex<double>* z) {
  return reinterpret_cast<double*>(z);
}

}  // namespace cfi::kernels
