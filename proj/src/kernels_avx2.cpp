#include "cfi/kernels.hpp"

#include <immintrin.h>

#include <cmath>
#include <utility>

namespace cfi::kernels {
namespace {

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + k));
  double lanes[4];
  _mm256_storeu_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; k < n; ++k) s += x[k];
  return s;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k), acc);
  double lanes[4];
  _mm256_storeu_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; k < n; ++k) s += x[k] * y[k];
  return s;
}

void abs2_avx2(const double* z, double* out, std::size_t n) {
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d v = _mm256_loadu_pd(z + 2 * k);
    const __m256d sq = _mm256_mul_pd(v, v);
    // [re0^2+im0^2, re1^2+im1^2]
    const __m256d sw = _mm256_permute_pd(sq, 0x5);
    const __m256d s = _mm256_add_pd(sq, sw);
    const __m128d lo = _mm256_castpd256_pd128(s);
    const __m128d hi = _mm256_extractf128_pd(s, 1);
    out[k] = _mm_cvtsd_f64(lo);
    out[k + 1] = _mm_cvtsd_f64(hi);
  }
  for (; k < n; ++k) {
    const double re = z[2 * k], im = z[2 * k + 1];
    out[k] = re * re + im * im;
  }
}

void scale_avx2(double* x, std::size_t n, double a) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4)
    _mm256_storeu_pd(x + k, _mm256_mul_pd(_mm256_loadu_pd(x + k), av));
  for (; k < n; ++k) x[k] *= a;
}

void alternate_sign_avx2(double* z, std::size_t n) {
  const __m256d mask = _mm256_castsi256_pd(_mm256_set_epi64x(
      0x8000000000000000ULL, 0x8000000000000000ULL, 0, 0));
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2)
    _mm256_storeu_pd(z + 2 * k,
                     _mm256_xor_pd(_mm256_loadu_pd(z + 2 * k), mask));
  // n odd leaves a final even-index element, which keeps its sign
}

// Range reduction x = q*(pi/2) + r, |r| <= pi/4, then minimax polynomials.
// Valid for |x| below ~1e9; phases here stay within a few hundred radians.
const double kTwoOverPi = 6.36619772367581382433e-01;
const double kPio2Hi = 1.57079632673412561417e+00;
const double kPio2Lo = 6.07710050650619224932e-11;
const double kPio2Tail = 2.02226624879595063154e-21;

inline __m256d poly_sin(__m256d r2, __m256d r) {
  __m256d p = _mm256_set1_pd(1.58962301576546568060e-10);
  p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(-2.50507477628578072866e-8));
  p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(2.75573136213857245213e-6));
  p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(-1.98412698295895385996e-4));
  p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(8.33333333332211858878e-3));
  p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(-1.66666666666666307295e-1));
  return _mm256_fmadd_pd(p, _mm256_mul_pd(r2, r), r);
}

inline __m256d poly_cos(__m256d r2) {
  __m256d p = _mm256_set1_pd(-1.13585365213876817300e-11);
  p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(2.08757008419747316778e-9));
  p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(-2.75573141792967388112e-7));
  p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(2.48015872888517179954e-5));
  p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(-1.38888888888730564116e-3));
  p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(4.16666666666665929218e-2));
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d half = _mm256_set1_pd(0.5);
  return _mm256_add_pd(_mm256_fnmadd_pd(r2, half, one),
                       _mm256_mul_pd(_mm256_mul_pd(r2, r2), p));
}

inline __m256d cos4(__m256d x) {
  const __m256d qd = _mm256_round_pd(
      _mm256_mul_pd(x, _mm256_set1_pd(kTwoOverPi)),
      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(qd, _mm256_set1_pd(kPio2Hi), x);
  r = _mm256_fnmadd_pd(qd, _mm256_set1_pd(kPio2Lo), r);
  r = _mm256_fnmadd_pd(qd, _mm256_set1_pd(kPio2Tail), r);
  const __m256d r2 = _mm256_mul_pd(r, r);
  const __m256d s = poly_sin(r2, r);
  const __m256d c = poly_cos(r2);
  const __m256i q64 = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(qd));
  // quadrant q mod 4: 0 -> c, 1 -> -s, 2 -> -c, 3 -> s
  const __m256i oddmask = _mm256_cmpeq_epi64(
      _mm256_and_si256(q64, _mm256_set1_epi64x(1)), _mm256_set1_epi64x(1));
  __m256d val = _mm256_blendv_pd(c, s, _mm256_castsi256_pd(oddmask));
  const __m256i negbit = _mm256_slli_epi64(
      _mm256_and_si256(_mm256_add_epi64(q64, _mm256_set1_epi64x(1)),
                       _mm256_set1_epi64x(2)),
      62);
  return _mm256_xor_pd(val, _mm256_castsi256_pd(negbit));
}

double cos_weighted_sum_avx2(const double* w, std::size_t n, double theta0,
                             double dtheta) {
  __m256d acc = _mm256_setzero_pd();
  const __m256d lane = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  const __m256d dth = _mm256_set1_pd(dtheta);
  const __m256d th0 = _mm256_set1_pd(theta0);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d kk = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(k)), lane);
    const __m256d th = _mm256_fmadd_pd(kk, dth, th0);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + k), cos4(th), acc);
  }
  double lanes[4];
  _mm256_storeu_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; k < n; ++k)
    s += w[k] * std::cos(theta0 + static_cast<double>(k) * dtheta);
  return s;
}

// (ar + i ai)(br + i bi) for two packed complex doubles
inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d br = _mm256_movedup_pd(b);
  const __m256d bi = _mm256_permute_pd(b, 0xF);
  const __m256d as = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, br, _mm256_mul_pd(as, bi));
}

void fft_avx2(double* z, std::size_t n, const double* roots, int dir) {
  auto* c = reinterpret_cast<std::complex<double>*>(z);
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(c[i], c[j]);
  }
  for (std::size_t start = 0; start + 2 <= n; start += 2) {
    const __m128d u = _mm_loadu_pd(z + 2 * start);
    const __m128d t = _mm_loadu_pd(z + 2 * start + 2);
    _mm_storeu_pd(z + 2 * start, _mm_add_pd(u, t));
    _mm_storeu_pd(z + 2 * start + 2, _mm_sub_pd(u, t));
  }
  const __m256d conj_mask = _mm256_castsi256_pd(_mm256_set_epi64x(
      0x8000000000000000ULL, 0, 0x8000000000000000ULL, 0));
  for (std::size_t len = 4; len <= n; len <<= 1) {
    const std::size_t half = len / 2, step = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t j = 0; j < half; j += 2) {
        const __m128d w0 = _mm_loadu_pd(roots + 2 * j * step);
        const __m128d w1 = _mm_loadu_pd(roots + 2 * (j + 1) * step);
        __m256d w = _mm256_set_m128d(w1, w0);
        if (dir > 0) w = _mm256_xor_pd(w, conj_mask);
        const std::size_t a = 2 * (start + j);
        const std::size_t b = 2 * (start + j + half);
        const __m256d u = _mm256_loadu_pd(z + a);
        const __m256d t = cmul(_mm256_loadu_pd(z + b), w);
        _mm256_storeu_pd(z + a, _mm256_add_pd(u, t));
        _mm256_storeu_pd(z + b, _mm256_sub_pd(u, t));
      }
    }
  }
}

}  // namespace

const Ops& avx2_ops() {
  static const Ops ops = {
      "avx2",
      sum_avx2,
      dot_avx2,
      abs2_avx2,
      scale_avx2,
      alternate_sign_avx2,
      cos_weighted_sum_avx2,
      fft_avx2,
  };
  return ops;
}

}  // namespace cfi::kernels
