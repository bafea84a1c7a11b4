#include "cfi/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cfi::kernels {
namespace {

bool cpu_has_avx2() {
#if CFI_HAVE_AVX2_KERNELS
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

}  // namespace

const std::vector<const Ops*>& available() {
  static const std::vector<const Ops*> sets = [] {
    std::vector<const Ops*> v{&scalar_ops()};
#if CFI_HAVE_AVX2_KERNELS
    if (cpu_has_avx2()) v.push_back(&avx2_ops());
#endif
    return v;
  }();
  return sets;
}

const Ops* find(std::string_view name) {
  for (const Ops* ops : available())
    if (name == ops->name) return ops;
  return nullptr;
}

const Ops& active() {
  static const Ops* chosen = [] {
    if (const char* env = std::getenv("CFI_KERNELS")) {
      const Ops* ops = find(env);
      if (!ops)
        throw std::runtime_error("CFI_KERNELS=" + std::string(env) +
                                 " is not an available kernel set");
      return ops;
    }
    return available().back();
  }();
  return *chosen;
}

std::vector<std::complex<double>> fft_roots(std::size_t n) {
  std::vector<std::complex<double>> roots(n / 2);
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const double phase =
        -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    roots[k] = {std::cos(phase), std::sin(phase)};
  }
  return roots;
}

}  // namespace cfi::kernels
