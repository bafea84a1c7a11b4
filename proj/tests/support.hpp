#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cfi/amplitudes.hpp"
#include "cfi/grids.hpp"

namespace cfi::test {

/// Unique writable directory, removed recursively on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

/// Chi-squared survival function P(X > x) with k degrees of freedom.
double chi2_sf(double x, double k);

/// Direct O(n^2) evaluation of
///   psi(t_j) = (1/sqrt(2 pi)) sum_k Psi(omega_k) e^{-i omega_k t_j} domega,
/// the oracle the FFT-based transform must match.
std::vector<cplx> naive_dft(const std::vector<cplx>& values,
                            const FrequencyGrid& fgrid, const TimeGrid& tgrid);

/// Random smooth normalized spectral amplitude: a few Gaussian bumps with
/// random centers, widths, and phases, confined well inside the grid so
/// both domains decay below 1e-12 at the edges.
SpectralAmplitude1D random_smooth_state(std::uint64_t seed,
                                        const FrequencyGrid& grid);

/// Reads a whole file as bytes; throws if it cannot be opened.
std::string slurp(const std::string& path);

}  // namespace cfi::test
