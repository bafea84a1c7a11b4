#include "cfi/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "cfi/rng.hpp"
#include "cfi/transforms.hpp"

namespace cfi::retrieval {
namespace {

constexpr double kSupportFraction = 1e-3;

struct Magnitudes {
  FrequencyGrid fgrid;
  TimeGrid tgrid;
  std::vector<double> freq;  // |Psi_k|
  std::vector<double> time;  // |psi_j|
};

Magnitudes extract(const SpectralAmplitude1D& jsi_mag,
                   const TemporalAmplitude1D& jti_mag) {
  if (!grids_are_dual(jsi_mag.grid(), jti_mag.grid()))
    throw std::invalid_argument(
        "gerchberg_saxton: frequency and time grids are not Fourier duals");
  Magnitudes m{jsi_mag.grid(), jti_mag.grid(), {}, {}};
  m.freq.reserve(m.fgrid.n);
  for (const cplx& v : jsi_mag.values()) m.freq.push_back(std::abs(v));
  m.time.reserve(m.tgrid.n);
  for (const cplx& v : jti_mag.values()) m.time.push_back(std::abs(v));
  return m;
}

std::vector<bool> support_mask(const std::vector<double>& mag) {
  const double peak = *std::max_element(mag.begin(), mag.end());
  std::vector<bool> mask(mag.size());
  for (std::size_t k = 0; k < mag.size(); ++k)
    mask[k] = mag[k] > kSupportFraction * peak;
  return mask;
}

std::vector<double> random_phase(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-std::numbers::pi,
                                             std::numbers::pi);
  std::vector<double> phase(n);
  for (double& p : phase) p = uni(rng);
  return phase;
}

struct Attempt {
  std::vector<double> phase;  // best iterate
  double residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  bool stagnated = false;
};

Attempt run_attempt(const Magnitudes& m, std::vector<double> phase,
                    std::size_t max_iter, double tol, double stagnation_tol,
                    std::size_t stagnation_window) {
  const std::size_t n = m.fgrid.n;
  Attempt best;
  best.residual = std::numeric_limits<double>::infinity();
  std::vector<double> history;
  history.reserve(max_iter);

  std::vector<cplx> freq_values(n);
  for (std::size_t iter = 1; iter <= max_iter; ++iter) {
    for (std::size_t k = 0; k < n; ++k)
      freq_values[k] = std::polar(m.freq[k], phase[k]);
    const TemporalAmplitude1D achieved = jsa_to_jta_cw(
        SpectralAmplitude1D::normalized(m.fgrid, freq_values), &m.tgrid);

    double sq = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = std::abs(achieved.values()[j]) - m.time[j];
      sq += d * d;
    }
    const double residual = std::sqrt(sq * m.tgrid.d_t);

    if (residual < best.residual) {
      best.residual = residual;
      best.phase = phase;
      best.iterations = iter;
    }
    if (best.residual <= tol) {
      best.converged = true;
      best.iterations = iter;
      return best;
    }
    history.push_back(best.residual);
    if (history.size() > stagnation_window &&
        history[history.size() - 1 - stagnation_window] - best.residual <
            stagnation_tol) {
      best.stagnated = true;
      best.iterations = iter;
      return best;
    }

    std::vector<cplx> time_values(n);
    for (std::size_t j = 0; j < n; ++j) {
      const cplx a = achieved.values()[j];
      const double r = std::abs(a);
      time_values[j] = r > 0.0 ? a * (m.time[j] / r) : cplx(m.time[j], 0.0);
    }
    const SpectralAmplitude1D back = jta_to_jsa_cw(
        TemporalAmplitude1D::normalized(m.tgrid, time_values), &m.fgrid);
    for (std::size_t k = 0; k < n; ++k)
      phase[k] = std::arg(back.values()[k]);
  }
  best.iterations = max_iter;
  return best;
}

RetrievalResult finish(const Magnitudes& m, Attempt best, double tol) {
  RetrievalResult result;
  result.support = support_mask(m.freq);
  result.phase = std::move(best.phase);
  for (std::size_t k = 0; k < result.phase.size(); ++k)
    if (!result.support[k]) result.phase[k] = 0.0;
  result.magnitude_residual = best.residual;
  result.iterations = best.iterations;
  result.converged = best.residual <= tol;
  return result;
}

}  // namespace

RetrievalResult gerchberg_saxton(const SpectralAmplitude1D& jsi_mag,
                                 const TemporalAmplitude1D& jti_mag,
                                 std::size_t max_iter, double tol,
                                 const RetrievalOptions& opts) {
  if (max_iter == 0)
    throw std::invalid_argument("gerchberg_saxton: max_iter must be positive");
  if (!(tol >= 0.0))
    throw std::invalid_argument("gerchberg_saxton: tol must be non-negative");
  const Magnitudes m = extract(jsi_mag, jti_mag);

  std::vector<double> init(m.fgrid.n, 0.0);
  if (opts.random_init_seed)
    init = random_phase(m.fgrid.n, *opts.random_init_seed);
  Attempt best = run_attempt(m, std::move(init), max_iter, tol,
                             opts.stagnation_tol, opts.stagnation_window);

  if (!best.converged && best.stagnated && opts.max_restarts > 0) {
    std::vector<std::future<Attempt>> restarts;
    restarts.reserve(opts.max_restarts);
    for (std::size_t r = 0; r < opts.max_restarts; ++r)
      restarts.push_back(std::async(std::launch::async, [&m, &opts, max_iter,
                                                         tol, r] {
        return run_attempt(m, random_phase(m.fgrid.n, derive_seed(opts.seed, r)),
                           max_iter, tol, opts.stagnation_tol,
                           opts.stagnation_window);
      }));
    for (std::future<Attempt>& f : restarts) {
      Attempt attempt = f.get();
      if (attempt.residual < best.residual) best = std::move(attempt);
    }
  }
  return finish(m, std::move(best), tol);
}

RetrievalResult gerchberg_saxton_from(const SpectralAmplitude1D& jsi_mag,
                                      const TemporalAmplitude1D& jti_mag,
                                      const std::vector<double>& initial_phase,
                                      std::size_t max_iter, double tol) {
  if (max_iter == 0)
    throw std::invalid_argument("gerchberg_saxton: max_iter must be positive");
  const Magnitudes m = extract(jsi_mag, jti_mag);
  if (initial_phase.size() != m.fgrid.n)
    throw std::invalid_argument(
        "gerchberg_saxton: initial phase length does not match the grid");
  Attempt best = run_attempt(m, initial_phase, max_iter, tol,
                             /*stagnation_tol=*/0.0,
                             /*stagnation_window=*/max_iter + 1);
  return finish(m, std::move(best), tol);
}

RetrievalResult canonicalize(const RetrievalResult& result,
                             const SpectralAmplitude1D& jsi_mag) {
  const FrequencyGrid& grid = jsi_mag.grid();
  const std::size_t n = grid.n;
  if (result.phase.size() != n || result.support.size() != n)
    throw std::invalid_argument(
        "canonicalize: result does not match the magnitude grid");
  if (grid.center != 0.0)
    throw std::invalid_argument(
        "canonicalize: needs a zero-centered frequency grid");

  RetrievalResult out = result;

  // Undo the time translation: recenter the temporal intensity centroid.
  const SpectralAmplitude1D state = apply_phase(jsi_mag, out.phase);
  const TemporalAmplitude1D psi = jsa_to_jta_cw(state);
  double centroid = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    centroid += psi.grid().point(j) * std::norm(psi.values()[j]);
  centroid *= psi.grid().d_t;
  for (std::size_t k = 0; k < n; ++k)
    out.phase[k] -= grid.point(k) * centroid;

  // Zero the global phase at omega = 0 (the center bin).
  const double at_zero = out.phase[n / 2];
  for (std::size_t k = 0; k < n; ++k) out.phase[k] -= at_zero;

  // Pick the conjugate-reflection representative with non-negative phase
  // slope at the first band edge.
  std::size_t edge = n;
  for (std::size_t k = 0; k + 1 < n; ++k)
    if (out.support[k] && out.support[k + 1]) {
      edge = k;
      break;
    }
  if (edge < n) {
    const double slope = std::remainder(out.phase[edge + 1] - out.phase[edge],
                                        2.0 * std::numbers::pi);
    if (slope < 0.0) {
      std::vector<double> reflected(n);
      for (std::size_t k = 0; k < n; ++k)
        reflected[k] = -out.phase[(n - k) % n];
      out.phase = std::move(reflected);
    }
  }

  for (std::size_t k = 0; k < n; ++k)
    if (!out.support[k]) out.phase[k] = 0.0;
  return out;
}

SpectralAmplitude1D apply_phase(const SpectralAmplitude1D& jsi_mag,
                                const std::vector<double>& phase) {
  if (phase.size() != jsi_mag.grid().n)
    throw std::invalid_argument(
        "apply_phase: phase length does not match the grid");
  std::vector<cplx> values(phase.size());
  for (std::size_t k = 0; k < phase.size(); ++k)
    values[k] = std::polar(std::abs(jsi_mag.values()[k]), phase[k]);
  return SpectralAmplitude1D::normalized(jsi_mag.grid(), values);
}

void write_phase_csv(const FrequencyGrid& grid, const RetrievalResult& result,
                     const std::string& path) {
  if (result.phase.size() != grid.n)
    throw std::invalid_argument(
        "write_phase_csv: result size does not match the grid");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "omega_rad_s,phase_rad\n";
  char buf[80];
  for (std::size_t k = 0; k < grid.n; ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", grid.point(k),
                  result.phase[k]);
    out << buf;
  }
  if (!out) throw std::runtime_error("error writing " + path);
}

PhaseTable read_phase_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");
  const auto loc = [&path](std::size_t line) {
    return path + ":" + std::to_string(line) + ": ";
  };
  std::vector<double> omega;
  std::vector<double> phase;
  std::vector<std::size_t> lines;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty()) continue;
    if (line == 1) {
      if (text != "omega_rad_s,phase_rad")
        throw std::invalid_argument(
            loc(line) + "expected header 'omega_rad_s,phase_rad', got '" +
            text + "'");
      continue;
    }
    double cols[2];
    const char* p = text.c_str();
    for (int c = 0; c < 2; ++c) {
      char* end = nullptr;
      cols[c] = std::strtod(p, &end);
      if (end == p)
        throw std::invalid_argument(loc(line) + "malformed number in '" +
                                    text + "'");
      p = end;
      if (c == 0) {
        if (*p != ',')
          throw std::invalid_argument(loc(line) + "expected 2 columns in '" +
                                      text + "'");
        ++p;
      } else if (*p != '\0') {
        throw std::invalid_argument(loc(line) + "unexpected character in '" +
                                    text + "'");
      }
    }
    omega.push_back(cols[0]);
    phase.push_back(cols[1]);
    lines.push_back(line);
  }
  if (line == 0) throw std::invalid_argument(path + ": missing header row");
  const std::size_t n = omega.size();
  if (n < 2) throw std::invalid_argument(path + ": need at least 2 rows");
  const double step = (omega[n - 1] - omega[0]) / static_cast<double>(n - 1);
  if (!(step > 0.0))
    throw std::invalid_argument(path + ": frequencies must be increasing");
  for (std::size_t k = 0; k < n; ++k) {
    const double expected = omega[0] + static_cast<double>(k) * step;
    if (std::abs(omega[k] - expected) > 1e-6 * step)
      throw std::invalid_argument(loc(lines[k]) + "non-uniform grid spacing");
  }
  const double center = omega[0] + (static_cast<double>(n) / 2.0) * step;
  FrequencyGrid grid(n, step, center);
  return PhaseTable{grid, std::move(phase)};
}

}  // namespace cfi::retrieval
