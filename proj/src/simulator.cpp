#include "cfi/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "cfi/rng.hpp"
#include "cfi/transforms.hpp"

namespace cfi::sim {
namespace {

void check_unit_interval(double v, const char* what) {
  if (!(v >= 0.0) || !(v <= 1.0))
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

void check_non_negative(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string(what) +
                                " must be finite and >= 0");
}

double db_to_transmission(double db) { return std::pow(10.0, -db / 10.0); }

std::uint64_t draw_poisson(std::mt19937_64& rng, double mean) {
  if (!(mean > 0.0)) return 0;
  std::poisson_distribution<std::uint64_t> dist(mean);
  return dist(rng);
}

struct ChannelEfficiency {
  double signal;
  double idler;
};

ChannelEfficiency channel_efficiency(const CfiConfig& cfg,
                                     const DetectorModel& det,
                                     const SimOptions& opts) {
  return {cfg.eta * det.efficiency * db_to_transmission(opts.insertion_loss_db_s),
          cfg.eta * det.efficiency * db_to_transmission(opts.insertion_loss_db_i)};
}

/// Inverse-CDF sampler over the JSI bins, uniform within a bin.
class SpectrumSampler {
 public:
  explicit SpectrumSampler(const SpectralAmplitude1D& state)
      : grid_(state.grid()), cdf_(state.grid().n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < grid_.n; ++k) {
      acc += std::norm(state.values()[k]);
      cdf_[k] = acc;
    }
    total_ = acc;
  }

  template <typename Rng>
  double sample(Rng& rng) const {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double u = uni(rng) * total_;
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const std::size_t k =
        std::min(static_cast<std::size_t>(it - cdf_.begin()), grid_.n - 1);
    return grid_.point(k) + (uni(rng) - 0.5) * grid_.d_omega;
  }

 private:
  FrequencyGrid grid_;
  std::vector<double> cdf_;
  double total_;
};

}  // namespace

void DetectorModel::validate() const {
  check_unit_interval(efficiency, "DetectorModel: efficiency");
  check_non_negative(jitter_sigma, "DetectorModel: jitter_sigma");
  check_non_negative(dark_rate, "DetectorModel: dark_rate");
  if (!(tick > 0.0) || !std::isfinite(tick))
    throw std::invalid_argument("DetectorModel: tick must be positive");
}

double ShifterModel::leak_probability() const {
  return db_to_transmission(carrier_suppression_db);
}

void ShifterModel::validate() const {
  check_non_negative(carrier_suppression_db,
                     "ShifterModel: carrier_suppression_db");
}

void DriftModel::validate() const {
  if (!std::isfinite(rate) || !std::isfinite(phi0))
    throw std::invalid_argument("DriftModel: rate and phi0 must be finite");
}

void SimOptions::validate() const {
  check_non_negative(insertion_loss_db_s, "SimOptions: insertion_loss_db_s");
  check_non_negative(insertion_loss_db_i, "SimOptions: insertion_loss_db_i");
  check_unit_interval(multi_pair_penalty, "SimOptions: multi_pair_penalty");
  check_unit_interval(modulator_dispersion_penalty,
                      "SimOptions: modulator_dispersion_penalty");
  check_unit_interval(extra_sideband_penalty,
                      "SimOptions: extra_sideband_penalty");
  check_non_negative(phase_blur_sigma, "SimOptions: phase_blur_sigma");
  if (visibility_override &&
      !(std::abs(*visibility_override) <= 1.0))
    throw std::invalid_argument(
        "SimOptions: visibility_override must lie in [-1, 1]");
}

double effective_visibility(const SpectralAmplitude1D& state,
                            const CfiConfig& cfg, const SimOptions& opts) {
  cfg.validate();
  opts.validate();
  double v;
  if (opts.visibility_override) {
    v = *opts.visibility_override;
  } else {
    v = cfi_visibility_cw(TemporalIntensity1D::of(jsa_to_jta_cw(state)),
                          cfg.delta_omega);
  }
  v *= (1.0 - opts.multi_pair_penalty) *
       (1.0 - opts.modulator_dispersion_penalty) *
       (1.0 - opts.extra_sideband_penalty);
  return v;
}

ExpectedRates expected_rates(const SpectralAmplitude1D& state,
                             const CfiConfig& cfg, const DetectorModel& det,
                             double pair_rate, const SimOptions& opts) {
  cfg.validate();
  det.validate();
  opts.validate();
  check_non_negative(pair_rate, "expected_rates: pair_rate");
  const double v = effective_visibility(state, cfg, opts);
  const ChannelEfficiency eta = channel_efficiency(cfg, det, opts);
  const double pair_eta = eta.signal * eta.idler;
  ExpectedRates rates;
  rates.central_peak =
      pair_rate * pair_eta / 8.0 * (1.0 + v * std::cos(cfg.phi_t()));
  rates.side_peak_each = pair_rate * pair_eta / 8.0;
  rates.singles_s = pair_rate * eta.signal / 2.0 + det.dark_rate;
  rates.singles_i = pair_rate * eta.idler / 2.0 + det.dark_rate;
  return rates;
}

TimeTagStream simulate_timetags(const SpectralAmplitude1D& state,
                                const CfiConfig& cfg, const DetectorModel& det,
                                const ShifterModel& shifter,
                                const DriftModel& drift, double pair_rate,
                                double duration, std::uint64_t seed,
                                const SimOptions& opts) {
  cfg.validate();
  det.validate();
  shifter.validate();
  drift.validate();
  opts.validate();
  check_non_negative(pair_rate, "simulate_timetags: pair_rate");
  if (!(duration > 0.0) || !std::isfinite(duration))
    throw std::invalid_argument("simulate_timetags: duration must be positive");

  const double v = effective_visibility(state, cfg, opts);
  const SpectrumSampler sampler(state);
  const ChannelEfficiency eta = channel_efficiency(cfg, det, opts);
  const double leak = shifter.leak_probability();
  const double max_ticks = duration / det.tick;

  TimeTagStream stream;
  stream.tick = det.tick;
  stream.duration = duration;

  const std::size_t n_slices =
      static_cast<std::size_t>(std::ceil(duration));
  for (std::size_t slice = 0; slice < n_slices; ++slice) {
    std::mt19937_64 rng(derive_seed(seed, slice));
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> stdnorm(0.0, 1.0);
    const double t_lo = static_cast<double>(slice);
    const double t_hi = std::min(duration, t_lo + 1.0);
    const double slice_len = t_hi - t_lo;

    const double mean_pairs = pair_rate * slice_len;
    long long n_pairs = 0;
    if (mean_pairs > 0.0) {
      std::poisson_distribution<long long> n_pairs_dist(mean_pairs);
      n_pairs = n_pairs_dist(rng);
    }
    for (long long p = 0; p < n_pairs; ++p) {
      const double t0 = t_lo + uni(rng) * slice_len;
      const double omega = sampler.sample(rng);
      const double phi =
          cfg.phi_t() + drift.phi_t(t0) +
          (opts.phase_blur_sigma > 0.0 ? opts.phase_blur_sigma * stdnorm(rng)
                                       : 0.0);

      // class and ports
      bool shift_s, shift_i, mon_s, mon_i;
      const double u_class = uni(rng);
      if (u_class < 0.5) {
        const bool both_long = uni(rng) < 0.5;
        shift_s = shift_i = both_long;
        const double p_corr = (1.0 + v * std::cos(phi)) / 2.0;
        const bool correlated = uni(rng) < p_corr;
        if (correlated) {
          mon_s = mon_i = uni(rng) < 0.5;
        } else {
          mon_s = uni(rng) < 0.5;
          mon_i = !mon_s;
        }
      } else {
        shift_s = u_class < 0.75;
        shift_i = !shift_s;
        mon_s = mon_i = uni(rng) < 0.5;
      }
      if (shift_s && uni(rng) < leak) shift_s = false;
      if (shift_i && uni(rng) < leak) shift_i = false;

      const bool det_s = mon_s && uni(rng) < eta.signal;
      const bool det_i = mon_i && uni(rng) < eta.idler;
      if (!det_s && !det_i) continue;

      const double delay = cfg.beta2 * omega;
      if (det_s) {
        const double t =
            t0 + delay + (shift_s ? cfg.beta2 * cfg.delta_omega : 0.0) +
            (det.jitter_sigma > 0.0 ? det.jitter_sigma * stdnorm(rng) : 0.0);
        const double ticks = std::floor(t / det.tick);
        if (ticks >= 0.0 && ticks < max_ticks)
          stream.tags.push_back({0, static_cast<std::uint64_t>(ticks)});
      }
      if (det_i) {
        const double t =
            t0 + delay + (shift_i ? cfg.beta2 * cfg.delta_omega : 0.0) +
            (det.jitter_sigma > 0.0 ? det.jitter_sigma * stdnorm(rng) : 0.0);
        const double ticks = std::floor(t / det.tick);
        if (ticks >= 0.0 && ticks < max_ticks)
          stream.tags.push_back({1, static_cast<std::uint64_t>(ticks)});
      }
    }

    if (det.dark_rate > 0.0 && slice_len > 0.0) {
      std::poisson_distribution<long long> n_dark_dist(det.dark_rate *
                                                       slice_len);
      for (int channel = 0; channel < 2; ++channel) {
        const long long n_dark = n_dark_dist(rng);
        for (long long d = 0; d < n_dark; ++d) {
          const double t = t_lo + uni(rng) * slice_len;
          const double ticks = std::floor(t / det.tick);
          if (ticks >= 0.0 && ticks < max_ticks)
            stream.tags.push_back({static_cast<std::uint8_t>(channel),
                                   static_cast<std::uint64_t>(ticks)});
        }
      }
    }
  }

  std::sort(stream.tags.begin(), stream.tags.end(),
            [](const TimeTag& a, const TimeTag& b) {
              return a.ticks != b.ticks ? a.ticks < b.ticks
                                        : a.channel < b.channel;
            });
  return stream;
}

FringeScan simulate_drift_scan(const SpectralAmplitude1D& state,
                               const CfiConfig& cfg, const DetectorModel& det,
                               const DriftModel& drift, double pair_rate,
                               double bin_seconds, std::size_t n_bins,
                               std::uint64_t seed, const SimOptions& opts) {
  cfg.validate();
  det.validate();
  drift.validate();
  opts.validate();
  check_non_negative(pair_rate, "simulate_drift_scan: pair_rate");
  if (!(bin_seconds > 0.0) || n_bins == 0)
    throw std::invalid_argument(
        "simulate_drift_scan: need positive bin_seconds and n_bins");

  const double v = effective_visibility(state, cfg, opts);
  const ChannelEfficiency eta = channel_efficiency(cfg, det, opts);
  const double rate0 = pair_rate * eta.signal * eta.idler / 8.0;

  std::mt19937_64 rng(derive_seed(seed, 0));
  std::normal_distribution<double> blur(0.0, 1.0);
  FringeScan scan;
  scan.source = ScanSource::drift;
  for (std::size_t b = 0; b < n_bins; ++b) {
    const double t_center = (static_cast<double>(b) + 0.5) * bin_seconds;
    const double phi = cfg.phi_t() + drift.phi_t(t_center);
    const double phi_actual =
        phi + (opts.phase_blur_sigma > 0.0 ? opts.phase_blur_sigma * blur(rng)
                                           : 0.0);
    const double lambda =
        rate0 * (1.0 + v * std::cos(phi_actual)) * bin_seconds;
    scan.points.push_back({phi, draw_poisson(rng, lambda), bin_seconds});
  }
  return scan;
}

FringeScan simulate_pzt_scan(const SpectralAmplitude1D& state,
                             const CfiConfig& cfg, const DetectorModel& det,
                             double pair_rate, double bin_seconds,
                             std::size_t max_points, std::uint64_t seed,
                             const SimOptions& opts) {
  cfg.validate();
  det.validate();
  opts.validate();
  check_non_negative(pair_rate, "simulate_pzt_scan: pair_rate");
  if (!(bin_seconds > 0.0) || max_points == 0)
    throw std::invalid_argument(
        "simulate_pzt_scan: need positive bin_seconds and max_points");

  const double v = effective_visibility(state, cfg, opts);
  const ChannelEfficiency eta = channel_efficiency(cfg, det, opts);
  const double rate0 = pair_rate * eta.signal * eta.idler / 8.0;

  std::mt19937_64 rng(derive_seed(seed, 0));
  std::normal_distribution<double> blur(0.0, 1.0);
  FringeScan scan;
  scan.source = ScanSource::pzt;
  double rel = 0.0;
  double run_max = -std::numeric_limits<double>::infinity();
  double run_min = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < max_points && rel <= 2.0 * std::numbers::pi; ++p) {
    const double phi = cfg.phi_t() + rel;
    const double phi_actual =
        phi + (opts.phase_blur_sigma > 0.0 ? opts.phase_blur_sigma * blur(rng)
                                           : 0.0);
    const double lambda =
        rate0 * (1.0 + v * std::cos(phi_actual)) * bin_seconds;
    const std::uint64_t c = draw_poisson(rng, lambda);
    scan.points.push_back({phi, c, bin_seconds});
    const double cd = static_cast<double>(c);
    rel += next_phase_step(cd, run_max, run_min);
    run_max = std::max(run_max, cd);
    run_min = std::min(run_min, cd);
  }
  return scan;
}

double next_phase_step(double current_count, double running_max,
                       double running_min) {
  if (!(current_count >= 0.0))
    throw std::invalid_argument("next_phase_step: counts must be >= 0");
  if (!(running_max >= running_min)) return 0.52;
  if (current_count >= 0.9 * running_max || current_count <= 1.1 * running_min)
    return 0.15;
  return 0.52;
}

}  // namespace cfi::sim
