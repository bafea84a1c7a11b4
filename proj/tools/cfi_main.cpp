#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cfi/amplitude_io.hpp"
#include "cfi/analysis.hpp"
#include "cfi/cfi_core.hpp"
#include "cfi/config.hpp"
#include "cfi/kernels.hpp"
#include "cfi/retrieval.hpp"
#include "cfi/rng.hpp"
#include "cfi/simulator.hpp"
#include "cfi/states.hpp"
#include "cfi/svg.hpp"
#include "cfi/timetag_io.hpp"
#include "cfi/transforms.hpp"

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Anything that goes wrong while loading or interpreting configuration
/// is a validation error (exit code 1), including an unreadable file.
cfi::config::RunConfig load_config_checked(const std::string& path) {
  try {
    return cfi::config::load_config(path);
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    throw std::invalid_argument(e.what());
  }
}

cfi::SpectralAmplitude1D build_state_checked(
    const cfi::config::RunConfig& cfg) {
  try {
    return cfi::config::build_state_1d(cfg);
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    throw std::invalid_argument(e.what());
  }
}

void ensure_output_dir(const cfi::config::OutputSection& out) {
  if (!out.directory.empty() && out.directory != ".") {
    std::filesystem::create_directories(out.directory);
  }
}

double state_visibility(const cfi::SpectralAmplitude1D& state,
                        double delta_omega) {
  return cfi::cfi_visibility_cw(cfi::jsa_to_jta_cw(state), delta_omega);
}

std::vector<double> abs2_of(const std::vector<cfi::cplx>& values) {
  std::vector<double> out(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) out[k] = std::norm(values[k]);
  return out;
}

// ---------------------------------------------------------------- visibility

struct VisibilityArgs {
  std::string config;
  bool export_state = false;
};

int run_visibility(const VisibilityArgs& args) {
  const cfi::config::RunConfig cfg = load_config_checked(args.config);
  const cfi::SpectralAmplitude1D state = build_state_checked(cfg);
  const cfi::CfiConfig core = cfi::config::to_cfi_config(cfg.cfi);

  const double v = state_visibility(state, core.delta_omega);
  std::printf("V = %.3f\n", v);

  if (args.export_state) {
    ensure_output_dir(cfg.output);
    const cfi::TemporalAmplitude1D psi = cfi::jsa_to_jta_cw(state);
    const auto path = [&](const char* suffix) {
      return cfi::config::output_path(cfg.output, suffix);
    };
    cfi::io::write_csv(state, path("_state_spectral.csv"));
    cfi::io::write_csv(psi, path("_state_temporal.csv"));
    cfi::io::write_density_csv(state.grid(), abs2_of(state.values()),
                               path("_jsi.csv"));
    cfi::io::write_density_csv(psi.grid(), abs2_of(psi.values()),
                               path("_jti.csv"));
    std::printf("wrote %s\n", path("_state_spectral.csv").c_str());
    std::printf("wrote %s\n", path("_state_temporal.csv").c_str());
    std::printf("wrote %s\n", path("_jsi.csv").c_str());
    std::printf("wrote %s\n", path("_jti.csv").c_str());
  }
  return 0;
}

// ----------------------------------------------------------------- sweep-phi

struct SweepArgs {
  std::string config;
  std::size_t points = 5;
};

int run_sweep_phi(const SweepArgs& args) {
  cfi::config::RunConfig cfg = load_config_checked(args.config);
  if (cfg.state.kind != cfi::config::StateKind::flat_top) {
    throw std::invalid_argument(
        "sweep-phi varies the flat_top phase parameter; the configured "
        "state kind has no phase to sweep");
  }
  if (args.points < 2) {
    throw std::invalid_argument("sweep-phi needs at least 2 points");
  }
  const cfi::CfiConfig core = cfi::config::to_cfi_config(cfg.cfi);

  cfi::PhiSweep sweep;
  for (std::size_t k = 0; k < args.points; ++k) {
    const double phi = kTwoPi * static_cast<double>(k) /
                       static_cast<double>(args.points - 1);
    cfg.state.phi_rad = phi;
    const cfi::SpectralAmplitude1D state = build_state_checked(cfg);
    sweep.phi.push_back(phi);
    sweep.visibility.push_back(state_visibility(state, core.delta_omega));
  }

  ensure_output_dir(cfg.output);
  const std::string path =
      cfi::config::output_path(cfg.output, "_phi_sweep.csv");
  cfi::write_phi_sweep_csv(sweep, path);

  if (args.points <= 20) {
    for (std::size_t k = 0; k < sweep.phi.size(); ++k) {
      std::printf("phi = %-12.6g V = %.6f\n", sweep.phi[k],
                  sweep.visibility[k]);
    }
  }
  std::printf("wrote %s (%zu points)\n", path.c_str(), sweep.phi.size());
  return 0;
}

// ------------------------------------------------------------------ simulate

struct SimulateArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
};

int run_simulate(const SimulateArgs& args) {
  const cfi::config::RunConfig cfg = load_config_checked(args.config);
  std::uint64_t seed = 0;
  if (args.seed) {
    seed = *args.seed;
  } else if (cfg.simulation.seed) {
    seed = *cfg.simulation.seed;
  } else {
    throw std::invalid_argument(
        "simulate needs a seed: pass --seed or set [simulation] seed");
  }

  const cfi::SpectralAmplitude1D state = build_state_checked(cfg);
  const cfi::CfiConfig core = cfi::config::to_cfi_config(cfg.cfi);
  const cfi::sim::SimOptions opts =
      cfi::config::to_sim_options(cfg.simulation);
  const cfi::sim::ShifterModel shifter =
      cfi::config::to_shifter(cfg.simulation);
  const cfi::sim::DriftModel drift = cfi::config::to_drift(cfg.simulation);
  const cfi::sim::DetectorModel& det = cfg.detector;
  const double pair_rate = cfg.simulation.pair_rate_hz;
  const double slice = cfg.simulation.duration_s;

  const double v_eff = cfi::sim::effective_visibility(state, core, opts);
  const cfi::sim::ExpectedRates rates =
      cfi::sim::expected_rates(state, core, det, pair_rate, opts);
  std::printf("effective V = %.3f\n", v_eff);
  std::printf(
      "expected rates: central %.3g cps, side %.3g cps each, "
      "singles %.3g / %.3g cps\n",
      rates.central_peak, rates.side_peak_each, rates.singles_s,
      rates.singles_i);

  cfi::sim::FringeScan scan;
  if (cfg.simulation.scan == cfi::config::ScanKind::drift) {
    scan = cfi::sim::simulate_drift_scan(state, core, det, drift, pair_rate,
                                         slice, cfg.simulation.bins, seed,
                                         opts);
  } else {
    scan = cfi::sim::simulate_pzt_scan(state, core, det, pair_rate, slice,
                                       cfg.simulation.max_points, seed, opts);
  }

  // The tag stream draws from its own sub-seed so its randomness is
  // independent of the scan's.
  const cfi::sim::TimeTagStream stream = cfi::sim::simulate_timetags(
      state, core, det, shifter, drift, pair_rate, slice,
      cfi::derive_seed(seed, 0x74616773), opts);

  ensure_output_dir(cfg.output);
  const std::string scan_path =
      cfi::config::output_path(cfg.output, "_scan.csv");
  const std::string tags_path =
      cfi::config::output_path(cfg.output, "_tags.bin");
  cfi::io::write_fringe_scan_csv(scan, scan_path);
  cfi::io::write_timetags_binary(stream, tags_path);

  std::printf("wrote %s (%zu points)\n", scan_path.c_str(),
              scan.points.size());
  std::printf("wrote %s (%zu tags over %.6g s)\n", tags_path.c_str(),
              stream.tags.size(), stream.duration);
  return 0;
}

// ------------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::string input;
  double window = 3e-9;
  double bin_width = 0.0;  // 0: use the stream tick
  double tick = 128e-12;   // for CSV tag files, which carry no tick
  double jitter = 120e-12;
  double peak_sep = 0.0;  // 0: derive from the default instrument numbers
  std::string out_dir = ".";
  std::string prefix = "cfi";
  bool svg = false;
};

enum class InputKind { tag_binary, tag_csv, scan_csv };

InputKind sniff_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");
  char magic[8] = {};
  in.read(magic, sizeof magic);
  if (in.gcount() == 8 && std::string(magic, 8) == "CFITAG01") {
    return InputKind::tag_binary;
  }
  in.clear();
  in.seekg(0);
  std::string first;
  std::getline(in, first);
  if (!first.empty() && first.back() == '\r') first.pop_back();
  if (first == "channel,tick") return InputKind::tag_csv;
  if (first == "phi_t_rad,coincidences,integration_s") {
    return InputKind::scan_csv;
  }
  throw std::runtime_error(path +
                           ": unrecognized input (expected a time-tag file "
                           "or a fringe-scan CSV)");
}

int analyze_stream(const cfi::sim::TimeTagStream& stream,
                   const AnalyzeArgs& args) {
  const cfi::config::OutputSection out{args.out_dir, args.prefix};
  ensure_output_dir(out);
  const auto path = [&](const char* suffix) {
    return cfi::config::output_path(out, suffix);
  };

  const double bin_width = args.bin_width > 0.0 ? args.bin_width : stream.tick;
  const cfi::analysis::CoincidenceHistogram hist =
      cfi::analysis::build_histogram(stream, args.window, bin_width);

  // Default peak separation and detuning calibration from the default
  // instrument parameters (the same defaults a config file starts from).
  const cfi::CfiConfig core =
      cfi::config::to_cfi_config(cfi::config::CfiSection{});
  const double sep =
      args.peak_sep > 0.0 ? args.peak_sep : core.beta2 * core.delta_omega;

  const cfi::analysis::PeakSet peaks = cfi::analysis::find_peaks(hist, sep);

  cfi::analysis::write_histogram_csv(hist, path("_hist.csv"));
  cfi::analysis::write_peaks_csv(peaks, path("_peaks.csv"));

  if (stream.tags.empty()) {
    std::printf("warning: empty stream; reports are empty\n");
  }
  std::printf("%llu tags -> %llu coincidences in +/-%.3g ns\n",
              static_cast<unsigned long long>(stream.tags.size()),
              static_cast<unsigned long long>(hist.total()),
              args.window * 1e9);
  const double jitter =
      cfi::analysis::combined_timing_jitter(args.jitter, stream.tick);
  for (const cfi::analysis::Peak& p : peaks) {
    std::printf("peak at %+.4f ns: area %.1f, rms %.1f ps", p.center * 1e9,
                p.area, p.rms_width * 1e12);
    if (std::abs(p.center) > bin_width / 2.0) {
      const cfi::analysis::FrequencyMapping m =
          cfi::analysis::map_time_to_frequency(p.center, core.beta2, jitter);
      std::printf(" -> detuning %+.3f GHz (resolution %.2f GHz)",
                  m.detuning / kTwoPi / 1e9, m.resolution / kTwoPi / 1e9);
    }
    std::printf("\n");
  }
  std::printf("wrote %s\n", path("_hist.csv").c_str());
  std::printf("wrote %s\n", path("_peaks.csv").c_str());

  if (args.svg) {
    cfi::svg::write_histogram_svg(hist, path("_hist.svg"));
    std::printf("wrote %s\n", path("_hist.svg").c_str());
  }
  return 0;
}

int analyze_scan(const cfi::sim::FringeScan& scan, const AnalyzeArgs& args) {
  const cfi::config::OutputSection out{args.out_dir, args.prefix};
  ensure_output_dir(out);
  const auto path = [&](const char* suffix) {
    return cfi::config::output_path(out, suffix);
  };

  const cfi::analysis::FringeFit fit = cfi::analysis::fit_fringe(scan);
  const cfi::analysis::VisibilityEstimate minmax =
      cfi::analysis::scan_visibility_minmax(scan);

  cfi::analysis::write_fit_report_csv(fit, path("_fit.csv"));
  cfi::analysis::write_fit_report_rows(
      {{"visibility_fit", fit.visibility.v, fit.visibility.sigma_v},
       {"visibility_minmax", minmax.v, minmax.sigma_v}},
      path("_visibility.csv"));

  std::printf("%zu scan points, mean rate %.6g cps\n", scan.points.size(),
              fit.rate);
  std::printf("V = %.3f +/- %.3f (fit)\n", fit.visibility.v,
              fit.visibility.sigma_v);
  std::printf("V = %.3f +/- %.3f (min/max)\n", minmax.v, minmax.sigma_v);
  std::printf("phase offset = %.4f rad\n", fit.phase_offset);
  std::printf("wrote %s\n", path("_fit.csv").c_str());
  std::printf("wrote %s\n", path("_visibility.csv").c_str());

  if (args.svg) {
    cfi::svg::write_fringe_svg(scan, &fit, path("_fringe.svg"));
    std::printf("wrote %s\n", path("_fringe.svg").c_str());
  }
  return 0;
}

int run_analyze(const AnalyzeArgs& args) {
  switch (sniff_input(args.input)) {
    case InputKind::tag_binary:
      return analyze_stream(cfi::io::read_timetags_binary(args.input), args);
    case InputKind::tag_csv:
      return analyze_stream(cfi::io::read_timetags_csv(args.input, args.tick),
                            args);
    case InputKind::scan_csv:
      return analyze_scan(cfi::io::read_fringe_scan_csv(args.input), args);
  }
  return 2;  // unreachable
}

// ------------------------------------------------------------------ retrieve

struct RetrieveArgs {
  std::string jsi;
  std::string jti;
  std::size_t max_iter = 2000;
  double tol = 1e-4;
  std::uint64_t seed = 1;
  std::size_t restarts = 8;
  double delta_omega_hz = 15.65e9;
  std::string out_dir = ".";
  std::string prefix = "cfi";
};

std::vector<cfi::cplx> sqrt_density(const std::vector<double>& density,
                                    const std::string& path) {
  std::vector<cfi::cplx> mag(density.size());
  for (std::size_t k = 0; k < density.size(); ++k) {
    if (density[k] < 0.0 || !std::isfinite(density[k])) {
      throw std::invalid_argument(path +
                                  ": densities must be finite and >= 0");
    }
    mag[k] = std::sqrt(density[k]);
  }
  return mag;
}

int run_retrieve(const RetrieveArgs& args) {
  auto [fgrid, jsi_density] = cfi::io::read_spectral_density_csv(args.jsi);
  auto [tgrid, jti_density] = cfi::io::read_temporal_density_csv(args.jti);
  const cfi::SpectralAmplitude1D jsi_mag = cfi::SpectralAmplitude1D::normalized(
      fgrid, sqrt_density(jsi_density, args.jsi));
  const cfi::TemporalAmplitude1D jti_mag = cfi::TemporalAmplitude1D::normalized(
      tgrid, sqrt_density(jti_density, args.jti));

  cfi::retrieval::RetrievalOptions opts;
  opts.max_restarts = args.restarts;
  opts.seed = args.seed;
  const cfi::retrieval::RetrievalResult raw = cfi::retrieval::gerchberg_saxton(
      jsi_mag, jti_mag, args.max_iter, args.tol, opts);
  const cfi::retrieval::RetrievalResult result =
      cfi::retrieval::canonicalize(raw, jsi_mag);

  const cfi::config::OutputSection out{args.out_dir, args.prefix};
  ensure_output_dir(out);
  const std::string path = cfi::config::output_path(out, "_phase.csv");
  cfi::retrieval::write_phase_csv(fgrid, result, path);

  std::size_t on_support = 0;
  for (bool s : result.support) on_support += s ? 1 : 0;
  std::printf("%s after %zu iterations, residual %.3g\n",
              result.converged ? "converged" : "stopped", result.iterations,
              result.magnitude_residual);
  std::printf("support: %zu of %zu bins\n", on_support, result.support.size());

  const cfi::SpectralAmplitude1D retrieved =
      cfi::retrieval::apply_phase(jsi_mag, result.phase);
  const double v = state_visibility(retrieved, kTwoPi * args.delta_omega_hz);
  std::printf("V = %.3f\n", v);
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

// ------------------------------------------------------------------ selftest

struct SelfTest {
  int failures = 0;

  void check(bool ok, const char* name, const std::string& detail = "") {
    if (ok) {
      std::printf("ok   %s\n", name);
    } else {
      ++failures;
      std::printf("FAIL %s%s%s\n", name, detail.empty() ? "" : ": ",
                  detail.c_str());
    }
  }
};

int run_selftest() {
  SelfTest t;
  std::printf("kernels: %s\n", cfi::kernels::active().name);

  {
    // All registered kernel sets agree with the scalar reference.
    std::vector<double> x(1024);
    std::vector<double> y(1024);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = std::sin(0.1 * static_cast<double>(i)) + 0.25;
      y[i] = std::cos(0.37 * static_cast<double>(i)) - 0.125;
    }
    const cfi::kernels::Ops& ref = cfi::kernels::scalar_ops();
    bool ok = true;
    std::string detail;
    for (const cfi::kernels::Ops* ops : cfi::kernels::available()) {
      const double ds = std::abs(ops->sum(x.data(), x.size()) -
                                 ref.sum(x.data(), x.size()));
      const double dd = std::abs(ops->dot(x.data(), y.data(), x.size()) -
                                 ref.dot(x.data(), y.data(), x.size()));
      const double dc =
          std::abs(ops->cos_weighted_sum(x.data(), x.size(), 0.3, 0.01) -
                   ref.cos_weighted_sum(x.data(), x.size(), 0.3, 0.01));
      if (ds > 1e-9 || dd > 1e-9 || dc > 1e-9) {
        ok = false;
        detail = std::string(ops->name) + " disagrees with scalar";
      }
    }
    t.check(ok, "kernel backends agree", detail);
  }

  const cfi::FrequencyGrid grid(4096, kTwoPi * 640e9 / 4096.0, 0.0);
  const double delta_omega = kTwoPi * 15.65e9;
  const cfi::FlatTopPhaseParams params{kTwoPi * 160e9, delta_omega / 2.0,
                                       0.0};

  {
    // Transform round trip on the flat-top state.
    const cfi::SpectralAmplitude1D state =
        cfi::flat_top_jsa(params, grid, delta_omega);
    const cfi::SpectralAmplitude1D back =
        cfi::jta_to_jsa_cw(cfi::jsa_to_jta_cw(state), &grid);
    double err = 0.0;
    for (std::size_t k = 0; k < grid.n; ++k) {
      err += std::norm(back.values()[k] - state.values()[k]) * grid.d_omega;
    }
    t.check(std::sqrt(err) < 1e-10, "transform round trip",
            "L2 error " + std::to_string(std::sqrt(err)));
  }

  {
    // Flat-top fringe visibility against its closed form.
    const cfi::SpectralAmplitude1D state =
        cfi::flat_top_jsa(params, grid, delta_omega);
    const double v = state_visibility(state, delta_omega);
    const double expected =
        (2.0 * params.omega_max - delta_omega) / (2.0 * params.omega_max);
    // The hard band edges leave O(1e-5) discretization error at n = 4096.
    t.check(std::abs(v - expected) < 2e-4, "flat-top visibility",
            "got " + std::to_string(v) + ", want " + std::to_string(expected));
  }

  {
    // Gaussian fringe visibility against its closed form.
    const double sigma = 12e-12;
    const cfi::FrequencyGrid ggrid(2048, kTwoPi * 160e9 / 2048.0, 0.0);
    const cfi::SpectralAmplitude1D state = cfi::gaussian_cw_jsa(sigma, ggrid);
    const double v = state_visibility(state, delta_omega);
    const double expected =
        cfi::gaussian_visibility_closed_form(sigma, delta_omega);
    t.check(std::abs(v - expected) < 1e-6, "gaussian visibility",
            "got " + std::to_string(v) + ", want " + std::to_string(expected));
  }

  {
    // Exact fringe-fit recovery from integer-exact counts.
    cfi::sim::FringeScan scan;
    const double rate = 10000.0;
    const double v_true = 0.5;
    for (int k = 0; k <= 4; ++k) {
      const double phi = kTwoPi * k / 4.0;
      const double lambda = rate * (1.0 + v_true * std::cos(phi));
      scan.points.push_back(
          {phi, static_cast<std::uint64_t>(std::llround(lambda)), 1.0});
    }
    const cfi::analysis::FringeFit fit = cfi::analysis::fit_fringe(scan);
    const bool ok = std::abs(fit.rate - rate) < 1e-6 &&
                    std::abs(fit.visibility.v - v_true) < 1e-9 &&
                    std::abs(fit.phase_offset) < 1e-9;
    t.check(ok, "fringe fit recovery",
            "rate " + std::to_string(fit.rate) + ", V " +
                std::to_string(fit.visibility.v));
  }

  {
    // Nearest-idler pairing on a hand-built four-tag stream.
    cfi::sim::TimeTagStream stream;
    stream.tick = 128e-12;
    stream.duration = 1.0;
    stream.tags = {{1, 99}, {0, 100}, {1, 201}, {0, 200}};
    std::sort(stream.tags.begin(), stream.tags.end(),
              [](const cfi::sim::TimeTag& a, const cfi::sim::TimeTag& b) {
                return a.ticks != b.ticks ? a.ticks < b.ticks
                                          : a.channel < b.channel;
              });
    const cfi::analysis::CoincidenceHistogram hist =
        cfi::analysis::build_histogram(stream, 10 * stream.tick, stream.tick);
    const std::size_t h = hist.center_bin();
    const bool ok = hist.total() == 2 && hist.counts[h + 1] == 1 &&
                    hist.counts[h - 1] == 1;
    t.check(ok, "coincidence pairing",
            "total " + std::to_string(hist.total()));
  }

  std::printf("selftest: %d checks failed\n", t.failures);
  return t.failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Conjugate-Franson interferometry: fringe visibility, event-level "
      "simulation, coincidence analysis, and spectral-phase retrieval"};
  app.require_subcommand(1);

  VisibilityArgs vis;
  CLI::App* cmd_vis = app.add_subcommand(
      "visibility", "Fringe visibility of the configured state");
  cmd_vis->add_option("-c,--config", vis.config, "run configuration file")
      ->required();
  cmd_vis->add_flag("--export-state", vis.export_state,
                    "also write state amplitude and density CSVs");

  SweepArgs sweep;
  CLI::App* cmd_sweep = app.add_subcommand(
      "sweep-phi", "Visibility versus flat-top phase, 0 to 2 pi");
  cmd_sweep->add_option("-c,--config", sweep.config, "run configuration file")
      ->required();
  cmd_sweep->add_option("-n,--points", sweep.points,
                        "sweep points, endpoints included (default 5)");

  SimulateArgs sim;
  CLI::App* cmd_sim = app.add_subcommand(
      "simulate", "Simulate a fringe scan and a time-tag stream");
  cmd_sim->add_option("-c,--config", sim.config, "run configuration file")
      ->required();
  cmd_sim->add_option("-s,--seed", sim.seed,
                      "random seed (overrides [simulation] seed)");

  AnalyzeArgs ana;
  CLI::App* cmd_ana = app.add_subcommand(
      "analyze", "Analyze a time-tag file or a fringe-scan CSV");
  cmd_ana->add_option("input", ana.input, "time-tag file or fringe-scan CSV")
      ->required();
  cmd_ana->add_option("--window", ana.window,
                      "histogram half-window in seconds (default 3e-9)");
  cmd_ana->add_option("--bin-width", ana.bin_width,
                      "histogram bin width in seconds (default: stream tick)");
  cmd_ana->add_option("--tick", ana.tick,
                      "tick length for CSV tag files (default 128e-12)");
  cmd_ana->add_option("--jitter", ana.jitter,
                      "per-detector timing jitter sigma (default 120e-12)");
  cmd_ana->add_option("--peak-sep", ana.peak_sep,
                      "expected peak separation in seconds "
                      "(default beta2 * delta_omega)");
  cmd_ana->add_option("--out-dir", ana.out_dir, "output directory");
  cmd_ana->add_option("--prefix", ana.prefix, "output file prefix");
  cmd_ana->add_flag("--svg", ana.svg, "also write SVG plots");

  RetrieveArgs ret;
  CLI::App* cmd_ret = app.add_subcommand(
      "retrieve", "Recover spectral phase from JSI and JTI CSVs");
  cmd_ret->add_option("--jsi", ret.jsi, "spectral density CSV")->required();
  cmd_ret->add_option("--jti", ret.jti, "temporal density CSV")->required();
  cmd_ret->add_option("--max-iter", ret.max_iter,
                      "iteration cap per attempt (default 2000)");
  cmd_ret->add_option("--tol", ret.tol,
                      "magnitude residual target (default 1e-4)");
  cmd_ret->add_option("-s,--seed", ret.seed,
                      "seed for restart phases (default 1)");
  cmd_ret->add_option("--restarts", ret.restarts,
                      "parallel restarts on stagnation (default 8)");
  cmd_ret->add_option("--delta-omega-hz", ret.delta_omega_hz,
                      "detuning used for the reported visibility "
                      "(default 15.65e9)");
  cmd_ret->add_option("--out-dir", ret.out_dir, "output directory");
  cmd_ret->add_option("--prefix", ret.prefix, "output file prefix");

  CLI::App* cmd_self =
      app.add_subcommand("selftest", "Quick internal consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cmd_vis->parsed()) return run_visibility(vis);
    if (cmd_sweep->parsed()) return run_sweep_phi(sweep);
    if (cmd_sim->parsed()) return run_simulate(sim);
    if (cmd_ana->parsed()) return run_analyze(ana);
    if (cmd_ret->parsed()) return run_retrieve(ret);
    if (cmd_self->parsed()) return run_selftest();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
