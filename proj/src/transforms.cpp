#include "cfi/transforms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cfi/kernels.hpp"

namespace cfi {
namespace {

constexpr double kRoot2Pi = 2.5066282746310005;

void axis_transform(cplx* data, std::size_t n, const double* roots, int dir) {
  const auto& K = kernels::active();
  K.alternate_sign(kernels::flat(data), n);
  K.fft(kernels::flat(data), n, roots, dir);
  K.alternate_sign(kernels::flat(data), n);
}

/// v[k] *= e^{i (phase0 + k dphase)}
void modulate(cplx* v, std::size_t n, double phase0, double dphase) {
  if (phase0 == 0.0 && dphase == 0.0) return;
  for (std::size_t k = 0; k < n; ++k) {
    const double phase = phase0 + static_cast<double>(k) * dphase;
    v[k] *= cplx{std::cos(phase), std::sin(phase)};
  }
}

void check_dual(std::size_t n_in, double step_in, std::size_t n_out,
                double step_out, const char* what) {
  if (n_in != n_out)
    throw std::invalid_argument(std::string(what) +
                                ": target grid size does not match input");
  const double product =
      step_in * step_out * static_cast<double>(n_in) / (2.0 * std::numbers::pi);
  if (std::abs(product - 1.0) > 1e-9)
    throw std::invalid_argument(std::string(what) + ": grid duality mismatch");
}

/// Shared 1-D core. sign < 0 is the e^{-i omega t} direction.
std::vector<cplx> transform_1d(const std::vector<cplx>& in, std::size_t n,
                               double step_in, double c_in, double step_out,
                               double c_out, int sign) {
  std::vector<cplx> out = in;
  const double half = static_cast<double>(n) / 2.0;
  // e^{sign * i omega t} factors split around the grid centers:
  // pre-phase e^{sign i omega'_k c_out}, post-phase e^{sign i c_in t'_j},
  // constant e^{sign i c_in c_out}
  modulate(out.data(), n, static_cast<double>(sign) * (-half * step_in) * c_out,
           static_cast<double>(sign) * step_in * c_out);
  const auto roots = kernels::fft_roots(n);
  axis_transform(out.data(), n, kernels::flat(roots.data()), sign);
  modulate(out.data(), n,
           static_cast<double>(sign) * c_in * (-half * step_out + c_out),
           static_cast<double>(sign) * c_in * step_out);
  kernels::active().scale(kernels::flat(out.data()), 2 * n, step_in / kRoot2Pi);
  return out;
}

void carrier_phase(std::vector<cplx>& v, const TimeGrid& s, const TimeGrid& i,
                   const CarrierInfo& carrier, int sign) {
  for (std::size_t a = 0; a < s.n; ++a) {
    const double phase_s = static_cast<double>(sign) * carrier.omega_s0 * s.point(a);
    const cplx fs{std::cos(phase_s), std::sin(phase_s)};
    cplx* row = v.data() + a * i.n;
    for (std::size_t b = 0; b < i.n; ++b) {
      const double phase_i = static_cast<double>(sign) * carrier.omega_i0 * i.point(b);
      row[b] *= fs * cplx{std::cos(phase_i), std::sin(phase_i)};
    }
  }
}

}  // namespace

TemporalAmplitude1D jsa_to_jta_cw(const SpectralAmplitude1D& jsa,
                                  const TimeGrid* target) {
  const FrequencyGrid& f = jsa.grid();
  TimeGrid t = target ? *target : dual_time_grid(f);
  if (target) check_dual(f.n, f.d_omega, target->n, target->d_t, "jsa_to_jta_cw");
  auto out = transform_1d(jsa.values(), f.n, f.d_omega, f.center, t.d_t,
                          t.center, -1);
  return TemporalAmplitude1D::normalized(t, std::move(out));
}

SpectralAmplitude1D jta_to_jsa_cw(const TemporalAmplitude1D& jta,
                                  const FrequencyGrid* target) {
  const TimeGrid& t = jta.grid();
  FrequencyGrid f = target ? *target : dual_frequency_grid(t);
  if (target)
    check_dual(t.n, t.d_t, target->n, target->d_omega, "jta_to_jsa_cw");
  auto out = transform_1d(jta.values(), t.n, t.d_t, t.center, f.d_omega,
                          f.center, +1);
  return SpectralAmplitude1D::normalized(f, std::move(out));
}

JointTemporalAmplitude2D jsa_to_jta_2d(const JointSpectralAmplitude2D& jsa,
                                       double omega_s0, double omega_i0,
                                       Carrier carrier) {
  const FrequencyGrid& fs = jsa.signal();
  const FrequencyGrid& fi = jsa.idler();
  const TimeGrid ts = dual_time_grid(fs);
  const TimeGrid ti = dual_time_grid(fi);
  const std::size_t ns = fs.n, ni = fi.n;

  std::vector<cplx> v = jsa.values();
  // idler axis, e^{+i omega_I t_I}, rows are contiguous
  {
    const auto roots = kernels::fft_roots(ni);
    for (std::size_t s = 0; s < ns; ++s) {
      cplx* row = v.data() + s * ni;
      modulate(row, ni, (-static_cast<double>(ni) / 2.0) * fi.d_omega * ti.center,
               fi.d_omega * ti.center);
      axis_transform(row, ni, kernels::flat(roots.data()), +1);
      modulate(row, ni,
               fi.center * (-static_cast<double>(ni) / 2.0 * ti.d_t + ti.center),
               fi.center * ti.d_t);
    }
  }
  // signal axis, e^{-i omega_S t_S}, gathered through a column scratch
  {
    const auto roots = kernels::fft_roots(ns);
    std::vector<cplx> col(ns);
    for (std::size_t i = 0; i < ni; ++i) {
      for (std::size_t s = 0; s < ns; ++s) col[s] = v[s * ni + i];
      modulate(col.data(), ns,
               -(-static_cast<double>(ns) / 2.0) * fs.d_omega * ts.center,
               -fs.d_omega * ts.center);
      axis_transform(col.data(), ns, kernels::flat(roots.data()), -1);
      modulate(col.data(), ns,
               -fs.center * (-static_cast<double>(ns) / 2.0 * ts.d_t + ts.center),
               -fs.center * ts.d_t);
      for (std::size_t s = 0; s < ns; ++s) v[s * ni + i] = col[s];
    }
  }
  kernels::active().scale(kernels::flat(v.data()), 2 * v.size(),
                          fs.d_omega * fi.d_omega / (2.0 * std::numbers::pi));

  CarrierInfo info{omega_s0, omega_i0, carrier == Carrier::apply};
  if (info.applied) carrier_phase(v, ts, ti, info, -1);
  return JointTemporalAmplitude2D::normalized(ts, ti, std::move(v), info);
}

JointSpectralAmplitude2D jta_to_jsa_2d(const JointTemporalAmplitude2D& jta,
                                       const FrequencyGrid* target_signal,
                                       const FrequencyGrid* target_idler) {
  const TimeGrid& ts = jta.signal();
  const TimeGrid& ti = jta.idler();
  FrequencyGrid fs = target_signal ? *target_signal : dual_frequency_grid(ts);
  FrequencyGrid fi = target_idler ? *target_idler : dual_frequency_grid(ti);
  if (target_signal)
    check_dual(ts.n, ts.d_t, target_signal->n, target_signal->d_omega,
               "jta_to_jsa_2d(signal)");
  if (target_idler)
    check_dual(ti.n, ti.d_t, target_idler->n, target_idler->d_omega,
               "jta_to_jsa_2d(idler)");
  const std::size_t ns = ts.n, ni = ti.n;

  std::vector<cplx> v = jta.values();
  if (jta.carrier().applied) carrier_phase(v, ts, ti, jta.carrier(), +1);
  // idler axis back, e^{-i omega_I t_I}
  {
    const auto roots = kernels::fft_roots(ni);
    for (std::size_t s = 0; s < ns; ++s) {
      cplx* row = v.data() + s * ni;
      modulate(row, ni, -(-static_cast<double>(ni) / 2.0) * ti.d_t * fi.center,
               -ti.d_t * fi.center);
      axis_transform(row, ni, kernels::flat(roots.data()), -1);
      modulate(row, ni,
               -ti.center * (-static_cast<double>(ni) / 2.0 * fi.d_omega + fi.center),
               -ti.center * fi.d_omega);
    }
  }
  // signal axis back, e^{+i omega_S t_S}
  {
    const auto roots = kernels::fft_roots(ns);
    std::vector<cplx> col(ns);
    for (std::size_t i = 0; i < ni; ++i) {
      for (std::size_t s = 0; s < ns; ++s) col[s] = v[s * ni + i];
      modulate(col.data(), ns, (-static_cast<double>(ns) / 2.0) * ts.d_t * fs.center,
               ts.d_t * fs.center);
      axis_transform(col.data(), ns, kernels::flat(roots.data()), +1);
      modulate(col.data(), ns,
               ts.center * (-static_cast<double>(ns) / 2.0 * fs.d_omega + fs.center),
               ts.center * fs.d_omega);
      for (std::size_t s = 0; s < ns; ++s) v[s * ni + i] = col[s];
    }
  }
  kernels::active().scale(kernels::flat(v.data()), 2 * v.size(),
                          ts.d_t * ti.d_t / (2.0 * std::numbers::pi));
  return JointSpectralAmplitude2D::normalized(fs, fi, std::move(v));
}

JointTemporalAmplitude2D with_carrier(const JointTemporalAmplitude2D& jta,
                                      bool applied) {
  if (jta.carrier().applied == applied) return jta;
  std::vector<cplx> v = jta.values();
  carrier_phase(v, jta.signal(), jta.idler(), jta.carrier(), applied ? -1 : +1);
  CarrierInfo info = jta.carrier();
  info.applied = applied;
  return JointTemporalAmplitude2D::normalized(jta.signal(), jta.idler(),
                                              std::move(v), info);
}

}  // namespace cfi
