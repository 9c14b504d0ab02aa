#include "szego2d/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <unordered_map>

#include "szego2d/kernels.hpp"

namespace szego2d {

std::int64_t fourier_map::max_abs_freq() const {
  std::int64_t m = 0;
  for (const auto& [k, c] : entries) m = std::max({m, std::llabs(k.u), std::llabs(k.v)});
  return m;
}

double fourier_map::hermitian_defect() const {
  double d = 0.0;
  for (const auto& [k, c] : entries) d = std::max(d, std::abs(value(-k) - std::conj(c)));
  return d;
}

double fourier_map::l2_mass() const {
  double s = 0.0;
  for (const auto& [k, c] : entries) s += std::norm(c);
  return std::sqrt(s);
}

fourier_map fourier_map::conj_reflect() const {
  fourier_map out;
  out.hermitian_flag = hermitian_flag;
  for (const auto& [k, c] : entries) out.entries[-k] = std::conj(c);
  return out;
}

fourier_map fourier_map::shifted(freq q) const {
  fourier_map out;
  out.hermitian_flag = false;
  for (const auto& [k, c] : entries) out.entries[k + q] = c;
  return out;
}

fourier_map fourier_map::pruned(double abs_tol) const {
  fourier_map out;
  out.hermitian_flag = hermitian_flag;
  for (const auto& [k, c] : entries)
    if (std::abs(c) > abs_tol) out.entries[k] = c;
  return out;
}

fourier_map fourier_map::boxed(std::int64_t m) const {
  fourier_map out;
  out.hermitian_flag = hermitian_flag;
  for (const auto& [k, c] : entries)
    if (std::llabs(k.u) <= m && std::llabs(k.v) <= m) out.entries[k] = c;
  return out;
}

double grid_function::min_real() const {
  double m = values.empty() ? 0.0 : values[0].real();
  for (const cplx& v : values) m = std::min(m, v.real());
  return m;
}

double grid_function::max_abs_imag() const {
  double m = 0.0;
  for (const cplx& v : values) m = std::max(m, std::abs(v.imag()));
  return m;
}

namespace fft {
namespace {

struct plan_pair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

plan_pair& plans_for(int n) {
  static std::unordered_map<int, plan_pair> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<cplx> buf(static_cast<std::size_t>(n) * n);
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  plan_pair pp;
  // FFTW_ESTIMATE keeps planning deterministic run to run; FFTW_UNALIGNED
  // lets the plans execute on any caller buffer.
  pp.fwd = fftw_plan_dft_2d(n, n, p, p, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  pp.bwd = fftw_plan_dft_2d(n, n, p, p, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  return cache.emplace(n, pp).first->second;
}

}  // namespace

void forward(const grid_function& g, std::vector<cplx>& spectrum) {
  spectrum.assign(g.values.begin(), g.values.end());
  auto* p = reinterpret_cast<fftw_complex*>(spectrum.data());
  fftw_execute_dft(plans_for(g.n).fwd, p, p);
  const double scale = 1.0 / (static_cast<double>(g.n) * g.n);
  kernels::cscale(scale, spectrum.data(), spectrum.data(), spectrum.size());
}

void backward(const std::vector<cplx>& spectrum, grid_function& g) {
  g.values.assign(spectrum.begin(), spectrum.end());
  auto* p = reinterpret_cast<fftw_complex*>(g.values.data());
  fftw_execute_dft(plans_for(g.n).bwd, p, p);
}

}  // namespace fft

grid_function synthesize(const fourier_map& coeffs, int n) {
  const std::int64_t mf = coeffs.max_abs_freq();
  if (n <= 2 * mf)
    fail(errc::aliased_grid, "grid size " + std::to_string(n) +
                                 " cannot hold frequencies up to " + std::to_string(mf));
  std::vector<cplx> spec(static_cast<std::size_t>(n) * n, cplx(0.0, 0.0));
  for (const auto& [k, c] : coeffs.entries)
    spec[static_cast<std::size_t>(fft::wrap(k.u, n)) * n + fft::wrap(k.v, n)] += c;
  grid_function g(n);
  fft::backward(spec, g);
  return g;
}

fourier_map analyze(const grid_function& g, std::int64_t m) {
  if (2 * m >= g.n)
    fail(errc::invalid_config, "analysis box must satisfy m < n/2");
  std::vector<cplx> spec;
  fft::forward(g, spec);
  fourier_map out;
  out.hermitian_flag = g.max_abs_imag() <= 1e-12;
  for (std::int64_t u = -m; u <= m; ++u)
    for (std::int64_t v = -m; v <= m; ++v) {
      const cplx c = spec[static_cast<std::size_t>(fft::wrap(u, g.n)) * g.n + fft::wrap(v, g.n)];
      if (c != cplx(0.0, 0.0)) out.entries[{u, v}] = c;
    }
  return out;
}

namespace {

void require_positive(const grid_function& g, double eps_pos, const char* who) {
  if (g.max_abs_imag() > 1e-12)
    fail(errc::non_positive_symbol, std::string(who) + ": symbol grid is not real");
  if (!(g.min_real() > eps_pos))
    fail(errc::non_positive_symbol,
         std::string(who) + ": symbol grid min " + std::to_string(g.min_real()) +
             " is not above " + std::to_string(eps_pos));
}

}  // namespace

grid_function pointwise_log(const grid_function& g, double eps_pos) {
  require_positive(g, eps_pos, "pointwise_log");
  grid_function out(g.n);
  for (std::size_t i = 0; i < g.values.size(); ++i)
    out.values[i] = cplx(std::log(g.values[i].real()), 0.0);
  return out;
}

grid_function pointwise_reciprocal(const grid_function& g, double eps_pos) {
  require_positive(g, eps_pos, "pointwise_reciprocal");
  grid_function out(g.n);
  for (std::size_t i = 0; i < g.values.size(); ++i)
    out.values[i] = cplx(1.0 / g.values[i].real(), 0.0);
  return out;
}

namespace {

double weighted_norm(const fourier_map& m, double wu, double wv, bool radial) {
  if (!m.hermitian_flag) fail(errc::invalid_config, "norms are defined for hermitian maps");
  std::vector<double> w;
  std::vector<cplx> c;
  w.reserve(m.size());
  c.reserve(m.size());
  for (const auto& [k, val] : m.entries) {
    const double du = static_cast<double>(k.u), dv = static_cast<double>(k.v);
    w.push_back(radial ? wu * std::sqrt(du * du + dv * dv)
                       : wu * std::abs(du) + wv * std::abs(dv));
    c.push_back(val);
  }
  return std::sqrt(kernels::wsum_abs2(w.data(), c.data(), c.size()));
}

}  // namespace

double k_norm(const fourier_map& m, const triangle_instance& t) {
  return weighted_norm(m, t.S1, t.S2, false);
}

double n_norm(const fourier_map& m) {
  return weighted_norm(m, n_norm_weight_constant, 0.0, true);
}

double mean(const fourier_map& m) {
  if (!m.hermitian_flag) fail(errc::invalid_config, "mean is defined for hermitian maps");
  const cplx c = m.value({0, 0});
  if (std::abs(c.imag()) > 1e-12)
    fail(errc::non_real_mean, "imaginary part " + std::to_string(c.imag()));
  return c.real();
}

}  // namespace szego2d
