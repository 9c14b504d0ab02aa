#include "szego2d/hankel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "szego2d/kernels.hpp"

namespace szego2d {
namespace {

int next_smooth(int n) {
  for (int l = n;; ++l) {
    int r = l;
    for (const int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return l;
  }
}

std::vector<cplx> kernel_dft(const fourier_map& kern, int l) {
  grid_function placement(l);
  for (const auto& [k, c] : kern.entries)
    placement.at(fft::wrap(k.u, l), fft::wrap(k.v, l)) += c;
  std::vector<cplx> spec;
  fft::forward(placement, spec);
  const double l2 = static_cast<double>(l) * l;
  kernels::cscale(l2, spec.data(), spec.data(), spec.size());
  return spec;
}

}  // namespace

struct hankel_system::direct_cache {
  std::mutex mu;
  bool built = false;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu;  // of I - N on b2
};

hankel_system build_system(const factorization_result& fact, const triangle_instance& t,
                           std::int64_t m, const build_options& opts) {
  if (fact.path != fact_path::exact || fact.radius_r != 1.0)
    fail(errc::singular_path_unsupported,
         "structured inversion needs an exact-path factorization (radius_r = 1)");
  if (m < t.max_extent())
    fail(errc::box_too_small, "box radius " + std::to_string(m) +
                                  " smaller than the triangle extent " +
                                  std::to_string(t.max_extent()));
  if (fact.coeff_box < m + t.max_extent())
    fail(errc::box_too_small,
         "factorization box " + std::to_string(fact.coeff_box) +
             " cannot feed gamma on box " + std::to_string(m) +
             "; refactorize with box >= " + std::to_string(m + t.max_extent()));

  hankel_system sys;
  sys.tri = t;
  sys.alpha_map = fact.alpha_coeffs;
  sys.beta_map = fact.beta_coeffs;
  sys.solver = opts.solver;
  sys.grid_n = opts.grid_n;
  sys.cache = std::make_shared<hankel_system::direct_cache>();

  // grouped half-space complements from the minimal split at vertex O
  const auto split = minimal_split({t.nu1, t.nu2, t.nu3}, 1);
  const half_space_family hs = t.half_spaces();
  const auto in_group = [&](const std::vector<int>& run, freq p) {
    for (const int side : run)
      if (hs.in_s_minus(side - 1, p)) return true;
    return false;
  };

  sys.box.m = m;
  const int side = sys.box.side();
  sys.box.b1_pos.assign(static_cast<std::size_t>(side) * side, -1);
  sys.box.b2_pos.assign(static_cast<std::size_t>(side) * side, -1);
  for (std::int64_t u = -m; u <= m; ++u)
    for (std::int64_t v = -m; v <= m; ++v) {
      const freq p{u, v};
      if (in_group(split.run1, p)) {
        sys.box.b1_pos[static_cast<std::size_t>(sys.box.flat(p))] =
            static_cast<int>(sys.box.b1.size());
        sys.box.b1.push_back(p);
      }
      if (in_group(split.run2, p)) {
        sys.box.b2_pos[static_cast<std::size_t>(sys.box.flat(p))] =
            static_cast<int>(sys.box.b2.size());
        sys.box.b2.push_back(p);
      }
    }
  sys.box.lattice = enumerate_lattice_points(t);

  // multiplier ratio by grid division on a comfortably aliasing-free grid
  const int ratio_n = next_smooth(static_cast<int>(
      std::max<std::int64_t>({opts.grid_n, 8 * m + 8, 2 * sys.alpha_map.max_abs_freq() + 2})));
  const grid_function a_big = synthesize(sys.alpha_map, ratio_n);
  grid_function ratio_grid(ratio_n);
  for (std::size_t i = 0; i < a_big.values.size(); ++i)
    ratio_grid.values[i] = std::conj(a_big.values[i]);
  kernels::cdiv(ratio_grid.values.data(), a_big.values.data(), ratio_grid.values.data(),
                ratio_grid.values.size());
  sys.phi_ratio = analyze(ratio_grid, 2 * m);
  sys.phi_ratio_inv = sys.phi_ratio.conj_reflect();

  sys.conv_n = next_smooth(static_cast<int>(4 * m + 2));
  sys.kern_ratio_fft = kernel_dft(sys.phi_ratio, sys.conv_n);
  sys.kern_ratio_inv_fft = kernel_dft(sys.phi_ratio_inv, sys.conv_n);

  sys.alpha_grid = synthesize(sys.alpha_map, sys.grid_n);
  sys.alpha_bar_grid = grid_function(sys.grid_n);
  sys.f_grid = grid_function(sys.grid_n);
  for (std::size_t i = 0; i < sys.alpha_grid.values.size(); ++i) {
    sys.alpha_bar_grid.values[i] = std::conj(sys.alpha_grid.values[i]);
    sys.f_grid.values[i] = cplx(std::norm(sys.alpha_grid.values[i]), 0.0);
  }
  return sys;
}

namespace {

const std::vector<freq>& mask_of(const hankel_system& sys, int i) {
  return i == 1 ? sys.box.b1 : sys.box.b2;
}

}  // namespace

std::vector<cplx> apply_exchange(const hankel_system& sys, int i, int j,
                                 const std::vector<cplx>& theta) {
  if (i < 1 || i > 2 || j < 1 || j > 2)
    fail(errc::invalid_config, "exchange indices must be 1 or 2");
  const std::vector<freq>& src = mask_of(sys, j);
  const std::vector<freq>& dst = mask_of(sys, i);
  if (theta.size() != src.size())
    fail(errc::dimension_mismatch, "exchange input length mismatch");
  if (i == j) return theta;

  const std::vector<cplx>& kern = (i == 1) ? sys.kern_ratio_inv_fft : sys.kern_ratio_fft;
  const int l = sys.conv_n;
  grid_function work(l);
  for (std::size_t p = 0; p < src.size(); ++p)
    work.at(fft::wrap(src[p].u, l), fft::wrap(src[p].v, l)) = theta[p];
  std::vector<cplx> spec;
  fft::forward(work, spec);
  kernels::cmul(spec.data(), kern.data(), spec.data(), spec.size());
  fft::backward(spec, work);

  std::vector<cplx> out(dst.size());
  for (std::size_t p = 0; p < dst.size(); ++p)
    out[p] = work.at(fft::wrap(dst[p].u, l), fft::wrap(dst[p].v, l));
  return out;
}

operator_matrix assemble_h(const hankel_system& sys, const assemble_options& opts) {
  const int n1 = static_cast<int>(sys.box.b1.size());
  const int n2 = static_cast<int>(sys.box.b2.size());
  const int n = n1 + n2;
  if (n > opts.max_rows)
    fail(errc::too_large, "assembled H would have " + std::to_string(n) + " rows");

  operator_matrix h;
  h.n = n;
  h.index_map = sys.box.b1;
  h.index_map.insert(h.index_map.end(), sys.box.b2.begin(), sys.box.b2.end());
  h.data.assign(static_cast<std::size_t>(n) * n, cplx(0.0, 0.0));
  for (int i = 0; i < n; ++i) h.at(i, i) = 1.0;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      const freq d = sys.box.b1[static_cast<std::size_t>(i)] -
                     sys.box.b2[static_cast<std::size_t>(j)];
      h.at(i, n1 + j) = sys.phi_ratio_inv.value(d);
      h.at(n1 + j, i) = sys.phi_ratio.value(-d);
    }

  if (opts.verify_psd) {
    Eigen::Map<const Eigen::MatrixXcd> hm(h.data.data(), n, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hm.adjoint() * 0.5 + hm * 0.5,
                                                       Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = std::max(std::abs(es.eigenvalues().maxCoeff()), std::abs(lo));
    if (h.hermitian_defect() > 1e-10)
      fail(errc::not_positive_definite, "assembled H is not hermitian within 1e-10");
    if (lo < -1e-8 * hi)
      fail(errc::not_positive_definite,
           "assembled H has eigenvalue " + std::to_string(lo) + " with norm " + std::to_string(hi));
  }
  return h;
}

gamma_pair gamma_field(const hankel_system& sys, freq q) {
  bool inside = false;
  for (const freq& p : sys.box.lattice)
    if (p == q) {
      inside = true;
      break;
    }
  if (!inside) fail(errc::point_outside_triangle, "gamma is defined for q in the triangle");

  gamma_pair g;
  g.g1.resize(sys.box.b1.size());
  g.g2.resize(sys.box.b2.size());
  // gamma_1 = Pi_1(chi^q / conj(alpha)),  (1/conj(alpha))^(k) = conj(beta(-k))
  for (std::size_t p = 0; p < sys.box.b1.size(); ++p)
    g.g1[p] = std::conj(sys.beta_map.value(q - sys.box.b1[p]));
  // gamma_2 = Pi_2(chi^q / alpha)
  for (std::size_t p = 0; p < sys.box.b2.size(); ++p)
    g.g2[p] = sys.beta_map.value(sys.box.b2[p] - q);
  return g;
}

namespace {

double l2_norm(const std::vector<cplx>& v) {
  return std::sqrt(kernels::sum_abs2(v.data(), v.size()));
}

std::vector<cplx> apply_n_op(const hankel_system& sys, const std::vector<cplx>& theta2) {
  return apply_exchange(sys, 2, 1, apply_exchange(sys, 1, 2, theta2));
}

void build_direct(const hankel_system& sys) {
  auto& cache = *sys.cache;
  std::lock_guard<std::mutex> lock(cache.mu);
  if (cache.built) return;
  const int n2 = static_cast<int>(sys.box.b2.size());
  if (n2 > 4096)
    fail(errc::too_large, "dense fallback would need a " + std::to_string(n2) + "^2 system");
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(n2, n2);
  std::vector<cplx> e(static_cast<std::size_t>(n2), cplx(0.0, 0.0));
  for (int j = 0; j < n2; ++j) {
    e[static_cast<std::size_t>(j)] = 1.0;
    const std::vector<cplx> col = apply_n_op(sys, e);
    for (int i = 0; i < n2; ++i) a(i, j) -= col[static_cast<std::size_t>(i)];
    e[static_cast<std::size_t>(j)] = 0.0;
  }
  cache.lu.compute(a);
  cache.built = true;
}

std::vector<cplx> solve_direct(const hankel_system& sys, const std::vector<cplx>& zeta) {
  build_direct(sys);
  const int n2 = static_cast<int>(zeta.size());
  Eigen::Map<const Eigen::VectorXcd> z(zeta.data(), n2);
  Eigen::VectorXcd x = sys.cache->lu.solve(z);
  return std::vector<cplx>(x.data(), x.data() + n2);
}

}  // namespace

triangle_solution solve_triangle(const hankel_system& sys, freq q) {
  const gamma_pair g = gamma_field(sys, q);
  std::vector<cplx> zeta = apply_exchange(sys, 2, 1, g.g1);
  kernels::cscale(-1.0, zeta.data(), zeta.data(), zeta.size());
  for (std::size_t i = 0; i < zeta.size(); ++i) zeta[i] += g.g2[i];

  triangle_solution sol;
  const double zscale = std::max(1.0, l2_norm(zeta));
  const std::int64_t max_iters =
      sys.solver.max_iters > 0
          ? sys.solver.max_iters
          : 10 * static_cast<std::int64_t>(sys.box.b1.size() + sys.box.b2.size());

  bool converged = false;
  if (sys.solver.mode == solver_mode::neumann) {
    std::vector<cplx> theta = zeta;
    std::vector<cplx> diff(theta.size());
    double prev_inc = std::numeric_limits<double>::infinity();
    int rising = 0;
    for (std::int64_t it = 1; it <= max_iters; ++it) {
      std::vector<cplx> next = apply_n_op(sys, theta);
      for (std::size_t i = 0; i < next.size(); ++i) {
        next[i] += zeta[i];
        diff[i] = next[i] - theta[i];
      }
      const double inc = l2_norm(diff);
      theta.swap(next);
      sol.iterations = static_cast<int>(it);
      sol.residual = inc;
      if (inc <= sys.solver.tol_solve * zscale) {
        converged = true;
        break;
      }
      rising = inc > prev_inc ? rising + 1 : 0;
      prev_inc = inc;
      if (rising >= 3) break;  // geometric growth, Neumann series diverges
    }
    if (converged) sol.theta2 = std::move(theta);
  }

  if (!converged) {
    if (sys.solver.mode == solver_mode::neumann && !sys.solver.allow_fallback)
      fail(errc::solver_diverged,
           "fixed-point residual " + std::to_string(sol.residual) + " after " +
               std::to_string(sol.iterations) + " iterations");
    sol.theta2 = solve_direct(sys, zeta);
    sol.used_fallback = sys.solver.mode == solver_mode::neumann;
    std::vector<cplx> r = apply_n_op(sys, sol.theta2);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = zeta[i] + r[i] - sol.theta2[i];
    sol.residual = l2_norm(r);
  }

  sol.theta1 = apply_exchange(sys, 1, 2, sol.theta2);
  kernels::cscale(-1.0, sol.theta1.data(), sol.theta1.data(), sol.theta1.size());
  for (std::size_t i = 0; i < sol.theta1.size(); ++i) sol.theta1[i] += g.g1[i];
  return sol;
}

namespace {

fourier_map mask_to_map(const std::vector<freq>& mask, const std::vector<cplx>& vals) {
  fourier_map m;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (vals[i] != cplx(0.0, 0.0)) m.entries[mask[i]] = vals[i];
  return m;
}

// chi^q/f - theta1/alpha - theta2/conj(alpha) on the evaluation grid
grid_function inverse_grid(const hankel_system& sys, freq q, const triangle_solution& sol) {
  const int n = sys.grid_n;
  const grid_function t1 = synthesize(mask_to_map(sys.box.b1, sol.theta1), n);
  const grid_function t2 = synthesize(mask_to_map(sys.box.b2, sol.theta2), n);

  grid_function out(n);
  const double w = 2.0 * 3.14159265358979323846 / n;
  for (int j1 = 0; j1 < n; ++j1)
    for (int j2 = 0; j2 < n; ++j2)
      out.at(j1, j2) = std::polar(1.0, w * static_cast<double>(q.u * j1 + q.v * j2));
  kernels::cdiv(out.values.data(), sys.f_grid.values.data(), out.values.data(), out.values.size());

  grid_function d1(n), d2(n);
  kernels::cdiv(t1.values.data(), sys.alpha_grid.values.data(), d1.values.data(), d1.size());
  kernels::cdiv(t2.values.data(), sys.alpha_bar_grid.values.data(), d2.values.data(), d2.size());
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= d1.values[i] + d2.values[i];
  return out;
}

}  // namespace

inverse_column structured_inverse_apply(const hankel_system& sys, freq q) {
  inverse_column col;
  col.stats = solve_triangle(sys, q);
  const grid_function g = inverse_grid(sys, q, col.stats);
  const fourier_map coeffs = analyze(g, sys.box.m);

  const half_space_family hs = sys.tri.half_spaces();
  col.on_lattice.resize(sys.box.lattice.size());
  double leak = 0.0;
  for (const auto& [k, c] : coeffs.entries)
    if (!hs.in_triangle(k)) leak += std::norm(c);
  col.leakage = std::sqrt(leak);
  for (std::size_t i = 0; i < sys.box.lattice.size(); ++i)
    col.on_lattice[i] = coeffs.value(sys.box.lattice[i]);
  return col;
}

double structured_trace(const hankel_system& sys) {
  const int n = sys.grid_n;
  const double w = 2.0 * 3.14159265358979323846 / n;
  double tr = 0.0;
  for (const freq& q : sys.box.lattice) {
    const triangle_solution sol = solve_triangle(sys, q);
    const grid_function g = inverse_grid(sys, q, sol);
    // diagonal entry <T^{-1} chi^q, chi^q> = grid mean of g * conj(chi^q)
    cplx acc(0.0, 0.0);
    for (int j1 = 0; j1 < n; ++j1)
      for (int j2 = 0; j2 < n; ++j2)
        acc += g.at(j1, j2) * std::polar(1.0, -w * static_cast<double>(q.u * j1 + q.v * j2));
    tr += (acc / static_cast<double>(static_cast<std::int64_t>(n) * n)).real();
  }
  return tr;
}

}  // namespace szego2d
