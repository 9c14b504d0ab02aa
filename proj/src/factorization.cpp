#include "szego2d/factorization.hpp"

#include <algorithm>
#include <cmath>

#include "szego2d/kernels.hpp"

namespace szego2d {

std::int64_t det(const imat2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

freq apply(const imat2& m, freq k) {
  return {m[0][0] * k.u + m[0][1] * k.v, m[1][0] * k.u + m[1][1] * k.v};
}

imat2 inverse_unimodular(const imat2& m) {
  const std::int64_t d = det(m);
  if (d != 1 && d != -1) fail(errc::not_unimodular, "matrix determinant is not +-1");
  return {{{d * m[1][1], -d * m[0][1]}, {-d * m[1][0], d * m[0][0]}}};
}

fourier_map torus_automorphism_remap(const fourier_map& m, const imat2& u) {
  const std::int64_t d = det(u);
  if (d != 1 && d != -1) fail(errc::not_unimodular, "remap needs |det| = 1");
  fourier_map out;
  out.hermitian_flag = m.hermitian_flag;
  for (const auto& [k, c] : m.entries) out.entries[apply(u, k)] = c;
  return out;
}

freq singular_transfer::line_rep(freq a) const {
  const std::int64_t vv = dot(v, v);
  std::int64_t num = dot(a, v);
  // floor division
  std::int64_t j = num / vv;
  if (num % vv != 0 && ((num < 0) != (vv < 0))) --j;
  return a - j * v;
}

cplx singular_transfer::sigma_at(freq a) const {
  const auto it = line_sums.find(line_rep(a));
  return it == line_sums.end() ? cplx(0.0, 0.0) : it->second;
}

singular_transfer line_sum_transfer(const fourier_map& h, freq v, const cone_spec& cone) {
  singular_transfer st;
  st.v = v;
  if (v.u == 0 && v.v == 0) fail(errc::invalid_config, "shift vector must be nonzero");
  for (const auto& [k, c] : h.entries) st.line_sums[st.line_rep(k)] += c;
  for (const auto& [k, c] : h.entries)
    if (!cone.in_cone(k)) st.transferred.entries[k] = st.sigma_at(k);
  st.transferred.hermitian_flag = h.hermitian_flag;
  return st;
}

namespace {

bool in_y2(freq k) { return (k.u >= 0 && k.v >= 0) || (k.u <= 0 && k.v <= 0); }

grid_function permute_grid(const grid_function& g, const imat2& ut) {
  grid_function out(g.n);
  const int n = g.n;
  for (int j1 = 0; j1 < n; ++j1)
    for (int j2 = 0; j2 < n; ++j2) {
      const int p1 = fft::wrap(ut[0][0] * j1 + ut[0][1] * j2, n);
      const int p2 = fft::wrap(ut[1][0] * j1 + ut[1][1] * j2, n);
      out.at(j1, j2) = g.at(p1, p2);
    }
  return out;
}

double quadrant_leak(const std::vector<cplx>& spec, int n) {
  // l2 mass at centered frequencies outside the closed first quadrant
  double s = 0.0;
  for (int i1 = 0; i1 < n; ++i1) {
    const std::int64_t u = fft::center(i1, n);
    for (int i2 = 0; i2 < n; ++i2) {
      const std::int64_t v = fft::center(i2, n);
      if (u >= 0 && v >= 0) continue;
      s += std::norm(spec[static_cast<std::size_t>(i1) * n + i2]);
    }
  }
  return std::sqrt(s);
}

}  // namespace

factorization_result cone_factorize(const grid_function& f, const cone_spec& cone,
                                    const factorization_options& opts) {
  const int n = f.n;
  factorization_result res;
  res.cone = find_unimodular_subcone(cone);

  // change of coordinates sending the working cone to the first quadrant
  const imat2 basis = {{{res.cone.e1.alpha, res.cone.e2.alpha},
                        {res.cone.e1.beta, res.cone.e2.beta}}};
  const imat2 u = inverse_unimodular(basis);
  res.basis_map = u;
  const imat2 ut = {{{u[0][0], u[1][0]}, {u[0][1], u[1][1]}}};

  const grid_function fw = permute_grid(f, ut);
  const grid_function h = pointwise_log(fw, opts.eps_pos);

  std::vector<cplx> hspec;
  fft::forward(h, hspec);

  double hmax = 0.0;
  for (const cplx& c : hspec) hmax = std::max(hmax, std::abs(c));
  const double cutoff = opts.support_tol * hmax;

  fourier_map hmap;  // thresholded support of the log-spectrum
  hmap.hermitian_flag = true;
  bool exact = true;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      const cplx c = hspec[static_cast<std::size_t>(i1) * n + i2];
      if (std::abs(c) <= cutoff) continue;
      const freq k{fft::center(i1, n), fft::center(i2, n)};
      hmap.entries[k] = c;
      if (!in_y2(k)) exact = false;
    }

  res.path = exact ? fact_path::exact : fact_path::singular;
  if (!exact && opts.require_exact_path)
    fail(errc::cone_too_narrow_for_exact_path,
         "log-spectrum leaves the working cone; the factorization exists only as a radial limit");

  const cone_spec quadrant = cone_spec::make({1, 0}, {0, 1});
  if (!exact) {
    std::vector<freq> support;
    support.reserve(hmap.size());
    for (const auto& [k, c] : hmap.entries) support.push_back(k);
    const freq v = shift_vector(quadrant, support);
    res.transfer = line_sum_transfer(hmap, v, quadrant);
  }

  // holomorphic completion g with Re(g) = h - sigma, spectrum in the quadrant
  std::vector<cplx> gspec(static_cast<std::size_t>(n) * n, cplx(0.0, 0.0));
  for (int i1 = 0; i1 < n / 2; ++i1)
    for (int i2 = 0; i2 < n / 2; ++i2) {
      const freq k{i1, i2};
      cplx m = hspec[static_cast<std::size_t>(i1) * n + i2];
      if (!exact) m -= res.transfer.sigma_at(k);
      gspec[static_cast<std::size_t>(i1) * n + i2] = (i1 == 0 && i2 == 0) ? m : 2.0 * m;
    }

  grid_function alpha(n), gg(n);
  const std::vector<double> radii = exact ? std::vector<double>{1.0} : opts.r_sequence;
  std::vector<cplx> gr(gspec.size());
  for (const double r : radii) {
    if (r == 1.0) {
      gr = gspec;
    } else {
      for (int i1 = 0; i1 < n / 2; ++i1)
        for (int i2 = 0; i2 < n / 2; ++i2) {
          const std::size_t idx = static_cast<std::size_t>(i1) * n + i2;
          gr[idx] = gspec[idx] * std::pow(r, static_cast<double>(i1 + i2));
        }
    }
    fft::backward(gr, gg);
    for (std::size_t i = 0; i < alpha.values.size(); ++i)
      alpha.values[i] = std::exp(0.5 * gg.values[i]);
    res.radius_r = r;

    if (!exact) {
      // masked grid-L2 residual, skipping nodes near the zero set of
      // exp(i v.theta) - 1
      const freq v = res.transfer.v;
      const double vnorm = std::hypot(static_cast<double>(v.u), static_cast<double>(v.v));
      double acc = 0.0;
      std::size_t count = 0;
      for (int j1 = 0; j1 < n; ++j1)
        for (int j2 = 0; j2 < n; ++j2) {
          std::int64_t c = (v.u * j1 + v.v * j2) % n;
          if (c < 0) c += n;
          const double dist = std::min<double>(static_cast<double>(c), static_cast<double>(n - c));
          if (dist < vnorm) continue;
          acc += std::norm(fw.at(j1, j2) - cplx(std::norm(alpha.at(j1, j2)), 0.0));
          ++count;
        }
      res.r_residuals.push_back(count ? std::sqrt(acc / static_cast<double>(count)) : 0.0);
    }
  }

  grid_function absa2(n);
  for (std::size_t i = 0; i < absa2.values.size(); ++i)
    absa2.values[i] = cplx(std::norm(alpha.values[i]), 0.0);
  res.residual_sup = std::sqrt(kernels::max_abs2_diff(fw.values.data(), absa2.values.data(),
                                                      absa2.values.size()));

  grid_function recip(n);
  kernels::crecip(alpha.values.data(), recip.values.data(), alpha.values.size());

  std::vector<cplx> aspec, bspec;
  fft::forward(alpha, aspec);
  fft::forward(recip, bspec);
  res.leak_alpha = quadrant_leak(aspec, n);
  res.leak_beta = quadrant_leak(bspec, n);

  const double prune_alpha = 1e-16 * std::max(1.0, std::abs(aspec[0]));
  const double prune_beta = 1e-16 * std::max(1.0, std::abs(bspec[0]));
  fourier_map amap, bmap;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      const freq k{fft::center(i1, n), fft::center(i2, n)};
      const cplx ca = aspec[static_cast<std::size_t>(i1) * n + i2];
      const cplx cb = bspec[static_cast<std::size_t>(i1) * n + i2];
      if (std::abs(ca) > prune_alpha) amap.entries[k] = ca;
      if (std::abs(cb) > prune_beta) bmap.entries[k] = cb;
    }

  res.alpha_coeffs = torus_automorphism_remap(amap, basis).boxed(opts.box);
  res.beta_coeffs = torus_automorphism_remap(bmap, basis).boxed(opts.box);
  res.coeff_box = opts.box;
  return res;
}

factorization_diagnostics verify_factorization(const grid_function& f,
                                               const factorization_result& fact) {
  factorization_diagnostics d;
  const grid_function alpha = synthesize(fact.alpha_coeffs, f.n);
  grid_function absa2(f.n);
  for (std::size_t i = 0; i < alpha.values.size(); ++i)
    absa2.values[i] = cplx(std::norm(alpha.values[i]), 0.0);
  d.residual_sup =
      std::sqrt(kernels::max_abs2_diff(f.values.data(), absa2.values.data(), absa2.values.size()));
  double acc = 0.0;
  for (std::size_t i = 0; i < absa2.values.size(); ++i) acc += std::norm(f.values[i] - absa2.values[i]);
  d.residual_l2 = std::sqrt(acc / static_cast<double>(absa2.values.size()));

  double la = 0.0, lb = 0.0;
  for (const auto& [k, c] : fact.alpha_coeffs.entries)
    if (!fact.cone.in_half_cone(k)) la += std::norm(c);
  for (const auto& [k, c] : fact.beta_coeffs.entries)
    if (!fact.cone.in_half_cone(k)) lb += std::norm(c);
  d.leak_alpha = std::sqrt(la);
  d.leak_beta = std::sqrt(lb);
  return d;
}

edge_assignment assign_edge_factors(const triangle_instance& t, const cone_spec& cone,
                                    const factorization_result& fact) {
  (void)fact;
  const cone_spec vertex = t.vertex_cone_at_origin();
  if (!vertex.in_half_cone(cone.e1.as_freq()) || !vertex.in_half_cone(cone.e2.as_freq()))
    fail(errc::cone_not_in_vertex_cone, "factorization cone must sit inside the vertex cone at O");

  const half_space_family h = t.half_spaces();
  edge_assignment out;
  for (int i = 0; i < 3; ++i) {
    const freq nu = h.nu[static_cast<std::size_t>(i)].as_freq();
    const bool plus = dot(nu, cone.e1.as_freq()) <= 0 && dot(nu, cone.e2.as_freq()) <= 0;
    const bool minus = dot(nu, cone.e1.as_freq()) >= 0 && dot(nu, cone.e2.as_freq()) >= 0;
    if (plus)
      out.labels[static_cast<std::size_t>(i)] = edge_factor::alpha;
    else if (minus)
      out.labels[static_cast<std::size_t>(i)] = edge_factor::alpha_bar;
    else
      fail(errc::cone_not_in_vertex_cone,
           "cone straddles the origin half-space of side " + std::to_string(i + 1));
  }

  // maximal cyclic runs of equal label, starting with the run containing side 1
  std::array<int, 3> run_id{};
  int runs = 0;
  for (int i = 0; i < 3; ++i) {
    if (i > 0 && out.labels[static_cast<std::size_t>(i)] == out.labels[static_cast<std::size_t>(i - 1)])
      run_id[static_cast<std::size_t>(i)] = run_id[static_cast<std::size_t>(i - 1)];
    else
      run_id[static_cast<std::size_t>(i)] = runs++;
  }
  if (runs > 1 && out.labels[2] == out.labels[0]) {  // cyclic wrap: last run merges into first
    const int last = run_id[2];
    for (int i = 0; i < 3; ++i)
      if (run_id[static_cast<std::size_t>(i)] == last) run_id[static_cast<std::size_t>(i)] = 0;
    --runs;
  }
  out.runs.assign(static_cast<std::size_t>(runs), {});
  out.run_labels.assign(static_cast<std::size_t>(runs), edge_factor::alpha);
  for (int i = 0; i < 3; ++i) {
    out.runs[static_cast<std::size_t>(run_id[static_cast<std::size_t>(i)])].push_back(i + 1);
    out.run_labels[static_cast<std::size_t>(run_id[static_cast<std::size_t>(i)])] =
        out.labels[static_cast<std::size_t>(i)];
  }
  for (auto& r : out.runs) std::sort(r.begin(), r.end());
  return out;
}

}  // namespace szego2d
