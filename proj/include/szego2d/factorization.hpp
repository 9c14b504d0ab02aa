#pragma once

#include <array>
#include <map>

#include "szego2d/fourier.hpp"
#include "szego2d/lattice.hpp"

// Constructive cone factorization f = alpha * conj(alpha) with the spectra of
// alpha and 1/alpha inside a prescribed half-cone, the singular coefficient
// transfer for symbols whose log-spectrum leaves the cone, the unimodular
// change of torus coordinates, and the per-edge factor assignment for the
// truncated-operator inversion.

namespace szego2d {

using imat2 = std::array<std::array<std::int64_t, 2>, 2>;

std::int64_t det(const imat2& m);
freq apply(const imat2& m, freq k);
imat2 inverse_unimodular(const imat2& m);

// entry at U*k equals the input entry at k; |det U| must be 1
fourier_map torus_automorphism_remap(const fourier_map& m, const imat2& u);

struct singular_transfer {
  freq v{0, 0};                      // shift vector, in the working coordinates
  fourier_map transferred;           // line sums at support points outside C u (-C)
  std::map<freq, cplx> line_sums;    // canonical line representative -> aggregated sum

  freq line_rep(freq a) const;       // representative of the line a + Z*v
  cplx sigma_at(freq a) const;       // line sum through a (0 off the support lines)
};

// sigma-hat(a) = sum_j h-hat(a + j*v); v must come from shift_vector for the
// support of h and this cone.
singular_transfer line_sum_transfer(const fourier_map& h, freq v, const cone_spec& cone);

enum class fact_path { exact, singular };

struct factorization_options {
  std::int64_t box = 64;             // storage box for the returned coefficient maps
  double eps_pos = 1e-10;
  double tol_spec = 1e-10;
  double tol_fact = 1e-8;
  double support_tol = 1e-12;        // relative support cutoff on the log-spectrum
  std::vector<double> r_sequence = {0.9, 0.99, 0.999};
  bool require_exact_path = false;
};

struct factorization_result {
  fourier_map alpha_coeffs;
  fourier_map beta_coeffs;           // coefficients of 1/alpha
  cone_spec cone;                    // working (unimodular) half-cone, original coordinates
  double residual_sup = 0.0;         // max |f - |alpha|^2| over the grid
  double leak_alpha = 0.0;           // l2 coefficient mass outside C+
  double leak_beta = 0.0;
  double radius_r = 1.0;             // 1 on the exact path
  fact_path path = fact_path::exact;
  singular_transfer transfer;        // populated on the singular path
  std::vector<double> r_residuals;   // masked grid-L2 residual per radius (singular path)
  imat2 basis_map{{{1, 0}, {0, 1}}}; // working cone -> first quadrant
  std::int64_t coeff_box = 0;        // storage box of the returned maps
};

factorization_result cone_factorize(const grid_function& f, const cone_spec& cone,
                                    const factorization_options& opts = {});

struct factorization_diagnostics {
  double residual_sup = 0.0;
  double residual_l2 = 0.0;
  double leak_alpha = 0.0;
  double leak_beta = 0.0;
};

factorization_diagnostics verify_factorization(const grid_function& f,
                                               const factorization_result& fact);

enum class edge_factor { alpha, alpha_bar };

struct edge_assignment {
  std::array<edge_factor, 3> labels{};
  // maximal cyclic runs of equal label; the run containing side 1 first
  std::vector<std::vector<int>> runs;
  std::vector<edge_factor> run_labels;
};

// G_i = alpha when the half-cone lies in the origin-translated half-space of
// side i, conj(alpha) when its reflection does; vertex O.
edge_assignment assign_edge_factors(const triangle_instance& t, const cone_spec& cone,
                                    const factorization_result& fact);

}  // namespace szego2d
