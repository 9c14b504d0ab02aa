#pragma once

#include <memory>
#include <vector>

#include "szego2d/factorization.hpp"
#include "szego2d/toeplitz.hpp"

// The structured inversion machinery on a truncated frequency box: the
// multiplier ratio conj(alpha)/alpha, the projections onto the two grouped
// half-space complements, the exchange operators between them, the Hermitian
// block operator they assemble into, the fundamental field gamma(q), the
// reduced one-block equation, and the inverse-column evaluation that the
// dense Toeplitz route cross-checks.

namespace szego2d {

enum class solver_mode { neumann, direct };

struct spectral_box {
  std::int64_t m = 0;
  std::vector<freq> b1, b2;   // box points of the two grouped complements, lex order
  std::vector<freq> lattice;  // triangle points, lex order

  int side() const { return static_cast<int>(2 * m + 1); }
  int flat(freq k) const {  // -1 when outside the box
    if (std::llabs(k.u) > m || std::llabs(k.v) > m) return -1;
    return static_cast<int>((k.u + m) * (2 * m + 1) + (k.v + m));
  }
  std::vector<int> b1_pos, b2_pos;  // flat index -> position in b1/b2, -1 absent
};

struct solve_options {
  solver_mode mode = solver_mode::neumann;
  double tol_solve = 1e-12;
  std::int64_t max_iters = 0;  // 0 = 10 * |box|
  bool allow_fallback = true;
};

struct build_options {
  int grid_n = 256;
  solve_options solver;
};

struct hankel_system {
  spectral_box box;
  triangle_instance tri;
  fourier_map alpha_map, beta_map;
  fourier_map phi_ratio;      // conj(alpha)/alpha on [-2M, 2M]^2
  fourier_map phi_ratio_inv;  // alpha/conj(alpha), the conjugate reflection
  int conv_n = 0;             // zero-padded convolution grid
  std::vector<cplx> kern_ratio_fft;      // unnormalized DFT of the truncated kernels
  std::vector<cplx> kern_ratio_inv_fft;
  int grid_n = 0;
  grid_function alpha_grid, alpha_bar_grid, f_grid;
  solve_options solver;

  struct direct_cache;
  std::shared_ptr<direct_cache> cache;  // lazily built dense solver
};

hankel_system build_system(const factorization_result& fact, const triangle_instance& t,
                           std::int64_t m, const build_options& opts = {});

// H(i,j) theta_j = Pi_i((Phi_j / Phi_i) theta_j) via the truncated convolution
std::vector<cplx> apply_exchange(const hankel_system& sys, int i, int j,
                                 const std::vector<cplx>& theta);

struct assemble_options {
  bool verify_psd = true;
  int max_rows = 4096;
};

// dense [[I, H(1,2)], [H(2,1), I]] on b1 ++ b2
operator_matrix assemble_h(const hankel_system& sys, const assemble_options& opts = {});

struct gamma_pair {
  std::vector<cplx> g1, g2;
};

gamma_pair gamma_field(const hankel_system& sys, freq q);

struct triangle_solution {
  std::vector<cplx> theta1, theta2;
  int iterations = 0;
  double residual = 0.0;
  bool used_fallback = false;
};

triangle_solution solve_triangle(const hankel_system& sys, freq q);

struct inverse_column {
  std::vector<cplx> on_lattice;  // coefficients of T^{-1}(chi^q) at the lattice points
  double leakage = 0.0;          // coefficient mass outside the triangle (within the box)
  triangle_solution stats;
};

inverse_column structured_inverse_apply(const hankel_system& sys, freq q);

// sum over q of <T^{-1}(chi^q), chi^q>
double structured_trace(const hankel_system& sys);

}  // namespace szego2d
