#pragma once

#include <vector>

#include "szego2d/fourier.hpp"
#include "szego2d/lattice.hpp"

// Dense truncated Toeplitz operators on the lattice triangle: assembly from a
// coefficient map, Cholesky log-determinant, trace of the inverse, and matrix
// application. This is the exact reference the structured inversion and the
// asymptotic predictions are validated against.

namespace szego2d {

struct operator_matrix {
  std::vector<freq> index_map;  // row/col i <-> lattice point index_map[i]
  int n = 0;
  std::vector<cplx> data;  // row-major, entry(i,j) = f-hat(p_j - p_i)

  cplx& at(int i, int j) { return data[static_cast<std::size_t>(i) * n + j]; }
  cplx at(int i, int j) const { return data[static_cast<std::size_t>(i) * n + j]; }
  double hermitian_defect() const;
};

operator_matrix assemble_toeplitz(const fourier_map& f_coeffs, const triangle_instance& t);

// Lower-triangular Cholesky factor of a Hermitian positive definite matrix.
struct cholesky_factor {
  int n = 0;
  std::vector<cplx> lower;  // row-major

  double logdet() const;
  // solve L x = b (forward substitution)
  std::vector<cplx> solve_lower(const std::vector<cplx>& b) const;
  // solve (L L^H) x = b
  std::vector<cplx> solve(const std::vector<cplx>& b) const;
};

cholesky_factor cholesky_factorize(const operator_matrix& m);
double cholesky_logdet(const operator_matrix& m);
double trace_of_inverse(const operator_matrix& m);
double trace_of_inverse(const cholesky_factor& f);

std::vector<cplx> apply_operator(const operator_matrix& m, const std::vector<cplx>& x);

// Column q of the inverse *operator* in function form: the coefficients of
// T^{-1}(chi^{p_q}) on the lattice basis. (The stored matrix is the
// transpose-convention one, so this is the conjugated matrix solve.)
std::vector<cplx> inverse_column_as_function(const cholesky_factor& f, int q);

// dense binary dump (row-major little-endian complex128) + JSON index map
void dump_matrix(const operator_matrix& m, const std::string& bin_path,
                 const std::string& json_path);

}  // namespace szego2d
