#pragma once

#include <complex>
#include <map>
#include <vector>

#include "szego2d/errors.hpp"
#include "szego2d/lattice.hpp"

namespace szego2d {

using cplx = std::complex<double>;

// Finitely supported map Z^2 -> C. Absent keys are exact zeros; iteration
// order is deterministic (lexicographic in (u,v)).
struct fourier_map {
  std::map<freq, cplx> entries;
  bool hermitian_flag = false;

  cplx value(freq k) const {
    const auto it = entries.find(k);
    return it == entries.end() ? cplx(0.0, 0.0) : it->second;
  }
  void set(freq k, cplx c) {
    if (c == cplx(0.0, 0.0))
      entries.erase(k);
    else
      entries[k] = c;
  }
  void add(freq k, cplx c) { set(k, value(k) + c); }
  std::size_t size() const { return entries.size(); }
  std::int64_t max_abs_freq() const;          // max over axes of |u|, |v|
  double hermitian_defect() const;            // max |entry(-k) - conj(entry(k))|
  bool is_hermitian(double tol = 1e-14) const { return hermitian_defect() <= tol; }
  double l2_mass() const;                     // sqrt(sum |c|^2)
  fourier_map conj_reflect() const;           // entries (-k -> conj(c)), i.e. of conj(g)
  fourier_map shifted(freq q) const;          // entries (k+q -> c), i.e. of chi^q * g
  fourier_map pruned(double abs_tol) const;
  fourier_map boxed(std::int64_t m) const;    // restriction to [-m, m]^2
};

// Samples of a function on the N x N grid theta_j = 2*pi*j/N, row-major with
// the first index moving slowest: values[j1*n + j2].
struct grid_function {
  int n = 0;
  std::vector<cplx> values;

  grid_function() = default;
  explicit grid_function(int n_) : n(n_), values(static_cast<std::size_t>(n_) * n_) {}
  cplx& at(int j1, int j2) { return values[static_cast<std::size_t>(j1) * n + j2]; }
  cplx at(int j1, int j2) const { return values[static_cast<std::size_t>(j1) * n + j2]; }
  std::size_t size() const { return values.size(); }
  double min_real() const;
  double max_abs_imag() const;
};

// Trigonometric-polynomial evaluation on the grid (inverse FFT); requires
// n > 2*max frequency on each axis.
grid_function synthesize(const fourier_map& coeffs, int n);

// Forward FFT normalized so that entry(0,0) is the grid mean; keeps the box
// |u|,|v| <= m (m < n/2).
fourier_map analyze(const grid_function& g, std::int64_t m);

grid_function pointwise_log(const grid_function& g, double eps_pos = 1e-10);
grid_function pointwise_reciprocal(const grid_function& g, double eps_pos = 1e-10);

double k_norm(const fourier_map& m, const triangle_instance& t);
double n_norm(const fourier_map& m);
double mean(const fourier_map& m);

// exact value of the radial weight integral behind n_norm; the test suite
// re-derives it by quadrature
inline constexpr double n_norm_weight_constant = 3.14159265358979323846;

// Low-level FFT access shared by the factorization and Hankel pipelines.
// Forward fills centered coefficients (already divided by n^2); backward
// synthesizes from a centered-coefficient filler.
namespace fft {
void forward(const grid_function& g, std::vector<cplx>& spectrum);   // DFT / n^2, index (j1*n+j2)
void backward(const std::vector<cplx>& spectrum, grid_function& g);  // unnormalized inverse DFT
// centered index helpers: frequencies in [-n/2, n/2)
inline std::int64_t center(std::int64_t idx, int n) { return idx < n / 2 ? idx : idx - n; }
inline int wrap(std::int64_t k, int n) {
  const std::int64_t r = ((k % n) + n) % n;
  return static_cast<int>(r);
}
}  // namespace fft

}  // namespace szego2d
