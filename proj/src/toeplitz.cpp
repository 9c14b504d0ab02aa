#include "szego2d/toeplitz.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "szego2d/kernels.hpp"

namespace szego2d {

double operator_matrix::hermitian_defect() const {
  double d = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) d = std::max(d, std::abs(at(i, j) - std::conj(at(j, i))));
  return d;
}

operator_matrix assemble_toeplitz(const fourier_map& f_coeffs, const triangle_instance& t) {
  if (!f_coeffs.is_hermitian(1e-12))
    fail(errc::invalid_config, "toeplitz assembly needs a hermitian coefficient map");
  operator_matrix m;
  m.index_map = enumerate_lattice_points(t);
  m.n = static_cast<int>(m.index_map.size());
  m.data.resize(static_cast<std::size_t>(m.n) * m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j)
      m.at(i, j) = f_coeffs.value(m.index_map[static_cast<std::size_t>(j)] -
                                  m.index_map[static_cast<std::size_t>(i)]);
  return m;
}

cholesky_factor cholesky_factorize(const operator_matrix& m) {
  cholesky_factor f;
  f.n = m.n;
  f.lower.assign(static_cast<std::size_t>(m.n) * m.n, cplx(0.0, 0.0));
  const int n = m.n;
  for (int j = 0; j < n; ++j) {
    const cplx* rowj = f.lower.data() + static_cast<std::size_t>(j) * n;
    const double sq = kernels::sum_abs2(rowj, static_cast<std::size_t>(j));
    const double d = m.at(j, j).real() - sq;
    if (!(d > 0.0))
      fail(errc::not_positive_definite,
           "pivot " + std::to_string(j) + " is " + std::to_string(d));
    const double ljj = std::sqrt(d);
    f.lower[static_cast<std::size_t>(j) * n + j] = ljj;
    for (int i = j + 1; i < n; ++i) {
      const cplx* rowi = f.lower.data() + static_cast<std::size_t>(i) * n;
      // sum_k L(i,k) * conj(L(j,k)) = conj(<L_i, L_j>)
      const cplx s = std::conj(kernels::cdotc(rowi, rowj, static_cast<std::size_t>(j)));
      f.lower[static_cast<std::size_t>(i) * n + j] = (m.at(i, j) - s) / ljj;
    }
  }
  return f;
}

double cholesky_factor::logdet() const {
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += std::log(lower[static_cast<std::size_t>(j) * n + j].real());
  return 2.0 * s;
}

std::vector<cplx> cholesky_factor::solve_lower(const std::vector<cplx>& b) const {
  std::vector<cplx> x(b);
  for (int i = 0; i < n; ++i) {
    const cplx* rowi = lower.data() + static_cast<std::size_t>(i) * n;
    const cplx s = kernels::cdotu(rowi, x.data(), static_cast<std::size_t>(i));
    x[static_cast<std::size_t>(i)] = (x[static_cast<std::size_t>(i)] - s) /
                                     rowi[static_cast<std::size_t>(i)];
  }
  return x;
}

std::vector<cplx> cholesky_factor::solve(const std::vector<cplx>& b) const {
  std::vector<cplx> x = solve_lower(b);
  // back substitution with L^H: x_i = (x_i - sum_{k>i} conj(L(k,i)) x_k) / L(i,i)
  for (int i = n - 1; i >= 0; --i) {
    cplx s(0.0, 0.0);
    for (int k = i + 1; k < n; ++k)
      s += std::conj(lower[static_cast<std::size_t>(k) * n + i]) * x[static_cast<std::size_t>(k)];
    x[static_cast<std::size_t>(i)] =
        (x[static_cast<std::size_t>(i)] - s) / lower[static_cast<std::size_t>(i) * n + i];
  }
  return x;
}

double cholesky_logdet(const operator_matrix& m) { return cholesky_factorize(m).logdet(); }

double trace_of_inverse(const cholesky_factor& f) {
  // trace(M^{-1}) = ||L^{-1}||_F^2; column i of L^{-1} via forward solve
  const int n = f.n;
  double tr = 0.0;
  std::vector<cplx> x(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) {
    x.assign(static_cast<std::size_t>(n), cplx(0.0, 0.0));
    x[static_cast<std::size_t>(c)] = 1.0 / f.lower[static_cast<std::size_t>(c) * n + c];
    for (int i = c + 1; i < n; ++i) {
      const cplx* rowi = f.lower.data() + static_cast<std::size_t>(i) * n;
      const cplx s = kernels::cdotu(rowi + c, x.data() + c, static_cast<std::size_t>(i - c));
      x[static_cast<std::size_t>(i)] = -s / rowi[static_cast<std::size_t>(i)];
    }
    tr += kernels::sum_abs2(x.data() + c, static_cast<std::size_t>(n - c));
  }
  return tr;
}

double trace_of_inverse(const operator_matrix& m) {
  return trace_of_inverse(cholesky_factorize(m));
}

std::vector<cplx> apply_operator(const operator_matrix& m, const std::vector<cplx>& x) {
  if (static_cast<int>(x.size()) != m.n)
    fail(errc::dimension_mismatch, "vector length " + std::to_string(x.size()) +
                                       " vs matrix size " + std::to_string(m.n));
  std::vector<cplx> y(static_cast<std::size_t>(m.n));
  for (int i = 0; i < m.n; ++i)
    y[static_cast<std::size_t>(i)] =
        kernels::cdotu(m.data.data() + static_cast<std::size_t>(i) * m.n, x.data(),
                       static_cast<std::size_t>(m.n));
  return y;
}

std::vector<cplx> inverse_column_as_function(const cholesky_factor& f, int q) {
  std::vector<cplx> e(static_cast<std::size_t>(f.n), cplx(0.0, 0.0));
  e[static_cast<std::size_t>(q)] = 1.0;
  std::vector<cplx> x = f.solve(e);
  for (cplx& c : x) c = std::conj(c);
  return x;
}

void dump_matrix(const operator_matrix& m, const std::string& bin_path,
                 const std::string& json_path) {
  std::ofstream bin(bin_path, std::ios::binary);
  if (!bin) fail(errc::io_error, "cannot open " + bin_path);
  bin.write(reinterpret_cast<const char*>(m.data.data()),
            static_cast<std::streamsize>(m.data.size() * sizeof(cplx)));
  if (!bin) fail(errc::io_error, "short write to " + bin_path);

  std::ofstream js(json_path);
  if (!js) fail(errc::io_error, "cannot open " + json_path);
  js << "{\n  \"n\": " << m.n << ",\n  \"index_map\": [";
  for (std::size_t i = 0; i < m.index_map.size(); ++i) {
    js << (i ? ", " : "") << "[" << m.index_map[i].u << ", " << m.index_map[i].v << "]";
  }
  js << "]\n}\n";
  if (!js) fail(errc::io_error, "short write to " + json_path);
}

}  // namespace szego2d
