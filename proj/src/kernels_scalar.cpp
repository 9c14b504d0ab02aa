// Scalar reference kernels. Compiled with -ffp-contract=off so results are
// plain IEEE mul/add sequences the SIMD variants are tested against.

#include "szego2d/kernels.hpp"

namespace szego2d::kernels {
namespace {

void s_cmul(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] = cplx(ar * br - ai * bi, ar * bi + ai * br);
  }
}

void s_cdiv(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    const double d = br * br + bi * bi;
    out[i] = cplx((ar * br + ai * bi) / d, (ai * br - ar * bi) / d);
  }
}

void s_crecip(const cplx* a, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double d = ar * ar + ai * ai;
    out[i] = cplx(ar / d, -ai / d);
  }
}

void s_caxpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const double pr = alpha.real(), pi = alpha.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = cplx(y[i].real() + pr * xr - pi * xi, y[i].imag() + pr * xi + pi * xr);
  }
}

void s_cscale(cplx alpha, const cplx* a, cplx* out, std::size_t n) {
  const double pr = alpha.real(), pi = alpha.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    out[i] = cplx(pr * ar - pi * ai, pr * ai + pi * ar);
  }
}

double s_sum_abs2(const cplx* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    s += ar * ar + ai * ai;
  }
  return s;
}

double s_wsum_abs2(const double* w, const cplx* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    s += w[i] * (ar * ar + ai * ai);
  }
  return s;
}

double s_max_abs2_diff(const cplx* a, const cplx* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dr = a[i].real() - b[i].real(), di = a[i].imag() - b[i].imag();
    const double d2 = dr * dr + di * di;
    if (d2 > m) m = d2;
  }
  return m;
}

cplx s_cdotc(const cplx* a, const cplx* b, std::size_t n) {
  double sr = 0.0, si = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    sr += ar * br + ai * bi;
    si += ar * bi - ai * br;
  }
  return cplx(sr, si);
}

cplx s_cdotu(const cplx* a, const cplx* b, std::size_t n) {
  double sr = 0.0, si = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    sr += ar * br - ai * bi;
    si += ar * bi + ai * br;
  }
  return cplx(sr, si);
}

}  // namespace

const backend& scalar_backend() {
  static const backend k = {
      "scalar",  s_cmul,      s_cdiv,      s_crecip,        s_caxpy,
      s_cscale,  s_sum_abs2,  s_wsum_abs2, s_max_abs2_diff, s_cdotc,
      s_cdotu,
  };
  return k;
}

}  // namespace szego2d::kernels
