// AVX2/FMA kernel variants. This TU is the only one built with -mavx2 -mfma;
// callers reach it through the runtime dispatch table.

#include <immintrin.h>

#include "szego2d/kernels.hpp"

namespace szego2d::kernels {
namespace {

// [a0r a0i a1r a1i] per __m256d, two complexes per vector.

inline __m256d dup_even(__m256d v) { return _mm256_movedup_pd(v); }          // [r r r r]
inline __m256d dup_odd(__m256d v) { return _mm256_permute_pd(v, 0b1111); }   // [i i i i]
inline __m256d swap_ri(__m256d v) { return _mm256_permute_pd(v, 0b0101); }   // [i r i r]

inline __m256d neg_odd_mask() { return _mm256_set_pd(-0.0, 0.0, -0.0, 0.0); }

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void v_cmul(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double* po = reinterpret_cast<double*>(out);
  std::size_t i = 0, n2 = (n / 2) * 2;
  for (; i < n2; i += 2) {
    __m256d va = _mm256_loadu_pd(pa + 2 * i);
    __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    __m256d r = _mm256_fmaddsub_pd(dup_even(va), vb, _mm256_mul_pd(dup_odd(va), swap_ri(vb)));
    _mm256_storeu_pd(po + 2 * i, r);
  }
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag(), br = b[i].real(), bi = b[i].imag();
    out[i] = cplx(ar * br - ai * bi, ar * bi + ai * br);
  }
}

void v_cdiv(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double* po = reinterpret_cast<double*>(out);
  std::size_t i = 0, n2 = (n / 2) * 2;
  for (; i < n2; i += 2) {
    __m256d va = _mm256_loadu_pd(pa + 2 * i);
    __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    // conj(b)*a = [br*ar + bi*ai, br*ai - bi*ar]
    __m256d num = _mm256_fmsubadd_pd(dup_even(vb), va, _mm256_mul_pd(dup_odd(vb), swap_ri(va)));
    __m256d sq = _mm256_mul_pd(vb, vb);
    __m256d den = _mm256_hadd_pd(sq, sq);
    _mm256_storeu_pd(po + 2 * i, _mm256_div_pd(num, den));
  }
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag(), br = b[i].real(), bi = b[i].imag();
    const double d = br * br + bi * bi;
    out[i] = cplx((ar * br + ai * bi) / d, (ai * br - ar * bi) / d);
  }
}

void v_crecip(const cplx* a, cplx* out, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  double* po = reinterpret_cast<double*>(out);
  const __m256d negodd = neg_odd_mask();
  std::size_t i = 0, n2 = (n / 2) * 2;
  for (; i < n2; i += 2) {
    __m256d va = _mm256_loadu_pd(pa + 2 * i);
    __m256d conj = _mm256_xor_pd(va, negodd);
    __m256d sq = _mm256_mul_pd(va, va);
    __m256d den = _mm256_hadd_pd(sq, sq);
    _mm256_storeu_pd(po + 2 * i, _mm256_div_pd(conj, den));
  }
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double d = ar * ar + ai * ai;
    out[i] = cplx(ar / d, -ai / d);
  }
}

void v_caxpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const double* px = reinterpret_cast<const double*>(x);
  double* py = reinterpret_cast<double*>(y);
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0, n2 = (n / 2) * 2;
  for (; i < n2; i += 2) {
    __m256d vx = _mm256_loadu_pd(px + 2 * i);
    __m256d prod = _mm256_fmaddsub_pd(ar, vx, _mm256_mul_pd(ai, swap_ri(vx)));
    _mm256_storeu_pd(py + 2 * i, _mm256_add_pd(_mm256_loadu_pd(py + 2 * i), prod));
  }
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] += cplx(alpha.real() * xr - alpha.imag() * xi, alpha.real() * xi + alpha.imag() * xr);
  }
}

void v_cscale(cplx alpha, const cplx* a, cplx* out, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  double* po = reinterpret_cast<double*>(out);
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0, n2 = (n / 2) * 2;
  for (; i < n2; i += 2) {
    __m256d va = _mm256_loadu_pd(pa + 2 * i);
    _mm256_storeu_pd(po + 2 * i, _mm256_fmaddsub_pd(ar, va, _mm256_mul_pd(ai, swap_ri(va))));
  }
  for (; i < n; ++i) {
    const double xr = a[i].real(), xi = a[i].imag();
    out[i] = cplx(alpha.real() * xr - alpha.imag() * xi, alpha.real() * xi + alpha.imag() * xr);
  }
}

double v_sum_abs2(const cplx* a, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0, n2 = (n / 2) * 2;
  for (; i < n2; i += 2) {
    __m256d va = _mm256_loadu_pd(pa + 2 * i);
    acc = _mm256_fmadd_pd(va, va, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
  return s;
}

double v_wsum_abs2(const double* w, const cplx* a, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0, n2 = (n / 2) * 2;
  for (; i < n2; i += 2) {
    __m128d wv = _mm_loadu_pd(w + i);
    __m256d wd = _mm256_permute4x64_pd(_mm256_castpd128_pd256(wv), 0x50);  // [w0 w0 w1 w1]
    __m256d va = _mm256_loadu_pd(pa + 2 * i);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(va, va), wd, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += w[i] * (a[i].real() * a[i].real() + a[i].imag() * a[i].imag());
  return s;
}

double v_max_abs2_diff(const cplx* a, const cplx* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  __m256d vmax = _mm256_setzero_pd();
  std::size_t i = 0, n2 = (n / 2) * 2;
  for (; i < n2; i += 2) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(pa + 2 * i), _mm256_loadu_pd(pb + 2 * i));
    __m256d sq = _mm256_mul_pd(d, d);
    vmax = _mm256_max_pd(vmax, _mm256_hadd_pd(sq, sq));
  }
  __m128d lo = _mm256_castpd256_pd128(vmax);
  __m128d hi = _mm256_extractf128_pd(vmax, 1);
  double m = _mm_cvtsd_f64(_mm_max_sd(lo, hi));
  for (; i < n; ++i) {
    const double dr = a[i].real() - b[i].real(), di = a[i].imag() - b[i].imag();
    const double d2 = dr * dr + di * di;
    if (d2 > m) m = d2;
  }
  return m;
}

cplx v_cdotc(const cplx* a, const cplx* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  const __m256d negodd = neg_odd_mask();
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0, n2 = (n / 2) * 2;
  for (; i < n2; i += 2) {
    __m256d va = _mm256_loadu_pd(pa + 2 * i);
    __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    acc_re = _mm256_fmadd_pd(va, vb, acc_re);  // lanes: ar*br, ai*bi
    __m256d bs = _mm256_xor_pd(swap_ri(vb), negodd);  // [bi -br]
    acc_im = _mm256_fmadd_pd(va, bs, acc_im);  // lanes: ar*bi, -ai*br
  }
  double sr = hsum(acc_re), si = hsum(acc_im);
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag(), br = b[i].real(), bi = b[i].imag();
    sr += ar * br + ai * bi;
    si += ar * bi - ai * br;
  }
  return cplx(sr, si);
}

cplx v_cdotu(const cplx* a, const cplx* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  const __m256d negodd = neg_odd_mask();
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0, n2 = (n / 2) * 2;
  for (; i < n2; i += 2) {
    __m256d va = _mm256_loadu_pd(pa + 2 * i);
    __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    acc_re = _mm256_fmadd_pd(va, _mm256_xor_pd(vb, negodd), acc_re);  // ar*br, -ai*bi
    acc_im = _mm256_fmadd_pd(va, swap_ri(vb), acc_im);                // ar*bi, ai*br
  }
  double sr = hsum(acc_re), si = hsum(acc_im);
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag(), br = b[i].real(), bi = b[i].imag();
    sr += ar * br - ai * bi;
    si += ar * bi + ai * br;
  }
  return cplx(sr, si);
}

}  // namespace

bool avx2_backend_available() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

const backend& avx2_backend() {
  static const backend k = {
      "avx2",   v_cmul,      v_cdiv,      v_crecip,        v_caxpy,
      v_cscale, v_sum_abs2,  v_wsum_abs2, v_max_abs2_diff, v_cdotc,
      v_cdotu,
  };
  return k;
}

}  // namespace szego2d::kernels
