#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

// Data-parallel inner loops used by the grid pipeline, the dense Cholesky and
// the Hankel iteration. Every routine has a scalar reference implementation
// and an AVX2/FMA variant; the active backend is picked once at startup from
// cpuid and can be overridden (SZEGO2D_KERNELS=scalar|avx2 or set_backend).
// The two backends are equivalence-tested against each other in the unit
// suite; reductions may differ by reassociation roundoff only.

namespace szego2d::kernels {

using cplx = std::complex<double>;

struct backend {
  const char* name;
  // pointwise, out may alias a
  void (*cmul)(const cplx* a, const cplx* b, cplx* out, std::size_t n);
  void (*cdiv)(const cplx* a, const cplx* b, cplx* out, std::size_t n);
  void (*crecip)(const cplx* a, cplx* out, std::size_t n);
  void (*caxpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
  void (*cscale)(cplx alpha, const cplx* a, cplx* out, std::size_t n);
  // reductions
  double (*sum_abs2)(const cplx* a, std::size_t n);
  double (*wsum_abs2)(const double* w, const cplx* a, std::size_t n);
  double (*max_abs2_diff)(const cplx* a, const cplx* b, std::size_t n);
  cplx (*cdotc)(const cplx* a, const cplx* b, std::size_t n);  // sum conj(a)*b
  cplx (*cdotu)(const cplx* a, const cplx* b, std::size_t n);  // sum a*b
};

const backend& scalar_backend();
bool avx2_backend_available();
const backend& avx2_backend();  // valid only if avx2_backend_available()

// Active backend (process-wide). set_backend returns false on unknown /
// unavailable names and leaves the selection unchanged.
const backend& active();
bool set_backend(std::string_view name);
std::string_view active_name();

inline void cmul(const cplx* a, const cplx* b, cplx* out, std::size_t n) { active().cmul(a, b, out, n); }
inline void cdiv(const cplx* a, const cplx* b, cplx* out, std::size_t n) { active().cdiv(a, b, out, n); }
inline void crecip(const cplx* a, cplx* out, std::size_t n) { active().crecip(a, out, n); }
inline void caxpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) { active().caxpy(alpha, x, y, n); }
inline void cscale(cplx alpha, const cplx* a, cplx* out, std::size_t n) { active().cscale(alpha, a, out, n); }
inline double sum_abs2(const cplx* a, std::size_t n) { return active().sum_abs2(a, n); }
inline double wsum_abs2(const double* w, const cplx* a, std::size_t n) { return active().wsum_abs2(w, a, n); }
inline double max_abs2_diff(const cplx* a, const cplx* b, std::size_t n) { return active().max_abs2_diff(a, b, n); }
inline cplx cdotc(const cplx* a, const cplx* b, std::size_t n) { return active().cdotc(a, b, n); }
inline cplx cdotu(const cplx* a, const cplx* b, std::size_t n) { return active().cdotu(a, b, n); }

}  // namespace szego2d::kernels
