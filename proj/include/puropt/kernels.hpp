#pragma once

#include <cstddef>
#include <span>

// Data-parallel inner loops shared by the solvers. Every operation has a
// scalar reference implementation and, on x86-64, an AVX2 variant. The
// active backend is picked once from CPUID and can be pinned to scalar
// either programmatically or with PUROPT_FORCE_SCALAR=1 in the environment.
namespace puropt::kernels {

struct Backend {
  const char* name;
  double (*sum)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*min)(const double* x, std::size_t n);          // +inf for n == 0
  double (*max)(const double* x, std::size_t n);          // -inf for n == 0
  double (*max_abs_dev)(const double* x, std::size_t n, double c);  // max_i |x_i - c|
  double (*relu_sum)(const double* x, std::size_t n, double z);     // sum_i max(0, x_i - z)
  double (*relu_sumsq)(const double* x, std::size_t n, double z);   // sum_i max(0, x_i - z)^2
  void (*affine)(double* out, const double* x, std::size_t n, double a, double b);  // a*x + b
  void (*relu_scale)(double* out, const double* x, std::size_t n, double z, double s);  // s*max(0, x - z)
};

namespace scalar {
extern const Backend backend;
}
#if defined(PUROPT_HAVE_AVX2)
namespace avx2 {
extern const Backend backend;
}
#endif

const Backend& active();
bool avx2_available();
// Testing hook: pin the dispatched backend to the scalar reference (or back).
void force_scalar(bool on);

inline double vsum(std::span<const double> x) { return active().sum(x.data(), x.size()); }
inline double vdot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}
inline double vmin(std::span<const double> x) { return active().min(x.data(), x.size()); }
inline double vmax(std::span<const double> x) { return active().max(x.data(), x.size()); }
inline double vmax_abs_dev(std::span<const double> x, double c) {
  return active().max_abs_dev(x.data(), x.size(), c);
}
inline double vrelu_sum(std::span<const double> x, double z) {
  return active().relu_sum(x.data(), x.size(), z);
}
inline double vrelu_sumsq(std::span<const double> x, double z) {
  return active().relu_sumsq(x.data(), x.size(), z);
}
inline void vaffine(std::span<double> out, std::span<const double> x, double a, double b) {
  active().affine(out.data(), x.data(), x.size(), a, b);
}
inline void vrelu_scale(std::span<double> out, std::span<const double> x, double z, double s) {
  active().relu_scale(out.data(), x.data(), x.size(), z, s);
}

// Lowest index attaining the minimum. min() returns an exact element value,
// so the scan below is backend-independent.
inline std::size_t vargmin(std::span<const double> x) {
  const double m = vmin(x);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == m) return i;
  }
  return 0;
}

inline std::size_t vargmax(std::span<const double> x) {
  const double m = vmax(x);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == m) return i;
  }
  return 0;
}

}  // namespace puropt::kernels
