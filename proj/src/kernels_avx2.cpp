// AVX2 variants of the vector kernels. Built with -mavx2 -mfma in its own
// translation unit; only reached through the runtime dispatcher.
#include "puropt/kernels.hpp"

#if defined(PUROPT_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace puropt::kernels::avx2 {
namespace {

inline double hadd(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

inline double hmin(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_min_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_min_sd(lo, sh));
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, sh));
}

double sum_impl(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
  }
  double acc = hadd(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i];
  return acc;
}

double dot_impl(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  double acc = hadd(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double min_impl(const double* x, std::size_t n) {
  double m = std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  if (n >= 4) {
    __m256d vm = _mm256_loadu_pd(x);
    for (i = 4; i + 4 <= n; i += 4) vm = _mm256_min_pd(vm, _mm256_loadu_pd(x + i));
    m = hmin(vm);
  }
  for (; i < n; ++i) m = x[i] < m ? x[i] : m;
  return m;
}

double max_impl(const double* x, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  if (n >= 4) {
    __m256d vm = _mm256_loadu_pd(x);
    for (i = 4; i + 4 <= n; i += 4) vm = _mm256_max_pd(vm, _mm256_loadu_pd(x + i));
    m = hmax(vm);
  }
  for (; i < n; ++i) m = x[i] > m ? x[i] : m;
  return m;
}

double max_abs_dev_impl(const double* x, std::size_t n, double c) {
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d vm = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), vc);
    vm = _mm256_max_pd(vm, _mm256_andnot_pd(sign_mask, d));
  }
  double m = hmax(vm);
  if (n < 4) m = 0.0;
  for (; i < n; ++i) {
    const double d = std::fabs(x[i] - c);
    m = d > m ? d : m;
  }
  return m;
}

double relu_sum_impl(const double* x, std::size_t n, double z) {
  const __m256d vz = _mm256_set1_pd(z);
  const __m256d zero = _mm256_setzero_pd();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_max_pd(zero, _mm256_sub_pd(_mm256_loadu_pd(x + i), vz));
    acc = _mm256_add_pd(acc, d);
  }
  double s = hadd(acc);
  for (; i < n; ++i) {
    const double d = x[i] - z;
    if (d > 0.0) s += d;
  }
  return s;
}

double relu_sumsq_impl(const double* x, std::size_t n, double z) {
  const __m256d vz = _mm256_set1_pd(z);
  const __m256d zero = _mm256_setzero_pd();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_max_pd(zero, _mm256_sub_pd(_mm256_loadu_pd(x + i), vz));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hadd(acc);
  for (; i < n; ++i) {
    const double d = x[i] - z;
    if (d > 0.0) s += d * d;
  }
  return s;
}

void affine_impl(double* out, const double* x, std::size_t n, double a, double b) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vb));
  }
  for (; i < n; ++i) out[i] = std::fma(a, x[i], b);
}

void relu_scale_impl(double* out, const double* x, std::size_t n, double z, double s) {
  const __m256d vz = _mm256_set1_pd(z);
  const __m256d vs = _mm256_set1_pd(s);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_max_pd(zero, _mm256_sub_pd(_mm256_loadu_pd(x + i), vz));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(vs, d));
  }
  for (; i < n; ++i) {
    const double d = x[i] - z;
    out[i] = d > 0.0 ? s * d : 0.0;
  }
}

}  // namespace

const Backend backend = {
    "avx2",          sum_impl,       dot_impl,        min_impl,    max_impl,
    max_abs_dev_impl, relu_sum_impl, relu_sumsq_impl, affine_impl, relu_scale_impl,
};

}  // namespace puropt::kernels::avx2

#endif  // PUROPT_HAVE_AVX2
