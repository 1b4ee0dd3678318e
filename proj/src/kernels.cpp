#include "puropt/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace puropt::kernels {

namespace scalar {
namespace {

double sum_impl(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double dot_impl(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double min_impl(const double* x, std::size_t n) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) m = x[i] < m ? x[i] : m;
  return m;
}

double max_impl(const double* x, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) m = x[i] > m ? x[i] : m;
  return m;
}

double max_abs_dev_impl(const double* x, std::size_t n, double c) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::fabs(x[i] - c);
    m = d > m ? d : m;
  }
  return m;
}

double relu_sum_impl(const double* x, std::size_t n, double z) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - z;
    if (d > 0.0) acc += d;
  }
  return acc;
}

double relu_sumsq_impl(const double* x, std::size_t n, double z) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - z;
    if (d > 0.0) acc += d * d;
  }
  return acc;
}

void affine_impl(double* out, const double* x, std::size_t n, double a, double b) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b;
}

void relu_scale_impl(double* out, const double* x, std::size_t n, double z, double s) {
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - z;
    out[i] = d > 0.0 ? s * d : 0.0;
  }
}

}  // namespace

const Backend backend = {
    "scalar",        sum_impl,        dot_impl,    min_impl,        max_impl,
    max_abs_dev_impl, relu_sum_impl,  relu_sumsq_impl, affine_impl, relu_scale_impl,
};

}  // namespace scalar

namespace {

const Backend* best_backend() {
#if defined(PUROPT_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return &avx2::backend;
  }
#endif
  return &scalar::backend;
}

const Backend* initial_backend() {
  if (const char* env = std::getenv("PUROPT_FORCE_SCALAR"); env && env[0] == '1') {
    return &scalar::backend;
  }
  return best_backend();
}

std::atomic<const Backend*> g_active{nullptr};

}  // namespace

const Backend& active() {
  const Backend* p = g_active.load(std::memory_order_acquire);
  if (!p) {
    p = initial_backend();
    g_active.store(p, std::memory_order_release);
  }
  return *p;
}

bool avx2_available() {
#if defined(PUROPT_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

void force_scalar(bool on) {
  g_active.store(on ? &scalar::backend : best_backend(), std::memory_order_release);
}

}  // namespace puropt::kernels
