#include "padp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace padp::kernels {

namespace {
int g_threads = 0;

inline int effective_threads() {
#ifdef _OPENMP
  return g_threads > 0 ? g_threads : omp_get_max_threads();
#else
  return 1;
#endif
}

inline uint64_t stream_seed(uint64_t seed, size_t i) {
  return splitmix64(seed + 0x9e3779b97f4a7c15ULL * (static_cast<uint64_t>(i) + 1));
}
}  // namespace

void set_threads(int n) { g_threads = n; }
int threads() { return effective_threads(); }

void matmul_serial(const double* a, const double* b, double* c, size_t m, size_t k, size_t n) {
  for (size_t i = 0; i < m; ++i) {
    double* ci = c + i * n;
    std::fill(ci, ci + n, 0.0);
    const double* ai = a + i * k;
    for (size_t p = 0; p < k; ++p) {
      const double av = ai[p];
      if (av == 0.0) continue;
      const double* bp = b + p * n;
      for (size_t j = 0; j < n; ++j) ci[j] += av * bp[j];
    }
  }
}

void matmul(const double* a, const double* b, double* c, size_t m, size_t k, size_t n) {
#ifdef _OPENMP
#pragma omp parallel for num_threads(effective_threads()) schedule(static)
  for (long long i = 0; i < static_cast<long long>(m); ++i) {
    matmul_serial(a + i * k, b, c + i * n, 1, k, n);
  }
#else
  matmul_serial(a, b, c, m, k, n);
#endif
}

void matmul_transb_serial(const double* a, const double* b, double* c, size_t m, size_t k, size_t n) {
  for (size_t i = 0; i < m; ++i) {
    const double* ai = a + i * k;
    double* ci = c + i * n;
    for (size_t j = 0; j < n; ++j) {
      const double* bj = b + j * k;
      double acc = 0.0;
      for (size_t p = 0; p < k; ++p) acc += ai[p] * bj[p];
      ci[j] = acc;
    }
  }
}

void matmul_transb(const double* a, const double* b, double* c, size_t m, size_t k, size_t n) {
#ifdef _OPENMP
#pragma omp parallel for num_threads(effective_threads()) schedule(static)
  for (long long i = 0; i < static_cast<long long>(m); ++i) {
    matmul_transb_serial(a + i * k, b, c + i * n, 1, k, n);
  }
#else
  matmul_transb_serial(a, b, c, m, k, n);
#endif
}

void matmul_transa_serial(const double* a, const double* b, double* c, size_t m, size_t k, size_t n) {
  // C[p][j] = sum_i A[i][p] * B[i][j]; loop order keeps B rows contiguous.
  std::fill(c, c + k * n, 0.0);
  for (size_t i = 0; i < m; ++i) {
    const double* ai = a + i * k;
    const double* bi = b + i * n;
    for (size_t p = 0; p < k; ++p) {
      const double av = ai[p];
      if (av == 0.0) continue;
      double* cp = c + p * n;
      for (size_t j = 0; j < n; ++j) cp[j] += av * bi[j];
    }
  }
}

void matmul_transa(const double* a, const double* b, double* c, size_t m, size_t k, size_t n) {
#ifdef _OPENMP
  // Each thread owns a block of output rows p; the i-accumulation order per
  // element matches the serial loop.
#pragma omp parallel for num_threads(effective_threads()) schedule(static)
  for (long long p = 0; p < static_cast<long long>(k); ++p) {
    double* cp = c + p * n;
    std::fill(cp, cp + n, 0.0);
    for (size_t i = 0; i < m; ++i) {
      const double av = a[i * k + p];
      if (av == 0.0) continue;
      const double* bi = b + i * n;
      for (size_t j = 0; j < n; ++j) cp[j] += av * bi[j];
    }
  }
#else
  matmul_transa_serial(a, b, c, m, k, n);
#endif
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul: inner dimensions differ");
  Matrix c(a.rows, b.cols);
  matmul(a.data.data(), b.data.data(), c.data.data(), a.rows, a.cols, b.cols);
  return c;
}

Matrix matmul_transb(const Matrix& a, const Matrix& b) {
  if (a.cols != b.cols) throw std::invalid_argument("matmul_transb: inner dimensions differ");
  Matrix c(a.rows, b.rows);
  matmul_transb(a.data.data(), b.data.data(), c.data.data(), a.rows, a.cols, b.rows);
  return c;
}

Matrix matmul_transa(const Matrix& a, const Matrix& b) {
  if (a.rows != b.rows) throw std::invalid_argument("matmul_transa: inner dimensions differ");
  Matrix c(a.cols, b.cols);
  matmul_transa(a.data.data(), b.data.data(), c.data.data(), a.rows, a.cols, b.cols);
  return c;
}

void matmul(const Matrix& a, const Matrix& b, Matrix& c) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul: inner dimensions differ");
  c.require_shape(a.rows, b.cols, "matmul output");
  matmul(a.data.data(), b.data.data(), c.data.data(), a.rows, a.cols, b.cols);
}

void matmul_transb(const Matrix& a, const Matrix& b, Matrix& c) {
  if (a.cols != b.cols) throw std::invalid_argument("matmul_transb: inner dimensions differ");
  c.require_shape(a.rows, b.rows, "matmul_transb output");
  matmul_transb(a.data.data(), b.data.data(), c.data.data(), a.rows, a.cols, b.rows);
}

void matmul_transa(const Matrix& a, const Matrix& b, Matrix& c) {
  if (a.rows != b.rows) throw std::invalid_argument("matmul_transa: inner dimensions differ");
  c.require_shape(a.cols, b.cols, "matmul_transa output");
  matmul_transa(a.data.data(), b.data.data(), c.data.data(), a.rows, a.cols, b.cols);
}

void pairwise_sqdist_serial(const double* x, size_t n, size_t d, double* out) {
  for (size_t i = 0; i < n; ++i) {
    out[i * n + i] = 0.0;
    const double* xi = x + i * d;
    for (size_t j = i + 1; j < n; ++j) {
      const double* xj = x + j * d;
      double acc = 0.0;
      for (size_t p = 0; p < d; ++p) {
        const double diff = xi[p] - xj[p];
        acc += diff * diff;
      }
      out[i * n + j] = acc;
      out[j * n + i] = acc;
    }
  }
}

void pairwise_sqdist(const double* x, size_t n, size_t d, double* out) {
#ifdef _OPENMP
#pragma omp parallel for num_threads(effective_threads()) schedule(dynamic, 8)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    const double* xi = x + i * d;
    out[i * n + i] = 0.0;
    for (size_t j = i + 1; j < n; ++j) {
      const double* xj = x + j * d;
      double acc = 0.0;
      for (size_t p = 0; p < d; ++p) {
        const double diff = xi[p] - xj[p];
        acc += diff * diff;
      }
      out[i * n + j] = acc;
      out[j * n + i] = acc;
    }
  }
#else
  pairwise_sqdist_serial(x, n, d, out);
#endif
}

std::vector<double> mc_samples_serial(size_t count, uint64_t seed, const SampleFn& draw) {
  std::vector<double> out(count);
  for (size_t i = 0; i < count; ++i) {
    Rng rng(stream_seed(seed, i));
    out[i] = draw(rng);
  }
  return out;
}

std::vector<double> mc_samples(size_t count, uint64_t seed, const SampleFn& draw) {
  std::vector<double> out(count);
#ifdef _OPENMP
#pragma omp parallel for num_threads(effective_threads()) schedule(static)
  for (long long i = 0; i < static_cast<long long>(count); ++i) {
    Rng rng(stream_seed(seed, static_cast<size_t>(i)));
    out[i] = draw(rng);
  }
#else
  for (size_t i = 0; i < count; ++i) {
    Rng rng(stream_seed(seed, i));
    out[i] = draw(rng);
  }
#endif
  return out;
}

std::vector<uint64_t> histogram(const std::vector<double>& values, double lo, double hi, size_t bins) {
  if (bins == 0) throw std::invalid_argument("histogram: bins must be positive");
  if (!(hi > lo)) throw std::invalid_argument("histogram: empty range");
  std::vector<uint64_t> counts(bins, 0);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (double v : values) {
    if (v < lo || v > hi) continue;
    size_t b = static_cast<size_t>((v - lo) / width);
    if (b >= bins) b = bins - 1;
    ++counts[b];
  }
  return counts;
}

}  // namespace padp::kernels
