#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "padp/matrix.hpp"
#include "padp/rng.hpp"

// Data-parallel inner loops. Every kernel comes in two variants: a plain
// serial reference (the ground truth the tests compare against) and an
// OpenMP version used by default. Parallel variants assign each output
// element to exactly one thread and keep its accumulation order identical
// to the serial code, so results are bit-equal for any thread count.
namespace padp::kernels {

// 0 restores the OpenMP default.
void set_threads(int n);
int threads();

// C(m x n) = A(m x k) * B(k x n)
void matmul_serial(const double* a, const double* b, double* c, size_t m, size_t k, size_t n);
void matmul(const double* a, const double* b, double* c, size_t m, size_t k, size_t n);

// C(m x n) = A(m x k) * B(n x k)^T
void matmul_transb_serial(const double* a, const double* b, double* c, size_t m, size_t k, size_t n);
void matmul_transb(const double* a, const double* b, double* c, size_t m, size_t k, size_t n);

// C(k x n) = A(m x k)^T * B(m x n)
void matmul_transa_serial(const double* a, const double* b, double* c, size_t m, size_t k, size_t n);
void matmul_transa(const double* a, const double* b, double* c, size_t m, size_t k, size_t n);

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix matmul_transb(const Matrix& a, const Matrix& b);
Matrix matmul_transa(const Matrix& a, const Matrix& b);

// In-place variants writing into a preallocated, correctly shaped output.
void matmul(const Matrix& a, const Matrix& b, Matrix& c);
void matmul_transb(const Matrix& a, const Matrix& b, Matrix& c);
void matmul_transa(const Matrix& a, const Matrix& b, Matrix& c);

// out(n x n): squared Euclidean distances between rows of x(n x d).
void pairwise_sqdist_serial(const double* x, size_t n, size_t d, double* out);
void pairwise_sqdist(const double* x, size_t n, size_t d, double* out);

// Monte-Carlo sampling: draw(i) receives a stream seeded from
// splitmix64(seed + golden * (i + 1)), so sample i is the same value no
// matter how the index range is split across threads.
using SampleFn = std::function<double(Rng&)>;
std::vector<double> mc_samples_serial(size_t count, uint64_t seed, const SampleFn& draw);
std::vector<double> mc_samples(size_t count, uint64_t seed, const SampleFn& draw);

std::vector<uint64_t> histogram(const std::vector<double>& values, double lo, double hi, size_t bins);

}  // namespace padp::kernels
