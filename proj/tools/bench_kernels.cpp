// Compares the serial reference kernels against their OpenMP counterparts
// and checks that both produce bitwise-identical results.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

#include "padp/kernels.hpp"
#include "padp/matrix.hpp"
#include "padp/rng.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename Fn>
double time_best_of(int reps, Fn&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto start = Clock::now();
    fn();
    best = std::min(best, seconds_since(start));
  }
  return best;
}

void report(const char* name, double serial_s, double parallel_s, bool identical) {
  std::printf("%-18s serial %8.4fs  parallel %8.4fs  speedup %5.2fx  bitwise %s\n", name, serial_s,
              parallel_s, serial_s / parallel_s, identical ? "equal" : "DIFFERENT");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) padp::kernels::set_threads(std::atoi(argv[1]));
  std::printf("threads: %d\n", padp::kernels::threads());

  padp::Rng rng(42);

  {
    const size_t m = 192, k = 192, n = 192;
    padp::Matrix a(m, k), b(k, n), c_serial(m, n), c_parallel(m, n);
    for (double& v : a.data) v = rng.uniform(-1.0, 1.0);
    for (double& v : b.data) v = rng.uniform(-1.0, 1.0);

    const double ts = time_best_of(3, [&] {
      padp::kernels::matmul_serial(a.data.data(), b.data.data(), c_serial.data.data(), m, k, n);
    });
    const double tp = time_best_of(3, [&] {
      padp::kernels::matmul(a.data.data(), b.data.data(), c_parallel.data.data(), m, k, n);
    });
    const bool same = std::memcmp(c_serial.data.data(), c_parallel.data.data(),
                                  c_serial.data.size() * sizeof(double)) == 0;
    report("matmul", ts, tp, same);
  }

  {
    const size_t n = 1200, d = 64;
    std::vector<double> x(n * d);
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    std::vector<double> d_serial(n * n), d_parallel(n * n);

    const double ts = time_best_of(3, [&] {
      padp::kernels::pairwise_sqdist_serial(x.data(), n, d, d_serial.data());
    });
    const double tp = time_best_of(3, [&] {
      padp::kernels::pairwise_sqdist(x.data(), n, d, d_parallel.data());
    });
    const bool same =
        std::memcmp(d_serial.data(), d_parallel.data(), d_serial.size() * sizeof(double)) == 0;
    report("pairwise_sqdist", ts, tp, same);
  }

  {
    const size_t count = 4000000;
    const auto draw = [](padp::Rng& r) { return r.gaussian(); };
    std::vector<double> s_serial, s_parallel;

    const double ts =
        time_best_of(3, [&] { s_serial = padp::kernels::mc_samples_serial(count, 7, draw); });
    const double tp = time_best_of(3, [&] { s_parallel = padp::kernels::mc_samples(count, 7, draw); });
    const bool same = std::memcmp(s_serial.data(), s_parallel.data(),
                                  s_serial.size() * sizeof(double)) == 0;
    report("mc_samples", ts, tp, same);
  }

  return 0;
}
