// Timing comparison between the serial reference kernels and the OpenMP
// versions: Q-symmetrization over output cells and the partition-sum moment
// formula.  Results are identical bit for bit (see tests/test_parallel.cpp);
// this target only measures throughput.

#include <chrono>
#include <cstdio>
#include <numbers>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qfock/partitions.hpp"
#include "qfock/symmetrize.hpp"

using namespace qfock;
namespace chrono = std::chrono;

namespace {

FockTensor random_tensor(int m, int n, Rng& rng) {
  FockTensor t(m, n);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = cplx(rng.sym(), rng.sym());
  return t;
}

template <typename F>
double time_ms(F&& fn, int reps) {
  auto t0 = chrono::high_resolution_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  auto t1 = chrono::high_resolution_clock::now();
  return chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both columns run the serial path\n");
#endif
  Rng rng(2024);

  std::printf("\n%-28s %10s %10s %8s\n", "kernel", "serial ms", "omp ms", "speedup");

  for (auto [m, n] : {std::pair{3, 6}, std::pair{4, 6}, std::pair{5, 5}}) {
    SiteGrid g = SiteGrid::uniform(m, 1.0, 0.8);
    QKernel k = build_anyonic_kernel(g, std::polar(1.0, 0.9));
    FockTensor f = random_tensor(m, n, rng);
    volatile double sink = 0.0;
    const int reps = 3;
    double ts = time_ms([&] { sink = symmetrize_serial(k, f).max_abs(); }, reps);
    double tp = time_ms([&] { sink = symmetrize(k, f).max_abs(); }, reps);
    char label[64];
    std::snprintf(label, sizeof label, "symmetrize m=%d n=%d", m, n);
    std::printf("%-28s %10.2f %10.2f %7.2fx\n", label, ts, tp, ts / tp);
    (void)sink;
  }

  for (auto [m, n] : {std::pair{3, 6}, std::pair{5, 8}}) {
    SiteGrid g = SiteGrid::uniform(m, 1.0, 0.7);
    QKernel k = build_anyonic_kernel(g, std::polar(1.0, 1.7));
    std::vector<FockTensor> fs;
    for (int i = 0; i < n; ++i) {
      FockTensor f(m, 1);
      for (int s = 0; s < m; ++s) f[s] = cplx(rng.sym());
      fs.push_back(f);
    }
    volatile double sink = 0.0;
    const int reps = (n <= 6) ? 20 : 3;
    double ts = time_ms([&] { sink = std::abs(moment_formula_serial(k, 0.7, fs)); }, reps);
    double tp = time_ms([&] { sink = std::abs(moment_formula(k, 0.7, fs)); }, reps);
    char label[64];
    std::snprintf(label, sizeof label, "moment formula m=%d n=%d", m, n);
    std::printf("%-28s %10.3f %10.3f %7.2fx\n", label, ts, tp, ts / tp);
    (void)sink;
  }
  return 0;
}
