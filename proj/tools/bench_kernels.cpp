// Serial vs OpenMP reductions on Riemann-sum workloads.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gaugeset/corpus.hpp"
#include "gaugeset/kernels.hpp"

using namespace gaugeset;

namespace {

template <class F>
double best_ms(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel benchmark: serial reference vs OpenMP reduction"};
  std::size_t n = 1u << 20;
  int reps = 5;
  std::vector<std::string> entries{"G2", "G4", "G5"};
  app.add_option("--cells", n, "uniform cells per sum");
  app.add_option("--reps", reps, "repetitions (best time is reported)");
  app.add_option("--entries", entries, "corpus entries to integrate");
  CLI11_PARSE(app, argc, argv);

  std::printf("threads=%d cells=%zu reps=%d\n", omp_get_max_threads(), n, reps);
  std::printf("%-6s %6s %12s %12s %8s %12s %10s\n", "entry", "width", "serial_ms", "parallel_ms", "speedup",
              "max_diff", "repeatable");

  const double h = 1.0 / static_cast<double>(n);
  for (const auto& name : entries) {
    const auto spec = corpus_get(name);
    const std::size_t w = spec.gamma.width();
    const kernels::ItemFn item = [&](std::size_t i, std::span<double> out) {
      spec.gamma.eval((static_cast<double>(i) + 0.5) * h, out);
      for (double& v : out) v *= h;
    };
    std::vector<double> s, p, p2;
    const double ts = best_ms(reps, [&] { s = kernels::reduce_serial(n, w, item); });
    const double tp = best_ms(reps, [&] { p = kernels::reduce_parallel(n, w, item); });
    p2 = kernels::reduce_parallel(n, w, item);
    double diff = 0.0;
    for (std::size_t k = 0; k < w; ++k) diff = std::max(diff, std::abs(s[k] - p[k]));
    std::printf("%-6s %6zu %12.2f %12.2f %8.2f %12.3e %10s\n", name.c_str(), w, ts, tp, ts / tp, diff,
                p == p2 ? "yes" : "no");
  }
  return 0;
}
