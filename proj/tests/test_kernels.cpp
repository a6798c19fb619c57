#include <omp.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "catch_amalgamated.hpp"

#include "gaugeset/kernels.hpp"
#include "gaugeset/random.hpp"

using namespace gaugeset;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

kernels::ItemFn harmonic_items() {
  return [](std::size_t i, std::span<double> out) {
    const double x = static_cast<double>(i + 1);
    out[0] = 1.0 / x;
    out[1] = std::sin(x) / x;
    out[2] = (i % 2 == 0 ? 1.0 : -1.0) * 1e8;
  };
}

}  // namespace

TEST_CASE("serial and parallel reductions agree with the harmonic oracle") {
  const std::size_t n = 100000;
  const auto item = harmonic_items();
  const auto s = kernels::reduce_serial(n, 3, item);
  const auto p = kernels::reduce_parallel(n, 3, item);
  // H_n = ln n + gamma + 1/(2n) - 1/(12 n^2) + ...
  const double hn = std::log(static_cast<double>(n)) + 0.57721566490153286 + 0.5 / n - 1.0 / (12.0 * n * n);
  CHECK_THAT(s[0], WithinAbs(hn, 1e-12));
  CHECK_THAT(p[0], WithinAbs(hn, 1e-12));
  CHECK_THAT(p[1], WithinAbs(s[1], 1e-13));
  CHECK(s[2] == 0.0);
  CHECK(p[2] == 0.0);
}

TEST_CASE("parallel reduction is bit-identical across runs and thread counts") {
  const std::size_t n = 54321;
  const auto item = harmonic_items();
  const int saved = omp_get_max_threads();
  std::vector<std::vector<double>> runs;
  for (int threads : {1, 2, 3, 8}) {
    omp_set_num_threads(threads);
    runs.push_back(kernels::reduce_parallel(n, 3, item));
    runs.push_back(kernels::reduce_parallel(n, 3, item));
  }
  omp_set_num_threads(saved);
  for (const auto& r : runs) CHECK(r == runs.front());
}

TEST_CASE("exact_sum is correctly rounded and order independent") {
  std::vector<double> t{1e100, 1.0, -1e100};
  CHECK(kernels::exact_sum(t) == 1.0);
  std::vector<double> tiny{1.0, 1e-16, 1e-16, 1e-16, 1e-16};
  CHECK(kernels::exact_sum(tiny) == 1.0000000000000004);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(5000);
  for (auto& x : v) x = u(rng) * std::pow(10.0, static_cast<int>(u(rng) * 20));
  const double ref = kernels::exact_sum(v);
  for (int i = 0; i < 5; ++i) {
    std::shuffle(v.begin(), v.end(), rng);
    REQUIRE(kernels::exact_sum(v) == ref);
  }
}

TEST_CASE("compensated serial sum of 0.1 stays accurate") {
  const std::size_t n = 1000000;
  const auto s = kernels::reduce_serial(n, 1, [](std::size_t, std::span<double> o) { o[0] = 0.1; });
  CHECK_THAT(s[0], WithinRel(100000.0, 1e-15));
}

TEST_CASE("parallel_for visits every index once") {
  std::vector<int> hits(10007, 0);
  kernels::parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
}

TEST_CASE("counter RNG streams are reproducible and distinct") {
  CounterRng a(42, 1, 2, 3), b(42, 1, 2, 3), c(42, 1, 2, 4);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    REQUIRE(x == b.next());
    differs = differs || x != c.next();
  }
  CHECK(differs);
  CounterRng r(9);
  double mean = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double x = r.uniform();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
    mean += x;
  }
  CHECK_THAT(mean / 100000.0, WithinAbs(0.5, 0.01));
}

TEST_CASE("van der Corput points reverse binary digits") {
  CHECK(van_der_corput(1) == 0.5);
  CHECK(van_der_corput(2) == 0.25);
  CHECK(van_der_corput(3) == 0.75);
  CHECK(van_der_corput(6) == 0.375);
}
