#include "gaugeset/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <omp.h>

namespace gaugeset::kernels {

namespace {

struct Compensated {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }

  void merge(const Compensated& other) {
    add(other.sum);
    comp += other.comp;
  }

  double value() const { return sum + comp; }
};

}  // namespace

std::vector<double> reduce_serial(std::size_t n, std::size_t width, const ItemFn& item) {
  std::vector<Compensated> acc(width);
  std::vector<double> buf(width);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(buf.begin(), buf.end(), 0.0);
    item(i, buf);
    for (std::size_t k = 0; k < width; ++k) acc[k].add(buf[k]);
  }
  std::vector<double> out(width);
  for (std::size_t k = 0; k < width; ++k) out[k] = acc[k].value();
  return out;
}

std::vector<double> reduce_parallel(std::size_t n, std::size_t width, const ItemFn& item) {
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<Compensated> partial(blocks * width);

#pragma omp parallel
  {
    std::vector<double> buf(width);
#pragma omp for schedule(dynamic, 4)
    for (std::ptrdiff_t bi = 0; bi < static_cast<std::ptrdiff_t>(blocks); ++bi) {
      const std::size_t b = static_cast<std::size_t>(bi);
      Compensated* acc = partial.data() + b * width;
      const std::size_t end = std::min(n, (b + 1) * kBlock);
      for (std::size_t i = b * kBlock; i < end; ++i) {
        std::fill(buf.begin(), buf.end(), 0.0);
        item(i, buf);
        for (std::size_t k = 0; k < width; ++k) acc[k].add(buf[k]);
      }
    }
  }

  // Pairwise tree over block partials; the tree shape depends only on n.
  for (std::size_t stride = 1; stride < blocks; stride *= 2) {
    for (std::size_t b = 0; b + stride < blocks; b += 2 * stride) {
      for (std::size_t k = 0; k < width; ++k) {
        partial[b * width + k].merge(partial[(b + stride) * width + k]);
      }
    }
  }
  std::vector<double> out(width, 0.0);
  if (blocks > 0) {
    for (std::size_t k = 0; k < width; ++k) out[k] = partial[k].value();
  }
  return out;
}

double exact_sum(std::span<const double> terms) {
  // Shewchuk / msum: keep a list of non-overlapping partials whose exact sum
  // equals the exact sum of the terms seen so far.
  std::vector<double> partials;
  for (double x : terms) {
    if (!std::isfinite(x)) throw std::invalid_argument("exact_sum: non-finite term");
    std::size_t i = 0;
    for (double y : partials) {
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials[i++] = lo;
      x = hi;
    }
    partials.resize(i);
    partials.push_back(x);
  }
  // Round the partials to nearest, following the half-way correction used by
  // Python's math.fsum.
  if (partials.empty()) return 0.0;
  std::size_t n = partials.size();
  double hi = partials[--n];
  double lo = 0.0;
  while (n > 0) {
    const double x = hi;
    const double y = partials[--n];
    hi = x + y;
    const double yr = hi - x;
    lo = y - yr;
    if (lo != 0.0) break;
  }
  if (n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0))) {
    const double y = lo * 2.0;
    const double x = hi + y;
    const double yr = x - hi;
    if (y == yr) hi = x;
  }
  return hi;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) body(static_cast<std::size_t>(i));
}

}  // namespace gaugeset::kernels
