#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gaugeset::kernels {

/// Writes the contribution of item i (a vector of `width` reals) into `out`.
/// Must be safe to call concurrently for different i.
using ItemFn = std::function<void(std::size_t i, std::span<double> out)>;

/// Reference reduction: items summed left to right with Neumaier
/// compensation per component.
std::vector<double> reduce_serial(std::size_t n, std::size_t width, const ItemFn& item);

/// OpenMP reduction over fixed blocks of kBlock items. Each block is summed
/// with compensation, then block partials are combined pairwise. The block
/// layout does not depend on the thread count, so results are bit-identical
/// across runs and thread counts, and agree with reduce_serial to within a
/// couple of ulps.
std::vector<double> reduce_parallel(std::size_t n, std::size_t width, const ItemFn& item);

inline constexpr std::size_t kBlock = 1024;

/// Dispatches to reduce_parallel or reduce_serial.
inline std::vector<double> reduce(std::size_t n, std::size_t width, const ItemFn& item, bool parallel) {
  return parallel ? reduce_parallel(n, width, item) : reduce_serial(n, width, item);
}

/// Correctly rounded sum (Shewchuk partials). Independent of term order.
double exact_sum(std::span<const double> terms);

/// Runs body(i) for i in [0, n) on the OpenMP team.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace gaugeset::kernels
