#pragma once

// Helpers shared by the integrator sources; not part of the public API.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "gaugeset/partitions.hpp"
#include "gaugeset/random.hpp"

namespace gaugeset::detail {

inline double sup_dist(std::span<const double> x, std::span<const double> y) {
  double d = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) d = std::max(d, std::abs(x[k] - y[k]));
  return d;
}

inline double max_value(std::span<const double> x) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : x) m = std::max(m, v);
  return m;
}

inline double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

/// Admissible tags for one cell. Perron candidates stay in the cell; free
/// candidates may sit anywhere within their own gauge radius. The current tag
/// is always first.
struct CandidateSearch {
  const Gauge& gauge;
  bool free_tags;
  std::uint64_t seed;
  int level;
  bool endpoints = false;

  void collect(std::uint64_t probe, std::size_t i, const TaggedCell& c, std::vector<double>& out) const {
    out.clear();
    out.push_back(c.t);
    CounterRng rng(seed, static_cast<std::uint64_t>(level), probe, i);
    auto try_tag = [&](double t, bool perron) {
      if (!(t >= 0.0 && t <= 1.0)) return;
      TaggedCell x = c;
      x.t = t;
      if (cell_is_delta_fine(x, gauge, perron)) out.push_back(t);
    };
    if (endpoints) {
      try_tag(c.a, true);
      try_tag(c.b, true);
    }
    for (int r = 0; r < 4; ++r) try_tag(rng.uniform(c.a, c.b), true);
    if (!free_tags) return;
    for (double a : gauge.anchors()) try_tag(a, false);
    const double g = gauge(c.t);
    const double reach = g + c.length();
    for (int r = 0; r < 4; ++r) try_tag(rng.uniform(c.b - reach, c.a + reach), false);
    try_tag(c.b - 0.9 * g, false);
    try_tag(c.a + 0.9 * g, false);
  }
};

}  // namespace gaugeset::detail
