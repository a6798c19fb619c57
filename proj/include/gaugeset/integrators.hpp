#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gaugeset/convex_sets.hpp"
#include "gaugeset/partitions.hpp"
#include "gaugeset/primitive.hpp"

namespace gaugeset {

/// t -> Gamma(t), written as a support vector on `grid`. The evaluator must be
/// deterministic, effect-free and produce canonical vectors.
class Multifunction {
 public:
  using Eval = std::function<void(double t, std::span<double> out)>;

  Multifunction(GridPtr grid, Eval eval, std::string name = "");
  /// Wraps a set-valued function; each value is checked against the grid.
  static Multifunction from_sets(GridPtr grid, std::function<SupportSet(double)> fn, std::string name = "");
  /// t -> {f(t)} for a point-valued f.
  static Multifunction singleton(GridPtr grid, std::function<Point(double)> f, std::string name = "");

  SupportSet operator()(double t) const;
  void eval(double t, std::span<double> out) const { eval_(t, out); }
  const GridPtr& grid() const noexcept { return grid_; }
  std::size_t width() const noexcept { return grid_->size(); }
  const std::string& name() const noexcept { return name_; }

 private:
  GridPtr grid_;
  Eval eval_;
  std::string name_;
};

using ScalarFunction = std::function<double(double)>;

/// Nested gauges delta_1 >= delta_2 >= ... used as refinement levels.
struct GaugeSchedule {
  std::vector<Gauge> levels;

  /// delta_n = base / 2^n, n = 1..levels.
  static GaugeSchedule halving(const Gauge& base, int levels = 12);
  /// Level n replaced by its piecewise-constant measurable surrogate.
  static GaugeSchedule measurable(const GaugeSchedule& plain);

  std::size_t size() const noexcept { return levels.size(); }
  /// Positivity of every level and pointwise monotonicity on a 10^3-point
  /// probe (plus anchors). Throws InvalidGauge.
  void validate() const;
};

enum class Verdict { converged, diverged, inconclusive };
const char* to_string(Verdict v);

enum class GaugeMode { plain, measurable };

struct IntegratorOptions {
  double tol = 1e-4;
  int probes = 8;
  std::uint64_t seed = 0;
  double divergence_bound = 1e3;
  int max_depth = 40;
  GaugeMode mode = GaugeMode::plain;
  bool parallel = true;
  /// Points where the integrand blows up; the Birkhoff bad-tag search and the
  /// McShane anchor search look there.
  std::vector<double> singular_points;
  /// Birkhoff trials per level.
  int trials = 8;
};

struct LevelRecord {
  int level = 0;
  std::size_t cells = 0;
  std::vector<double> sum;
  /// d_H to the previous level; NaN on the first level.
  double cauchy = 0.0;
  /// max d_H between the level sum and its re-tagged probe sums.
  double probe_spread = 0.0;
  /// max(cauchy, probe_spread); the quantity the verdict reads.
  double residual = 0.0;
  /// Per-component |difference| to the previous level (NaN on level 1).
  std::vector<double> component_residual;
  double norm = 0.0;
  double wall_ms = 0.0;
};

struct IntegrationReport {
  std::string method;
  std::string integrand;
  /// Null for scalar integrals.
  GridPtr grid;
  std::vector<double> estimate;
  std::vector<LevelRecord> levels;
  Verdict verdict = Verdict::inconclusive;
  std::string diagnostics;
  std::uint64_t seed = 0;
  double tol = 0.0;
  /// The limit is certified only through finitely many probes.
  bool approximate = true;
  /// Birkhoff only: every permuted summation order gave bit-identical sums.
  std::optional<bool> permutation_invariant;

  SupportSet estimate_set() const;
  double last_residual() const;
};

/// Verdict rule shared by all integrators. `residuals` and `norms` are per
/// level; NaN residuals (first level) are skipped and residuals below
/// 1e-13 max(1, norm) count as zero.
///  - diverged if some norm exceeds `bound`;
///  - converged if the last residual is below tol and the last three are
///    nonincreasing;
///  - diverged if the last four residuals never contract by more than 10%
///    per level and the last is at least tol;
///  - inconclusive otherwise.
Verdict classify(std::span<const double> residuals, std::span<const double> norms, double tol, double bound);

/// Minkowski sum of |I_i| * Gamma(t_i) over the cells.
SupportSet riemann_sum(const Multifunction& gamma, const TaggedPartition& p, bool parallel = true);
/// Same, on raw vectors.
std::vector<double> riemann_sum_values(const Multifunction& gamma, const TaggedPartition& p, bool parallel = true);

IntegrationReport henstock_integrate(const Multifunction& gamma, const GaugeSchedule& sched,
                                     const IntegratorOptions& options = {});
IntegrationReport mcshane_integrate(const Multifunction& gamma, const GaugeSchedule& sched,
                                    const IntegratorOptions& options = {});
IntegrationReport birkhoff_integrate(const Multifunction& gamma, std::span<const MeasurableSpec> levels,
                                     const IntegratorOptions& options = {});

/// n = 2, 4, ..., 2^levels pieces at a fixed interleave depth.
std::vector<MeasurableSpec> birkhoff_schedule(int levels = 10, int interleave_depth = 3);

struct ScalarReport {
  double estimate = 0.0;
  IntegrationReport report;
};

/// One-dimensional Henstock-Kurzweil integral of a real function.
ScalarReport scalar_hk(const ScalarFunction& phi, const GaugeSchedule& sched, const IntegratorOptions& options = {});

struct ProfileReport {
  IntegrationReport report;
  std::vector<Verdict> direction_verdicts;
  std::vector<std::size_t> divergent_directions;
  /// Largest change made by re-canonicalizing the directional vector.
  double canonical_gap = 0.0;
  bool consistent = false;
  /// Every direction converged and the vector is a support function.
  bool hkp = false;
};

/// Scalar HK integral of t -> sigma(u_k, Gamma(t)) for every grid direction.
ProfileReport directional_profile(const Multifunction& gamma, const GaugeSchedule& sched,
                                  const IntegratorOptions& options = {});

// ---------------------------------------------------------------------------
// Variational sums

/// sum_j d_H(Phi(I_j), |I_j| Gamma(t_j)).
double variational_sum(const Multifunction& gamma, const Primitive& phi, const TaggedPartition& p,
                       bool parallel = true);

enum class TagMode { perron, free };

struct VariationalReport {
  IntegrationReport report;
  /// Worst-tag variational sum per level.
  std::vector<double> sums;
};

/// Variational Henstock (perron) or McShane (free) check along a schedule.
/// Per level the cells come from cousin_build and each cell takes the tag
/// with the largest gap among several admissible candidates, so sums are
/// sup-over-tags surrogates. Converged iff the sums fall below tol.
VariationalReport vh_check(const Multifunction& gamma, const Primitive& phi, const GaugeSchedule& sched,
                           TagMode mode, const IntegratorOptions& options = {});

/// Primitive of gamma on dyadic cells: each leaf of a Perron partition
/// refined at least to `depth` carries its Riemann term. `gauge` should be
/// finer than the gauges later used against it.
Primitive build_primitive(const Multifunction& gamma, const Gauge& gauge, int depth = 14);

/// Exact primitive I -> |I| C of a constant set.
Primitive constant_primitive(const SupportSet& c, int depth = 1);

struct VariationalSet {
  IntervalUnion intervals;
  std::vector<double> points;
  bool empty() const { return intervals.empty() && points.empty(); }
};

/// Parses "[a,b]" (unions joined by "u" or "U") or "{p, q, ...}".
VariationalSet parse_variational_set(const std::string& text);

struct VariationalMeasureReport {
  std::vector<double> estimates;
  double value = 0.0;
  bool approximate = true;
};

/// Greedy lower estimates of Var(Phi, delta_n, E) along the schedule.
VariationalMeasureReport variational_measure_estimate(const Primitive& phi, const VariationalSet& e,
                                                      const GaugeSchedule& sched, std::uint64_t seed = 0);

}  // namespace gaugeset
