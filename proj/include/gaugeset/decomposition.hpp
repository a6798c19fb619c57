#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gaugeset/corpus.hpp"
#include "gaugeset/integrators.hpp"
#include "gaugeset/partitions.hpp"

namespace gaugeset {

/// t -> Steiner point of Gamma(t).
PointFunction steiner_selection(const Multifunction& gamma);

/// t -> a support point of Gamma(t) in grid direction `direction`. For d = 1
/// that is the endpoint (index 0 is -1, index 1 is +1); for d = 2 it is the
/// grid-polygon vertex maximizing <u, .>, ties going to the lowest index.
PointFunction argmax_selection(const Multifunction& gamma, std::size_t direction);

class NotASelection : public std::invalid_argument {
 public:
  NotASelection(const std::string& what, double t) : std::invalid_argument(what), t_(t) {}
  double t() const noexcept { return t_; }

 private:
  double t_;
};

/// Points at which selections and remainders are checked: 0, 1 and the
/// first count - 2 van der Corput points.
std::vector<double> probe_points(std::size_t count = 1000);

/// G(t) = Gamma(t) - f(t). Throws NotASelection when f(t) leaves Gamma(t) at
/// a probe point (support slack 1e-9, relative above norm 1).
Multifunction subtract_selection(const Multifunction& gamma, const PointFunction& f, std::size_t probes = 1000);

struct ZeroMembership {
  std::size_t probes = 0;
  std::size_t violations = 0;
  /// Smallest support value of G over probes and directions (>= 0 iff 0 in G).
  double min_support = 0.0;
};

ZeroMembership zero_membership(const Multifunction& g, std::size_t probes = 1000);

enum class Theorem { t33, t42, t55 };
const char* to_string(Theorem th);
/// Accepts t33, t42, t55 (case-insensitive, optional dot: T3.3).
Theorem parse_theorem(const std::string& text);
/// Corpus flag whose value predicts the outcome of the check.
const char* expected_flag(Theorem th);

struct Clause {
  std::string name;
  /// Id of the report the clause reads, empty for derived quantities.
  std::string report;
  double value = 0.0;
  double bound = 0.0;
  bool passed = false;
  std::string detail;
};

struct DecompositionReport {
  Theorem theorem = Theorem::t33;
  std::string integrand;
  std::string selection;
  ZeroMembership zero;
  std::vector<Clause> clauses;
  /// Integration reports keyed by id ("gamma", "remainder", "selection.x", ...).
  std::vector<std::pair<std::string, IntegrationReport>> reports;
  std::vector<double> gamma_integral;
  std::vector<double> remainder_integral;
  Point selection_integral;
  double additivity_gap = 0.0;
  bool passed = false;

  const IntegrationReport* find(const std::string& id) const;
};

struct DecompositionOptions {
  EntrySchedules schedules;
  /// Seed, singular points and parallelism for every integrator call.
  IntegratorOptions integrator;
  std::string selection_id = "custom";
  std::size_t probes = 1000;
};

/// Runs the clauses of the chosen theorem on G = Gamma - f:
///  - t33: Gamma Henstock, G McShane, f componentwise HK, additivity gap;
///  - t42: Gamma Henstock with measurable gauges, G Birkhoff, f HK, gap;
///  - t55: the t33 clauses plus variational Henstock checks on Gamma, {f}
///    and G, and G Birkhoff.
/// Failures are recorded in the clauses; integrator errors become failed
/// clauses with the message in `detail`.
DecompositionReport verify_decomposition(const Multifunction& gamma, const PointFunction& f, Theorem th,
                                         double tol, const DecompositionOptions& options);

// ---------------------------------------------------------------------------
// Riemann measurability

struct RiemannProbeOptions {
  double delta = 1e-3;
  int trials = 8;
  double eps = 0.05;
  std::uint64_t seed = 0;
  /// Seeded pairs per interval on top of the endpoint pair.
  int pairs = 16;
};

struct RiemannProbeReport {
  /// Per trial: || sum (f(t_i) - f(t'_i)) |I_i| || and sum ||f(t_i) - f(t'_i)|| |I_i|.
  std::vector<double> plain;
  std::vector<double> strong;
  std::vector<std::size_t> intervals;
  double max_plain = 0.0;
  double max_strong = 0.0;
  /// lambda([0,1] \ F).
  double complement_measure = 0.0;
  /// Every plain statistic below eps.
  bool passed = false;
  /// Every strong statistic below eps.
  bool strongly_passed = false;
};

/// Draws seeded families of nonoverlapping intervals of length < delta inside
/// F and, per interval, the most spread pair among the endpoints and seeded
/// samples. Pairs are oriented to grow the plain sum, so the plain statistic
/// is a lower bound of its supremum; in d = 1 it equals the strong one.
RiemannProbeReport riemann_measurability_probe(const PointFunction& f, const IntervalUnion& set,
                                               const RiemannProbeOptions& options = {});

}  // namespace gaugeset
