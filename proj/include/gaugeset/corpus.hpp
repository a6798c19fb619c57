#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gaugeset/integrators.hpp"

namespace gaugeset {

/// F(t) = t^2 sin(t^-2), F(0) = 0.
double oscillating_primitive(double t);
/// F'(t) = 2t sin(t^-2) - (2/t) cos(t^-2), F'(0) = 0. Below |t| = 1e-8 the
/// analytic value at 0 is returned instead of evaluating t^-2.
double oscillating_derivative(double t);

enum class Flag { yes, no, unknown };
const char* to_string(Flag f);

struct FlagEntry {
  Flag value = Flag::unknown;
  std::string provenance;
};

struct Flags {
  FlagEntry henstock;
  FlagEntry mcshane;
  FlagEntry birkhoff;
  FlagEntry vh;
  FlagEntry vms;
  FlagEntry hkp;
  FlagEntry integrably_bounded;

  /// Lookup by name: henstock, mcshane, birkhoff, vH, vMS, hkp, integrably_bounded.
  const FlagEntry& get(std::string_view name) const;
  static const std::vector<std::string>& names();
};

/// Gauge schedules and tolerances tuned per entry.
struct EntrySchedules {
  GaugeSchedule henstock;
  GaugeSchedule mcshane;
  /// Used by vh_check in both modes.
  GaugeSchedule variational;
  /// Used for the primitive against which variational sums are taken.
  Gauge primitive_gauge = Gauge::constant(1.0);
  /// Used by variational_measure_estimate; shrinks everywhere, including at
  /// the singular points.
  GaugeSchedule measure;
  std::vector<MeasurableSpec> birkhoff;
  double tol = 1e-4;
  double variational_tol = 1e-3;
};

struct MultifunctionSpec {
  std::string name;
  std::string description;
  int d = 1;
  std::map<std::string, double> parameters;
  Multifunction gamma;
  Flags flags;
  std::optional<SupportSet> truth;
  std::string truth_provenance;
  /// Points where the integrand is unbounded.
  std::vector<double> singular_points;
  EntrySchedules schedules;
};

class UnknownEntry : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CorpusParams {
  /// Direction count for d = 2 entries.
  std::size_t m = 64;
  /// Number of refinement levels (0 keeps each entry's default).
  int levels = 0;
};

/// Registry entries G1..G6.
MultifunctionSpec corpus_get(const std::string& name, const CorpusParams& params = {});
const std::vector<std::string>& corpus_names();

/// Singular schedule used by the F'-based entries: at level n the gauge is
/// 2^-(n+1) at t = 0 and min(cap 2^-n, kappa 2^(-n/4) t^3) elsewhere, so the cell at 0
/// is forced to carry the tag 0 and cells elsewhere resolve the oscillation.
GaugeSchedule singular_schedule(int levels, double kappa, double cap);

}  // namespace gaugeset
