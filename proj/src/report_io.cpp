#include "gaugeset/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace gaugeset {

namespace {

// NaN and infinities are not JSON numbers; they are written as null.
Json num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json nums(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

Json grid_json(const GridPtr& g) {
  if (!g) return nullptr;
  Json j;
  j["d"] = g->dim();
  j["directions"] = g->size();
  return j;
}

Json flag_json(const FlagEntry& e) {
  Json j;
  j["value"] = to_string(e.value);
  j["provenance"] = e.provenance;
  return j;
}

double max_component(const std::vector<double>& v) {
  double m = std::numeric_limits<double>::quiet_NaN();
  for (double x : v) {
    if (std::isnan(x)) continue;
    m = std::isnan(m) ? x : std::max(m, x);
  }
  return m;
}

}  // namespace

Json to_json(const SupportSet& s) {
  Json j;
  j["d"] = s.dim();
  if (s.dim() == 1) j["interval"] = {num(-s[0]), num(s[1])};
  std::vector<double> v(s.values().begin(), s.values().end());
  j["support"] = nums(v);
  return j;
}

Json to_json(const IntegrationReport& r, JsonStyle style) {
  Json j;
  j["method"] = r.method;
  j["integrand"] = r.integrand;
  j["grid"] = grid_json(r.grid);
  j["verdict"] = to_string(r.verdict);
  j["estimate"] = nums(r.estimate);
  if (r.grid && r.grid->dim() == 1 && r.estimate.size() == 2) {
    j["interval"] = {num(-r.estimate[0]), num(r.estimate[1])};
  }
  j["last_residual"] = num(r.last_residual());
  j["tol"] = r.tol;
  j["seed"] = r.seed;
  j["approximate"] = r.approximate;
  if (r.permutation_invariant) j["permutation_invariant"] = *r.permutation_invariant;
  j["diagnostics"] = r.diagnostics;
  Json levels = Json::array();
  for (const auto& lv : r.levels) {
    Json l;
    l["level"] = lv.level;
    l["cells"] = lv.cells;
    l["cauchy"] = num(lv.cauchy);
    l["probe_spread"] = num(lv.probe_spread);
    l["residual"] = num(lv.residual);
    l["max_dir_residual"] = num(max_component(lv.component_residual));
    l["norm"] = num(lv.norm);
    l["sum"] = nums(lv.sum);
    if (!style.deterministic) l["wall_ms"] = lv.wall_ms;
    levels.push_back(std::move(l));
  }
  j["levels"] = std::move(levels);
  return j;
}

Json to_json(const ProfileReport& r, JsonStyle style) {
  Json j = to_json(r.report, style);
  Json dirs = Json::array();
  for (Verdict v : r.direction_verdicts) dirs.push_back(to_string(v));
  j["direction_verdicts"] = std::move(dirs);
  j["divergent_directions"] = r.divergent_directions;
  j["canonical_gap"] = num(r.canonical_gap);
  j["consistent"] = r.consistent;
  j["hkp"] = r.hkp;
  return j;
}

Json to_json(const VariationalReport& r, JsonStyle style) {
  Json j = to_json(r.report, style);
  j["variational_sums"] = nums(r.sums);
  return j;
}

Json to_json(const VariationalMeasureReport& r) {
  Json j;
  j["estimates"] = nums(r.estimates);
  j["value"] = num(r.value);
  j["approximate"] = r.approximate;
  return j;
}

Json to_json(const DecompositionReport& r, JsonStyle style) {
  Json j;
  j["theorem"] = to_string(r.theorem);
  j["integrand"] = r.integrand;
  j["selection"] = r.selection;
  j["passed"] = r.passed;
  j["additivity_gap"] = num(r.additivity_gap);
  Json z;
  z["probes"] = r.zero.probes;
  z["violations"] = r.zero.violations;
  z["min_support"] = num(r.zero.min_support);
  j["zero_membership"] = std::move(z);
  j["gamma_integral"] = nums(r.gamma_integral);
  j["remainder_integral"] = nums(r.remainder_integral);
  j["selection_integral"] = {num(r.selection_integral.x), num(r.selection_integral.y)};
  Json clauses = Json::array();
  for (const auto& c : r.clauses) {
    Json k;
    k["name"] = c.name;
    k["report"] = c.report;
    k["value"] = num(c.value);
    k["bound"] = num(c.bound);
    k["passed"] = c.passed;
    k["detail"] = c.detail;
    clauses.push_back(std::move(k));
  }
  j["clauses"] = std::move(clauses);
  Json reports = Json::object();
  for (const auto& [id, rep] : r.reports) reports[id] = to_json(rep, style);
  j["reports"] = std::move(reports);
  return j;
}

Json to_json(const RiemannProbeReport& r) {
  Json j;
  j["plain"] = nums(r.plain);
  j["strong"] = nums(r.strong);
  j["intervals"] = r.intervals;
  j["max_plain"] = num(r.max_plain);
  j["max_strong"] = num(r.max_strong);
  j["complement_measure"] = num(r.complement_measure);
  j["passed"] = r.passed;
  j["strongly_passed"] = r.strongly_passed;
  return j;
}

Json to_json(const Flags& f) {
  Json j;
  for (const auto& name : Flags::names()) j[name] = flag_json(f.get(name));
  return j;
}

Json to_json(const MultifunctionSpec& s) {
  Json j;
  j["name"] = s.name;
  j["description"] = s.description;
  j["d"] = s.d;
  Json params = Json::object();
  for (const auto& [k, v] : s.parameters) params[k] = v;
  j["parameters"] = std::move(params);
  j["flags"] = to_json(s.flags);
  j["truth"] = s.truth ? to_json(*s.truth) : Json(nullptr);
  j["truth_provenance"] = s.truth_provenance;
  j["singular_points"] = s.singular_points;
  j["tol"] = s.schedules.tol;
  j["variational_tol"] = s.schedules.variational_tol;
  return j;
}

std::vector<CsvRow> csv_rows(const IntegrationReport& r) {
  std::vector<CsvRow> rows;
  for (const auto& lv : r.levels) rows.push_back({lv.level, lv.residual, max_component(lv.component_residual), lv.wall_ms});
  return rows;
}

void write_csv(std::ostream& os, const std::vector<CsvRow>& rows, JsonStyle style) {
  os << "level,residual,max_dir_residual,wall_ms\n";
  char buf[128];
  auto fmt = [&](double x) -> std::string {
    if (std::isnan(x)) return "nan";
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
  };
  for (const auto& row : rows) {
    os << row.level << ',' << fmt(row.residual) << ',' << fmt(row.max_dir_residual) << ','
       << (style.deterministic ? std::string("0") : fmt(row.wall_ms)) << '\n';
  }
}

}  // namespace gaugeset
