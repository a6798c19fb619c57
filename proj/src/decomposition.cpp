#include "gaugeset/decomposition.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <new>
#include <sstream>

#include "gaugeset/kernels.hpp"
#include "gaugeset/random.hpp"

namespace gaugeset {

namespace {

double slack_for(const SupportSet& s) { return 1e-9 * std::max(1.0, s.norm()); }

Point support_point(const SupportSet& s, std::size_t k) {
  const auto& grid = *s.grid();
  if (grid.dim() == 1) return {k == 0 ? -s[0] : s[1], 0.0};
  const auto verts = grid_vertices(s);
  const Point u = grid.direction(k);
  std::size_t best = 0;
  double best_dot = -std::numeric_limits<double>::infinity();
  const double tie = 1e-12 * std::max(1.0, s.norm());
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const double d = dot(u, verts[i]);
    if (d > best_dot + tie) {
      best_dot = d;
      best = i;
    }
  }
  return verts[best];
}

std::string format_t(double t) {
  std::ostringstream os;
  os.precision(17);
  os << t;
  return os.str();
}

Clause convergence_clause(std::string name, std::string id, const IntegrationReport& r) {
  Clause c;
  c.name = std::move(name);
  c.report = std::move(id);
  c.value = r.last_residual();
  c.bound = r.tol;
  c.passed = r.verdict == Verdict::converged;
  c.detail = to_string(r.verdict);
  return c;
}

Clause failed_clause(std::string name, std::string id, const std::string& why) {
  Clause c;
  c.name = std::move(name);
  c.report = std::move(id);
  c.value = std::numeric_limits<double>::quiet_NaN();
  c.detail = "error: " + why;
  return c;
}

}  // namespace

PointFunction steiner_selection(const Multifunction& gamma) {
  return [gamma](double t) { return steiner_point(gamma(t)); };
}

PointFunction argmax_selection(const Multifunction& gamma, std::size_t direction) {
  if (direction >= gamma.width()) throw std::invalid_argument("argmax_selection: direction outside the grid");
  return [gamma, direction](double t) { return support_point(gamma(t), direction); };
}

std::vector<double> probe_points(std::size_t count) {
  std::vector<double> ts{0.0, 1.0};
  for (std::size_t i = 1; ts.size() < count; ++i) ts.push_back(van_der_corput(i));
  ts.resize(std::min(ts.size(), count));
  return ts;
}

Multifunction subtract_selection(const Multifunction& gamma, const PointFunction& f, std::size_t probes) {
  for (double t : probe_points(probes)) {
    const SupportSet s = gamma(t);
    const Point p = f(t);
    if (!contains(s, p, slack_for(s))) {
      throw NotASelection("f(t) is not in Gamma(t) at t = " + format_t(t), t);
    }
  }
  const GridPtr grid = gamma.grid();
  Multifunction g(
      grid,
      [gamma, f, grid](double t, std::span<double> out) {
        gamma.eval(t, out);
        const Point p = f(t);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] -= dot(grid->direction(k), p);
      },
      gamma.name() + " - f");
  const ZeroMembership z = zero_membership(g, probes);
  if (z.violations > 0) throw NotASelection("Gamma - f misses 0 at a probe point", 0.0);
  return g;
}

ZeroMembership zero_membership(const Multifunction& g, std::size_t probes) {
  ZeroMembership z;
  z.min_support = std::numeric_limits<double>::infinity();
  std::vector<double> v(g.width());
  for (double t : probe_points(probes)) {
    g.eval(t, v);
    ++z.probes;
    double lo = std::numeric_limits<double>::infinity();
    double mag = 1.0;
    for (double x : v) {
      lo = std::min(lo, x);
      mag = std::max(mag, std::abs(x));
    }
    z.min_support = std::min(z.min_support, lo);
    if (lo < -1e-9 * mag) ++z.violations;
  }
  return z;
}

const char* to_string(Theorem th) {
  switch (th) {
    case Theorem::t33: return "t33";
    case Theorem::t42: return "t42";
    case Theorem::t55: return "t55";
  }
  return "t33";
}

Theorem parse_theorem(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (c != '.') s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (s == "t33") return Theorem::t33;
  if (s == "t42") return Theorem::t42;
  if (s == "t55") return Theorem::t55;
  throw std::invalid_argument("unknown theorem: " + text + " (expected t33, t42 or t55)");
}

const char* expected_flag(Theorem th) {
  switch (th) {
    case Theorem::t33: return "henstock";
    case Theorem::t42: return "birkhoff";
    case Theorem::t55: return "vH";
  }
  return "henstock";
}

const IntegrationReport* DecompositionReport::find(const std::string& id) const {
  for (const auto& [k, r] : reports) {
    if (k == id) return &r;
  }
  return nullptr;
}

DecompositionReport verify_decomposition(const Multifunction& gamma, const PointFunction& f, Theorem th,
                                         double tol, const DecompositionOptions& options) {
  DecompositionReport out;
  out.theorem = th;
  out.integrand = gamma.name();
  out.selection = options.selection_id;

  const Multifunction g = subtract_selection(gamma, f, options.probes);
  out.zero = zero_membership(g, options.probes);
  {
    Clause c;
    c.name = "remainder contains 0";
    c.value = std::max(0.0, -out.zero.min_support);
    c.bound = 1e-9;
    c.passed = out.zero.violations == 0;
    c.detail = std::to_string(out.zero.violations) + " of " + std::to_string(out.zero.probes) + " probes miss 0";
    out.clauses.push_back(c);
  }

  const EntrySchedules& s = options.schedules;
  IntegratorOptions io = options.integrator;
  io.tol = tol;
  const bool measurable = th == Theorem::t42;
  IntegratorOptions mo = io;
  if (measurable) mo.mode = GaugeMode::measurable;

  // Each call is guarded: a gauge that cannot be met within the depth limit
  // is a failed clause, not a crash.
  auto guarded = [&](const std::string& name, const std::string& id, auto&& run) -> const IntegrationReport* {
    try {
      out.reports.emplace_back(id, run());
      out.clauses.push_back(convergence_clause(name, id, out.reports.back().second));
      return &out.reports.back().second;
    } catch (const std::bad_alloc&) {
      out.clauses.push_back(failed_clause(name, id, "out of memory"));
    } catch (const std::exception& e) {
      out.clauses.push_back(failed_clause(name, id, e.what()));
    }
    return nullptr;
  };

  out.reports.reserve(16);
  std::optional<GaugeSchedule> msched;
  if (measurable) {
    try {
      msched = GaugeSchedule::measurable(s.henstock);
    } catch (const std::exception& e) {
      out.clauses.push_back(failed_clause("measurable gauges", "", e.what()));
    }
  }

  const IntegrationReport* rg = nullptr;
  if (!measurable) {
    rg = guarded("Gamma Henstock", "gamma", [&] { return henstock_integrate(gamma, s.henstock, io); });
  } else if (msched) {
    rg = guarded("Gamma Henstock (measurable gauges)", "gamma", [&] { return henstock_integrate(gamma, *msched, mo); });
  }

  const IntegrationReport* rr = nullptr;
  if (measurable) {
    rr = guarded("G Birkhoff", "remainder", [&] { return birkhoff_integrate(g, s.birkhoff, io); });
  } else {
    rr = guarded("G McShane", "remainder", [&] { return mcshane_integrate(g, s.mcshane, io); });
  }

  const int dim = gamma.grid()->dim();
  std::vector<double> fint;
  bool f_ok = true;
  for (int c = 0; c < dim; ++c) {
    const std::string id = c == 0 ? "selection.x" : "selection.y";
    const ScalarFunction comp = c == 0 ? ScalarFunction([f](double t) { return f(t).x; })
                                       : ScalarFunction([f](double t) { return f(t).y; });
    const IntegrationReport* r = nullptr;
    if (measurable && msched) {
      r = guarded("f HK component " + std::to_string(c), id, [&] { return scalar_hk(comp, *msched, mo).report; });
    } else if (!measurable) {
      r = guarded("f HK component " + std::to_string(c), id, [&] { return scalar_hk(comp, s.henstock, io).report; });
    }
    if (r == nullptr || r->estimate.empty()) {
      f_ok = false;
      fint.push_back(std::numeric_limits<double>::quiet_NaN());
    } else {
      fint.push_back(r->estimate[0]);
    }
  }
  out.selection_integral = {fint[0], dim > 1 ? fint[1] : 0.0};

  {
    Clause c;
    c.name = "additivity gap";
    c.bound = tol;
    c.value = std::numeric_limits<double>::quiet_NaN();
    out.additivity_gap = c.value;
    if (rg && rr && f_ok) {
      out.gamma_integral = rg->estimate;
      out.remainder_integral = rr->estimate;
      std::vector<double> lhs(rg->estimate.size());
      double gap = 0.0;
      for (std::size_t k = 0; k < lhs.size(); ++k) {
        const double rhs = rr->estimate[k] + dot(gamma.grid()->direction(k), out.selection_integral);
        gap = std::max(gap, std::abs(rg->estimate[k] - rhs));
      }
      if (std::isfinite(gap)) {
        c.value = gap;
        out.additivity_gap = gap;
        c.passed = gap < tol;
      } else {
        c.detail = "non-finite estimate";
      }
      c.report = "gamma,remainder,selection";
      const bool inputs = rg->verdict == Verdict::converged && rr->verdict == Verdict::converged;
      if (!inputs) c.detail = "integrals not converged; the gap compares last-level sums";
    } else {
      c.detail = "an integral is missing";
    }
    out.clauses.push_back(c);
  }

  if (th == Theorem::t55) {
    IntegratorOptions vo = io;
    vo.tol = s.variational_tol;
    auto vh = [&](const Multifunction& m) {
      const Primitive phi = build_primitive(m, s.primitive_gauge);
      return vh_check(m, phi, s.variational, TagMode::perron, vo).report;
    };
    guarded("Gamma variational Henstock", "gamma.vh", [&] { return vh(gamma); });
    const Multifunction fs = Multifunction::singleton(gamma.grid(), f, "{f}");
    guarded("{f} variational Henstock", "selection.vh", [&] { return vh(fs); });
    guarded("G variational Henstock", "remainder.vh", [&] { return vh(g); });
    guarded("G Birkhoff", "remainder.birkhoff", [&] { return birkhoff_integrate(g, s.birkhoff, io); });
  }

  out.passed = std::all_of(out.clauses.begin(), out.clauses.end(), [](const Clause& c) { return c.passed; });
  return out;
}

// ---------------------------------------------------------------------------

RiemannProbeReport riemann_measurability_probe(const PointFunction& f, const IntervalUnion& set,
                                               const RiemannProbeOptions& opt) {
  if (!(opt.delta > 0.0) || opt.trials < 1 || opt.pairs < 0) {
    throw std::invalid_argument("riemann_measurability_probe: bad options");
  }
  RiemannProbeReport out;
  out.complement_measure = 1.0 - IntervalUnion({{0.0, 1.0}}).overlap(set);

  for (int trial = 0; trial < opt.trials; ++trial) {
    CounterRng rng(opt.seed, 0x5249454dULL, static_cast<std::uint64_t>(trial));
    // Mesh width strictly below delta, with a random offset.
    const double h = opt.delta * (0.5 + 0.49 * rng.uniform());
    const double shift = h * rng.uniform();

    std::vector<Interval> cells;
    for (const Interval& part : set.parts()) {
      double k0 = std::floor((part.a - shift) / h);
      for (double k = k0;; k += 1.0) {
        const double x = std::max(part.a, shift + k * h);
        const double y = std::min(part.b, shift + (k + 1.0) * h);
        if (x >= part.b) break;
        if (y > x) cells.push_back({x, y});
      }
    }

    // Most spread pair per cell: farthest sample from the first, then the
    // farthest from that one (exact in d = 1).
    std::vector<Point> diff(cells.size());
    const std::uint64_t tseed = opt.seed;
    kernels::parallel_for(cells.size(), [&](std::size_t i) {
      const Interval& c = cells[i];
      CounterRng r(tseed, 0x50414952ULL, static_cast<std::uint64_t>(trial), i);
      std::vector<Point> pts;
      pts.reserve(2 + 2 * static_cast<std::size_t>(opt.pairs));
      pts.push_back(f(c.a));
      pts.push_back(f(c.b));
      for (int j = 0; j < 2 * opt.pairs; ++j) pts.push_back(f(r.uniform(c.a, c.b)));
      auto farthest = [&](const Point& from) {
        std::size_t best = 0;
        double bd = -1.0;
        for (std::size_t j = 0; j < pts.size(); ++j) {
          const double d = norm(pts[j] - from);
          if (d > bd) {
            bd = d;
            best = j;
          }
        }
        return best;
      };
      const std::size_t p = farthest(pts[0]);
      const std::size_t q = farthest(pts[p]);
      const double w = c.length();
      diff[i] = w * (pts[q] - pts[p]);
    });

    // Orientation follows the running sum; the totals are exact sums so the
    // plain statistic never exceeds the strong one through rounding.
    Point running{0.0, 0.0};
    std::vector<double> xs, ys, strong_terms;
    xs.reserve(diff.size());
    ys.reserve(diff.size());
    strong_terms.reserve(diff.size());
    for (const Point& d : diff) {
      const Point o = dot(running, d) >= 0.0 ? d : -d;
      running = running + o;
      xs.push_back(o.x);
      ys.push_back(o.y);
      strong_terms.push_back(norm(d));
    }
    const double ps = std::hypot(kernels::exact_sum(xs), kernels::exact_sum(ys));
    const double ss = kernels::exact_sum(strong_terms);
    out.plain.push_back(ps);
    out.strong.push_back(ss);
    out.intervals.push_back(cells.size());
    out.max_plain = std::max(out.max_plain, ps);
    out.max_strong = std::max(out.max_strong, ss);
  }
  out.passed = out.max_plain < opt.eps;
  out.strongly_passed = out.max_strong < opt.eps;
  return out;
}

}  // namespace gaugeset
