#include "gaugeset/integrators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "gaugeset/kernels.hpp"
#include "gaugeset/random.hpp"
#include "tagging.hpp"

namespace gaugeset {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

using detail::CandidateSearch;
using detail::max_abs;
using detail::max_value;
using detail::sup_dist;

struct Integrand {
  std::size_t width;
  Multifunction::Eval eval;
  bool set_valued;
};

Integrand integrand_of(const Multifunction& g) { return {g.width(), [&g](double t, std::span<double> o) { g.eval(t, o); }, true}; }

// Norm used for the divergence bound: the set norm for support vectors, the
// absolute value for scalars and per-direction profiles.
double level_norm(const Integrand& f, std::span<const double> sum) {
  return f.set_valued ? std::abs(max_value(sum)) : max_abs(sum);
}

std::vector<double> tagged_sum(const Integrand& f, std::span<const TaggedCell> cells, std::span<const double> tags,
                               bool parallel) {
  return kernels::reduce(
      cells.size(), f.width,
      [&](std::size_t i, std::span<double> out) {
        f.eval(tags[i], out);
        const double len = cells[i].length();
        for (double& v : out) v *= len;
      },
      parallel);
}

// Re-tags every cell for one probe. Even probes (and every Perron probe) pick
// a random admissible candidate; odd free probes pick the candidate that is
// extremal in one component, cycling through components and signs.
std::vector<double> probe_tags(const Integrand& f, const TaggedPartition& p, const CandidateSearch& search,
                               std::size_t probe, bool greedy, std::size_t selector) {
  const auto cells = p.cells();
  std::vector<double> tags(cells.size());
  const std::size_t component = selector % f.width;
  const double sign = (selector / f.width) % 2 == 0 ? 1.0 : -1.0;
  kernels::parallel_for(cells.size(), [&](std::size_t i) {
    thread_local std::vector<double> cand;
    thread_local std::vector<double> buf;
    search.collect(probe, i, cells[i], cand);
    if (!greedy) {
      tags[i] = cand.size() > 1 ? cand[1 + (mix64(i ^ (probe << 32)) % (cand.size() - 1))] : cand[0];
      return;
    }
    buf.resize(f.width);
    double best = -std::numeric_limits<double>::infinity();
    double best_t = cand[0];
    for (double t : cand) {
      f.eval(t, buf);
      const double v = sign * buf[component];
      if (v > best) {
        best = v;
        best_t = t;
      }
    }
    tags[i] = best_t;
  });
  return tags;
}

enum class TagStyle { perron, free };

IntegrationReport run_levels(const Integrand& f, const GaugeSchedule& sched, const IntegratorOptions& opt,
                             TagStyle style, std::string method) {
  IntegrationReport rep;
  rep.method = std::move(method);
  rep.seed = opt.seed;
  rep.tol = opt.tol;
  sched.validate();
  if (opt.mode == GaugeMode::measurable) {
    for (const Gauge& g : sched.levels) {
      if (g.kind() != Gauge::Kind::piecewise) {
        throw std::invalid_argument("measurable-gauge mode needs piecewise gauges");
      }
    }
  }

  std::vector<double> prev;
  std::vector<double> residuals;
  std::vector<double> norms;
  for (std::size_t n = 0; n < sched.levels.size(); ++n) {
    const auto start = Clock::now();
    const Gauge& g = sched.levels[n];
    TaggedPartition p;
    try {
      p = cousin_build(g, {opt.max_depth, 0});
    } catch (const DepthExceeded& e) {
      rep.diagnostics = e.what();
      rep.verdict = Verdict::inconclusive;
      return rep;
    }
    const auto cells = p.cells();
    std::vector<double> tags(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) tags[i] = cells[i].t;

    LevelRecord rec;
    rec.level = static_cast<int>(n + 1);
    rec.cells = cells.size();
    rec.sum = tagged_sum(f, cells, tags, opt.parallel);
    rec.norm = level_norm(f, rec.sum);

    std::vector<double> comp_spread(f.width, 0.0);
    const CandidateSearch search{g, style == TagStyle::free, opt.seed, rec.level};
    for (int k = 0; k < opt.probes; ++k) {
      const bool greedy = style == TagStyle::free && k % 2 == 1;
      const auto ptags = probe_tags(f, p, search, static_cast<std::size_t>(k), greedy, static_cast<std::size_t>(k / 2));
      const auto s = tagged_sum(f, cells, ptags, opt.parallel);
      for (std::size_t c = 0; c < f.width; ++c) comp_spread[c] = std::max(comp_spread[c], std::abs(s[c] - rec.sum[c]));
      rec.norm = std::max(rec.norm, level_norm(f, s));
    }
    rec.probe_spread = opt.probes > 0 ? max_value(comp_spread) : 0.0;
    rec.component_residual.assign(f.width, kNaN);
    if (prev.empty()) {
      rec.cauchy = kNaN;
      rec.residual = kNaN;
    } else {
      rec.cauchy = sup_dist(rec.sum, prev);
      rec.residual = std::max(rec.cauchy, rec.probe_spread);
      for (std::size_t c = 0; c < f.width; ++c) {
        rec.component_residual[c] = std::max(std::abs(rec.sum[c] - prev[c]), comp_spread[c]);
      }
    }
    prev = rec.sum;
    residuals.push_back(rec.residual);
    norms.push_back(rec.norm);
    rec.wall_ms = elapsed_ms(start);
    rep.levels.push_back(std::move(rec));
    if (!(norms.back() <= opt.divergence_bound)) break;
  }
  rep.estimate = prev;
  rep.verdict = classify(residuals, norms, opt.tol, opt.divergence_bound);
  if (rep.verdict == Verdict::diverged && !(norms.back() <= opt.divergence_bound)) {
    rep.diagnostics = "sum norm exceeded the divergence bound";
  }
  return rep;
}

}  // namespace

// ---------------------------------------------------------------------------

Multifunction::Multifunction(GridPtr grid, Eval eval, std::string name)
    : grid_(std::move(grid)), eval_(std::move(eval)), name_(std::move(name)) {
  if (!grid_ || !eval_) throw std::invalid_argument("multifunction needs a grid and an evaluator");
}

Multifunction Multifunction::from_sets(GridPtr grid, std::function<SupportSet(double)> fn, std::string name) {
  GridPtr g = grid;
  return Multifunction(
      std::move(grid),
      [g, fn = std::move(fn)](double t, std::span<double> out) {
        const SupportSet s = fn(t);
        require_same_grid(*g, *s.grid());
        std::copy(s.values().begin(), s.values().end(), out.begin());
      },
      std::move(name));
}

Multifunction Multifunction::singleton(GridPtr grid, std::function<Point(double)> f, std::string name) {
  GridPtr g = grid;
  return Multifunction(
      std::move(grid),
      [g, f = std::move(f)](double t, std::span<double> out) {
        const Point x = f(t);
        const auto dirs = g->directions();
        for (std::size_t k = 0; k < dirs.size(); ++k) out[k] = dot(dirs[k], x);
      },
      std::move(name));
}

SupportSet Multifunction::operator()(double t) const {
  std::vector<double> v(width());
  eval_(t, v);
  return SupportSet::from_canonical(grid_, std::move(v));
}

GaugeSchedule GaugeSchedule::halving(const Gauge& base, int levels) {
  if (levels < 1) throw std::invalid_argument("schedule needs at least one level");
  GaugeSchedule s;
  for (int n = 1; n <= levels; ++n) s.levels.push_back(base.scaled(std::ldexp(1.0, -n)));
  return s;
}

GaugeSchedule GaugeSchedule::measurable(const GaugeSchedule& plain) {
  GaugeSchedule s;
  for (const Gauge& g : plain.levels) {
    const FiltrationPiece whole{IntervalUnion({{0.0, 1.0}}), std::numeric_limits<double>::max()};
    s.levels.push_back(build_measurable_gauge(g, std::span<const FiltrationPiece>(&whole, 1)));
  }
  return s;
}

void GaugeSchedule::validate() const {
  if (levels.empty()) throw InvalidGauge("gauge schedule is empty");
  std::vector<double> probe{0.0, 1.0};
  for (std::uint64_t i = 1; i <= 1000; ++i) probe.push_back(van_der_corput(i));
  for (const Gauge& g : levels) probe.insert(probe.end(), g.anchors().begin(), g.anchors().end());
  for (std::size_t n = 0; n < levels.size(); ++n) {
    validate_gauge(levels[n]);
    if (n == 0) continue;
    for (double t : probe) {
      if (levels[n](t) > levels[n - 1](t) * (1.0 + 1e-12)) {
        std::ostringstream os;
        os.precision(17);
        os << "gauge schedule is not monotone at level " << n + 1 << ", t = " << t;
        throw InvalidGauge(os.str());
      }
    }
  }
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::converged: return "converged";
    case Verdict::diverged: return "diverged";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

SupportSet IntegrationReport::estimate_set() const {
  if (!grid) throw std::logic_error("scalar report has no estimate set");
  return SupportSet::from_canonical(grid, estimate);
}

double IntegrationReport::last_residual() const {
  for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
    if (!std::isnan(it->residual)) return it->residual;
  }
  return kNaN;
}

Verdict classify(std::span<const double> residuals, std::span<const double> norms, double tol, double bound) {
  for (double n : norms) {
    if (!(n <= bound)) return Verdict::diverged;
  }
  // Differences at the rounding level of the sums carry no ordering.
  std::vector<double> r;
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    const double x = residuals[i];
    if (std::isnan(x)) continue;
    const double scale = i < norms.size() ? std::max(1.0, norms[i]) : 1.0;
    r.push_back(x <= 1e-13 * scale ? 0.0 : x);
  }
  const std::size_t k = r.size();
  if (k >= 3 && r[k - 1] < tol && r[k - 1] <= r[k - 2] && r[k - 2] <= r[k - 3]) return Verdict::converged;
  if (k >= 4 && r[k - 1] >= tol) {
    bool stalled = true;
    for (std::size_t i = k - 3; i < k; ++i) stalled = stalled && r[i] >= 0.9 * r[i - 1];
    if (stalled) return Verdict::diverged;
  }
  return Verdict::inconclusive;
}

std::vector<double> riemann_sum_values(const Multifunction& gamma, const TaggedPartition& p, bool parallel) {
  std::vector<double> tags;
  tags.reserve(p.size());
  for (const auto& c : p.cells()) tags.push_back(c.t);
  return tagged_sum(integrand_of(gamma), p.cells(), tags, parallel);
}

SupportSet riemann_sum(const Multifunction& gamma, const TaggedPartition& p, bool parallel) {
  return SupportSet::from_canonical(gamma.grid(), riemann_sum_values(gamma, p, parallel));
}

IntegrationReport henstock_integrate(const Multifunction& gamma, const GaugeSchedule& sched,
                                     const IntegratorOptions& options) {
  auto rep = run_levels(integrand_of(gamma), sched, options, TagStyle::perron,
                        options.mode == GaugeMode::measurable ? "henstock-measurable" : "henstock");
  rep.integrand = gamma.name();
  rep.grid = gamma.grid();
  return rep;
}

IntegrationReport mcshane_integrate(const Multifunction& gamma, const GaugeSchedule& sched,
                                    const IntegratorOptions& options) {
  auto rep = run_levels(integrand_of(gamma), sched, options, TagStyle::free,
                        options.mode == GaugeMode::measurable ? "mcshane-measurable" : "mcshane");
  rep.integrand = gamma.name();
  rep.grid = gamma.grid();
  return rep;
}

ScalarReport scalar_hk(const ScalarFunction& phi, const GaugeSchedule& sched, const IntegratorOptions& options) {
  const Integrand f{1, [&phi](double t, std::span<double> o) { o[0] = phi(t); }, false};
  ScalarReport out;
  out.report = run_levels(f, sched, options, TagStyle::perron, "scalar-hk");
  out.estimate = out.report.estimate.empty() ? kNaN : out.report.estimate[0];
  return out;
}

ProfileReport directional_profile(const Multifunction& gamma, const GaugeSchedule& sched,
                                  const IntegratorOptions& options) {
  const Integrand f{gamma.width(), [&gamma](double t, std::span<double> o) { gamma.eval(t, o); }, false};
  ProfileReport out;
  out.report = run_levels(f, sched, options, TagStyle::perron, "hkp");
  out.report.integrand = gamma.name();
  out.report.grid = gamma.grid();

  const std::size_t m = gamma.width();
  out.direction_verdicts.assign(m, Verdict::inconclusive);
  for (std::size_t c = 0; c < m; ++c) {
    std::vector<double> res;
    std::vector<double> norms;
    for (const auto& lv : out.report.levels) {
      res.push_back(lv.component_residual[c]);
      norms.push_back(std::abs(lv.sum[c]));
    }
    out.direction_verdicts[c] = classify(res, norms, options.tol, options.divergence_bound);
    if (out.direction_verdicts[c] == Verdict::diverged) out.divergent_directions.push_back(c);
  }
  if (out.report.estimate.size() == m) {
    try {
      const auto canon = canonicalize(*gamma.grid(), out.report.estimate);
      out.canonical_gap = sup_dist(canon, out.report.estimate);
      out.consistent = out.canonical_gap <= options.tol;
    } catch (const std::invalid_argument&) {
      out.canonical_gap = std::numeric_limits<double>::infinity();
      out.consistent = false;
    }
  }
  out.hkp = out.consistent && std::all_of(out.direction_verdicts.begin(), out.direction_verdicts.end(),
                                          [](Verdict v) { return v == Verdict::converged; });
  if (!out.hkp && out.report.verdict == Verdict::converged) out.report.verdict = Verdict::inconclusive;
  if (!out.divergent_directions.empty()) out.report.verdict = Verdict::diverged;
  return out;
}

// ---------------------------------------------------------------------------
// Birkhoff

std::vector<MeasurableSpec> birkhoff_schedule(int levels, int interleave_depth) {
  std::vector<MeasurableSpec> out;
  for (int k = 1; k <= levels; ++k) {
    out.push_back({std::size_t{1} << k, interleave_depth, PieceTagRule::seeded_random, 0});
  }
  return out;
}

IntegrationReport birkhoff_integrate(const Multifunction& gamma, std::span<const MeasurableSpec> specs,
                                     const IntegratorOptions& opt) {
  if (specs.empty()) throw std::invalid_argument("birkhoff_integrate: no levels");
  if (opt.trials < 1) throw std::invalid_argument("birkhoff_integrate: trials must be at least 1");
  std::vector<MeasurablePartition> parts;
  for (const auto& s : specs) {
    parts.push_back(measurable_partition(s));
    if (parts.size() > 1 && !parts.back().refines(parts[parts.size() - 2])) {
      throw std::invalid_argument("birkhoff_integrate: partition levels do not refine");
    }
  }

  IntegrationReport rep;
  rep.method = "birkhoff";
  rep.integrand = gamma.name();
  rep.grid = gamma.grid();
  rep.seed = opt.seed;
  rep.tol = opt.tol;
  const std::size_t w = gamma.width();
  bool permutation_ok = true;

  // Exact (order-free) Birkhoff sum for fixed tags; `terms` is filled with
  // the component-major products lambda(A_n) * sigma(u_c, Gamma(t_n)).
  auto exact_level_sum = [&](const MeasurablePartition& mp, std::vector<double>& terms) {
    const std::size_t np = mp.pieces.size();
    terms.assign(np * w, 0.0);
    kernels::parallel_for(np, [&](std::size_t j) {
      thread_local std::vector<double> buf;
      buf.resize(w);
      gamma.eval(mp.pieces[j].tag, buf);
      for (std::size_t c = 0; c < w; ++c) terms[c * np + j] = mp.pieces[j].measure * buf[c];
    });
    std::vector<double> sum(w);
    for (std::size_t c = 0; c < w; ++c) sum[c] = kernels::exact_sum({terms.data() + c * np, np});
    return sum;
  };

  std::vector<double> prev;
  std::vector<double> residuals;
  std::vector<double> norms;
  std::vector<double> terms;
  for (std::size_t n = 0; n < parts.size(); ++n) {
    const auto start = Clock::now();
    LevelRecord rec;
    rec.level = static_cast<int>(n + 1);
    rec.cells = parts[n].pieces.size();

    std::vector<std::vector<double>> trials;
    for (int r = 0; r < opt.trials; ++r) {
      MeasurablePartition mp = parts[n];
      retag_pieces(mp, PieceTagRule::seeded_random, mix64(opt.seed ^ mix64((n << 20) + static_cast<std::size_t>(r))));
      trials.push_back(exact_level_sum(mp, terms));

      if (r == 0) {
        const std::size_t np = mp.pieces.size();
        std::vector<std::size_t> order(np);
        std::vector<double> permuted(np);
        for (int q = 0; q < 8; ++q) {
          std::iota(order.begin(), order.end(), std::size_t{0});
          CounterRng rng(opt.seed, 0xb1u, n, static_cast<std::uint64_t>(q));
          for (std::size_t i = np; i > 1; --i) std::swap(order[i - 1], order[rng.next() % i]);
          for (std::size_t c = 0; c < w; ++c) {
            for (std::size_t i = 0; i < np; ++i) permuted[i] = terms[c * np + order[i]];
            if (kernels::exact_sum(permuted) != trials[0][c]) permutation_ok = false;
          }
        }
      }
    }

    // Bad-tag ladder: in each piece that contains a singular point, move the
    // tag towards it and keep the tag with the largest set norm.
    if (!opt.singular_points.empty()) {
      MeasurablePartition mp = parts[n];
      retag_pieces(mp, PieceTagRule::seeded_random, mix64(opt.seed ^ mix64(n << 20)));
      bool changed = false;
      std::vector<double> buf(w);
      for (double s : opt.singular_points) {
        for (auto& piece : mp.pieces) {
          if (piece.set.distance(s) > 0.0) continue;
          double best = -1.0;
          double best_t = piece.tag;
          for (double side : {1.0, -1.0}) {
            for (int j = 1; j <= 48; ++j) {
              const double t = s + side * std::ldexp(1.0, -j);
              if (t < 0.0 || t > 1.0 || !piece.set.contains(t)) continue;
              gamma.eval(t, buf);
              const double nm = std::abs(max_value(buf));
              if (nm > best) {
                best = nm;
                best_t = t;
              }
            }
          }
          piece.tag = best_t;
          changed = true;
        }
      }
      if (changed) trials.push_back(exact_level_sum(mp, terms));
    }

    // Level value: the trial farthest from the previous level's value.
    std::size_t pick = 0;
    if (!prev.empty()) {
      double worst = -1.0;
      for (std::size_t r = 0; r < trials.size(); ++r) {
        const double d = sup_dist(trials[r], prev);
        if (d > worst) {
          worst = d;
          pick = r;
        }
      }
    }
    rec.sum = trials[pick];
    rec.norm = 0.0;
    rec.probe_spread = 0.0;
    for (const auto& t : trials) {
      rec.norm = std::max(rec.norm, std::abs(max_value(t)));
      rec.probe_spread = std::max(rec.probe_spread, sup_dist(t, rec.sum));
    }
    rec.component_residual.assign(w, kNaN);
    if (prev.empty()) {
      rec.cauchy = kNaN;
      rec.residual = kNaN;
    } else {
      rec.cauchy = sup_dist(rec.sum, prev);
      rec.residual = std::max(rec.cauchy, rec.probe_spread);
      for (std::size_t c = 0; c < w; ++c) rec.component_residual[c] = std::abs(rec.sum[c] - prev[c]);
    }
    prev = rec.sum;
    residuals.push_back(rec.residual);
    norms.push_back(rec.norm);
    rec.wall_ms = elapsed_ms(start);
    rep.levels.push_back(std::move(rec));
  }
  rep.estimate = prev;
  rep.permutation_invariant = permutation_ok;
  rep.verdict = classify(residuals, norms, opt.tol, opt.divergence_bound);
  if (rep.verdict == Verdict::diverged && !(norms.back() <= opt.divergence_bound)) {
    rep.diagnostics = "sum norm exceeded the divergence bound";
  }
  for (double nm : norms) {
    if (!(nm <= opt.divergence_bound)) rep.diagnostics = "a bad-tag sum exceeded the divergence bound";
  }
  return rep;
}

}  // namespace gaugeset
