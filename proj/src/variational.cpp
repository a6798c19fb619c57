#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "gaugeset/integrators.hpp"
#include "gaugeset/kernels.hpp"
#include "gaugeset/random.hpp"
#include "tagging.hpp"

namespace gaugeset {

namespace {

using detail::sup_dist;

// Midpoint sub-sums per leaf when building primitives.
constexpr int kLeafSubcells = 8;

double cell_gap(const Multifunction& gamma, const Primitive& phi, const TaggedCell& c, std::span<const double> tags,
                std::vector<double>& phiv, std::vector<double>& term) {
  std::fill(phiv.begin(), phiv.end(), 0.0);
  phi.accumulate(c.a, c.b, phiv);
  double worst = 0.0;
  for (double t : tags) {
    gamma.eval(t, term);
    const double len = c.length();
    for (double& v : term) v *= len;
    worst = std::max(worst, sup_dist(phiv, term));
  }
  return worst;
}

}  // namespace

double variational_sum(const Multifunction& gamma, const Primitive& phi, const TaggedPartition& p, bool parallel) {
  require_same_grid(*gamma.grid(), *phi.grid());
  const auto cells = p.cells();
  const auto out = kernels::reduce(
      cells.size(), 1,
      [&](std::size_t i, std::span<double> o) {
        thread_local std::vector<double> phiv;
        thread_local std::vector<double> term;
        phiv.resize(gamma.width());
        term.resize(gamma.width());
        const double t = cells[i].t;
        o[0] = cell_gap(gamma, phi, cells[i], std::span<const double>(&t, 1), phiv, term);
      },
      parallel);
  return out[0];
}

VariationalReport vh_check(const Multifunction& gamma, const Primitive& phi, const GaugeSchedule& sched, TagMode mode,
                           const IntegratorOptions& opt) {
  require_same_grid(*gamma.grid(), *phi.grid());
  sched.validate();
  VariationalReport out;
  auto& rep = out.report;
  rep.method = mode == TagMode::perron ? "vh" : "vms";
  rep.integrand = gamma.name();
  rep.seed = opt.seed;
  rep.tol = opt.tol;

  std::vector<double> norms;
  for (std::size_t n = 0; n < sched.levels.size(); ++n) {
    const auto start = std::chrono::steady_clock::now();
    const Gauge& g = sched.levels[n];
    TaggedPartition p;
    try {
      p = cousin_build(g, {opt.max_depth, 0});
    } catch (const DepthExceeded& e) {
      rep.diagnostics = e.what();
      rep.verdict = Verdict::inconclusive;
      return out;
    }
    const auto cells = p.cells();
    const detail::CandidateSearch search{g, mode == TagMode::free, opt.seed, static_cast<int>(n + 1), true};
    const auto v = kernels::reduce(
        cells.size(), 1,
        [&](std::size_t i, std::span<double> o) {
          thread_local std::vector<double> cand;
          thread_local std::vector<double> phiv;
          thread_local std::vector<double> term;
          phiv.resize(gamma.width());
          term.resize(gamma.width());
          search.collect(0, i, cells[i], cand);
          o[0] = cell_gap(gamma, phi, cells[i], cand, phiv, term);
        },
        opt.parallel);

    LevelRecord rec;
    rec.level = static_cast<int>(n + 1);
    rec.cells = cells.size();
    rec.sum = {v[0]};
    rec.cauchy = std::numeric_limits<double>::quiet_NaN();
    rec.probe_spread = 0.0;
    rec.residual = v[0];
    rec.norm = v[0];
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    out.sums.push_back(v[0]);
    norms.push_back(v[0]);
    rep.levels.push_back(std::move(rec));
  }
  rep.estimate = {out.sums.back()};
  rep.verdict = classify(out.sums, norms, opt.tol, opt.divergence_bound);
  return out;
}

Primitive build_primitive(const Multifunction& gamma, const Gauge& gauge, int depth) {
  if (depth < 0 || depth > 30) throw std::invalid_argument("build_primitive: depth out of range");
  const TaggedPartition p = cousin_build(gauge);
  const auto anchors = gauge.anchors();
  const double leaf_len = std::ldexp(1.0, -depth);

  // Each cousin cell is split into dyadic leaves no longer than 2^-depth.
  // Leaves get midpoint sub-sums, except in a cell tagged at an anchor of the
  // gauge, which keeps its single Riemann term |I| Gamma(t) spread in
  // proportion.
  struct Job {
    std::size_t cell;
    double a, b;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const TaggedCell& c = p[i];
    const std::size_t pieces = c.length() > leaf_len ? static_cast<std::size_t>(std::llround(c.length() / leaf_len)) : 1;
    for (std::size_t j = 0; j < pieces; ++j) {
      const double a = pieces == 1 ? c.a : c.a + static_cast<double>(j) * leaf_len;
      const double b = pieces == 1 ? c.b : (j + 1 == pieces ? c.b : c.a + static_cast<double>(j + 1) * leaf_len);
      jobs.push_back({i, a, b});
    }
  }
  const std::size_t w = gamma.width();
  std::vector<Primitive::Leaf> leaves(jobs.size());
  kernels::parallel_for(jobs.size(), [&](std::size_t k) {
    thread_local std::vector<double> buf;
    buf.resize(w);
    const Job& job = jobs[k];
    const TaggedCell& c = p[job.cell];
    Primitive::Leaf& leaf = leaves[k];
    leaf.a = job.a;
    leaf.b = job.b;
    leaf.values.assign(w, 0.0);
    const double len = job.b - job.a;
    const bool anchored = std::find(anchors.begin(), anchors.end(), c.t) != anchors.end();
    if (anchored) {
      gamma.eval(c.t, buf);
      for (std::size_t q = 0; q < w; ++q) leaf.values[q] = len * buf[q];
      return;
    }
    const double h = len / kLeafSubcells;
    for (int s = 0; s < kLeafSubcells; ++s) {
      gamma.eval(job.a + (s + 0.5) * h, buf);
      for (std::size_t q = 0; q < w; ++q) leaf.values[q] += h * buf[q];
    }
  });
  return Primitive::from_leaves(gamma.grid(), std::move(leaves));
}

Primitive constant_primitive(const SupportSet& c, int depth) {
  return Primitive::uniform(c.grid(), depth, [&c](double a, double b) { return scale(c, b - a); });
}

VariationalSet parse_variational_set(const std::string& text) {
  VariationalSet out;
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  auto number = [&](const std::string& tok) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (tok.empty() || end != tok.c_str() + tok.size() || !std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw std::invalid_argument("set: bad number '" + tok + "'");
    }
    return v;
  };
  if (s.size() >= 2 && s.front() == '{' && s.back() == '}') {
    const std::string body = s.substr(1, s.size() - 2);
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.points.push_back(number(tok));
    if (out.points.empty()) throw std::invalid_argument("set: empty point list");
    std::sort(out.points.begin(), out.points.end());
    out.points.erase(std::unique(out.points.begin(), out.points.end()), out.points.end());
    return out;
  }
  std::vector<Interval> parts;
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (s[pos] != '[') throw std::invalid_argument("set: expected '[' in '" + text + "'");
    const std::size_t close = s.find(']', pos);
    if (close == std::string::npos) throw std::invalid_argument("set: missing ']'");
    const std::string body = s.substr(pos + 1, close - pos - 1);
    const std::size_t comma = body.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("set: interval needs two ends");
    const double a = number(body.substr(0, comma));
    const double b = number(body.substr(comma + 1));
    if (a > b) throw std::invalid_argument("set: interval ends out of order");
    parts.push_back({a, b});
    pos = close + 1;
    if (pos < s.size()) {
      if (s[pos] != 'u' && s[pos] != 'U') throw std::invalid_argument("set: intervals must be joined by 'u'");
      ++pos;
    }
  }
  if (parts.empty()) throw std::invalid_argument("set: empty");
  out.intervals = IntervalUnion(std::move(parts));
  return out;
}

namespace {

// Largest sum_j ||Phi(I_j)|| over two-sided ladders of cells tagged at each
// point of the set.
double singleton_packing(const Primitive& phi, std::span<const double> points, const Gauge& g) {
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double p = points[i];
    double room = 0.999999 * g(p);
    if (i > 0) room = std::min(room, 0.5 * (p - points[i - 1]));
    if (i + 1 < points.size()) room = std::min(room, 0.5 * (points[i + 1] - p));
    double left = 0.0;
    double right = 0.0;
    for (int j = 0; j <= 40; ++j) {
      const double s = std::ldexp(room, -j);
      if (p > 0.0) left = std::max(left, phi.query(std::max(0.0, p - s), p).norm());
      if (p < 1.0) right = std::max(right, phi.query(p, std::min(1.0, p + s)).norm());
    }
    total += left + right;
  }
  return total;
}

struct PackingSearch {
  const Primitive& phi;
  const IntervalUnion& e;
  const Gauge& g;

  // A tag in [a,b] that lies in E and makes [a,b] delta-fine, if any.
  bool admissible(double a, double b) const {
    std::vector<double> probes{a, 0.5 * (a + b), b};
    for (int i = 1; i <= 8; ++i) probes.push_back(a + (b - a) * van_der_corput(static_cast<std::uint64_t>(i) + 8));
    for (const Interval& part : e.parts()) {
      if (part.b < a || part.a > b) continue;
      probes.push_back(std::max(a, part.a));
      probes.push_back(std::min(b, part.b));
      probes.push_back(0.5 * (std::max(a, part.a) + std::min(b, part.b)));
    }
    for (double t : probes) {
      if (e.contains(t) && cell_is_delta_fine({a, b, t}, g, true)) return true;
    }
    return false;
  }

  double norm_of(double a, double b) const { return phi.query(a, b).norm(); }

  double pack(double a, double b, int depth) const {
    if (e.overlap(IntervalUnion({{a, b}})) <= 0.0) {
      // Degenerate contact (a single shared point) still admits a tag.
      if (!(e.distance(a) == 0.0 || e.distance(b) == 0.0)) return 0.0;
    }
    const double mid = 0.5 * (a + b);
    if (admissible(a, b)) {
      const double whole = norm_of(a, b);
      if (depth < 40 && admissible(a, mid) && admissible(mid, b)) {
        return std::max(whole, norm_of(a, mid) + norm_of(mid, b));
      }
      return whole;
    }
    if (depth >= 40) return 0.0;
    return pack(a, mid, depth + 1) + pack(mid, b, depth + 1);
  }
};

}  // namespace

VariationalMeasureReport variational_measure_estimate(const Primitive& phi, const VariationalSet& e,
                                                      const GaugeSchedule& sched, std::uint64_t seed) {
  VariationalMeasureReport out;
  sched.validate();
  for (std::size_t n = 0; n < sched.levels.size(); ++n) {
    const Gauge& g = sched.levels[n];
    double value = 0.0;
    if (!e.points.empty()) value += singleton_packing(phi, e.points, g);
    if (!e.intervals.empty()) {
      const PackingSearch search{phi, e.intervals, g};
      const double lo = e.intervals.parts().front().a;
      const double hi = e.intervals.parts().back().b;
      double best = 0.0;
      for (int r = 0; r < 16; ++r) {
        // Restart 0 bisects the hull of E; the others shift the dyadic grid.
        double a = lo;
        double b = hi;
        if (r > 0) {
          CounterRng rng(seed, n, static_cast<std::uint64_t>(r));
          const double span = std::max(hi - lo, 1e-12);
          a = std::max(0.0, lo - rng.uniform() * 0.5 * span);
          b = std::min(1.0, hi + rng.uniform() * 0.5 * span);
        }
        best = std::max(best, search.pack(a, b, 0));
      }
      value += best;
    }
    out.estimates.push_back(value);
  }
  out.value = out.estimates.empty() ? 0.0 : out.estimates.back();
  return out;
}

}  // namespace gaugeset
