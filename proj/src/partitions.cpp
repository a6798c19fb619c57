#include "gaugeset/partitions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

#include "gaugeset/random.hpp"

namespace gaugeset {

namespace {

constexpr double kCoverTol = 1e-12;

// Fixed interior probe fractions for the Cousin search (golden-ratio sequence).
constexpr int kInteriorProbes = 8;

double probe_fraction(int i) {
  constexpr double phi = 0.6180339887498949;
  const double x = (i + 1) * phi;
  return x - std::floor(x);
}

bool in_open_ball(double a, double b, double t, double radius) {
  return a > t - radius && b < t + radius;
}

}  // namespace

// ---------------------------------------------------------------------------
// IntervalUnion

IntervalUnion::IntervalUnion(std::vector<Interval> parts) {
  for (const Interval& p : parts) {
    if (!std::isfinite(p.a) || !std::isfinite(p.b) || p.a > p.b) {
      throw std::invalid_argument("interval union: malformed interval");
    }
  }
  std::sort(parts.begin(), parts.end(), [](const Interval& x, const Interval& y) { return x.a < y.a; });
  for (const Interval& p : parts) {
    if (!parts_.empty() && p.a <= parts_.back().b) {
      parts_.back().b = std::max(parts_.back().b, p.b);
    } else {
      parts_.push_back(p);
    }
  }
}

double IntervalUnion::measure() const noexcept {
  double m = 0.0;
  for (const Interval& p : parts_) m += p.length();
  return m;
}

bool IntervalUnion::contains(double t) const noexcept { return distance(t) == 0.0; }

double IntervalUnion::distance(double t) const noexcept {
  double best = std::numeric_limits<double>::infinity();
  for (const Interval& p : parts_) {
    if (p.contains(t)) return 0.0;
    best = std::min(best, t < p.a ? p.a - t : t - p.b);
  }
  return best;
}

bool IntervalUnion::covers(const IntervalUnion& other) const noexcept {
  for (const Interval& q : other.parts_) {
    const bool inside = std::any_of(parts_.begin(), parts_.end(), [&](const Interval& p) {
      return p.a <= q.a + kCoverTol && q.b <= p.b + kCoverTol;
    });
    if (!inside) return false;
  }
  return true;
}

double IntervalUnion::overlap(const IntervalUnion& other) const noexcept {
  double m = 0.0;
  for (const Interval& p : parts_) {
    for (const Interval& q : other.parts_) {
      const double lo = std::max(p.a, q.a);
      const double hi = std::min(p.b, q.b);
      if (hi > lo) m += hi - lo;
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Gauge

Gauge Gauge::constant(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidGauge("constant gauge must be positive");
  std::ostringstream os;
  os.precision(17);
  os << "constant:" << delta;
  return callable([delta](double) { return delta; }, os.str());
}

Gauge Gauge::callable(std::function<double(double)> fn, std::string description,
                      std::vector<double> anchors) {
  if (!fn) throw InvalidGauge("callable gauge needs a function");
  Gauge g;
  g.kind_ = Kind::callable;
  g.fn_ = std::move(fn);
  g.description_ = std::move(description);
  std::sort(anchors.begin(), anchors.end());
  anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
  g.anchors_ = std::move(anchors);
  return g;
}

Gauge Gauge::piecewise(std::vector<Piece> pieces) {
  if (pieces.empty()) throw InvalidGauge("piecewise gauge needs at least one piece");
  Gauge g;
  g.kind_ = Kind::piecewise;
  g.description_ = "piecewise";
  for (const Piece& p : pieces) {
    if (!(p.delta > 0.0) || !std::isfinite(p.delta)) throw InvalidGauge("piecewise gauge value must be positive");
    for (const Interval& iv : p.set.parts()) g.segments_.push_back({iv.a, iv.b, p.delta});
  }
  std::sort(g.segments_.begin(), g.segments_.end(),
            [](const Segment& x, const Segment& y) { return x.a < y.a || (x.a == y.a && x.b < y.b); });
  g.pieces_ = std::move(pieces);
  return g;
}

double Gauge::operator()(double t) const {
  if (kind_ == Kind::callable) return fn_(t);
  // First segment starting after t; t can only lie in the one or two segments
  // just before it (pieces meet at endpoints only).
  const auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                                   [](double x, const Segment& s) { return x < s.a; });
  double best = std::numeric_limits<double>::infinity();
  const auto idx = it - segments_.begin();
  for (auto j = idx - 1; j >= 0 && j >= idx - 2; --j) {
    const Segment& s = segments_[static_cast<std::size_t>(j)];
    if (s.a <= t && t <= s.b) best = std::min(best, s.delta);
  }
  if (!std::isfinite(best)) {
    // Tolerate rounding at the outer ends of the cover.
    for (const Segment& s : segments_) {
      if (t >= s.a - kCoverTol && t <= s.b + kCoverTol) best = std::min(best, s.delta);
    }
  }
  if (!std::isfinite(best)) throw InvalidGauge("piecewise gauge does not cover the evaluation point");
  return best;
}

Gauge Gauge::scaled(double factor) const {
  if (!(factor > 0.0)) throw InvalidGauge("gauge scale factor must be positive");
  if (kind_ == Kind::piecewise) {
    std::vector<Piece> pieces = pieces_;
    for (Piece& p : pieces) p.delta *= factor;
    return piecewise(std::move(pieces));
  }
  std::ostringstream os;
  os.precision(17);
  os << factor << "*(" << description_ << ")";
  auto fn = fn_;
  return callable([fn, factor](double t) { return factor * fn(t); }, os.str(), anchors_);
}

void validate_gauge(const Gauge& g) {
  auto check = [&](double t) {
    const double d = g(t);
    if (!(d > 0.0) || !std::isfinite(d)) {
      std::ostringstream os;
      os.precision(17);
      os << "gauge is not strictly positive at t = " << t << " (value " << d << ")";
      throw InvalidGauge(os.str());
    }
  };
  check(0.0);
  check(1.0);
  for (std::uint64_t i = 1; i <= 10000; ++i) check(van_der_corput(i));
  for (double a : g.anchors()) check(a);

  if (g.kind() == Gauge::Kind::piecewise) {
    std::vector<Interval> all;
    for (const auto& p : g.pieces()) all.insert(all.end(), p.set.parts().begin(), p.set.parts().end());
    std::sort(all.begin(), all.end(), [](const Interval& x, const Interval& y) { return x.a < y.a; });
    double reach = 0.0;
    for (const Interval& iv : all) {
      if (iv.a > reach + kCoverTol) throw InvalidGauge("piecewise gauge leaves a gap in [0,1]");
      if (iv.a < reach - kCoverTol) throw InvalidGauge("piecewise gauge pieces overlap");
      reach = std::max(reach, iv.b);
    }
    if (all.empty() || all.front().a > kCoverTol || reach < 1.0 - kCoverTol) {
      throw InvalidGauge("piecewise gauge does not cover [0,1]");
    }
  }
}

// ---------------------------------------------------------------------------
// TaggedPartition

TaggedPartition::TaggedPartition(std::vector<TaggedCell> cells) : cells_(std::move(cells)) {
  for (const TaggedCell& c : cells_) {
    if (!std::isfinite(c.a) || !std::isfinite(c.b) || !std::isfinite(c.t)) {
      throw std::invalid_argument("tagged partition: non-finite value");
    }
    if (c.a > c.b || c.a < 0.0 || c.b > 1.0 || c.t < 0.0 || c.t > 1.0) {
      throw std::invalid_argument("tagged partition: cell or tag outside [0,1]");
    }
  }
  std::vector<const TaggedCell*> order(cells_.size());
  for (std::size_t i = 0; i < cells_.size(); ++i) order[i] = &cells_[i];
  std::sort(order.begin(), order.end(), [](const TaggedCell* x, const TaggedCell* y) {
    return x->a < y->a || (x->a == y->a && x->b < y->b);
  });

  total_ = 0.0;
  bool gapless = !order.empty() && order.front()->a <= kCoverTol;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const TaggedCell& c = *order[i];
    if (i > 0) {
      const double prev_b = order[i - 1]->b;
      if (c.a < prev_b - kCoverTol) throw std::invalid_argument("tagged partition: overlapping cells");
      if (c.a > prev_b + kCoverTol) gapless = false;
    }
    total_ += c.length();
    if (c.t < c.a || c.t > c.b) perron_ = false;
    const bool open_inside = c.t > c.a && c.t < c.b;
    const bool edge_ok = (c.a == 0.0 && c.t == 0.0) || (c.b == 1.0 && c.t == 1.0);
    if (!open_inside && !edge_ok) interior_ = false;
  }
  if (order.empty()) perron_ = interior_ = false;
  full_ = gapless && order.back()->b >= 1.0 - kCoverTol && std::abs(total_ - 1.0) <= kCoverTol;
}

bool TaggedPartition::distinct_tags() const {
  std::vector<double> tags;
  tags.reserve(cells_.size());
  for (const auto& c : cells_) tags.push_back(c.t);
  std::sort(tags.begin(), tags.end());
  return std::adjacent_find(tags.begin(), tags.end()) == tags.end();
}

bool cell_is_delta_fine(const TaggedCell& c, const Gauge& g, bool require_perron) {
  if (require_perron && (c.t < c.a || c.t > c.b)) return false;
  return in_open_ball(c.a, c.b, c.t, g(c.t));
}

bool is_delta_fine(const TaggedPartition& p, const Gauge& g, bool require_perron) {
  return std::all_of(p.cells().begin(), p.cells().end(),
                     [&](const TaggedCell& c) { return cell_is_delta_fine(c, g, require_perron); });
}

// ---------------------------------------------------------------------------
// Cousin construction

DepthExceeded::DepthExceeded(Interval w, int d)
    : std::runtime_error([&] {
        std::ostringstream os;
        os.precision(17);
        os << "cousin_build: depth " << d << " exceeded on [" << w.a << ", " << w.b << "]";
        return os.str();
      }()),
      where(w),
      depth(d) {}

TaggedPartition cousin_build(const Gauge& g, const CousinOptions& options) {
  if (options.max_depth < 0 || options.max_depth > 60) throw std::invalid_argument("cousin_build: bad max_depth");
  std::vector<TaggedCell> out;
  struct Item {
    double a, b;
    int depth;
  };
  std::vector<Item> stack{{0.0, 1.0, 0}};
  while (!stack.empty()) {
    const Item it = stack.back();
    stack.pop_back();
    bool accepted = false;
    if (it.depth >= options.min_depth) {
      const double len = it.b - it.a;
      auto try_tag = [&](double t) {
        if (std::max(t - it.a, it.b - t) < 0.5 * g(t)) {
          out.push_back({it.a, it.b, t});
          return true;
        }
        return false;
      };
      accepted = try_tag(it.a) || try_tag(0.5 * (it.a + it.b)) || try_tag(it.b);
      for (int i = 0; !accepted && i < kInteriorProbes; ++i) accepted = try_tag(it.a + probe_fraction(i) * len);
    }
    if (accepted) continue;
    if (it.depth >= options.max_depth) throw DepthExceeded({it.a, it.b}, it.depth + 1);
    const double mid = 0.5 * (it.a + it.b);
    // Right half first so cells come out left to right.
    stack.push_back({mid, it.b, it.depth + 1});
    stack.push_back({it.a, mid, it.depth + 1});
  }
  return TaggedPartition(std::move(out));
}

TaggedPartition free_partition(std::size_t n, TagRule rule, std::uint64_t seed, std::span<const double> tags) {
  if (n == 0) throw std::invalid_argument("free_partition: n must be at least 1");
  if (rule == TagRule::supplied && tags.size() != n) {
    throw std::invalid_argument("free_partition: supplied tags must have length n");
  }
  std::vector<TaggedCell> cells(n);
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = static_cast<double>(i) / dn;
    const double b = i + 1 == n ? 1.0 : static_cast<double>(i + 1) / dn;
    double t = 0.0;
    switch (rule) {
      case TagRule::midpoint: t = 0.5 * (a + b); break;
      case TagRule::left: t = a; break;
      case TagRule::seeded_random: t = CounterRng(seed, i).uniform(); break;
      case TagRule::supplied: t = tags[i]; break;
    }
    cells[i] = {a, b, t};
  }
  return TaggedPartition(std::move(cells));
}

std::vector<TaggedPartition> split_duplicate_tags(const TaggedPartition& p) {
  std::vector<std::vector<TaggedCell>> parts;
  std::unordered_map<double, std::size_t> seen;
  for (const TaggedCell& c : p.cells()) {
    const std::size_t k = seen[c.t]++;
    if (parts.size() <= k) parts.resize(k + 1);
    parts[k].push_back(c);
  }
  std::vector<TaggedPartition> out;
  out.reserve(parts.size());
  for (auto& cells : parts) out.emplace_back(std::move(cells));
  return out;
}

// ---------------------------------------------------------------------------
// Interior repair

RepairResult interior_repair(const TaggedPartition& p, const PointFunction& f, const Primitive* phi, double eps,
                             const Gauge* gauge) {
  if (!(eps > 0.0)) throw std::invalid_argument("interior_repair: eps must be positive");
  if (!p.perron()) throw RepairFailed("interior_repair: partition is not Perron");
  if (!p.distinct_tags()) throw RepairFailed("interior_repair: repeated tags; split them first");

  std::vector<TaggedCell> cells(p.cells().begin(), p.cells().end());
  std::sort(cells.begin(), cells.end(), [](const TaggedCell& x, const TaggedCell& y) { return x.a < y.a; });
  const std::size_t n = cells.size();

  // A move shifts one boundary point x to x + shift. `cell` owns the tag at x;
  // `other` is the abutting neighbour or n when the cell faces a gap.
  struct Move {
    std::size_t cell;
    std::size_t other;
    bool leftward;
    double limit;
  };
  std::vector<Move> moves;
  for (std::size_t i = 0; i < n; ++i) {
    const TaggedCell& c = cells[i];
    const bool at_left = c.t == c.a && c.a > 0.0;
    const bool at_right = c.t == c.b && c.b < 1.0;
    if (at_left) {
      Move m{i, n, true, 0.0};
      if (i > 0 && cells[i - 1].b == c.a) {
        m.other = i - 1;
        m.limit = 0.5 * (c.t - cells[i - 1].t);
      } else {
        m.limit = 0.5 * (c.a - (i > 0 ? cells[i - 1].b : 0.0));
      }
      moves.push_back(m);
    }
    if (at_right) {
      Move m{i, n, false, 0.0};
      if (i + 1 < n && cells[i + 1].a == c.b) {
        m.other = i + 1;
        m.limit = 0.5 * (cells[i + 1].t - c.t);
      } else {
        m.limit = 0.5 * ((i + 1 < n ? cells[i + 1].a : 1.0) - c.b);
      }
      moves.push_back(m);
    }
  }

  RepairResult result;
  if (moves.empty()) {
    result.partition = p;
    return result;
  }

  const double share = eps / (2.0 * static_cast<double>(moves.size()));
  std::vector<double> strip(phi ? phi->grid()->size() : 0);
  auto strip_norm = [&](double lo, double hi) {
    std::fill(strip.begin(), strip.end(), 0.0);
    phi->accumulate(lo, hi, strip);
    double m = 0.0;
    for (double v : strip) m = std::max(m, std::abs(v));
    return m;
  };

  for (const Move& m : moves) {
    if (!(m.limit > 0.0)) throw RepairFailed("interior_repair: no slack next to a boundary tag");
    const TaggedCell& c = cells[m.cell];
    double fsum = norm(f(c.t)) + 1.0;
    if (m.other < n) fsum += norm(f(cells[m.other].t));
    double eta = std::min(m.limit, share / fsum);
    if (gauge) eta = std::min(eta, 0.5 * ((*gauge)(c.t) - c.length()));
    if (!(eta > 0.0)) throw RepairFailed("interior_repair: gauge leaves no room to move the boundary");
    if (phi) {
      int halvings = 0;
      while (2.0 * strip_norm(m.leftward ? c.t - eta : c.t, m.leftward ? c.t : c.t + eta) > share) {
        eta *= 0.5;
        if (++halvings > 200) throw RepairFailed("interior_repair: primitive is not continuous at a tag");
      }
    }
    if (m.leftward) {
      cells[m.cell].a = c.t - eta;
      if (m.other < n) cells[m.other].b = c.t - eta;
    } else {
      cells[m.cell].b = c.t + eta;
      if (m.other < n) cells[m.other].a = c.t + eta;
    }
    ++result.moved_endpoints;
  }

  // Measure the gaps against the input cell by cell.
  std::vector<TaggedCell> before(p.cells().begin(), p.cells().end());
  std::sort(before.begin(), before.end(), [](const TaggedCell& x, const TaggedCell& y) { return x.a < y.a; });
  for (std::size_t i = 0; i < n; ++i) {
    result.length_gap += norm(f(cells[i].t)) * std::abs(before[i].length() - cells[i].length());
    if (phi) {
      const SupportSet old_v = phi->query(before[i].a, before[i].b);
      const SupportSet new_v = phi->query(cells[i].a, cells[i].b);
      result.primitive_gap += hausdorff(old_v, new_v);
    }
  }
  result.partition = TaggedPartition(std::move(cells));

  if (!(result.length_gap < eps)) throw RepairFailed("interior_repair: length bound not met");
  if (phi && !(result.primitive_gap <= eps)) throw RepairFailed("interior_repair: primitive bound not met");
  if (!result.partition.interior()) throw RepairFailed("interior_repair: a tag is still on a boundary");
  if (gauge && !is_delta_fine(result.partition, *gauge, true)) {
    throw RepairFailed("interior_repair: repaired partition is not delta-fine");
  }
  return result;
}

// ---------------------------------------------------------------------------
// Measurable gauges

Gauge build_measurable_gauge(const Gauge& delta0, std::span<const FiltrationPiece> filtration,
                             const MeasurableGaugeOptions& options) {
  if (filtration.empty()) throw InvalidGauge("build_measurable_gauge: empty filtration");
  for (std::size_t n = 0; n < filtration.size(); ++n) {
    if (!(filtration[n].delta > 0.0)) throw InvalidGauge("build_measurable_gauge: delta_n must be positive");
    if (n > 0 && filtration[n].delta > filtration[n - 1].delta) {
      throw InvalidGauge("build_measurable_gauge: delta_n must be nonincreasing");
    }
    for (std::size_t m = 0; m < n; ++m) {
      if (filtration[n].set.overlap(filtration[m].set) > 0.0) {
        throw InvalidGauge("build_measurable_gauge: filtration sets overlap");
      }
    }
  }
  if (options.mesh_log2 < 1 || options.mesh_log2 > 20 || options.limsup_samples < 1) {
    throw std::invalid_argument("build_measurable_gauge: bad options");
  }

  const std::size_t cells = std::size_t{1} << options.mesh_log2;
  std::map<double, std::vector<Interval>> by_value;
  for (std::size_t j = 0; j < cells; ++j) {
    const double x0 = std::ldexp(static_cast<double>(j), -options.mesh_log2);
    const double x1 = std::ldexp(static_cast<double>(j + 1), -options.mesh_log2);
    const double xm = 0.5 * (x0 + x1);
    const double d0 = std::min({delta0(x0), delta0(xm), delta0(x1)});
    double value = d0;
    for (const FiltrationPiece& piece : filtration) {
      if (!piece.set.contains(xm)) continue;
      double lim = d0;
      const double r = options.limsup_radius;
      for (int s = 0; s < options.limsup_samples; ++s) {
        const double y = xm - r + 2.0 * r * (s + 0.5) / options.limsup_samples;
        if (y >= 0.0 && y <= 1.0 && piece.set.contains(y)) lim = std::max(lim, delta0(y));
      }
      value = std::min(piece.delta, 0.5 * std::max(d0, lim));
      break;
    }
    if (!(value > 0.0) || !std::isfinite(value)) throw InvalidGauge("build_measurable_gauge: delta0 is not positive");
    by_value[value].push_back({x0, x1});
  }
  std::vector<Gauge::Piece> pieces;
  pieces.reserve(by_value.size());
  for (auto& [value, parts] : by_value) pieces.push_back({IntervalUnion(std::move(parts)), value});
  return Gauge::piecewise(std::move(pieces));
}

// ---------------------------------------------------------------------------
// Measurable partitions

double MeasurablePartition::total_measure() const {
  double m = 0.0;
  for (const auto& p : pieces) m += p.measure;
  return m;
}

bool MeasurablePartition::refines(const MeasurablePartition& coarser) const {
  return std::all_of(pieces.begin(), pieces.end(), [&](const MeasurablePiece& fine) {
    return std::any_of(coarser.pieces.begin(), coarser.pieces.end(),
                       [&](const MeasurablePiece& c) { return c.set.covers(fine.set); });
  });
}

void retag_pieces(MeasurablePartition& p, PieceTagRule rule, std::uint64_t seed) {
  for (std::size_t j = 0; j < p.pieces.size(); ++j) {
    MeasurablePiece& piece = p.pieces[j];
    const auto parts = piece.set.parts();
    if (parts.empty()) throw std::invalid_argument("measurable piece is empty");
    switch (rule) {
      case PieceTagRule::left: piece.tag = parts.front().a; break;
      case PieceTagRule::midpoint: {
        const Interval& mid = parts[parts.size() / 2];
        piece.tag = 0.5 * (mid.a + mid.b);
        break;
      }
      case PieceTagRule::seeded_random: {
        CounterRng rng(seed, j);
        double target = rng.uniform() * piece.set.measure();
        piece.tag = parts.back().b;
        for (const Interval& iv : parts) {
          if (target <= iv.length()) {
            piece.tag = iv.a + target;
            break;
          }
          target -= iv.length();
        }
        break;
      }
    }
  }
}

MeasurablePartition measurable_partition(const MeasurableSpec& spec) {
  if (spec.n_pieces == 0) throw std::invalid_argument("measurable_partition: n_pieces must be at least 1");
  if (spec.interleave_depth < 0 || spec.interleave_depth > 30) {
    throw std::invalid_argument("measurable_partition: interleave_depth out of range");
  }
  const std::size_t n = spec.n_pieces;
  const std::size_t cells = std::size_t{1} << spec.interleave_depth;
  const std::size_t per = std::max<std::size_t>(1, (cells + n - 1) / n);
  const std::size_t m = n * per;
  const double dm = static_cast<double>(m);

  std::vector<std::vector<Interval>> parts(n);
  for (std::size_t i = 0; i < m; ++i) {
    const double a = static_cast<double>(i) / dm;
    const double b = i + 1 == m ? 1.0 : static_cast<double>(i + 1) / dm;
    parts[i % n].push_back({a, b});
  }
  MeasurablePartition out;
  out.pieces.reserve(n);
  for (auto& pp : parts) {
    MeasurablePiece piece;
    piece.measure = static_cast<double>(per) / dm;
    piece.set = IntervalUnion(std::move(pp));
    out.pieces.push_back(std::move(piece));
  }
  retag_pieces(out, spec.tag_rule, spec.seed);
  return out;
}

}  // namespace gaugeset
