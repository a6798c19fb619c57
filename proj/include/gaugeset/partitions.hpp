#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gaugeset/convex_sets.hpp"
#include "gaugeset/primitive.hpp"

namespace gaugeset {

struct Interval {
  double a = 0.0;
  double b = 0.0;
  double length() const noexcept { return b - a; }
  bool contains(double t) const noexcept { return a <= t && t <= b; }
};

/// Finite union of closed intervals, kept sorted with overlaps merged.
class IntervalUnion {
 public:
  IntervalUnion() = default;
  IntervalUnion(std::vector<Interval> parts);

  std::span<const Interval> parts() const noexcept { return parts_; }
  bool empty() const noexcept { return parts_.empty(); }
  double measure() const noexcept;
  bool contains(double t) const noexcept;
  /// Distance from t to the set (0 inside).
  double distance(double t) const noexcept;
  bool covers(const IntervalUnion& other) const noexcept;
  double overlap(const IntervalUnion& other) const noexcept;

 private:
  std::vector<Interval> parts_;
};

class InvalidGauge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A strictly positive width function on [0,1].
///
/// Callable gauges wrap an arbitrary function. Piecewise gauges are constant
/// on each piece of a finite cover by interval unions (the measurable gauges
/// of the H and M integrals); at a point shared by two pieces the smaller
/// value applies. Anchors are points where the gauge is much larger than
/// nearby, such as the tag forced at a singularity; they are the only
/// candidates for tags far away from their cells in free-tag searches.
class Gauge {
 public:
  enum class Kind { callable, piecewise };

  struct Piece {
    IntervalUnion set;
    double delta = 0.0;
  };

  static Gauge constant(double delta);
  static Gauge callable(std::function<double(double)> fn, std::string description = "callable",
                        std::vector<double> anchors = {});
  static Gauge piecewise(std::vector<Piece> pieces);

  double operator()(double t) const;
  Kind kind() const noexcept { return kind_; }
  const std::string& description() const noexcept { return description_; }
  std::span<const double> anchors() const noexcept { return anchors_; }
  std::span<const Piece> pieces() const noexcept { return pieces_; }

  /// factor * delta; piecewise gauges stay piecewise.
  Gauge scaled(double factor) const;

 private:
  struct Segment {
    double a;
    double b;
    double delta;
  };

  Gauge() = default;

  Kind kind_ = Kind::callable;
  std::string description_;
  std::function<double(double)> fn_;
  std::vector<Piece> pieces_;
  std::vector<Segment> segments_;
  std::vector<double> anchors_;
};

/// Positivity probe: 10^4 van der Corput points, both endpoints and the
/// anchors. Throws InvalidGauge on a non-positive or non-finite value. For
/// piecewise gauges also checks that the pieces cover [0,1] and are disjoint
/// up to endpoints.
void validate_gauge(const Gauge& g);

struct TaggedCell {
  double a = 0.0;
  double b = 0.0;
  double t = 0.0;
  double length() const noexcept { return b - a; }
};

/// Finite tagged family of non-overlapping subintervals of [0,1].
/// Flags are computed from the cells on construction.
class TaggedPartition {
 public:
  TaggedPartition() = default;
  explicit TaggedPartition(std::vector<TaggedCell> cells);

  std::span<const TaggedCell> cells() const noexcept { return cells_; }
  std::size_t size() const noexcept { return cells_.size(); }
  const TaggedCell& operator[](std::size_t i) const { return cells_[i]; }

  /// Every tag lies in its own cell.
  bool perron() const noexcept { return perron_; }
  /// Every tag lies in the open cell, except that a cell containing 0 or 1
  /// may be tagged there.
  bool interior() const noexcept { return interior_; }
  /// The cells cover [0,1] (total length 1 within 1e-12, no gaps).
  bool full() const noexcept { return full_; }
  double total_length() const noexcept { return total_; }
  bool distinct_tags() const;

 private:
  std::vector<TaggedCell> cells_;
  bool perron_ = true;
  bool interior_ = true;
  bool full_ = false;
  double total_ = 0.0;
};

/// Each cell satisfies [a,b] inside (t - delta(t), t + delta(t)); with
/// require_perron also t in [a,b].
bool is_delta_fine(const TaggedPartition& p, const Gauge& g, bool require_perron);
/// Single-cell form of the same test.
bool cell_is_delta_fine(const TaggedCell& c, const Gauge& g, bool require_perron);

class DepthExceeded : public std::runtime_error {
 public:
  DepthExceeded(Interval where, int depth);
  Interval where;
  int depth;
};

struct CousinOptions {
  int max_depth = 40;
  /// Cells are split at least down to this depth.
  int min_depth = 0;
};

/// Constructive Cousin lemma by bisection of [0,1].
///
/// A dyadic cell is accepted at the first probe tag t (left endpoint,
/// midpoint, right endpoint, then 8 fixed interior points) whose half-width
/// ball (t - delta(t)/2, t + delta(t)/2) contains it; otherwise it is
/// bisected. The half-width acceptance leaves slack for re-tagging and
/// interior repair. Returns a full delta-fine Perron partition in
/// left-to-right order; throws DepthExceeded past max_depth.
TaggedPartition cousin_build(const Gauge& g, const CousinOptions& options = {});

enum class TagRule { midpoint, left, seeded_random, supplied };

/// Uniform n-cell partition of [0,1]. `seeded_random` draws tags anywhere
/// in [0,1]; `supplied` takes tags from `tags` (length n).
TaggedPartition free_partition(std::size_t n, TagRule rule, std::uint64_t seed = 0,
                               std::span<const double> tags = {});

/// Splits a partition with repeated tags into partial partitions whose tags
/// are distinct: the k-th occurrence of a tag goes to part k. Any sum over
/// the cells is the sum over the parts, and each part is bounded by the
/// per-tag maximum, which is the doubling bound.
std::vector<TaggedPartition> split_duplicate_tags(const TaggedPartition& p);

class RepairFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using PointFunction = std::function<Point(double)>;

struct RepairResult {
  TaggedPartition partition;
  /// sum_k ||f(t_k)|| * | |I_k| - |I'_k| |
  double length_gap = 0.0;
  /// sum_k d_H(Phi(I_k), Phi(I'_k)); 0 when no primitive was given.
  double primitive_gap = 0.0;
  std::size_t moved_endpoints = 0;
};

/// Moves cell endpoints so every tag becomes interior while keeping tags.
///
/// A tag sitting on an endpoint shared with a neighbour grows its own cell by
/// eta across that endpoint and shrinks the neighbour. eta is bounded by the
/// neighbour's tag, by the gauge slack when `gauge` is given, by eps through
/// ||f|| and, when `phi` is given, by probing d_H(Phi(strip), {0}) on the
/// moved strip. The bounds length_gap < eps and primitive_gap <= eps are
/// checked before returning. Requires a Perron partition with distinct tags.
RepairResult interior_repair(const TaggedPartition& p, const PointFunction& f,
                             const Primitive* phi, double eps, const Gauge* gauge = nullptr);

struct FiltrationPiece {
  IntervalUnion set;
  double delta = 0.0;
};

struct MeasurableGaugeOptions {
  int mesh_log2 = 12;
  double limsup_radius = 1.0 / 256.0;
  int limsup_samples = 32;
};

/// Piecewise-constant gauge following the measurable-gauge construction:
/// on F_n the value is min{delta_n, 1/2 max(delta0(t), sampled limsup of
/// delta0 over F_n near t)}, elsewhere delta0. Evaluated per mesh cell of
/// width 2^-mesh_log2 (delta0 taken as its minimum over the cell's ends and
/// midpoint); cells with equal value are grouped into one piece. The limsup
/// is a finite-sample surrogate.
Gauge build_measurable_gauge(const Gauge& delta0, std::span<const FiltrationPiece> filtration,
                             const MeasurableGaugeOptions& options = {});

struct MeasurablePiece {
  IntervalUnion set;
  double tag = 0.0;
  double measure = 0.0;
};

struct MeasurablePartition {
  std::vector<MeasurablePiece> pieces;
  double total_measure() const;
  /// Every piece of this partition lies inside one piece of `coarser`.
  bool refines(const MeasurablePartition& coarser) const;
};

enum class PieceTagRule { left, midpoint, seeded_random };

struct MeasurableSpec {
  std::size_t n_pieces = 1;
  int interleave_depth = 0;
  PieceTagRule tag_rule = PieceTagRule::seeded_random;
  std::uint64_t seed = 0;
};

/// Cuts [0,1] into M = n * max(1, ceil(2^depth / n)) equal cells and gives
/// piece j every cell whose index is j mod n, so each piece is a union of
/// interleaved cells once depth > log2 n. Tags are drawn inside pieces.
MeasurablePartition measurable_partition(const MeasurableSpec& spec);

/// Re-draws the tags of `p` inside their pieces.
void retag_pieces(MeasurablePartition& p, PieceTagRule rule, std::uint64_t seed);

}  // namespace gaugeset
