#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace gaugeset {

/// A point of R^d for d in {1, 2}; `y` is unused when d = 1.
struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double dot(const Point& p, const Point& q) { return p.x * q.x + p.y * q.y; }
inline double norm(const Point& p) { return std::hypot(p.x, p.y); }
inline Point operator+(const Point& p, const Point& q) { return {p.x + q.x, p.y + q.y}; }
inline Point operator-(const Point& p, const Point& q) { return {p.x - q.x, p.y - q.y}; }
inline Point operator-(const Point& p) { return {-p.x, -p.y}; }
inline Point operator*(double s, const Point& p) { return {s * p.x, s * p.y}; }

class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Finite set of unit directions on which every support function is sampled.
///
/// d = 1 uses exactly {-1, +1} (in that order). d = 2 uses m equally spaced
/// angles 2*pi*k/m; m must be even so the grid is closed under negation.
/// Grids are immutable and shared by pointer.
class DirectionGrid {
 public:
  static std::shared_ptr<const DirectionGrid> line();
  static std::shared_ptr<const DirectionGrid> circle(std::size_t m = 64);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dirs_.size(); }
  const Point& direction(std::size_t k) const { return dirs_.at(k); }
  std::span<const Point> directions() const noexcept { return dirs_; }
  std::size_t opposite(std::size_t k) const noexcept { return (k + size() / 2) % size(); }

  /// Same dimension and direction count (grids are fully determined by both).
  bool same_as(const DirectionGrid& other) const noexcept {
    return dim_ == other.dim_ && dirs_.size() == other.dirs_.size();
  }

 private:
  DirectionGrid(int dim, std::vector<Point> dirs) : dim_(dim), dirs_(std::move(dirs)) {}

  int dim_;
  std::vector<Point> dirs_;
};

using GridPtr = std::shared_ptr<const DirectionGrid>;

/// A convex compact subset of R^d stored as its support values on a grid.
///
/// values()[k] = sup { <dirs[k], x> : x in A }. Every instance is canonical:
/// the values are exactly the support function of the grid polytope
/// { x : <dirs[k], x> <= values[k] for all k }, so Minkowski sums, scalings
/// and translations act pointwise on the vector and the sup-norm distance is
/// the Hausdorff distance of the grid polytopes.
class SupportSet {
 public:
  /// Canonicalizes `values` (one polytope re-evaluation pass). Throws
  /// std::invalid_argument for an empty polytope or non-finite input.
  SupportSet(GridPtr grid, std::vector<double> values);

  /// Wraps values already known to be canonical (sums, scalings,
  /// translations of canonical sets). No re-evaluation.
  static SupportSet from_canonical(GridPtr grid, std::vector<double> values);

  static SupportSet zero(GridPtr grid);
  static SupportSet singleton(GridPtr grid, Point p);
  /// Euclidean ball sampled on the grid (its circumscribed grid polygon).
  static SupportSet ball(GridPtr grid, Point center, double radius);
  /// Convex hull of a finite point set.
  static SupportSet hull(GridPtr grid, std::span<const Point> points);

  const GridPtr& grid() const noexcept { return grid_; }
  int dim() const noexcept { return grid_->dim(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  std::size_t size() const noexcept { return values_.size(); }

  /// ||A|| = sup of |x| over A, read off the grid as max_k values[k].
  double norm() const;

  /// Bitwise equality of the support vectors on structurally equal grids.
  bool operator==(const SupportSet& other) const;

 private:
  struct Trusted {};
  SupportSet(GridPtr grid, std::vector<double> values, Trusted);

  GridPtr grid_;
  std::vector<double> values_;
};

/// Closed interval [a, b] on the shared d = 1 grid.
SupportSet make_interval(double a, double b);
SupportSet make_interval(const GridPtr& grid, double a, double b);

SupportSet minkowski_add(const SupportSet& a, const SupportSet& b);
/// lambda * A for lambda >= 0; negative factors are rejected because they
/// do not act pointwise on support vectors.
SupportSet scale(const SupportSet& a, double lambda);
SupportSet translate(const SupportSet& a, Point x);

/// max_k |h_A(u_k) - h_B(u_k)|. Exact for d = 1; for d = 2 exact on grid
/// polytopes and a lower bound on the true Hausdorff distance otherwise.
double hausdorff(const SupportSet& a, const SupportSet& b);

/// Steiner point. d = 1: interval midpoint. d = 2: (2/m) sum_k h(u_k) u_k,
/// which equals the vertex average of the grid polygon and so lies in A.
Point steiner_point(const SupportSet& a);

/// Vertices of the grid polygon: entry k is the intersection of the
/// supporting lines for directions k and k+1 (d = 2 only; repeated vertices
/// are kept).
std::vector<Point> grid_vertices(const SupportSet& a);

/// <u_k, p> <= h_A(u_k) + slack for all grid directions.
bool contains(const SupportSet& a, Point p, double slack = 1e-9);

/// Support function of the polytope cut out by `values`, re-evaluated on the
/// grid. Throws std::invalid_argument when the polytope is empty.
std::vector<double> canonicalize(const DirectionGrid& grid, std::span<const double> values);

inline SupportSet operator+(const SupportSet& a, const SupportSet& b) { return minkowski_add(a, b); }
inline SupportSet operator*(double lambda, const SupportSet& a) { return scale(a, lambda); }

void require_same_grid(const DirectionGrid& a, const DirectionGrid& b);

}  // namespace gaugeset
