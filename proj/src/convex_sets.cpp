#include "gaugeset/convex_sets.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <string>

namespace gaugeset {

namespace {

// Relaxation applied to every half-plane before clipping so that degenerate
// polytopes (points, segments) survive rounding; the final min() with the
// raw values removes it again for tight directions.
constexpr double kClipRelax = 1e-12;

std::vector<Point> clip(const std::vector<Point>& poly, const Point& u, double c) {
  std::vector<Point> out;
  out.reserve(poly.size() + 1);
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % n];
    const double fp = dot(u, p) - c;
    const double fq = dot(u, q) - c;
    if (fp <= 0.0) out.push_back(p);
    if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
      const double s = fp / (fp - fq);
      out.push_back(p + s * (q - p));
    }
  }
  return out;
}

void check_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("support values must be finite");
  }
}

}  // namespace

std::shared_ptr<const DirectionGrid> DirectionGrid::line() {
  static const auto grid =
      std::shared_ptr<const DirectionGrid>(new DirectionGrid(1, {{-1.0, 0.0}, {1.0, 0.0}}));
  return grid;
}

std::shared_ptr<const DirectionGrid> DirectionGrid::circle(std::size_t m) {
  if (m < 4 || m % 2 != 0) {
    throw std::invalid_argument("circle grid needs an even direction count >= 4, got " +
                                std::to_string(m));
  }
  std::vector<Point> dirs(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
    dirs[k] = {std::cos(theta), std::sin(theta)};
  }
  // Exact negation symmetry: dirs[k + m/2] = -dirs[k].
  for (std::size_t k = 0; k < m / 2; ++k) dirs[k + m / 2] = -dirs[k];
  return std::shared_ptr<const DirectionGrid>(new DirectionGrid(2, std::move(dirs)));
}

void require_same_grid(const DirectionGrid& a, const DirectionGrid& b) {
  if (&a != &b && !a.same_as(b)) {
    throw GridMismatch("support sets live on different direction grids");
  }
}

std::vector<double> canonicalize(const DirectionGrid& grid, std::span<const double> values) {
  if (values.size() != grid.size()) {
    throw std::invalid_argument("support vector length does not match the grid");
  }
  check_finite(values);
  if (grid.dim() == 1) {
    if (values[0] + values[1] < 0.0) throw std::invalid_argument("empty interval");
    return {values.begin(), values.end()};
  }

  double scale = 1.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  const double box = 4.0 * scale;
  std::vector<Point> poly{{-box, -box}, {box, -box}, {box, box}, {-box, box}};
  for (std::size_t k = 0; k < grid.size() && !poly.empty(); ++k) {
    poly = clip(poly, grid.direction(k), values[k] + kClipRelax * scale);
  }
  if (poly.empty()) throw std::invalid_argument("empty polytope");

  std::vector<double> out(values.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double h = -std::numeric_limits<double>::infinity();
    for (const Point& p : poly) h = std::max(h, dot(grid.direction(k), p));
    out[k] = std::min(values[k], h);
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (out[k] + out[grid.opposite(k)] < -1e-9 * scale) throw std::invalid_argument("empty polytope");
  }
  return out;
}

SupportSet::SupportSet(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)) {
  if (!grid_) throw std::invalid_argument("null direction grid");
  values_ = canonicalize(*grid_, values);
}

SupportSet::SupportSet(GridPtr grid, std::vector<double> values, Trusted)
    : grid_(std::move(grid)), values_(std::move(values)) {}

SupportSet SupportSet::from_canonical(GridPtr grid, std::vector<double> values) {
  if (!grid || values.size() != grid->size()) {
    throw std::invalid_argument("support vector length does not match the grid");
  }
  return SupportSet(std::move(grid), std::move(values), Trusted{});
}

SupportSet SupportSet::zero(GridPtr grid) {
  const std::size_t n = grid->size();
  return SupportSet(std::move(grid), std::vector<double>(n, 0.0), Trusted{});
}

SupportSet SupportSet::singleton(GridPtr grid, Point p) {
  std::vector<double> v(grid->size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = dot(grid->direction(k), p);
  return SupportSet(std::move(grid), std::move(v), Trusted{});
}

SupportSet SupportSet::ball(GridPtr grid, Point center, double radius) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw std::invalid_argument("ball radius must be >= 0");
  std::vector<double> v(grid->size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = dot(grid->direction(k), center) + radius;
  return SupportSet(std::move(grid), std::move(v), Trusted{});
}

SupportSet SupportSet::hull(GridPtr grid, std::span<const Point> points) {
  if (points.empty()) throw std::invalid_argument("hull of an empty point set");
  std::vector<double> v(grid->size(), -std::numeric_limits<double>::infinity());
  for (std::size_t k = 0; k < v.size(); ++k) {
    for (const Point& p : points) v[k] = std::max(v[k], dot(grid->direction(k), p));
  }
  check_finite(v);
  return SupportSet(std::move(grid), std::move(v), Trusted{});
}

double SupportSet::norm() const { return *std::max_element(values_.begin(), values_.end()); }

bool SupportSet::operator==(const SupportSet& other) const {
  return grid_->same_as(*other.grid_) && values_ == other.values_;
}

SupportSet make_interval(double a, double b) { return make_interval(DirectionGrid::line(), a, b); }

SupportSet make_interval(const GridPtr& grid, double a, double b) {
  if (grid->dim() != 1) throw std::invalid_argument("make_interval needs the d = 1 grid");
  if (!std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("interval endpoints must be finite");
  if (a > b) throw std::invalid_argument("interval needs a <= b");
  return SupportSet::from_canonical(grid, {-a, b});
}

SupportSet minkowski_add(const SupportSet& a, const SupportSet& b) {
  require_same_grid(*a.grid(), *b.grid());
  std::vector<double> v(a.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = a[k] + b[k];
  return SupportSet::from_canonical(a.grid(), std::move(v));
}

SupportSet scale(const SupportSet& a, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument(
        "scale factor must be finite and >= 0; negative multiples reflect the set and are not "
        "pointwise on support vectors");
  }
  std::vector<double> v(a.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = lambda * a[k];
  return SupportSet::from_canonical(a.grid(), std::move(v));
}

SupportSet translate(const SupportSet& a, Point x) {
  if (a.dim() == 1 && x.y != 0.0) throw std::invalid_argument("translation has the wrong dimension");
  std::vector<double> v(a.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = a[k] + dot(a.grid()->direction(k), x);
  return SupportSet::from_canonical(a.grid(), std::move(v));
}

double hausdorff(const SupportSet& a, const SupportSet& b) {
  require_same_grid(*a.grid(), *b.grid());
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

Point steiner_point(const SupportSet& a) {
  if (a.dim() == 1) return {(a[1] - a[0]) / 2.0, 0.0};
  const auto& grid = *a.grid();
  Point s;
  for (std::size_t k = 0; k < a.size(); ++k) s = s + a[k] * grid.direction(k);
  return (2.0 / static_cast<double>(a.size())) * s;
}

std::vector<Point> grid_vertices(const SupportSet& a) {
  if (a.dim() != 2) throw std::invalid_argument("grid_vertices needs d = 2");
  const auto& grid = *a.grid();
  const std::size_t m = a.size();
  std::vector<Point> out(m);
  for (std::size_t k = 0; k < m; ++k) {
    const Point& u = grid.direction(k);
    const Point& v = grid.direction((k + 1) % m);
    const double det = u.x * v.y - u.y * v.x;
    const double hu = a[k];
    const double hv = a[(k + 1) % m];
    out[k] = {(hu * v.y - hv * u.y) / det, (u.x * hv - v.x * hu) / det};
  }
  return out;
}

bool contains(const SupportSet& a, Point p, double slack) {
  const auto& grid = *a.grid();
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (dot(grid.direction(k), p) > a[k] + slack) return false;
  }
  return true;
}

}  // namespace gaugeset
