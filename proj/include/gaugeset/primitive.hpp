#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "gaugeset/convex_sets.hpp"

namespace gaugeset {

/// Additive interval map I -> SupportSet stored on a dyadic tree.
///
/// Leaves are dyadic cells [j 2^-k, (j+1) 2^-k] covering [0,1], possibly at
/// different depths. Each internal node stores the Minkowski sum of its two
/// children, so splitting any tree node into its halves is additive with no
/// rounding error. Queries on intervals that cut a leaf take the proportional
/// share of that leaf.
class Primitive {
 public:
  struct Leaf {
    double a = 0.0;
    double b = 0.0;
    std::vector<double> values;
  };

  /// Leaves must be dyadic, sorted, and tile [0,1].
  static Primitive from_leaves(GridPtr grid, std::vector<Leaf> leaves);

  /// Uniform depth-`depth` tree with leaf values given by `cell_value(a, b)`.
  static Primitive uniform(GridPtr grid, int depth,
                           const std::function<SupportSet(double, double)>& cell_value);

  SupportSet query(double a, double b) const;
  /// Adds the query result onto `out` (length = grid size).
  void accumulate(double a, double b, std::span<double> out) const;

  /// Depth of the deepest leaf.
  int level() const noexcept { return level_; }
  std::size_t leaf_count() const noexcept { return leaf_count_; }
  const GridPtr& grid() const noexcept { return grid_; }

 private:
  struct Node {
    double a;
    double b;
    int left = -1;
    int right = -1;
  };

  Primitive(GridPtr grid) : grid_(std::move(grid)), width_(grid_->size()) {}
  int build(std::span<Leaf> leaves, double a, double b, int depth);
  void accumulate_node(int node, double a, double b, std::span<double> out) const;
  std::span<const double> node_values(int node) const {
    return {values_.data() + static_cast<std::size_t>(node) * width_, width_};
  }

  GridPtr grid_;
  std::size_t width_;
  std::vector<Node> nodes_;
  std::vector<double> values_;
  int level_ = 0;
  std::size_t leaf_count_ = 0;
};

}  // namespace gaugeset
