#include "gaugeset/primitive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gaugeset {

namespace {

constexpr int kMaxDepth = 60;

}  // namespace

Primitive Primitive::from_leaves(GridPtr grid, std::vector<Leaf> leaves) {
  if (leaves.empty()) throw std::invalid_argument("primitive needs at least one leaf");
  std::sort(leaves.begin(), leaves.end(), [](const Leaf& x, const Leaf& y) { return x.a < y.a; });
  Primitive p(std::move(grid));
  for (const Leaf& leaf : leaves) {
    if (leaf.values.size() != p.width_) throw std::invalid_argument("leaf value has the wrong length");
  }
  p.nodes_.reserve(2 * leaves.size());
  p.values_.reserve(2 * leaves.size() * p.width_);
  p.build(leaves, 0.0, 1.0, 0);
  p.leaf_count_ = leaves.size();
  return p;
}

Primitive Primitive::uniform(GridPtr grid, int depth,
                             const std::function<SupportSet(double, double)>& cell_value) {
  if (depth < 0 || depth > 30) throw std::invalid_argument("uniform primitive depth out of range");
  const std::size_t n = std::size_t{1} << depth;
  std::vector<Leaf> leaves(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = std::ldexp(static_cast<double>(j), -depth);
    const double b = std::ldexp(static_cast<double>(j + 1), -depth);
    const SupportSet v = cell_value(a, b);
    require_same_grid(*grid, *v.grid());
    leaves[j] = {a, b, {v.values().begin(), v.values().end()}};
  }
  return from_leaves(std::move(grid), std::move(leaves));
}

// `leaves` is the sorted run of leaves inside [a,b]. Returns the node index.
int Primitive::build(std::span<Leaf> leaves, double a, double b, int depth) {
  if (leaves.empty() || leaves.front().a != a || leaves.back().b != b) {
    throw std::invalid_argument("primitive leaves do not tile a dyadic cell");
  }
  if (depth > kMaxDepth) throw std::invalid_argument("primitive leaves are not dyadic");
  const int index = static_cast<int>(nodes_.size());
  nodes_.push_back({a, b});
  values_.resize(values_.size() + width_, 0.0);

  if (leaves.size() == 1) {
    std::copy(leaves[0].values.begin(), leaves[0].values.end(),
              values_.begin() + static_cast<std::ptrdiff_t>(index * width_));
    level_ = std::max(level_, depth);
    return index;
  }
  const double mid = 0.5 * (a + b);
  const auto split = std::partition_point(leaves.begin(), leaves.end(),
                                          [mid](const Leaf& l) { return l.b <= mid; });
  const std::size_t nleft = static_cast<std::size_t>(split - leaves.begin());
  const int left = build(leaves.first(nleft), a, mid, depth + 1);
  const int right = build(leaves.subspan(nleft), mid, b, depth + 1);
  nodes_[index].left = left;
  nodes_[index].right = right;
  for (std::size_t k = 0; k < width_; ++k) {
    values_[index * width_ + k] = values_[left * width_ + k] + values_[right * width_ + k];
  }
  return index;
}

void Primitive::accumulate_node(int node, double a, double b, std::span<double> out) const {
  const Node& n = nodes_[node];
  const double lo = std::max(a, n.a);
  const double hi = std::min(b, n.b);
  if (!(hi > lo)) return;
  const auto v = node_values(node);
  if (lo == n.a && hi == n.b) {
    for (std::size_t k = 0; k < width_; ++k) out[k] += v[k];
    return;
  }
  if (n.left < 0) {
    const double share = (hi - lo) / (n.b - n.a);
    for (std::size_t k = 0; k < width_; ++k) out[k] += share * v[k];
    return;
  }
  accumulate_node(n.left, a, b, out);
  accumulate_node(n.right, a, b, out);
}

void Primitive::accumulate(double a, double b, std::span<double> out) const {
  if (out.size() != width_) throw std::invalid_argument("primitive output has the wrong length");
  if (a > b) throw std::invalid_argument("primitive query needs a <= b");
  accumulate_node(0, a, b, out);
}

SupportSet Primitive::query(double a, double b) const {
  std::vector<double> out(width_, 0.0);
  accumulate(a, b, out);
  return SupportSet::from_canonical(grid_, std::move(out));
}

}  // namespace gaugeset
