#include <cmath>
#include <random>
#include <vector>

#include "catch_amalgamated.hpp"

#include "gaugeset/primitive.hpp"

using namespace gaugeset;
using Catch::Matchers::WithinAbs;

namespace {

// Exact primitive of t -> [0, t]: I -> [0, (b^2 - a^2) / 2].
Primitive ramp(int depth) {
  return Primitive::uniform(DirectionGrid::line(), depth,
                            [](double a, double b) { return make_interval(0.0, 0.5 * (b * b - a * a)); });
}

}  // namespace

TEST_CASE("dyadic queries return the stored sums") {
  const auto phi = ramp(6);
  CHECK(phi.leaf_count() == 64);
  CHECK(phi.level() == 6);
  CHECK_THAT(phi.query(0.0, 1.0)[1], WithinAbs(0.5, 1e-15));
  CHECK_THAT(phi.query(0.25, 0.5)[1], WithinAbs((0.25 - 0.0625) / 2.0, 1e-15));
  CHECK(phi.query(0.3, 0.3)[1] == 0.0);
}

TEST_CASE("queries are additive over any split point") {
  const auto phi = ramp(8);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    double a = u(rng), c = u(rng);
    if (a > c) std::swap(a, c);
    const double b = a + (c - a) * u(rng);
    const auto whole = phi.query(a, c);
    const auto left = phi.query(a, b);
    const auto right = phi.query(b, c);
    REQUIRE_THAT(whole[1], WithinAbs(left[1] + right[1], 1e-15));
  }
}

TEST_CASE("a query cutting a leaf takes the proportional share") {
  // Single leaf [0,1] carrying [0, 1/2]: the share of [0, 0.3] is 0.3 of it.
  const auto phi = ramp(0);
  CHECK_THAT(phi.query(0.0, 0.3)[1], WithinAbs(0.15, 1e-15));
}

TEST_CASE("from_leaves accepts mixed depths and rejects bad tilings") {
  const auto g = DirectionGrid::line();
  std::vector<Primitive::Leaf> ok{{0.0, 0.5, {0.0, 1.0}}, {0.5, 0.75, {0.0, 2.0}}, {0.75, 1.0, {0.0, 3.0}}};
  const auto phi = Primitive::from_leaves(g, ok);
  CHECK(phi.query(0.0, 1.0)[1] == 6.0);
  CHECK(phi.query(0.5, 1.0)[1] == 5.0);
  CHECK(phi.level() == 2);

  std::vector<Primitive::Leaf> gap{{0.0, 0.5, {0.0, 1.0}}, {0.75, 1.0, {0.0, 1.0}}};
  CHECK_THROWS_AS(Primitive::from_leaves(g, gap), std::invalid_argument);
  std::vector<Primitive::Leaf> odd{{0.0, 0.3, {0.0, 1.0}}, {0.3, 1.0, {0.0, 1.0}}};
  CHECK_THROWS_AS(Primitive::from_leaves(g, odd), std::invalid_argument);
  std::vector<Primitive::Leaf> width{{0.0, 1.0, {1.0}}};
  CHECK_THROWS_AS(Primitive::from_leaves(g, width), std::invalid_argument);
  CHECK_THROWS_AS(phi.query(0.6, 0.4), std::invalid_argument);
}

TEST_CASE("set-valued leaves add as Minkowski sums") {
  const auto grid = DirectionGrid::circle(8);
  const auto ball = SupportSet::ball(grid, {0.0, 0.0}, 1.0);
  const auto phi = Primitive::uniform(grid, 4, [&](double a, double b) { return scale(ball, b - a); });
  const auto all = phi.query(0.0, 1.0);
  for (std::size_t k = 0; k < grid->size(); ++k) CHECK_THAT(all[k], WithinAbs(ball[k], 1e-14));
  const auto part = phi.query(0.1, 0.35);
  for (std::size_t k = 0; k < grid->size(); ++k) CHECK_THAT(part[k], WithinAbs(0.25 * ball[k], 1e-14));
}
