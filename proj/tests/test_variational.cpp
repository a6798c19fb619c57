#include <cmath>
#include <random>
#include <vector>

#include "catch_amalgamated.hpp"

#include "gaugeset/corpus.hpp"
#include "gaugeset/integrators.hpp"

using namespace gaugeset;
using Catch::Matchers::WithinAbs;

namespace {

// Exact primitive of G2: I -> [0, (b^2 - a^2) / 2]. Its leaves must stay finer
// than the cells it is queried on, or the proportional share sets a floor.
Primitive g2_primitive() {
  return Primitive::uniform(DirectionGrid::line(), 16,
                            [](double a, double b) { return make_interval(0.0, 0.5 * (b * b - a * a)); });
}

// Midpoint rule for a smooth scalar function.
double midpoint(double a, double b, std::size_t n, double (*f)(double)) {
  const double h = (b - a) / static_cast<double>(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += f(a + (static_cast<double>(i) + 0.5) * h);
  return s * h;
}

}  // namespace

TEST_CASE("variational sums bound the distance of the Riemann sum to the total") {
  const auto g2 = corpus_get("G2").gamma;
  const auto phi = g2_primitive();
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) {
    const auto p = free_partition(5 + i, TagRule::seeded_random, rng());
    const double v = variational_sum(g2, phi, p);
    const double d = hausdorff(riemann_sum(g2, p), phi.query(0.0, 1.0));
    REQUIRE(v >= d - 1e-15);
  }
}

TEST_CASE("variational sums vanish for a constant with its exact primitive") {
  const auto s = corpus_get("G6");
  const auto phi = constant_primitive(make_interval(0.0, 1.0));
  const auto p = free_partition(17, TagRule::seeded_random, 2);
  CHECK_THAT(variational_sum(s.gamma, phi, p), WithinAbs(0.0, 1e-15));
}

TEST_CASE("vh_check on G2 converges in both tag modes") {
  const auto s = corpus_get("G2");
  const auto phi = g2_primitive();
  IntegratorOptions o;
  o.tol = s.schedules.variational_tol;
  for (TagMode mode : {TagMode::perron, TagMode::free}) {
    const auto r = vh_check(s.gamma, phi, s.schedules.variational, mode, o);
    CHECK(r.report.verdict == Verdict::converged);
    // On a halving schedule each cell's worst gap is of order |I|^2, so the
    // level sums halve.
    for (std::size_t i = 2; i < r.sums.size(); ++i) {
      const double ratio = r.sums[i] / r.sums[i - 1];
      CHECK(ratio > 0.45);
      CHECK(ratio < 0.55);
    }
  }
}

TEST_CASE("variational sets parse intervals, unions and points") {
  const auto a = parse_variational_set("[0.2,0.5]");
  CHECK_THAT(a.intervals.measure(), WithinAbs(0.3, 1e-15));
  CHECK(a.points.empty());
  const auto u = parse_variational_set("[0,0.1] u [0.5, 0.6]");
  CHECK(u.intervals.parts().size() == 2);
  const auto p = parse_variational_set("{0, 0.5}");
  CHECK(p.points == std::vector<double>{0.0, 0.5});
  CHECK_THROWS(parse_variational_set("{}"));
  CHECK_THROWS(parse_variational_set("[0.5"));
  CHECK_THROWS(parse_variational_set("[0.7,0.2]"));
  CHECK_THROWS(parse_variational_set("(0,1)"));
}

TEST_CASE("variational measure of a constant set on an interval is its length") {
  const auto s = corpus_get("G6");
  const auto phi = build_primitive(s.gamma, s.schedules.primitive_gauge, 12);
  const auto r = variational_measure_estimate(phi, parse_variational_set("[0.2,0.5]"), s.schedules.measure);
  CHECK_THAT(r.value, WithinAbs(0.3, 1e-3));
  for (std::size_t i = 1; i < r.estimates.size(); ++i) CHECK(r.estimates[i] <= r.estimates[i - 1] + 1e-12);
}

TEST_CASE("variational measure of the ramp primitive") {
  const auto s = corpus_get("G2");
  const auto phi = g2_primitive();
  // Absolutely continuous case: the integral of t over [0.25, 0.75] is 1/4.
  const auto mid = variational_measure_estimate(phi, parse_variational_set("[0.25,0.75]"), s.schedules.measure);
  CHECK_THAT(mid.value, WithinAbs(0.25, 0.025));
  // A single tag carries one cell, and ||Phi(I)|| <= |I|.
  const auto point = variational_measure_estimate(phi, parse_variational_set("{0.5}"), s.schedules.measure);
  for (std::size_t i = 0; i < point.estimates.size(); ++i) CHECK(point.estimates[i] <= std::ldexp(1.0, -int(i)));
  CHECK(point.value < 1e-3);
}

TEST_CASE("variational measure of a point-valued primitive is the integral of |F'|") {
  const auto s = corpus_get("G5");
  const auto phi = build_primitive(s.gamma, s.schedules.primitive_gauge, 14);
  const auto r = variational_measure_estimate(phi, parse_variational_set("[0.5,1]"), s.schedules.measure);
  const double oracle = midpoint(0.5, 1.0, 200000, [](double t) { return std::abs(oscillating_derivative(t)); });
  CHECK_THAT(r.value, WithinAbs(oracle, 2e-3));
}

TEST_CASE("variational measure of single points shrinks to zero") {
  const auto s = corpus_get("G1");
  const auto phi = build_primitive(s.gamma, s.schedules.primitive_gauge, 14);
  const auto r = variational_measure_estimate(phi, parse_variational_set("{0}"), s.schedules.measure);
  CHECK(r.value < 1e-3);
  CHECK(variational_measure_estimate(phi, VariationalSet{}, s.schedules.measure).value == 0.0);
}
