#include <cmath>
#include <vector>

#include "catch_amalgamated.hpp"

#include "gaugeset/corpus.hpp"
#include "gaugeset/decomposition.hpp"

using namespace gaugeset;
using Catch::Matchers::WithinAbs;

namespace {

DecompositionOptions options_for(const MultifunctionSpec& s) {
  DecompositionOptions o;
  o.schedules = s.schedules;
  o.integrator.singular_points = s.singular_points;
  return o;
}

// F''(t) with u = t^-2: 2 sin u - 2 t^-2 cos u - 4 t^-4 sin u.
double second_derivative(double t) {
  const double u = 1.0 / (t * t);
  return 2.0 * std::sin(u) - 2.0 * u * std::cos(u) - 4.0 * u * u * std::sin(u);
}

// Upper bound for the plain statistic on a mesh of width < delta: each term
// |f(t) - f(t')| |I| is at most |I| times the integral of |F''| over I.
double modulus_bound(double a, double b, double delta) {
  const std::size_t n = 2000000;
  const double h = (b - a) / static_cast<double>(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::abs(second_derivative(a + (static_cast<double>(i) + 0.5) * h));
  return delta * s * h;
}

}  // namespace

TEST_CASE("Steiner and argmax selections on intervals") {
  const auto g2 = corpus_get("G2").gamma;
  const auto st = steiner_selection(g2);
  const auto hi = argmax_selection(g2, 1);
  const auto lo = argmax_selection(g2, 0);
  for (double t : probe_points(50)) {
    CHECK_THAT(st(t).x, WithinAbs(0.5 * t, 1e-15));
    CHECK(hi(t).x == t);
    CHECK(lo(t).x == 0.0);
  }
  const auto g3 = corpus_get("G3").gamma;
  const auto pos = argmax_selection(g3, 1);
  for (double t : probe_points(50)) CHECK(pos(t).x == std::max(0.0, oscillating_derivative(t)));
  CHECK_THROWS(argmax_selection(g2, 2));
}

TEST_CASE("argmax on a singleton returns the point") {
  const auto grid = DirectionGrid::circle(8);
  const auto g = Multifunction::singleton(grid, [](double t) { return Point{t, -t}; });
  for (std::size_t k = 0; k < 8; ++k) {
    const Point p = argmax_selection(g, k)(0.5);
    CHECK_THAT(p.x, WithinAbs(0.5, 1e-12));
    CHECK_THAT(p.y, WithinAbs(-0.5, 1e-12));
  }
}

TEST_CASE("argmax ties in d = 2 go to the lowest vertex index") {
  // The square [-1,1]^2 on four directions: vertex k meets lines k and k+1.
  const auto grid = DirectionGrid::circle(4);
  const auto g = Multifunction::from_sets(grid, [&](double) { return SupportSet::ball(grid, {0.0, 0.0}, 1.0); });
  const Point east = argmax_selection(g, 0)(0.3);
  CHECK_THAT(east.x, WithinAbs(1.0, 1e-12));
  CHECK_THAT(east.y, WithinAbs(1.0, 1e-12));
  const Point west = argmax_selection(g, 2)(0.3);
  CHECK_THAT(west.x, WithinAbs(-1.0, 1e-12));
  CHECK_THAT(west.y, WithinAbs(1.0, 1e-12));
}

TEST_CASE("subtracting a selection leaves a set that contains zero") {
  const auto g1 = corpus_get("G1").gamma;
  const auto r1 = subtract_selection(g1, [](double t) { return Point{oscillating_derivative(t), 0.0}; });
  for (double t : probe_points(100)) {
    const auto v = r1(t);
    REQUIRE_THAT(v[0], WithinAbs(0.0, 1e-9 * std::max(1.0, std::abs(oscillating_derivative(t)))));
    REQUIRE_THAT(v[1], WithinAbs(1.0, 1e-9 * std::max(1.0, std::abs(oscillating_derivative(t)))));
  }
  const auto g2 = corpus_get("G2").gamma;
  const auto r2 = subtract_selection(g2, steiner_selection(g2));
  for (double t : probe_points(100)) CHECK(hausdorff(r2(t), make_interval(-0.5 * t, 0.5 * t)) < 1e-15);
  const auto z = zero_membership(r2);
  CHECK(z.violations == 0);
  CHECK(z.min_support >= 0.0);
}

TEST_CASE("a point outside the set is rejected with its location") {
  const auto g2 = corpus_get("G2").gamma;
  try {
    subtract_selection(g2, [](double t) { return Point{2.0 * t, 0.0}; });
    FAIL("expected NotASelection");
  } catch (const NotASelection& e) {
    CHECK(e.t() > 0.0);
    CHECK(e.t() <= 1.0);
  }
}

TEST_CASE("theorem names parse in several spellings") {
  CHECK(parse_theorem("t33") == Theorem::t33);
  CHECK(parse_theorem("T4.2") == Theorem::t42);
  CHECK(parse_theorem("t5.5") == Theorem::t55);
  CHECK_THROWS(parse_theorem("t99"));
  CHECK(std::string(expected_flag(Theorem::t33)) == "henstock");
  CHECK(std::string(expected_flag(Theorem::t42)) == "birkhoff");
  CHECK(std::string(expected_flag(Theorem::t55)) == "vH");
}

TEST_CASE("G2 decomposes under all three theorems") {
  const auto s = corpus_get("G2");
  auto o = options_for(s);
  o.selection_id = "steiner";
  for (Theorem th : {Theorem::t33, Theorem::t42, Theorem::t55}) {
    const auto r = verify_decomposition(s.gamma, steiner_selection(s.gamma), th, s.schedules.tol, o);
    CHECK(r.passed);
    CHECK(r.additivity_gap < 1e-4);
    CHECK_THAT(r.gamma_integral[1], WithinAbs(0.5, 1e-4));
    CHECK_THAT(r.selection_integral.x, WithinAbs(0.25, 1e-4));
    for (const auto& c : r.clauses) CHECK(c.passed);
    REQUIRE(r.find("gamma") != nullptr);
    CHECK(r.find("nothing") == nullptr);
  }
}

TEST_CASE("a non-integrable multifunction fails the decomposition") {
  const auto s = corpus_get("G3", {64, 4});
  const auto r = verify_decomposition(s.gamma, steiner_selection(s.gamma), Theorem::t33, s.schedules.tol,
                                      options_for(s));
  CHECK_FALSE(r.passed);
  bool gamma_failed = false;
  for (const auto& c : r.clauses) gamma_failed = gamma_failed || (c.report == "gamma" && !c.passed);
  CHECK(gamma_failed);
}

TEST_CASE("Riemann probe of a constant function is zero") {
  const auto r = riemann_measurability_probe([](double) { return Point{3.0, -1.0}; }, IntervalUnion({{0.0, 1.0}}));
  CHECK(r.max_plain == 0.0);
  CHECK(r.max_strong == 0.0);
  CHECK(r.passed);
  CHECK(r.strongly_passed);
  CHECK(r.complement_measure == 0.0);
}

TEST_CASE("the strong statistic dominates the plain one in the plane") {
  RiemannProbeOptions o;
  o.delta = 0.05;
  const auto r = riemann_measurability_probe(
      [](double t) { return Point{std::sin(50.0 * t), std::cos(37.0 * t)}; }, IntervalUnion({{0.0, 1.0}}), o);
  REQUIRE(r.plain.size() == static_cast<std::size_t>(o.trials));
  for (std::size_t i = 0; i < r.plain.size(); ++i) CHECK(r.strong[i] >= r.plain[i] - 1e-15);
  CHECK(r.max_plain > 0.0);
}

TEST_CASE("F' is not Riemann measurable near zero") {
  const auto r = riemann_measurability_probe([](double t) { return Point{oscillating_derivative(t), 0.0}; },
                                             IntervalUnion({{0.0, 1.0}}));
  CHECK_FALSE(r.passed);
  CHECK(r.max_plain > 0.05);
}

TEST_CASE("away from zero the probe stays under the modulus bound") {
  const auto f = [](double t) { return Point{oscillating_derivative(t), 0.0}; };
  const IntervalUnion away({{0.1, 1.0}});
  RiemannProbeOptions fine;
  fine.delta = 1e-5;
  const auto r = riemann_measurability_probe(f, away, fine);
  CHECK(r.passed);
  CHECK_THAT(r.complement_measure, WithinAbs(0.1, 1e-15));
  CHECK(r.max_plain <= modulus_bound(0.1, 1.0, fine.delta));

  // At delta = 1e-3 the bound is above eps and so is the observed statistic.
  RiemannProbeOptions coarse;
  const auto c = riemann_measurability_probe(f, away, coarse);
  const double bound = modulus_bound(0.1, 1.0, coarse.delta);
  CHECK(bound > coarse.eps);
  CHECK(c.max_plain <= bound);
  CHECK_FALSE(c.passed);
}
