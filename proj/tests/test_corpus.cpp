#include <cmath>
#include <string>

#include "catch_amalgamated.hpp"

#include "gaugeset/corpus.hpp"

using namespace gaugeset;
using Catch::Matchers::WithinAbs;

TEST_CASE("the registry lists six entries") {
  CHECK(corpus_names().size() == 6);
  for (const auto& n : corpus_names()) {
    const auto s = corpus_get(n);
    CHECK(s.name == n);
    CHECK_FALSE(s.description.empty());
    CHECK((s.d == 1 || s.d == 2));
  }
  CHECK_THROWS_AS(corpus_get("G7"), UnknownEntry);
  CHECK_THROWS_AS(corpus_get("g1"), UnknownEntry);
}

TEST_CASE("every flag carries a provenance") {
  for (const auto& n : corpus_names()) {
    const auto s = corpus_get(n);
    for (const auto& f : Flags::names()) {
      INFO(n << " " << f);
      CHECK_FALSE(s.flags.get(f).provenance.empty());
      CHECK(s.flags.get(f).value != Flag::unknown);
    }
  }
  CHECK_THROWS(corpus_get("G1").flags.get("lebesgue"));
}

TEST_CASE("flags respect the implications between the integrals") {
  for (const auto& n : corpus_names()) {
    const auto& f = corpus_get(n).flags;
    INFO(n);
    // Birkhoff => McShane => Henstock; vMS => vH => Henstock; McShane => hkp.
    if (f.birkhoff.value == Flag::yes) CHECK(f.mcshane.value == Flag::yes);
    if (f.mcshane.value == Flag::yes) CHECK(f.henstock.value == Flag::yes);
    if (f.vms.value == Flag::yes) CHECK(f.vh.value == Flag::yes);
    if (f.vh.value == Flag::yes) CHECK(f.henstock.value == Flag::yes);
    if (f.henstock.value == Flag::yes) CHECK(f.hkp.value == Flag::yes);
    if (f.mcshane.value == Flag::yes) CHECK(f.integrably_bounded.value == Flag::yes);
  }
}

TEST_CASE("closed-form truths") {
  const double s1 = std::sin(1.0);
  CHECK(*corpus_get("G1").truth == make_interval(s1, 1.0 + s1));
  CHECK(*corpus_get("G2").truth == make_interval(0.0, 0.5));
  CHECK_FALSE(corpus_get("G3").truth.has_value());
  CHECK(*corpus_get("G5").truth == make_interval(s1, s1));
  CHECK(*corpus_get("G6").truth == make_interval(0.0, 1.0));
  const auto g4 = corpus_get("G4", {16, 0});
  REQUIRE(g4.truth.has_value());
  for (std::size_t k = 0; k < 16; ++k) CHECK_THAT((*g4.truth)[k], WithinAbs(0.5, 1e-15));
  // G1 is G5 plus the constant [0, 1].
  CHECK(*corpus_get("G1").truth ==
        minkowski_add(*corpus_get("G5").truth, *corpus_get("G6").truth));
}

TEST_CASE("evaluators return the described sets") {
  const auto g1 = corpus_get("G1").gamma;
  const auto g3 = corpus_get("G3").gamma;
  const auto g5 = corpus_get("G5").gamma;
  for (double t : {0.0, 0.013, 0.3, 0.77, 1.0}) {
    const double f = oscillating_derivative(t);
    CHECK(g1(t) == make_interval(f, f + 1.0));
    CHECK(g3(t) == make_interval(std::min(0.0, f), std::max(0.0, f)));
    CHECK(g5(t) == make_interval(f, f));
    CHECK(corpus_get("G2").gamma(t) == make_interval(0.0, t));
  }
  const auto g4 = corpus_get("G4", {8, 0});
  CHECK(g4.gamma.width() == 8);
  CHECK(g4.gamma(0.25) == SupportSet::ball(g4.gamma.grid(), {0.0, 0.0}, 0.25));
}

TEST_CASE("F' agrees with a central difference of F") {
  for (double t : {0.2, 0.35, 0.5, 0.81, 0.97}) {
    const double h = 1e-6;
    const double cd = (oscillating_primitive(t + h) - oscillating_primitive(t - h)) / (2.0 * h);
    CHECK_THAT(oscillating_derivative(t), WithinAbs(cd, 1e-5 * std::max(1.0, std::abs(cd))));
  }
  CHECK(oscillating_primitive(0.0) == 0.0);
  CHECK(oscillating_derivative(0.0) == 0.0);
  CHECK(oscillating_derivative(1e-9) == 0.0);
  CHECK_THAT(oscillating_primitive(1.0), WithinAbs(std::sin(1.0), 1e-15));
}

TEST_CASE("parameters control directions and levels") {
  const auto a = corpus_get("G4", {32, 0});
  CHECK(a.parameters.at("m") == 32.0);
  CHECK(a.gamma.width() == 32);
  const auto b = corpus_get("G2", {64, 5});
  CHECK(b.schedules.henstock.size() == 5);
  const auto c = corpus_get("G1", {64, 3});
  CHECK(c.schedules.henstock.size() == 3);
  CHECK(c.singular_points == std::vector<double>{0.0});
}

TEST_CASE("singular schedules pin the gauge at zero") {
  const auto s = singular_schedule(4, 0.03, 0.004);
  REQUIRE(s.size() == 4);
  for (int n = 1; n <= 4; ++n) {
    CHECK(s.levels[n - 1](0.0) == std::ldexp(1.0, -(n + 1)));
    CHECK(s.levels[n - 1](0.9) == std::min(0.004 * std::ldexp(1.0, -n), 0.03 * std::exp2(-0.25 * n) * 0.729));
  }
  CHECK_THROWS(singular_schedule(0, 0.03, 0.004));
  CHECK_THROWS(singular_schedule(3, -1.0, 0.004));
}
