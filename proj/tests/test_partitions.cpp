#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "catch_amalgamated.hpp"

#include "gaugeset/partitions.hpp"

using namespace gaugeset;
using Catch::Matchers::WithinAbs;

namespace {

// A mix of smooth, kinked, oscillating and near-singular gauges.
Gauge random_gauge(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int kind = static_cast<int>(u(rng) * 4);
  const double s = u(rng);
  const double c = 0.001 + 0.2 * u(rng);
  switch (kind) {
    case 0: return Gauge::constant(c);
    case 1: return Gauge::callable([s, c](double t) { return c * std::abs(t - s) + 1e-4; });
    case 2: return Gauge::callable([s, c](double t) { return c * (1.1 + std::sin(40.0 * t + 7.0 * s)); });
    default:
      return Gauge::callable([s, c](double t) { return t == s ? 0.3 : std::min(c, 0.5 * std::abs(t - s) + 1e-6); },
                             "spike", {s});
  }
}

TaggedPartition random_perron(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> cuts{0.0, 1.0};
  for (std::size_t i = 1; i < n; ++i) cuts.push_back(u(rng));
  std::sort(cuts.begin(), cuts.end());
  std::vector<TaggedCell> cells;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (b - a < 1e-6) continue;
    const double r = u(rng);
    // Endpoint tags on every other cell so no tag is shared by neighbours.
    double t = a + (b - a) * (0.1 + 0.8 * u(rng));
    if (i % 2 == 1) t = r < 0.5 ? a : b;
    cells.push_back({a, b, t});
  }
  // Close any dropped gap by stretching the last cell.
  for (std::size_t i = 1; i < cells.size(); ++i) cells[i].a = cells[i - 1].b;
  cells.front().a = 0.0;
  cells.back().b = 1.0;
  for (auto& c : cells) c.t = std::clamp(c.t, c.a, c.b);
  return TaggedPartition(cells);
}

}  // namespace

TEST_CASE("interval unions merge and measure") {
  IntervalUnion u({{0.5, 0.7}, {0.0, 0.2}, {0.1, 0.3}, {0.7, 0.8}});
  REQUIRE(u.parts().size() == 2);
  CHECK_THAT(u.measure(), WithinAbs(0.6, 1e-15));
  CHECK(u.contains(0.25));
  CHECK_FALSE(u.contains(0.4));
  CHECK_THAT(u.distance(0.4), WithinAbs(0.1, 1e-15));
  CHECK(u.covers(IntervalUnion({{0.55, 0.6}})));
  CHECK_FALSE(u.covers(IntervalUnion({{0.25, 0.55}})));
  CHECK_THAT(u.overlap(IntervalUnion({{0.25, 0.55}})), WithinAbs(0.1, 1e-15));
}

TEST_CASE("gauges evaluate, scale and validate") {
  const Gauge c = Gauge::constant(0.1);
  CHECK(c(0.3) == 0.1);
  CHECK(c.scaled(0.5)(0.9) == 0.05);
  CHECK_NOTHROW(validate_gauge(c));
  CHECK_THROWS_AS(Gauge::constant(0.0), InvalidGauge);
  CHECK_THROWS_AS(validate_gauge(Gauge::callable([](double t) { return t - 0.5; })), InvalidGauge);

  const Gauge p = Gauge::piecewise({{IntervalUnion({{0.0, 0.5}}), 0.2}, {IntervalUnion({{0.5, 1.0}}), 0.1}});
  CHECK(p(0.25) == 0.2);
  CHECK(p(0.75) == 0.1);
  CHECK(p(0.5) == 0.1);  // the smaller value at a shared point
  CHECK(p.kind() == Gauge::Kind::piecewise);
  CHECK_NOTHROW(validate_gauge(p));
  CHECK_THROWS_AS(validate_gauge(Gauge::piecewise({{IntervalUnion({{0.0, 0.4}}), 0.2}})), InvalidGauge);
}

TEST_CASE("tagged partitions compute their flags") {
  TaggedPartition p({{0.0, 0.5, 0.0}, {0.5, 1.0, 0.75}});
  CHECK(p.perron());
  CHECK(p.full());
  CHECK(p.interior());
  CHECK(p.distinct_tags());
  TaggedPartition q({{0.0, 0.5, 0.5}, {0.5, 1.0, 0.5}});
  CHECK_FALSE(q.interior());
  CHECK_FALSE(q.distinct_tags());
  TaggedPartition free({{0.0, 0.5, 0.9}, {0.5, 1.0, 0.1}});
  CHECK_FALSE(free.perron());
  CHECK_THROWS(TaggedPartition({{0.0, 0.6, 0.1}, {0.5, 1.0, 0.7}}));
  TaggedPartition partial({{0.0, 0.25, 0.1}});
  CHECK_FALSE(partial.full());
}

TEST_CASE("delta-fineness uses the open ball around the tag") {
  const Gauge g = Gauge::constant(0.25);
  CHECK(cell_is_delta_fine({0.0, 0.24, 0.0}, g, true));
  CHECK_FALSE(cell_is_delta_fine({0.0, 0.25, 0.0}, g, true));
  CHECK(cell_is_delta_fine({0.3, 0.4, 0.2}, g, false));
  CHECK_FALSE(cell_is_delta_fine({0.3, 0.4, 0.2}, g, true));
}

TEST_CASE("cousin_build is delta-fine on 100 randomized gauges") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 100; ++i) {
    const Gauge g = random_gauge(rng);
    const TaggedPartition p = cousin_build(g);
    REQUIRE(p.full());
    REQUIRE(p.perron());
    REQUIRE(is_delta_fine(p, g, true));
    for (std::size_t k = 1; k < p.size(); ++k) REQUIRE(p[k].a == p[k - 1].b);
  }
}

TEST_CASE("cousin_build respects min and max depth") {
  const auto p = cousin_build(Gauge::constant(10.0), {40, 3});
  CHECK(p.size() == 8);
  CHECK_THROWS_AS(cousin_build(Gauge::constant(1e-9), {10, 0}), DepthExceeded);
}

TEST_CASE("free partitions follow their tag rule") {
  const auto mid = free_partition(4, TagRule::midpoint);
  CHECK(mid[2].t == 0.625);
  const auto left = free_partition(4, TagRule::left);
  CHECK(left[3].t == 0.75);
  const auto r1 = free_partition(16, TagRule::seeded_random, 3);
  const auto r2 = free_partition(16, TagRule::seeded_random, 3);
  for (std::size_t i = 0; i < 16; ++i) CHECK(r1[i].t == r2[i].t);
  const std::vector<double> tags{0.9, 0.1};
  const auto s = free_partition(2, TagRule::supplied, 0, tags);
  CHECK(s[0].t == 0.9);
  CHECK_FALSE(s.perron());
}

TEST_CASE("split_duplicate_tags keeps every cell once with distinct tags per part") {
  TaggedPartition p({{0.0, 0.25, 0.25}, {0.25, 0.5, 0.25}, {0.5, 0.75, 0.75}, {0.75, 1.0, 0.75}});
  const auto parts = split_duplicate_tags(p);
  REQUIRE(parts.size() == 2);
  double total = 0.0;
  for (const auto& part : parts) {
    CHECK(part.distinct_tags());
    total += part.total_length();
  }
  CHECK(total == 1.0);
}

TEST_CASE("interior_repair meets its bounds on 100 randomized partitions") {
  std::mt19937_64 rng(77);
  const PointFunction f = [](double t) { return Point{std::sin(5.0 * t) + 2.0, 0.0}; };
  // Primitive of [0, 1]: I -> |I| [0, 1].
  const Primitive phi = Primitive::uniform(DirectionGrid::line(), 10,
                                           [](double a, double b) { return make_interval(0.0, b - a); });
  int repaired = 0;
  for (int i = 0; i < 100; ++i) {
    const TaggedPartition p = random_perron(rng, 3 + i % 20);
    double longest = 0.0;
    for (const auto& c : p.cells()) longest = std::max(longest, c.length());
    const Gauge g = Gauge::constant(2.0 * longest + 0.01);
    REQUIRE(is_delta_fine(p, g, true));
    const double eps = 1e-3;
    const RepairResult r = interior_repair(p, f, &phi, eps, &g);
    REQUIRE(r.partition.interior());
    REQUIRE(r.partition.full());
    REQUIRE(is_delta_fine(r.partition, g, true));
    REQUIRE(r.length_gap < eps);
    REQUIRE(r.primitive_gap <= eps);
    for (std::size_t k = 0; k < p.size(); ++k) REQUIRE(r.partition[k].t == p[k].t);
    repaired += r.moved_endpoints > 0;
  }
  CHECK(repaired > 50);
}

TEST_CASE("interior_repair rejects repeated tags") {
  TaggedPartition p({{0.0, 0.5, 0.5}, {0.5, 1.0, 0.5}});
  CHECK_THROWS(interior_repair(p, [](double) { return Point{}; }, nullptr, 1e-3));
}

TEST_CASE("measurable gauges are piecewise, positive and below delta_n on F_n") {
  const Gauge d0 = Gauge::callable([](double t) { return 0.01 + 0.1 * t; });
  const std::vector<FiltrationPiece> filt{{IntervalUnion({{0.0, 0.5}}), 0.02}, {IntervalUnion({{0.5, 1.0}}), 0.005}};
  const Gauge g = build_measurable_gauge(d0, filt, {8, 1.0 / 64, 8});
  CHECK(g.kind() == Gauge::Kind::piecewise);
  CHECK_NOTHROW(validate_gauge(g));
  for (int i = 0; i <= 1000; ++i) {
    const double t = i / 1000.0;
    REQUIRE(g(t) > 0.0);
    if (t > 0.5) REQUIRE(g(t) <= 0.005);
    REQUIRE(g(t) <= 0.02);
  }
}

TEST_CASE("measurable partitions interleave, refine and carry their tags") {
  const auto coarse = measurable_partition({2, 3, PieceTagRule::midpoint, 0});
  const auto fine = measurable_partition({4, 3, PieceTagRule::seeded_random, 9});
  CHECK(coarse.pieces.size() == 2);
  CHECK(fine.pieces.size() == 4);
  CHECK_THAT(fine.total_measure(), WithinAbs(1.0, 1e-15));
  CHECK(fine.refines(coarse));
  CHECK_FALSE(coarse.refines(fine));
  for (const auto& piece : fine.pieces) {
    CHECK(piece.set.parts().size() == 2);  // cells j and j + 4 of 8
    CHECK(piece.set.contains(piece.tag));
  }
  auto re = fine;
  retag_pieces(re, PieceTagRule::left, 0);
  for (std::size_t j = 0; j < re.pieces.size(); ++j) CHECK(re.pieces[j].tag == re.pieces[j].set.parts()[0].a);
}
