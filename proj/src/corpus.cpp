#include "gaugeset/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gaugeset {

namespace {

constexpr double kClamp = 1e-8;

FlagEntry yes(std::string why) { return {Flag::yes, std::move(why)}; }
FlagEntry no(std::string why) { return {Flag::no, std::move(why)}; }

Flags all_yes(const std::string& why) {
  return {yes(why), yes(why), yes(why), yes(why), yes(why), yes(why), yes(why)};
}

int pick_levels(const CorpusParams& p, int fallback) { return p.levels > 0 ? p.levels : fallback; }

// Smooth entries: halving constant gauges.
EntrySchedules smooth_schedules(const CorpusParams& p, double tol) {
  EntrySchedules s;
  const int levels = pick_levels(p, 12);
  s.henstock = GaugeSchedule::halving(Gauge::constant(0.25), levels);
  s.mcshane = GaugeSchedule::halving(Gauge::constant(0.05), levels);
  s.variational = GaugeSchedule::halving(Gauge::constant(0.25), std::min(levels, 10));
  s.primitive_gauge = s.variational.levels.back().scaled(0.25);
  s.measure = GaugeSchedule::halving(Gauge::constant(0.5), 12);
  s.birkhoff = birkhoff_schedule(10, 3);
  s.tol = tol;
  s.variational_tol = 1e-3;
  return s;
}

// Entries built on F'. The variational schedule keeps the gauge at 0 fixed
// (so the first cell is fixed) and refines elsewhere.
EntrySchedules singular_schedules(const CorpusParams& p) {
  EntrySchedules s;
  const int levels = pick_levels(p, 5);
  s.henstock = singular_schedule(levels, 0.03, 0.004);
  s.mcshane = singular_schedule(levels, 0.12, 0.016);
  GaugeSchedule v;
  for (int n = 1; n <= 6; ++n) {
    const double kappa = 0.04 * std::ldexp(1.0, -n);
    const double cap = std::ldexp(1.0, -3 - n);
    std::ostringstream os;
    os << "variational-singular:n=" << n;
    v.levels.push_back(Gauge::callable(
        [kappa, cap](double t) { return t <= 0.0 ? 0.25 : std::min(cap, kappa * t * t * t); }, os.str(),
        {0.0}));
  }
  s.variational = std::move(v);
  s.primitive_gauge = s.variational.levels.back();
  s.measure = GaugeSchedule::halving(Gauge::constant(0.5), 12);
  s.birkhoff = birkhoff_schedule(10, 3);
  s.tol = 1e-3;
  s.variational_tol = 1e-2;
  return s;
}

}  // namespace

double oscillating_primitive(double t) {
  if (t == 0.0) return 0.0;
  return t * t * std::sin(1.0 / (t * t));
}

double oscillating_derivative(double t) {
  if (std::abs(t) < kClamp) return 0.0;
  const double u = 1.0 / (t * t);
  return 2.0 * t * std::sin(u) - 2.0 / t * std::cos(u);
}

const char* to_string(Flag f) {
  switch (f) {
    case Flag::yes: return "yes";
    case Flag::no: return "no";
    case Flag::unknown: return "unknown";
  }
  return "unknown";
}

const std::vector<std::string>& Flags::names() {
  static const std::vector<std::string> n{"henstock", "mcshane", "birkhoff", "vH", "vMS", "hkp", "integrably_bounded"};
  return n;
}

const FlagEntry& Flags::get(std::string_view name) const {
  if (name == "henstock") return henstock;
  if (name == "mcshane") return mcshane;
  if (name == "birkhoff") return birkhoff;
  if (name == "vH" || name == "vh") return vh;
  if (name == "vMS" || name == "vms") return vms;
  if (name == "hkp") return hkp;
  if (name == "integrably_bounded") return integrably_bounded;
  throw std::invalid_argument("unknown flag name: " + std::string(name));
}

GaugeSchedule singular_schedule(int levels, double kappa, double cap) {
  if (levels < 1 || !(kappa > 0.0) || !(cap > 0.0)) throw std::invalid_argument("singular_schedule: bad parameters");
  GaugeSchedule s;
  for (int n = 1; n <= levels; ++n) {
    const double at0 = std::ldexp(1.0, -(n + 1));
    const double c = cap * std::ldexp(1.0, -n);
    const double k = kappa * std::exp2(-0.25 * n);
    std::ostringstream os;
    os.precision(17);
    os << "singular:n=" << n << ",kappa=" << kappa << ",cap=" << cap;
    s.levels.push_back(Gauge::callable(
        [at0, c, k](double t) { return t <= 0.0 ? at0 : std::min(c, k * t * t * t); }, os.str(), {0.0}));
  }
  return s;
}

const std::vector<std::string>& corpus_names() {
  static const std::vector<std::string> n{"G1", "G2", "G3", "G4", "G5", "G6"};
  return n;
}

MultifunctionSpec corpus_get(const std::string& name, const CorpusParams& params) {
  const GridPtr line = DirectionGrid::line();
  const double s1 = std::sin(1.0);

  if (name == "G1") {
    MultifunctionSpec s{
        "G1",
        "t -> {F'(t)} + [0,1], F(t) = t^2 sin(t^-2)",
        1,
        {},
        Multifunction(
            line,
            [](double t, std::span<double> out) {
              const double f = oscillating_derivative(t);
              out[0] = -f;
              out[1] = f + 1.0;
            },
            "G1"),
        {},
        make_interval(s1, 1.0 + s1),
        "F(1) - F(0) = sin 1 for the point part (fundamental theorem for HK integrals) plus the constant [0,1]",
        {0.0},
        singular_schedules(params)};
    s.flags.henstock = yes("F' is HK integrable with primitive F; the constant part is Riemann integrable");
    s.flags.mcshane = no("|F'| is not Lebesgue integrable near 0, so F' and the translate are not McShane integrable");
    s.flags.birkhoff = no("Birkhoff integrability implies McShane integrability, which fails");
    s.flags.vh = yes("F is differentiable everywhere with derivative F', which gives the variational Henstock bound");
    s.flags.vms = no("variational McShane needs integrable boundedness, and ||G1(t)|| ~ 2/t |cos(t^-2)|");
    s.flags.hkp = yes("both support directions are HK integrable (F' and -F' shifted by constants)");
    s.flags.integrably_bounded = no("||G1(t)|| >= |F'(t)|, which is not Lebesgue integrable");
    return s;
  }
  if (name == "G2") {
    MultifunctionSpec s{
        "G2",
        "t -> [0, t]",
        1,
        {},
        Multifunction(
            line,
            [](double t, std::span<double> out) {
              out[0] = 0.0;
              out[1] = t;
            },
            "G2"),
        all_yes("continuous and bounded on [0,1]"),
        make_interval(0.0, 0.5),
        "closed form: integral of t over [0,1] is 1/2",
        {},
        smooth_schedules(params, 1e-4)};
    return s;
  }
  if (name == "G3") {
    MultifunctionSpec s{
        "G3",
        "t -> conv{0, F'(t)}",
        1,
        {},
        Multifunction(
            line,
            [](double t, std::span<double> out) {
              const double f = oscillating_derivative(t);
              out[0] = std::max(0.0, -f);
              out[1] = std::max(0.0, f);
            },
            "G3"),
        {},
        std::nullopt,
        "no integral: the +1 support function is the positive part of F', which is not HK integrable",
        {0.0},
        singular_schedules(params)};
    const std::string fin =
        "in R^1 the +1 support function of conv{0, F'} is the positive part of F', whose HK integral over "
        "[0,h] diverges logarithmically; the non-vMS remainder construction this entry mirrors needs an "
        "infinite-dimensional space";
    s.flags.henstock = no(fin);
    s.flags.mcshane = no("not Henstock integrable, hence not McShane integrable");
    s.flags.birkhoff = no("not McShane integrable, hence not Birkhoff integrable");
    s.flags.vh = no("variational Henstock integrability implies Henstock integrability");
    s.flags.vms = no("variational McShane integrability implies Henstock integrability");
    s.flags.hkp = no("direction +1 gives the positive part of F', which is not HK integrable");
    s.flags.integrably_bounded = no("||G3(t)|| = |F'(t)| is not Lebesgue integrable");
    return s;
  }
  if (name == "G4") {
    const GridPtr circle = DirectionGrid::circle(params.m);
    MultifunctionSpec s{
        "G4",
        "t -> closed ball in R^2, center (0,0), radius t",
        2,
        {{"m", static_cast<double>(params.m)}},
        Multifunction(
            circle,
            [](double t, std::span<double> out) { std::fill(out.begin(), out.end(), t); },
            "G4"),
        all_yes("continuous set-valued map with norm bounded by 1"),
        SupportSet::ball(circle, {0.0, 0.0}, 0.5),
        "closed form: every support value is the integral of t, which is 1/2",
        {},
        smooth_schedules(params, 1e-3)};
    return s;
  }
  if (name == "G5") {
    MultifunctionSpec s{
        "G5",
        "t -> {F'(t)}",
        1,
        {},
        Multifunction(
            line,
            [](double t, std::span<double> out) {
              const double f = oscillating_derivative(t);
              out[0] = -f;
              out[1] = f;
            },
            "G5"),
        {},
        make_interval(s1, s1),
        "F(1) - F(0) = sin 1 (fundamental theorem for HK integrals)",
        {0.0},
        singular_schedules(params)};
    s.flags.henstock = yes("F' is HK integrable with primitive F");
    s.flags.mcshane = no("|F'| is not Lebesgue integrable near 0");
    s.flags.birkhoff = no("Birkhoff integrability implies McShane integrability, which fails");
    s.flags.vh = yes("F is an everywhere-differentiable primitive of F'");
    s.flags.vms = no("not integrably bounded");
    s.flags.hkp = yes("both support directions are +-F', which are HK integrable");
    s.flags.integrably_bounded = no("|F'| is not Lebesgue integrable");
    return s;
  }
  if (name == "G6") {
    MultifunctionSpec s{
        "G6",
        "t -> [0, 1] (constant)",
        1,
        {},
        Multifunction(
            line,
            [](double, std::span<double> out) {
              out[0] = 0.0;
              out[1] = 1.0;
            },
            "G6"),
        all_yes("constant set"),
        make_interval(0.0, 1.0),
        "closed form: a constant set integrates to itself over [0,1]",
        {},
        smooth_schedules(params, 1e-4)};
    return s;
  }
  throw UnknownEntry("unknown corpus entry: " + name);
}

}  // namespace gaugeset
