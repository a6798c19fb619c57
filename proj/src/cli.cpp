#include "gaugeset/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <new>
#include <sstream>

#include "CLI11.hpp"

#include "gaugeset/corpus.hpp"
#include "gaugeset/decomposition.hpp"
#include "gaugeset/integrators.hpp"

namespace gaugeset::cli {

namespace {

const std::vector<std::string> kCommands{"integrate", "decompose", "varmeasure", "riemann-check", "corpus"};
const std::vector<std::string> kMethods{"henstock", "mcshane", "birkhoff", "vh", "vms", "hkp"};

bool one_of(const std::string& s, const std::vector<std::string>& v) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::string joined(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
  return s;
}

// ---------------------------------------------------------------------------
// Config (schema 1)

template <class T>
T get_as(const Json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config: field '") + key + "' has the wrong type");
  }
}

void require(const Json& j, const char* key, bool (Json::*pred)() const noexcept, const char* what) {
  if (j.contains(key) && !(j.at(key).*pred)()) {
    throw ConfigError(std::string("config: field '") + key + "' must be " + what);
  }
}

// ---------------------------------------------------------------------------
// Outcomes

enum class Observed { yes, no, inconclusive };

const char* to_string(Observed o) {
  switch (o) {
    case Observed::yes: return "yes";
    case Observed::no: return "no";
    case Observed::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Observed from_verdict(Verdict v) {
  switch (v) {
    case Verdict::converged: return Observed::yes;
    case Verdict::diverged: return Observed::no;
    case Verdict::inconclusive: return Observed::inconclusive;
  }
  return Observed::inconclusive;
}

struct Outcome {
  std::string flag;
  std::optional<FlagEntry> expected;
  Observed observed = Observed::inconclusive;
  std::string note;
  /// Set by --expect; `observed` then says whether the expectation held.
  bool expectation = false;
};

int exit_code(const Outcome& o) {
  if (o.observed == Observed::inconclusive) return kInconclusive;
  if (!o.expected || o.expected->value == Flag::unknown) return kMatch;
  const bool want = o.expected->value == Flag::yes;
  return (o.observed == Observed::yes) == want ? kMatch : kMismatch;
}

const char* outcome_name(const Outcome& o, int code) {
  if (code == kInconclusive) return "inconclusive";
  if (!o.expected || o.expected->value == Flag::unknown) return "unflagged";
  return code == kMatch ? "match" : "mismatch";
}

// ---------------------------------------------------------------------------

struct Artifacts {
  std::string stem;
  Json result;
  std::vector<std::pair<std::string, std::vector<CsvRow>>> tables;
  Outcome outcome;
  Json extra = Json::object();
};

CorpusParams corpus_params(const RunConfig& c) { return {c.m, c.levels}; }

IntegratorOptions integrator_options(const RunConfig& c, const MultifunctionSpec& spec, double tol) {
  IntegratorOptions o;
  o.seed = c.seed;
  o.tol = tol;
  o.singular_points = spec.singular_points;
  return o;
}

IntegrationReport failed_report(const std::string& method, const std::string& integrand, const std::string& why) {
  IntegrationReport r;
  r.method = method;
  r.integrand = integrand;
  r.verdict = Verdict::inconclusive;
  r.diagnostics = "error: " + why;
  return r;
}

PointFunction make_selection(const std::string& text, const Multifunction& gamma) {
  if (text == "steiner") return steiner_selection(gamma);
  const std::string prefix = "argmax:";
  if (text.rfind(prefix, 0) != 0) throw ConfigError("selection must be steiner or argmax:<u>, got " + text);
  const std::string u = text.substr(prefix.size());
  if (gamma.grid()->dim() == 1) {
    if (u == "-1") return argmax_selection(gamma, 0);
    if (u == "+1" || u == "1") return argmax_selection(gamma, 1);
    throw ConfigError("argmax direction for d = 1 must be -1 or +1, got " + u);
  }
  std::size_t pos = 0;
  unsigned long k = 0;
  try {
    k = std::stoul(u, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != u.size() || u.empty() || k >= gamma.width()) {
    throw ConfigError("argmax direction for d = 2 must be an index below " + std::to_string(gamma.width()));
  }
  return argmax_selection(gamma, k);
}

Artifacts run_integrate(const RunConfig& c, const MultifunctionSpec& spec, JsonStyle style) {
  Artifacts a;
  a.stem = spec.name + "-" + c.method + (c.mode == "measurable" ? "-measurable" : "");
  const bool variational = c.method == "vh" || c.method == "vms";
  const double tol = c.tol.value_or(variational ? spec.schedules.variational_tol : spec.schedules.tol);
  IntegratorOptions o = integrator_options(c, spec, tol);

  const std::map<std::string, std::string> flag_of{{"henstock", "henstock"}, {"mcshane", "mcshane"},
                                                   {"birkhoff", "birkhoff"}, {"vh", "vH"},
                                                   {"vms", "vMS"},           {"hkp", "hkp"}};
  a.outcome.flag = flag_of.at(c.method);
  a.outcome.expected = spec.flags.get(a.outcome.flag);

  IntegrationReport rep;
  try {
    if (c.method == "henstock" || c.method == "mcshane") {
      const GaugeSchedule& plain = c.method == "henstock" ? spec.schedules.henstock : spec.schedules.mcshane;
      GaugeSchedule sched = plain;
      if (c.mode == "measurable") {
        sched = GaugeSchedule::measurable(plain);
        o.mode = GaugeMode::measurable;
      }
      rep = c.method == "henstock" ? henstock_integrate(spec.gamma, sched, o) : mcshane_integrate(spec.gamma, sched, o);
      a.result = to_json(rep, style);
    } else if (c.method == "birkhoff") {
      rep = birkhoff_integrate(spec.gamma, spec.schedules.birkhoff, o);
      a.result = to_json(rep, style);
    } else if (c.method == "hkp") {
      const ProfileReport p = directional_profile(spec.gamma, spec.schedules.henstock, o);
      rep = p.report;
      a.result = to_json(p, style);
      const bool all_settled = std::none_of(p.direction_verdicts.begin(), p.direction_verdicts.end(),
                                            [](Verdict v) { return v == Verdict::inconclusive; });
      if (p.hkp) {
        a.outcome.observed = Observed::yes;
      } else if (!p.divergent_directions.empty() || all_settled) {
        a.outcome.observed = Observed::no;
        if (p.divergent_directions.empty()) a.outcome.note = "directional integrals are not a support function";
      }
    } else {
      const Primitive phi = build_primitive(spec.gamma, spec.schedules.primitive_gauge);
      const VariationalReport v =
          vh_check(spec.gamma, phi, spec.schedules.variational, c.method == "vh" ? TagMode::perron : TagMode::free, o);
      rep = v.report;
      a.result = to_json(v, style);
    }
  } catch (const std::bad_alloc&) {
    rep = failed_report(c.method, spec.name, "out of memory");
    a.result = to_json(rep, style);
  } catch (const std::exception& e) {
    rep = failed_report(c.method, spec.name, e.what());
    a.result = to_json(rep, style);
  }
  if (c.method != "hkp") a.outcome.observed = from_verdict(rep.verdict);

  // A converged estimate must also be the right set.
  if (spec.truth && !variational && rep.verdict == Verdict::converged && rep.grid &&
      rep.grid->same_as(*spec.truth->grid())) {
    const double gap = hausdorff(rep.estimate_set(), *spec.truth);
    a.extra["truth"] = to_json(*spec.truth);
    a.extra["truth_gap"] = gap;
    if (!(gap < 3.0 * tol)) {
      a.outcome.observed = Observed::no;
      a.outcome.note = "converged away from the known integral";
    }
  }
  a.tables.emplace_back("", csv_rows(rep));
  return a;
}

Artifacts run_decompose(const RunConfig& c, const MultifunctionSpec& spec, JsonStyle style) {
  Artifacts a;
  const Theorem th = parse_theorem(c.theorem);
  a.stem = spec.name + "-" + to_string(th);
  const PointFunction f = make_selection(c.selection, spec.gamma);
  DecompositionOptions o;
  o.schedules = spec.schedules;
  o.integrator = integrator_options(c, spec, 0.0);
  o.selection_id = c.selection;
  const DecompositionReport r = verify_decomposition(spec.gamma, f, th, c.tol.value_or(spec.schedules.tol), o);
  a.result = to_json(r, style);
  a.outcome.flag = expected_flag(th);
  a.outcome.expected = spec.flags.get(a.outcome.flag);
  if (r.passed) {
    a.outcome.observed = Observed::yes;
  } else {
    // A clause that failed only for lack of evidence does not refute.
    const bool refuted = std::any_of(r.clauses.begin(), r.clauses.end(), [](const Clause& k) {
      if (k.passed) return false;
      if (k.detail == "inconclusive" || k.detail.rfind("error:", 0) == 0) return false;
      if (k.name == "additivity gap" && std::isnan(k.value)) return false;
      return true;
    });
    a.outcome.observed = refuted ? Observed::no : Observed::inconclusive;
  }
  for (const auto& [id, rep] : r.reports) a.tables.emplace_back(id == "gamma" ? "" : id, csv_rows(rep));
  return a;
}

double expect_threshold(const RunConfig& c) { return c.tol.value_or(1e-3); }

Artifacts run_varmeasure(const RunConfig& c, const MultifunctionSpec& spec) {
  Artifacts a;
  a.stem = spec.name + "-varmeasure";
  VariationalSet e;
  try {
    e = parse_variational_set(c.set);
  } catch (const std::exception& ex) {
    throw ConfigError(std::string("--set: ") + ex.what());
  }
  const Primitive phi = build_primitive(spec.gamma, spec.schedules.primitive_gauge);
  const VariationalMeasureReport r = variational_measure_estimate(phi, e, spec.schedules.measure, c.seed);
  a.result = to_json(r);
  a.outcome.observed = Observed::yes;
  a.outcome.note = "estimate " + std::to_string(r.value);
  if (!c.expect.empty()) {
    const bool zero = r.value < expect_threshold(c);
    a.outcome.flag = c.expect;
    a.outcome.expectation = true;
    a.outcome.expected = FlagEntry{Flag::yes, "--expect " + c.expect};
    a.outcome.observed = (c.expect == "zero") == zero ? Observed::yes : Observed::no;
    a.extra["threshold"] = expect_threshold(c);
  }
  std::vector<CsvRow> rows;
  for (std::size_t i = 0; i < r.estimates.size(); ++i) {
    rows.push_back({static_cast<int>(i + 1), r.estimates[i], r.estimates[i], 0.0});
  }
  a.tables.emplace_back("", rows);
  return a;
}

Artifacts run_riemann(const RunConfig& c, const MultifunctionSpec& spec) {
  Artifacts a;
  a.stem = spec.name + "-riemann";
  IntervalUnion set;
  try {
    const VariationalSet e = parse_variational_set(c.set.empty() ? "[0,1]" : c.set);
    if (!e.points.empty()) throw std::invalid_argument("expected a union of intervals");
    set = e.intervals;
  } catch (const std::exception& ex) {
    throw ConfigError(std::string("--set: ") + ex.what());
  }
  RiemannProbeOptions o;
  o.delta = c.delta;
  o.trials = c.trials;
  o.eps = c.eps;
  o.seed = c.seed;
  const RiemannProbeReport r = riemann_measurability_probe(make_selection(c.selection, spec.gamma), set, o);
  a.result = to_json(r);
  a.outcome.observed = Observed::yes;
  a.outcome.note = std::string("probe ") + (r.passed ? "passed" : "failed") + ", max plain " +
                   std::to_string(r.max_plain) + ", max strong " + std::to_string(r.max_strong);
  if (!c.expect.empty()) {
    a.outcome.flag = c.expect;
    a.outcome.expectation = true;
    a.outcome.expected = FlagEntry{Flag::yes, "--expect " + c.expect};
    a.outcome.observed = (c.expect == "pass") == r.passed ? Observed::yes : Observed::no;
  }
  std::vector<CsvRow> rows;
  for (std::size_t i = 0; i < r.plain.size(); ++i) rows.push_back({static_cast<int>(i + 1), r.plain[i], r.strong[i], 0.0});
  a.tables.emplace_back("", rows);
  return a;
}

std::string timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RunConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  static const std::vector<std::string> known{"schema", "command", "entry",  "action",        "method", "mode",
                                              "selection", "theorem", "set", "delta",        "trials", "eps",
                                              "expect",  "m",        "levels", "tol",          "seed",   "deterministic",
                                              "out_dir"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!one_of(it.key(), known)) throw ConfigError("config: unknown field '" + it.key() + "'");
  }
  if (!j.contains("schema")) throw ConfigError("config: missing field 'schema'");
  if (!j.at("schema").is_number_integer() || j.at("schema").get<int>() != 1) {
    throw ConfigError("config: unsupported schema (expected 1)");
  }
  if (!j.contains("command")) throw ConfigError("config: missing field 'command'");

  for (const char* k : {"command", "entry", "action", "method", "mode", "selection", "theorem", "set", "expect",
                        "out_dir"}) {
    require(j, k, &Json::is_string, "a string");
  }
  for (const char* k : {"delta", "eps"}) require(j, k, &Json::is_number, "a number");
  for (const char* k : {"trials", "levels"}) require(j, k, &Json::is_number_integer, "an integer");
  for (const char* k : {"m", "seed"}) require(j, k, &Json::is_number_unsigned, "a nonnegative integer");
  require(j, "deterministic", &Json::is_boolean, "a boolean");
  if (j.contains("tol") && !j.at("tol").is_null() && !j.at("tol").is_number()) {
    throw ConfigError("config: field 'tol' must be a number or null");
  }

  RunConfig c;
  c.command = get_as<std::string>(j, "command");
  if (j.contains("entry")) c.entry = get_as<std::string>(j, "entry");
  if (j.contains("action")) c.action = get_as<std::string>(j, "action");
  if (j.contains("method")) c.method = get_as<std::string>(j, "method");
  if (j.contains("mode")) c.mode = get_as<std::string>(j, "mode");
  if (j.contains("selection")) c.selection = get_as<std::string>(j, "selection");
  if (j.contains("theorem")) c.theorem = get_as<std::string>(j, "theorem");
  if (j.contains("set")) c.set = get_as<std::string>(j, "set");
  if (j.contains("delta")) c.delta = get_as<double>(j, "delta");
  if (j.contains("trials")) c.trials = get_as<int>(j, "trials");
  if (j.contains("eps")) c.eps = get_as<double>(j, "eps");
  if (j.contains("expect")) c.expect = get_as<std::string>(j, "expect");
  if (j.contains("m")) c.m = get_as<std::size_t>(j, "m");
  if (j.contains("levels")) c.levels = get_as<int>(j, "levels");
  if (j.contains("tol") && !j.at("tol").is_null()) c.tol = get_as<double>(j, "tol");
  if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j, "seed");
  if (j.contains("deterministic")) c.deterministic = get_as<bool>(j, "deterministic");
  if (j.contains("out_dir")) c.out_dir = get_as<std::string>(j, "out_dir");
  return c;
}

Json config_to_json(const RunConfig& c) {
  Json j;
  j["schema"] = 1;
  j["command"] = c.command;
  j["entry"] = c.entry;
  j["action"] = c.action;
  j["method"] = c.method;
  j["mode"] = c.mode;
  j["selection"] = c.selection;
  j["theorem"] = c.theorem;
  j["set"] = c.set;
  j["delta"] = c.delta;
  j["trials"] = c.trials;
  j["eps"] = c.eps;
  j["expect"] = c.expect;
  j["m"] = c.m;
  j["levels"] = c.levels;
  j["tol"] = c.tol ? Json(*c.tol) : Json(nullptr);
  j["seed"] = c.seed;
  j["deterministic"] = c.deterministic;
  j["out_dir"] = c.out_dir;
  return j;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

void validate(const RunConfig& c) {
  if (!one_of(c.command, kCommands)) {
    throw ConfigError("unknown command '" + c.command + "' (expected one of " + joined(kCommands) + ")");
  }
  if (c.command == "corpus") {
    if (c.action != "list" && c.action != "show") throw ConfigError("corpus action must be list or show");
    if (c.action == "show" && !one_of(c.entry, corpus_names())) {
      throw ConfigError("unknown corpus entry '" + c.entry + "' (known: " + joined(corpus_names()) + ")");
    }
    return;
  }
  if (!one_of(c.entry, corpus_names())) {
    throw ConfigError("unknown corpus entry '" + c.entry + "' (known: " + joined(corpus_names()) + ")");
  }
  if (c.command == "integrate" && !one_of(c.method, kMethods)) {
    throw ConfigError("unknown method '" + c.method + "' (expected one of " + joined(kMethods) + ")");
  }
  if (c.mode != "plain" && c.mode != "measurable") throw ConfigError("mode must be plain or measurable");
  if (c.mode == "measurable" && c.method != "henstock" && c.method != "mcshane") {
    throw ConfigError("measurable mode applies to henstock and mcshane only");
  }
  if (c.command == "decompose") (void)parse_theorem(c.theorem);
  if (c.command == "varmeasure") {
    if (c.set.empty()) throw ConfigError("varmeasure needs --set");
    if (!c.expect.empty() && c.expect != "zero" && c.expect != "positive") {
      throw ConfigError("varmeasure --expect must be zero or positive");
    }
  }
  if (c.command == "riemann-check") {
    if (!(c.delta > 0.0) || c.trials < 1 || !(c.eps > 0.0)) throw ConfigError("riemann-check needs delta, eps > 0 and trials >= 1");
    if (!c.expect.empty() && c.expect != "pass" && c.expect != "fail") {
      throw ConfigError("riemann-check --expect must be pass or fail");
    }
  }
  if (c.m < 4 || c.m % 2 != 0) throw ConfigError("m must be an even number >= 4");
  if (c.levels < 0) throw ConfigError("levels must be >= 0");
  if (c.tol && !(*c.tol > 0.0)) throw ConfigError("tol must be positive");
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    validate(c);
    const JsonStyle style{c.deterministic};

    if (c.command == "corpus") {
      Json j;
      if (c.action == "list") {
        j = Json::array();
        for (const auto& name : corpus_names()) {
          const auto spec = corpus_get(name, corpus_params(c));
          Json e;
          e["name"] = spec.name;
          e["description"] = spec.description;
          e["d"] = spec.d;
          Json flags;
          for (const auto& f : Flags::names()) flags[f] = to_string(spec.flags.get(f).value);
          e["flags"] = std::move(flags);
          j.push_back(std::move(e));
        }
      } else {
        j = to_json(corpus_get(c.entry, corpus_params(c)));
      }
      out << j.dump(2) << '\n';
      return kMatch;
    }

    const auto t0 = std::chrono::steady_clock::now();
    const MultifunctionSpec spec = corpus_get(c.entry, corpus_params(c));
    Artifacts a;
    if (c.command == "integrate") a = run_integrate(c, spec, style);
    if (c.command == "decompose") a = run_decompose(c, spec, style);
    if (c.command == "varmeasure") a = run_varmeasure(c, spec);
    if (c.command == "riemann-check") a = run_riemann(c, spec);
    const double elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    const int code = exit_code(a.outcome);
    Json doc;
    doc["tool"] = "gaugeset";
    doc["report_schema"] = 1;
    doc["config"] = config_to_json(c);
    Json entry;
    entry["name"] = spec.name;
    entry["description"] = spec.description;
    entry["d"] = spec.d;
    doc["entry"] = std::move(entry);
    Json expected;
    expected["flag"] = a.outcome.flag;
    if (a.outcome.expected) {
      expected["value"] = to_string(a.outcome.expected->value);
      expected["provenance"] = a.outcome.expected->provenance;
    } else {
      expected["value"] = nullptr;
    }
    doc["expected"] = std::move(expected);
    doc["observed"] = to_string(a.outcome.observed);
    doc["outcome"] = outcome_name(a.outcome, code);
    if (!a.outcome.note.empty()) doc["note"] = a.outcome.note;
    doc["exit_code"] = code;
    for (auto it = a.extra.begin(); it != a.extra.end(); ++it) doc[it.key()] = it.value();
    doc["result"] = std::move(a.result);
    if (!c.deterministic) {
      doc["created"] = timestamp();
      doc["elapsed_ms"] = elapsed;
    }

    std::filesystem::create_directories(c.out_dir);
    const std::filesystem::path base = std::filesystem::path(c.out_dir) / a.stem;
    const std::string json_path = base.string() + ".json";
    {
      std::ofstream os(json_path);
      if (!os) throw std::runtime_error("cannot write " + json_path);
      os << doc.dump(2) << '\n';
    }
    for (const auto& [suffix, rows] : a.tables) {
      const std::string csv_path = base.string() + (suffix.empty() ? "" : "." + suffix) + ".csv";
      std::ofstream os(csv_path);
      if (!os) throw std::runtime_error("cannot write " + csv_path);
      write_csv(os, rows, style);
    }

    out << a.stem << ": ";
    if (a.outcome.expectation) {
      out << "expected " << a.outcome.flag << ", " << (a.outcome.observed == Observed::yes ? "held" : "did not hold");
    } else if (!a.outcome.expected) {
      out << a.outcome.note;
    } else {
      out << "observed " << to_string(a.outcome.observed);
      if (a.outcome.expected) out << ", expected " << a.outcome.flag << "=" << to_string(a.outcome.expected->value);
    }
    out << " -> " << outcome_name(a.outcome, code) << " (exit " << code << ")\n";
    out << "report: " << json_path << '\n';
    return code;
  } catch (const std::exception& e) {
    // Bad configs, unknown entries, non-selections and I/O failures.

    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gauge integrals of convex-set-valued functions on [0,1]", "gaugeset"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  RunConfig v;  // values as typed on the command line
  std::string config_path;
  std::string tol_text;
  app.add_option("--config", config_path, "JSON run configuration (schema 1)");
  auto* o_seed = app.add_option("--seed", v.seed, "RNG seed (GAUGESET_SEED overrides)");
  auto* o_det = app.add_flag("--deterministic", v.deterministic, "omit timestamps and timings from reports");
  auto* o_out = app.add_option("--out-dir", v.out_dir, "directory for JSON and CSV reports");
  auto* o_m = app.add_option("--m", v.m, "direction count for d = 2 entries");
  auto* o_levels = app.add_option("--levels", v.levels, "refinement levels (0 = entry default)");
  auto* o_tol = app.add_option("--tol", tol_text, "tolerance override");
  bool dump = false;
  app.add_flag("--dump-config", dump, "print the resolved configuration and exit");

  std::vector<CLI::Option*> entry_opts;
  auto* integrate = app.add_subcommand("integrate", "integrate a corpus entry");
  entry_opts.push_back(integrate->add_option("entry", v.entry, "corpus entry")->required());
  auto* o_method = integrate->add_option("--method", v.method, joined(kMethods));
  auto* o_mode = integrate->add_option("--mode", v.mode, "plain | measurable");

  auto* decompose = app.add_subcommand("decompose", "verify a decomposition Gamma = f + G");
  entry_opts.push_back(decompose->add_option("entry", v.entry, "corpus entry")->required());
  std::vector<CLI::Option*> sel_opts;
  sel_opts.push_back(decompose->add_option("--selection", v.selection, "steiner | argmax:<u>"));
  auto* o_theorem = decompose->add_option("--theorem", v.theorem, "t33 | t42 | t55");

  auto* varmeasure = app.add_subcommand("varmeasure", "estimate the variational measure of a set");
  entry_opts.push_back(varmeasure->add_option("entry", v.entry, "corpus entry")->required());
  std::vector<CLI::Option*> set_opts;
  set_opts.push_back(varmeasure->add_option("--set", v.set, "[a,b]u[c,d] or {p,q}"));
  std::vector<CLI::Option*> expect_opts;
  expect_opts.push_back(varmeasure->add_option("--expect", v.expect, "zero | positive"));

  auto* riemann = app.add_subcommand("riemann-check", "Riemann measurability probe of a selection");
  entry_opts.push_back(riemann->add_option("entry", v.entry, "corpus entry")->required());
  set_opts.push_back(riemann->add_option("--set", v.set, "closed set [a,b]u... (default [0,1])"));
  sel_opts.push_back(riemann->add_option("--selection", v.selection, "steiner | argmax:<u>"));
  auto* o_delta = riemann->add_option("--delta", v.delta, "interval length bound");
  auto* o_trials = riemann->add_option("--trials", v.trials, "seeded interval families");
  auto* o_eps = riemann->add_option("--eps", v.eps, "pass threshold");
  expect_opts.push_back(riemann->add_option("--expect", v.expect, "pass | fail"));

  auto* corpus = app.add_subcommand("corpus", "list or show registry entries");
  std::string corpus_action;
  std::string corpus_name;
  corpus->add_option("action", corpus_action, "list | show")->required();
  corpus->add_option("name", corpus_name, "entry for show");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kMatch : kUsage;
  }

  try {
    RunConfig c;
    if (!config_path.empty()) c = load_config(config_path);
    if (app.got_subcommand(integrate)) c.command = "integrate";
    if (app.got_subcommand(decompose)) c.command = "decompose";
    if (app.got_subcommand(varmeasure)) c.command = "varmeasure";
    if (app.got_subcommand(riemann)) c.command = "riemann-check";
    if (app.got_subcommand(corpus)) {
      c.command = "corpus";
      c.action = corpus_action;
      c.entry = corpus_name;
    }
    if (c.command.empty()) throw ConfigError("no command given (use a subcommand or --config)");

    auto any = [](const std::vector<CLI::Option*>& opts) {
      return std::any_of(opts.begin(), opts.end(), [](CLI::Option* o) { return o->count() > 0; });
    };
    if (any(entry_opts)) c.entry = v.entry;
    if (any(sel_opts)) c.selection = v.selection;
    if (any(set_opts)) c.set = v.set;
    if (any(expect_opts)) c.expect = v.expect;
    if (o_method->count()) c.method = v.method;
    if (o_mode->count()) c.mode = v.mode;
    if (o_theorem->count()) c.theorem = v.theorem;
    if (o_delta->count()) c.delta = v.delta;
    if (o_trials->count()) c.trials = v.trials;
    if (o_eps->count()) c.eps = v.eps;
    if (o_seed->count()) c.seed = v.seed;
    if (o_det->count()) c.deterministic = v.deterministic;
    if (o_out->count()) c.out_dir = v.out_dir;
    if (o_m->count()) c.m = v.m;
    if (o_levels->count()) c.levels = v.levels;
    if (o_tol->count()) {
      std::size_t pos = 0;
      double t = 0.0;
      try {
        t = std::stod(tol_text, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != tol_text.size() || tol_text.empty()) throw ConfigError("--tol must be a number");
      c.tol = t;
    }

    if (const char* env = std::getenv("GAUGESET_SEED"); env != nullptr && *env != '\0') {
      const std::string s = env;
      std::size_t pos = 0;
      unsigned long long seed = 0;
      try {
        if (s.find('-') != std::string::npos) throw std::invalid_argument("negative");
        seed = std::stoull(s, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != s.size()) throw ConfigError("GAUGESET_SEED must be a nonnegative integer");
      c.seed = seed;
    }

    if (dump) {
      validate(c);
      out << config_to_json(c).dump(2) << '\n';
      return kMatch;
    }
    return run(c, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace gaugeset::cli
