#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gaugeset/corpus.hpp"
#include "gaugeset/decomposition.hpp"
#include "gaugeset/integrators.hpp"

namespace gaugeset {

using Json = nlohmann::ordered_json;

/// With `deterministic` set, wall-clock fields are left out so that equal
/// inputs serialize to equal bytes.
struct JsonStyle {
  bool deterministic = false;
};

Json to_json(const SupportSet& s);
Json to_json(const IntegrationReport& r, JsonStyle style = {});
Json to_json(const ProfileReport& r, JsonStyle style = {});
Json to_json(const VariationalReport& r, JsonStyle style = {});
Json to_json(const VariationalMeasureReport& r);
Json to_json(const DecompositionReport& r, JsonStyle style = {});
Json to_json(const RiemannProbeReport& r);
Json to_json(const Flags& f);
/// Registry entry with flags, provenance notes and truth.
Json to_json(const MultifunctionSpec& s);

/// One row of the convergence table.
struct CsvRow {
  int level = 0;
  double residual = 0.0;
  double max_dir_residual = 0.0;
  double wall_ms = 0.0;
};

std::vector<CsvRow> csv_rows(const IntegrationReport& r);
/// Header `level,residual,max_dir_residual,wall_ms`; wall_ms is written as 0
/// in deterministic style. NaN prints as "nan".
void write_csv(std::ostream& os, const std::vector<CsvRow>& rows, JsonStyle style = {});

}  // namespace gaugeset
