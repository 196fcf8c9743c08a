#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "stein/bounds.hpp"
#include "stein/discrepancy.hpp"

namespace stein {

// Insertion-ordered JSON keeps documents stable across runs and readable in
// the order they were assembled.
using Json = nlohmann::ordered_json;

Json to_json(const Seminorms& s);
Seminorms seminorms_from_json(const Json& j);

Json to_json(const ConditionMoments& m);
ConditionMoments moments_from_json(const Json& j);

Json to_json(const BoundReport& r);
BoundReport bound_report_from_json(const Json& j);

Json to_json(const DiscrepancyEstimate& d);
Json to_json(const SlicedW1& s);
Json to_json(const NullLevel& n);

// Top-level experiment document. `config` echoes the caller's inputs; extras
// carries application-specific values. Timestamps are opt-in so that repeated
// runs with equal inputs produce byte-identical documents.
struct ExperimentReport {
  std::string application;
  Json config;
  std::vector<BoundReport> bounds;
  std::vector<DiscrepancyEstimate> discrepancies;
  std::optional<SlicedW1> sliced;
  std::optional<NullLevel> sliced_null;
  Json extras;
  bool stamp = false;
};

Json to_json(const ExperimentReport& r);

// Two-space indented serialization with a trailing newline.
std::string render_json(const Json& j);

void write_text_file(const std::string& path, const std::string& content);

// Samples as CSV, one row per draw, header W1..Wd, full double precision.
std::string samples_to_csv(const Matrix& samples);

}  // namespace stein
