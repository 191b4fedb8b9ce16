#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "recon/decision.hpp"
#include "recon/distribution.hpp"
#include "recon/experiments.hpp"
#include "recon/klir.hpp"
#include "recon/model.hpp"
#include "recon/search.hpp"

namespace recon {

/// 17 significant digits; round-trips every double.
std::string format_double(double x);
/// Shortest representation that round-trips (for labels).
std::string format_short(double x);

// Distribution files:
//   {"variables": [{"name": "v1", "cardinality": 2}, ...], "probs": [...]}
// Integer-valued probs are counts and get normalized; otherwise the sum must
// be within 1e-9 of one. Parsing canonicalizes, so write(parse(text)) is a
// fixed point after one pass.
Distribution parse_distribution(std::string_view text);
std::string write_distribution(const Distribution& p);

// Model files: [["v1","v2"],["v3"]], canonicalized on read.
Model parse_model(std::string_view text, const Scheme& scheme);
std::string write_model(const Model& x);

// Decision files: {"actions": [...], "utilities": [[...], ...]}, rows in
// distribution cell order.
DecisionProblem parse_decision_problem(std::string_view text, const Scheme& scheme);
std::string write_decision_problem(const DecisionProblem& dp);

std::string write_klir_estimate(const KlirEstimate& est);

/// Trace as an aligned table: step, model, divergence, increment.
std::string format_trace(const SearchTrace& trace, LogBase base);

/// '#'-prefixed parameter lines, a header row and one row per n.
std::string table_to_csv(const TableResult& table);
std::string table_to_text(const TableResult& table);

/// JSON mirror of ExperimentConfig. Keys left out keep the defaults of the
/// named experiment; unknown keys are rejected.
ExperimentConfig parse_experiment_config(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace recon
