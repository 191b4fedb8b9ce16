#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "recon/distribution.hpp"
#include "recon/maxent.hpp"
#include "recon/model.hpp"
#include "recon/search.hpp"

namespace recon {

enum class ExperimentKind { klir_effect, perturbation, decision, model_sweep, bishop };

std::string to_string(ExperimentKind kind);
/// Accepts "klir-effect", "perturbation", "decision", "model-sweep", "bishop".
ExperimentKind parse_experiment_kind(const std::string& name);

/// How random true distributions are drawn before projection onto a model.
enum class Generator {
  dirichlet,        ///< flat Dirichlet (normalized unit exponentials)
  uniform_weights,  ///< normalized independent uniform [0, 1) weights
};

std::string to_string(Generator g);
Generator parse_generator(const std::string& name);

/// Keys separating the random substreams of one trial.
enum class StreamPurpose : std::uint64_t {
  distribution = 1,
  model_choice = 2,
  perturbation = 3,
  sampling = 4,
  utilities = 5,
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::klir_effect;
  Scheme scheme = Scheme::uniform(3, 2);
  /// Used by klir-effect, decision and bishop.
  std::optional<Model> fixed_model;
  /// Candidate true-structure models for perturbation and model-sweep.
  std::vector<Model> models;
  int trials = 1000;
  std::vector<std::size_t> n_values;
  std::vector<double> epsilon_values;
  std::size_t acts_per_matrix = 10;
  std::size_t matrices_per_distribution = 1;
  std::uint64_t master_seed = 1;
  Generator generator = Generator::dirichlet;
  /// perturbation table: count h(p, J) == h(p, p_hat) as a win for J.
  bool ties_favor_klir = true;
  SearchSettings search;
  IpfSettings ipf;
  /// Worker threads for trials; 0 picks the hardware concurrency.
  unsigned threads = 1;

  /// Throws InputError when the config cannot run.
  void validate() const;
};

/// Defaults that mirror each published table.
ExperimentConfig default_config(ExperimentKind kind);

struct TableResult {
  std::string experiment;
  std::string row_header;
  std::vector<std::string> row_labels;
  std::vector<std::string> column_labels;
  std::vector<std::vector<double>> cells;  ///< [row][column]
  std::vector<std::vector<long>> trial_counts;  ///< trials (or cases) behind each cell
  std::uint64_t master_seed = 0;
  /// Echo of the configuration, in a fixed order.
  std::vector<std::pair<std::string, std::string>> parameters;

  double at(std::size_t row, std::size_t col) const { return cells.at(row).at(col); }
};

/// A random distribution reconstructable from x: J(pi_x(q)) for a random q.
Distribution gen_reconstructable(const Model& x, Rng& rng, Generator generator = Generator::dirichlet,
                                 const IpfSettings& ipf = {});

/// Draw from the configured generator.
Distribution generate_distribution(const Scheme& scheme, Rng& rng, Generator generator);

/// Mean h(p, p_hat_n) and h(p, J(pi_X(p_hat_n))) per n, X fixed.
TableResult run_klir_effect_table(const ExperimentConfig& cfg);

/// Percentage of trials where the searched Klir estimate is closer to p than
/// p_hat_n, per (n, epsilon); p is a perturbed reconstructable distribution.
TableResult run_perturbation_table(const ExperimentConfig& cfg);

/// Matches per 1000 trials of p_hat_n and J with p in a common D(a), per n.
TableResult run_decision_table(const ExperimentConfig& cfg);

/// Percentage-point difference (J matches - p_hat matches) per (n, epsilon),
/// with X = classify(p_hat_n).
TableResult run_model_sweep_table(const ExperimentConfig& cfg);

/// Trials where d(p, J) < d(p, p_hat_n) on the loop model.
TableResult run_bishop_replication(const ExperimentConfig& cfg);

TableResult run_experiment(const ExperimentConfig& cfg);

/**
 * Runs body(trial) for trial in [0, count) on `threads` workers and returns
 * the results in trial order. Exceptions from any trial are rethrown.
 */
template <typename R>
std::vector<R> run_trials(std::size_t count, unsigned threads, const std::function<R(std::size_t)>& body);

}  // namespace recon

#include "recon/detail/run_trials.hpp"
