#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "recon/decision.hpp"
#include "recon/error.hpp"
#include "recon/experiments.hpp"
#include "recon/io.hpp"
#include "recon/klir.hpp"
#include "recon/maxent.hpp"
#include "recon/search.hpp"

namespace {

using namespace recon;

constexpr int kInputError = 1;
constexpr int kNumericError = 2;

struct Common {
  std::string out;
  double tolerance = IpfSettings{}.tolerance;
  int max_sweeps = IpfSettings{}.max_sweeps;

  IpfSettings ipf() const {
    IpfSettings s{tolerance, max_sweeps};
    s.validate();
    return s;
  }
};

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(c.out, text);
  }
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-o,--out", c.out, "Output file (default: stdout)");
  cmd->add_option("--tolerance", c.tolerance, "IPF marginal tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--max-sweeps", c.max_sweeps, "IPF sweep limit")->check(CLI::PositiveNumber);
}

LogBase parse_base(const std::string& b) { return b == "e" ? LogBase::natural : LogBase::two; }

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

void report_ipf(const MaxentResult& r) {
  std::cerr << "method: " << (r.method == ExtensionMethod::closed_form ? "closed-form" : "ipf") << "\n"
            << "sweeps: " << r.sweeps << "\n"
            << "residual: " << format_double(r.residual) << "\n";
}

// Reads an experiment override only when the flag was given.
template <typename T>
void override_if(CLI::Option* opt, T& target, const T& value) {
  if (opt->count() > 0) target = value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reconstructability analysis and Klir estimation"};
  app.require_subcommand(1);

  Common common;

  // project
  std::string project_in;
  std::vector<std::string> project_vars;
  auto* project_cmd = app.add_subcommand("project", "Marginal of a distribution on a variable subset");
  project_cmd->add_option("input", project_in, "Distribution file")->required();
  project_cmd->add_option("--vars", project_vars, "Variables to keep")->required()->delimiter(',');
  add_common(project_cmd, common);

  // reconstruct
  std::string rec_in, rec_model;
  auto* reconstruct_cmd = app.add_subcommand("reconstruct", "Maximum-entropy extension J(pi_X(p))");
  reconstruct_cmd->add_option("input", rec_in, "Distribution file")->required();
  reconstruct_cmd->add_option("--model", rec_model, "Model file")->required();
  add_common(reconstruct_cmd, common);

  // search
  std::string search_in, search_base = "2";
  double search_delta = SearchSettings{}.delta_bits;
  std::optional<int> search_depth;
  auto* search_cmd = app.add_subcommand("search", "Greedy best-model search");
  search_cmd->add_option("input", search_in, "Distribution file")->required();
  search_cmd->add_option("--delta", search_delta, "Stopping threshold in bits")->check(CLI::NonNegativeNumber);
  search_cmd->add_option("--max-depth", search_depth, "Refinement step limit")->check(CLI::NonNegativeNumber);
  search_cmd->add_option("--base", search_base, "Log base of printed divergences")->check(CLI::IsMember({"2", "e"}));
  add_common(search_cmd, common);

  // estimate
  std::string est_in, est_model;
  double est_delta = SearchSettings{}.delta_bits;
  std::size_t est_sample = 0;
  std::optional<std::uint64_t> est_seed;
  auto* estimate_cmd = app.add_subcommand("estimate", "Klir estimate from a frequency distribution");
  estimate_cmd->add_option("input", est_in, "Distribution or counts file")->required();
  estimate_cmd->add_option("--model", est_model, "Known model file (default: search)");
  estimate_cmd->add_option("--delta", est_delta, "Search threshold in bits")->check(CLI::NonNegativeNumber);
  auto* est_sample_opt = estimate_cmd->add_option("--sample", est_sample, "Draw n observations from the input first")
                             ->check(CLI::PositiveNumber);
  auto* est_seed_opt = estimate_cmd->add_option("--seed", est_seed, "Master seed for --sample");
  est_sample_opt->needs(est_seed_opt);
  est_seed_opt->needs(est_sample_opt);
  add_common(estimate_cmd, common);

  // decide
  std::string dec_in, dec_file, dec_compare;
  std::size_t dec_random = 0;
  std::optional<std::uint64_t> dec_seed;
  auto* decide_cmd = app.add_subcommand("decide", "Expected utilities and maximizing actions");
  decide_cmd->add_option("input", dec_in, "Distribution file")->required();
  auto* dec_file_opt = decide_cmd->add_option("--decision", dec_file, "Decision problem file");
  auto* dec_random_opt =
      decide_cmd->add_option("--random-acts", dec_random, "Write a random problem with this many acts instead")
          ->check(CLI::PositiveNumber);
  auto* dec_seed_opt = decide_cmd->add_option("--seed", dec_seed, "Master seed for --random-acts");
  decide_cmd->add_option("--compare", dec_compare, "Second distribution: report whether both share a region");
  dec_file_opt->excludes(dec_random_opt);
  dec_random_opt->needs(dec_seed_opt);
  dec_seed_opt->needs(dec_random_opt);
  add_common(decide_cmd, common);

  // experiment
  std::string exp_name, exp_config, exp_format = "csv";
  std::uint64_t exp_seed = 0;
  int exp_trials = 0;
  std::vector<std::size_t> exp_n;
  std::vector<double> exp_eps;
  std::size_t exp_acts = 0, exp_matrices = 0;
  double exp_delta = 0.0;
  unsigned exp_threads = 1;
  std::string exp_generator;
  auto* experiment_cmd = app.add_subcommand("experiment", "Run a Monte Carlo replication table");
  experiment_cmd->add_option("name", exp_name, "klir-effect, perturbation, decision, model-sweep or bishop")
      ->required()
      ->check(CLI::IsMember({"klir-effect", "perturbation", "decision", "model-sweep", "bishop"}));
  auto* seed_opt = experiment_cmd->add_option("--seed", exp_seed, "Master seed");
  auto* config_opt = experiment_cmd->add_option("--config", exp_config, "JSON experiment config");
  auto* trials_opt = experiment_cmd->add_option("--trials", exp_trials, "Trials")->check(CLI::PositiveNumber);
  auto* n_opt = experiment_cmd->add_option("--n-values", exp_n, "Sample sizes")->delimiter(',');
  auto* eps_opt = experiment_cmd->add_option("--epsilons", exp_eps, "Perturbation sizes")->delimiter(',');
  auto* acts_opt = experiment_cmd->add_option("--acts", exp_acts, "Acts per matrix")->check(CLI::PositiveNumber);
  auto* matrices_opt =
      experiment_cmd->add_option("--matrices", exp_matrices, "Matrices per distribution")->check(CLI::PositiveNumber);
  auto* delta_opt =
      experiment_cmd->add_option("--delta", exp_delta, "Search threshold in bits")->check(CLI::NonNegativeNumber);
  auto* threads_opt = experiment_cmd->add_option("--threads", exp_threads, "Worker threads (0 = all cores)");
  auto* gen_opt = experiment_cmd->add_option("--generator", exp_generator, "dirichlet or uniform-weights")
                      ->check(CLI::IsMember({"dirichlet", "uniform-weights"}));
  experiment_cmd->add_option("--format", exp_format, "csv or text")->check(CLI::IsMember({"csv", "text"}));
  add_common(experiment_cmd, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (project_cmd->parsed()) {
      const auto p = parse_distribution(read_text_file(project_in));
      emit(common, write_distribution(project(p, project_vars)));
    } else if (reconstruct_cmd->parsed()) {
      const auto p = parse_distribution(read_text_file(rec_in));
      const auto x = parse_model(read_text_file(rec_model), p.scheme());
      const auto r = maxent_extension(project_model(p, x), common.ipf());
      report_ipf(r);
      emit(common, write_distribution(r.distribution));
    } else if (search_cmd->parsed()) {
      const auto p = parse_distribution(read_text_file(search_in));
      SearchSettings s;
      s.delta_bits = search_delta;
      s.max_depth = search_depth;
      s.ipf = common.ipf();
      s.validate();
      emit(common, format_trace(best_model(p, s), parse_base(search_base)));
    } else if (estimate_cmd->parsed()) {
      auto p = parse_distribution(read_text_file(est_in));
      if (est_seed) {
        Rng rng = Rng::derive(*est_seed, {static_cast<std::uint64_t>(StreamPurpose::sampling)});
        p = sample_relative_frequency(p, est_sample, rng);
      }
      KlirEstimate est = [&] {
        if (!est_model.empty()) {
          return klir_estimate_known_model(p, parse_model(read_text_file(est_model), p.scheme()), common.ipf());
        }
        SearchSettings s;
        s.delta_bits = est_delta;
        s.ipf = common.ipf();
        s.validate();
        return klir_estimate_searched(p, s);
      }();
      emit(common, write_klir_estimate(est));
    } else if (decide_cmd->parsed()) {
      const auto p = parse_distribution(read_text_file(dec_in));
      if (dec_seed) {
        Rng rng = Rng::derive(*dec_seed, {static_cast<std::uint64_t>(StreamPurpose::utilities)});
        emit(common, write_decision_problem(random_decision_problem(p.scheme(), dec_random, rng)));
        return 0;
      }
      if (dec_file.empty()) throw InputError("decide needs --decision or --random-acts");
      const auto dp = parse_decision_problem(read_text_file(dec_file), p.scheme());
      std::ostringstream os;
      os << "{\n  \"expected_utility\": {";
      for (std::size_t a = 0; a < dp.action_count(); ++a) {
        os << (a ? ", " : "") << json_string(dp.actions()[a]) << ": " << format_double(expected_utility(dp, a, p));
      }
      os << "},\n  \"maximizing\": [";
      const auto best = maximizing_actions(dp, p);
      for (std::size_t i = 0; i < best.size(); ++i) os << (i ? ", " : "") << json_string(dp.actions()[best[i]]);
      os << "]";
      if (!dec_compare.empty()) {
        const auto q = parse_distribution(read_text_file(dec_compare));
        if (!(q.scheme() == p.scheme())) throw InputError("--compare distribution has a different scheme");
        os << ",\n  \"same_region\": " << (same_region(dp, p, q) ? "true" : "false");
      }
      os << "\n}\n";
      emit(common, os.str());
    } else if (experiment_cmd->parsed()) {
      ExperimentConfig cfg = default_config(parse_experiment_kind(exp_name));
      bool seeded = seed_opt->count() > 0;
      if (config_opt->count() > 0) {
        const std::string text = read_text_file(exp_config);
        cfg = parse_experiment_config(text);
        if (to_string(cfg.kind) != exp_name) {
          throw InputError("config names experiment '" + to_string(cfg.kind) + "', not '" + exp_name + "'");
        }
        seeded = seeded || text.find("\"seed\"") != std::string::npos;
      }
      if (!seeded) {
        std::cerr << "experiment requires an explicit --seed (or a \"seed\" key in --config)\n\n"
                  << experiment_cmd->help();
        return kInputError;
      }
      override_if(seed_opt, cfg.master_seed, exp_seed);
      override_if(trials_opt, cfg.trials, exp_trials);
      override_if(n_opt, cfg.n_values, exp_n);
      override_if(eps_opt, cfg.epsilon_values, exp_eps);
      override_if(acts_opt, cfg.acts_per_matrix, exp_acts);
      override_if(matrices_opt, cfg.matrices_per_distribution, exp_matrices);
      override_if(delta_opt, cfg.search.delta_bits, exp_delta);
      override_if(threads_opt, cfg.threads, exp_threads);
      if (gen_opt->count() > 0) cfg.generator = parse_generator(exp_generator);
      if (common.tolerance != IpfSettings{}.tolerance) cfg.ipf.tolerance = common.tolerance;
      if (common.max_sweeps != IpfSettings{}.max_sweeps) cfg.ipf.max_sweeps = common.max_sweeps;
      cfg.validate();
      const TableResult table = run_experiment(cfg);
      emit(common, exp_format == "csv" ? table_to_csv(table) : table_to_text(table));
    }
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumericError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return 0;
}
