#include "recon/experiments.hpp"

#include <cmath>
#include <sstream>

#include "recon/decision.hpp"
#include "recon/error.hpp"
#include "recon/io.hpp"
#include "recon/klir.hpp"

namespace recon {

namespace {

std::uint64_t key(StreamPurpose p) { return static_cast<std::uint64_t>(p); }

std::vector<Model> all_but_saturated(const Scheme& scheme) {
  std::vector<Model> out;
  for (auto& m : enumerate_models(scheme)) {
    if (!m.is_saturated()) out.push_back(std::move(m));
  }
  return out;
}

Model loop_model(const Scheme& scheme) {
  std::vector<VarSet> comps;
  const VarSet all = scheme.all();
  for (std::size_t v = 0; v < scheme.size(); ++v) comps.push_back(all.without(v));
  return Model(scheme, std::move(comps));
}

std::string join_sizes(const std::vector<std::size_t>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ";" : "") + std::to_string(xs[i]);
  return out;
}

std::string join_doubles(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ";" : "") + format_short(xs[i]);
  return out;
}

std::string scheme_label(const Scheme& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += (i ? ";" : "") + s[i].name + "=" + std::to_string(s[i].cardinality);
  }
  return out;
}

TableResult make_table(const ExperimentConfig& cfg, std::string row_header) {
  TableResult t;
  t.experiment = to_string(cfg.kind);
  t.row_header = std::move(row_header);
  t.master_seed = cfg.master_seed;
  auto& p = t.parameters;
  p.emplace_back("experiment", t.experiment);
  p.emplace_back("seed", std::to_string(cfg.master_seed));
  p.emplace_back("trials", std::to_string(cfg.trials));
  p.emplace_back("scheme", scheme_label(cfg.scheme));
  if (cfg.fixed_model) p.emplace_back("model", cfg.fixed_model->label());
  if (!cfg.models.empty()) {
    std::string ms;
    for (std::size_t i = 0; i < cfg.models.size(); ++i) ms += (i ? ";" : "") + cfg.models[i].label();
    p.emplace_back("models", ms);
  }
  p.emplace_back("n_values", join_sizes(cfg.n_values));
  if (!cfg.epsilon_values.empty()) p.emplace_back("epsilons", join_doubles(cfg.epsilon_values));
  p.emplace_back("generator", to_string(cfg.generator));
  if (cfg.kind == ExperimentKind::decision || cfg.kind == ExperimentKind::model_sweep) {
    p.emplace_back("acts", std::to_string(cfg.acts_per_matrix));
    p.emplace_back("matrices", std::to_string(cfg.matrices_per_distribution));
  }
  if (cfg.kind == ExperimentKind::perturbation || cfg.kind == ExperimentKind::model_sweep) {
    p.emplace_back("delta_bits", format_short(cfg.search.delta_bits));
  }
  if (cfg.kind == ExperimentKind::perturbation) {
    p.emplace_back("ties_favor_klir", cfg.ties_favor_klir ? "true" : "false");
  }
  p.emplace_back("ipf_tolerance", format_short(cfg.ipf.tolerance));
  p.emplace_back("ipf_max_sweeps", std::to_string(cfg.ipf.max_sweeps));
  for (std::size_t n : cfg.n_values) t.row_labels.push_back(std::to_string(n));
  return t;
}

SearchSettings search_settings(const ExperimentConfig& cfg) {
  SearchSettings s = cfg.search;
  s.ipf = cfg.ipf;
  return s;
}

const Model& require_fixed_model(const ExperimentConfig& cfg) {
  if (!cfg.fixed_model) throw InputError(to_string(cfg.kind) + " experiment needs a fixed model");
  return *cfg.fixed_model;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::klir_effect: return "klir-effect";
    case ExperimentKind::perturbation: return "perturbation";
    case ExperimentKind::decision: return "decision";
    case ExperimentKind::model_sweep: return "model-sweep";
    case ExperimentKind::bishop: return "bishop";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  for (auto k : {ExperimentKind::klir_effect, ExperimentKind::perturbation, ExperimentKind::decision,
                 ExperimentKind::model_sweep, ExperimentKind::bishop}) {
    if (to_string(k) == name) return k;
  }
  throw InputError("unknown experiment '" + name + "'");
}

std::string to_string(Generator g) { return g == Generator::dirichlet ? "dirichlet" : "uniform-weights"; }

Generator parse_generator(const std::string& name) {
  if (name == "dirichlet") return Generator::dirichlet;
  if (name == "uniform-weights") return Generator::uniform_weights;
  throw InputError("unknown generator '" + name + "'");
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw InputError("trials must be at least 1");
  if (n_values.empty()) throw InputError("n_values must be non-empty");
  for (std::size_t n : n_values) {
    if (n == 0) throw InputError("n_values must be positive");
  }
  for (double e : epsilon_values) {
    if (!std::isfinite(e) || e < 0.0) throw InputError("epsilons must be finite and non-negative");
  }
  if (acts_per_matrix == 0) throw InputError("acts per matrix must be at least 1");
  if (matrices_per_distribution == 0) throw InputError("matrices per distribution must be at least 1");
  if (fixed_model && !(fixed_model->scheme() == scheme)) throw InputError("fixed model is over another scheme");
  for (const auto& m : models) {
    if (!(m.scheme() == scheme)) throw InputError("model list entry is over another scheme");
  }
  if ((kind == ExperimentKind::perturbation || kind == ExperimentKind::model_sweep)) {
    if (models.empty()) throw InputError(to_string(kind) + " experiment needs a model list");
    if (epsilon_values.empty()) throw InputError(to_string(kind) + " experiment needs epsilons");
  }
  search.validate();
  ipf.validate();
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig cfg;
  cfg.kind = kind;
  cfg.ipf.max_sweeps = 100000;
  cfg.search.delta_bits = 0.05;
  const Scheme binary3 = Scheme::uniform(3, 2);
  switch (kind) {
    case ExperimentKind::klir_effect:
      cfg.fixed_model = Model::from_names(binary3, {{"v1", "v2"}, {"v3"}});
      cfg.trials = 1000;
      cfg.n_values = {5, 10, 40, 500, 5000, 50000};
      break;
    case ExperimentKind::perturbation:
      cfg.models = all_but_saturated(binary3);
      cfg.trials = 1000;
      cfg.n_values = {5, 10, 40, 500, 5000};
      cfg.epsilon_values = {0.015, 0.05, 0.1};
      break;
    case ExperimentKind::decision:
      cfg.fixed_model = Model::independence(binary3);
      cfg.trials = 4000;
      cfg.n_values = {5, 10, 40, 500, 5000};
      cfg.acts_per_matrix = 10;
      cfg.matrices_per_distribution = 1;
      break;
    case ExperimentKind::model_sweep:
      cfg.models = all_but_saturated(binary3);
      cfg.trials = 1000;
      cfg.n_values = {5, 10, 40, 500, 5000};
      cfg.epsilon_values = {0.0, 0.015, 0.05, 0.1};
      cfg.acts_per_matrix = 10;
      cfg.matrices_per_distribution = 4;
      // Sparse small-n frequencies only leave {V} under a coarse threshold.
      cfg.search.delta_bits = 0.5;
      break;
    case ExperimentKind::bishop: {
      cfg.scheme = Scheme({{"v1", 3}, {"v2", 2}, {"v3", 2}});
      cfg.fixed_model = loop_model(cfg.scheme);
      cfg.trials = 100;
      cfg.n_values = {1000};
      break;
    }
  }
  return cfg;
}

Distribution generate_distribution(const Scheme& scheme, Rng& rng, Generator generator) {
  if (generator == Generator::dirichlet) return random_distribution(scheme, rng);
  std::vector<double> w(scheme.cell_count());
  for (double& x : w) x = rng.uniform();
  return Distribution::from_weights(scheme, std::move(w));
}

Distribution gen_reconstructable(const Model& x, Rng& rng, Generator generator, const IpfSettings& ipf) {
  const Distribution q = generate_distribution(x.scheme(), rng, generator);
  if (x.is_saturated()) return q;
  return maxent_extension(project_model(q, x), ipf).distribution;
}

TableResult run_klir_effect_table(const ExperimentConfig& cfg) {
  cfg.validate();
  const Model& x = require_fixed_model(cfg);
  const std::size_t rows = cfg.n_values.size();
  using Row = std::vector<std::pair<double, double>>;
  const auto per_trial = run_trials<Row>(static_cast<std::size_t>(cfg.trials), cfg.threads, [&](std::size_t t) {
    Rng dist_rng = Rng::derive(cfg.master_seed, {key(StreamPurpose::distribution), t});
    const Distribution p = gen_reconstructable(x, dist_rng, cfg.generator, cfg.ipf);
    Row out;
    for (std::size_t k = 0; k < rows; ++k) {
      Rng sample_rng = Rng::derive(cfg.master_seed, {key(StreamPurpose::sampling), t, k});
      const Distribution p_hat = sample_relative_frequency(p, cfg.n_values[k], sample_rng);
      const auto est = klir_estimate_known_model(p_hat, x, cfg.ipf);
      out.emplace_back(hamming(p, p_hat), hamming(p, est.estimate));
    }
    return out;
  });

  TableResult table = make_table(cfg, "n");
  table.column_labels = {"hamming_p_hat", "hamming_J"};
  for (std::size_t k = 0; k < rows; ++k) {
    double raw = 0.0;
    double rec = 0.0;
    for (const auto& r : per_trial) {
      raw += r[k].first;
      rec += r[k].second;
    }
    table.cells.push_back({raw / cfg.trials, rec / cfg.trials});
    table.trial_counts.push_back({cfg.trials, cfg.trials});
  }
  return table;
}

TableResult run_perturbation_table(const ExperimentConfig& cfg) {
  cfg.validate();
  const SearchSettings search = search_settings(cfg);
  const std::size_t rows = cfg.n_values.size();
  const std::size_t cols = cfg.epsilon_values.size();
  TableResult table = make_table(cfg, "n");
  table.cells.assign(rows, std::vector<double>(cols, 0.0));
  table.trial_counts.assign(rows, std::vector<long>(cols, cfg.trials));

  for (std::size_t e = 0; e < cols; ++e) {
    table.column_labels.push_back("eps=" + format_short(cfg.epsilon_values[e]));
    const auto wins = run_trials<std::vector<bool>>(
        static_cast<std::size_t>(cfg.trials), cfg.threads, [&](std::size_t t) {
          Rng choice_rng = Rng::derive(cfg.master_seed, {key(StreamPurpose::model_choice), e, t});
          const Model& x = cfg.models[choice_rng.below(cfg.models.size())];
          Rng dist_rng = Rng::derive(cfg.master_seed, {key(StreamPurpose::distribution), e, t});
          const Distribution p0 = gen_reconstructable(x, dist_rng, cfg.generator, cfg.ipf);
          Rng sign_rng = Rng::derive(cfg.master_seed, {key(StreamPurpose::perturbation), e, t});
          const Distribution p = perturb(p0, cfg.epsilon_values[e], sign_rng);
          std::vector<bool> out;
          for (std::size_t k = 0; k < rows; ++k) {
            Rng sample_rng = Rng::derive(cfg.master_seed, {key(StreamPurpose::sampling), e, t, k});
            const Distribution p_hat = sample_relative_frequency(p, cfg.n_values[k], sample_rng);
            const auto est = klir_estimate_searched(p_hat, search);
            const double h_est = hamming(p, est.estimate);
            const double h_raw = hamming(p, p_hat);
            out.push_back(cfg.ties_favor_klir ? h_est <= h_raw : h_est < h_raw);
          }
          return out;
        });
    for (std::size_t k = 0; k < rows; ++k) {
      long count = 0;
      for (const auto& w : wins) count += w[k] ? 1 : 0;
      table.cells[k][e] = 100.0 * static_cast<double>(count) / cfg.trials;
    }
  }
  return table;
}

TableResult run_decision_table(const ExperimentConfig& cfg) {
  cfg.validate();
  const Model& x = require_fixed_model(cfg);
  const std::size_t rows = cfg.n_values.size();
  const std::size_t matrices = cfg.matrices_per_distribution;
  using Row = std::vector<std::pair<long, long>>;
  const auto per_trial = run_trials<Row>(static_cast<std::size_t>(cfg.trials), cfg.threads, [&](std::size_t t) {
    Rng dist_rng = Rng::derive(cfg.master_seed, {key(StreamPurpose::distribution), t});
    const Distribution p = gen_reconstructable(x, dist_rng, cfg.generator, cfg.ipf);
    std::vector<DecisionProblem> problems;
    for (std::size_t m = 0; m < matrices; ++m) {
      Rng util_rng = Rng::derive(cfg.master_seed, {key(StreamPurpose::utilities), t, m});
      problems.push_back(random_decision_problem(cfg.scheme, cfg.acts_per_matrix, util_rng));
    }
    Row out;
    for (std::size_t k = 0; k < rows; ++k) {
      Rng sample_rng = Rng::derive(cfg.master_seed, {key(StreamPurpose::sampling), t, k});
      const Distribution p_hat = sample_relative_frequency(p, cfg.n_values[k], sample_rng);
      const Distribution j = klir_estimate_known_model(p_hat, x, cfg.ipf).estimate;
      long raw = 0;
      long rec = 0;
      for (const auto& dp : problems) {
        raw += same_region(dp, p_hat, p) ? 1 : 0;
        rec += same_region(dp, j, p) ? 1 : 0;
      }
      out.emplace_back(raw, rec);
    }
    return out;
  });

  TableResult table = make_table(cfg, "n");
  table.column_labels = {"p_hat_per_1000", "J_per_1000", "p_hat_count", "J_count"};
  const double cases = static_cast<double>(cfg.trials) * static_cast<double>(matrices);
  for (std::size_t k = 0; k < rows; ++k) {
    long raw = 0;
    long rec = 0;
    for (const auto& r : per_trial) {
      raw += r[k].first;
      rec += r[k].second;
    }
    table.cells.push_back({1000.0 * static_cast<double>(raw) / cases, 1000.0 * static_cast<double>(rec) / cases,
                           static_cast<double>(raw), static_cast<double>(rec)});
    const long c = static_cast<long>(cases);
    table.trial_counts.push_back({c, c, c, c});
  }
  return table;
}

TableResult run_model_sweep_table(const ExperimentConfig& cfg) {
  cfg.validate();
  const SearchSettings search = search_settings(cfg);
  const std::size_t rows = cfg.n_values.size();
  const std::size_t cols = cfg.epsilon_values.size();
  const std::size_t matrices = cfg.matrices_per_distribution;
  // result[e][k] = (J matches, p_hat matches)
  using PerTrial = std::vector<std::vector<std::pair<long, long>>>;
  const auto per_trial = run_trials<PerTrial>(static_cast<std::size_t>(cfg.trials), cfg.threads, [&](std::size_t t) {
    // Trials cycle through the model list so each model gets an equal share.
    const Model& x0 = cfg.models[t % cfg.models.size()];
    Rng dist_rng = Rng::derive(cfg.master_seed, {key(StreamPurpose::distribution), t});
    const Distribution p0 = gen_reconstructable(x0, dist_rng, cfg.generator, cfg.ipf);
    PerTrial out(cols);
    for (std::size_t e = 0; e < cols; ++e) {
      // Same signs for every epsilon, so columns differ only in magnitude.
      Rng sign_rng = Rng::derive(cfg.master_seed, {key(StreamPurpose::perturbation), t});
      const Distribution p = perturb(p0, cfg.epsilon_values[e], sign_rng);
      std::vector<DecisionProblem> problems;
      for (std::size_t m = 0; m < matrices; ++m) {
        Rng util_rng = Rng::derive(cfg.master_seed, {key(StreamPurpose::utilities), e, t, m});
        problems.push_back(random_decision_problem(cfg.scheme, cfg.acts_per_matrix, util_rng));
      }
      for (std::size_t k = 0; k < rows; ++k) {
        Rng sample_rng = Rng::derive(cfg.master_seed, {key(StreamPurpose::sampling), e, t, k});
        const Distribution p_hat = sample_relative_frequency(p, cfg.n_values[k], sample_rng);
        const Distribution j = klir_estimate_searched(p_hat, search).estimate;
        long rec = 0;
        long raw = 0;
        for (const auto& dp : problems) {
          rec += same_region(dp, j, p) ? 1 : 0;
          raw += same_region(dp, p_hat, p) ? 1 : 0;
        }
        out[e].emplace_back(rec, raw);
      }
    }
    return out;
  });

  TableResult table = make_table(cfg, "n");
  const double cases = static_cast<double>(cfg.trials) * static_cast<double>(matrices);
  for (double eps : cfg.epsilon_values) table.column_labels.push_back("eps=" + format_short(eps));
  table.cells.assign(rows, std::vector<double>(cols, 0.0));
  table.trial_counts.assign(rows, std::vector<long>(cols, static_cast<long>(cases)));
  for (std::size_t e = 0; e < cols; ++e) {
    for (std::size_t k = 0; k < rows; ++k) {
      long rec = 0;
      long raw = 0;
      for (const auto& r : per_trial) {
        rec += r[e][k].first;
        raw += r[e][k].second;
      }
      table.cells[k][e] = 100.0 * static_cast<double>(rec - raw) / cases;
    }
  }
  return table;
}

TableResult run_bishop_replication(const ExperimentConfig& cfg) {
  cfg.validate();
  const Model& x = require_fixed_model(cfg);
  const std::size_t rows = cfg.n_values.size();
  const auto per_trial = run_trials<std::vector<bool>>(
      static_cast<std::size_t>(cfg.trials), cfg.threads, [&](std::size_t t) {
        Rng dist_rng = Rng::derive(cfg.master_seed, {key(StreamPurpose::distribution), t});
        const Distribution p = gen_reconstructable(x, dist_rng, cfg.generator, cfg.ipf);
        std::vector<bool> out;
        for (std::size_t k = 0; k < rows; ++k) {
          Rng sample_rng = Rng::derive(cfg.master_seed, {key(StreamPurpose::sampling), t, k});
          const Distribution p_hat = sample_relative_frequency(p, cfg.n_values[k], sample_rng);
          const Distribution j = klir_estimate_known_model(p_hat, x, cfg.ipf).estimate;
          out.push_back(divergence(p, j) < divergence(p, p_hat));
        }
        return out;
      });

  TableResult table = make_table(cfg, "n");
  table.column_labels = {"closer_count", "trials"};
  for (std::size_t k = 0; k < rows; ++k) {
    long count = 0;
    for (const auto& r : per_trial) count += r[k] ? 1 : 0;
    table.cells.push_back({static_cast<double>(count), static_cast<double>(cfg.trials)});
    table.trial_counts.push_back({cfg.trials, cfg.trials});
  }
  return table;
}

TableResult run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::klir_effect: return run_klir_effect_table(cfg);
    case ExperimentKind::perturbation: return run_perturbation_table(cfg);
    case ExperimentKind::decision: return run_decision_table(cfg);
    case ExperimentKind::model_sweep: return run_model_sweep_table(cfg);
    case ExperimentKind::bishop: return run_bishop_replication(cfg);
  }
  throw InputError("unknown experiment kind");
}

}  // namespace recon
