// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failures (capped at 1).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "recon/decision.hpp"
#include "recon/error.hpp"
#include "recon/experiments.hpp"
#include "recon/io.hpp"
#include "recon/maxent.hpp"
#include "support.hpp"

using namespace recon;
using testing::binary3;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string column(const TableResult& t, std::size_t c, int digits = 4) {
  std::string out;
  for (std::size_t r = 0; r < t.cells.size(); ++r) out += (r ? " " : "") + fmt(t.at(r, c), digits);
  return out;
}

// Experiment tables are computed once and reused by the determinism check.
std::vector<std::pair<ExperimentConfig, std::string>> g_csv;

TableResult run_timed(const ExperimentConfig& cfg, Outcome& o) {
  const auto t0 = Clock::now();
  TableResult t = run_experiment(cfg);
  const double s = seconds_since(t0);
  o.require(s < 120.0, "runtime " + fmt(s, 1) + " s");
  g_csv.emplace_back(cfg, table_to_csv(t));
  return t;
}

Outcome projection_exact() {
  Outcome o;
  const std::vector<std::string> v12{"v1", "v2"};
  const auto q = project(testing::table(), v12);
  const std::vector<double> want{0.25, 0.125, 0.375, 0.25};
  o.require(std::vector<double>(q.probs().begin(), q.probs().end()) == want, "projection differs");
  o.detail = o.pass ? "pi_{v1,v2}(p) = (1/4, 1/8, 3/8, 1/4) exactly" : o.detail;
  return o;
}

Outcome fixed_point() {
  Outcome o;
  const auto t0 = Clock::now();
  double worst_diff = 0.0, worst_res = 0.0;
  int worst_sweeps = 0;
  const auto models = enumerate_models(binary3());
  o.require(models.size() == 9, "expected 9 models");
  for (std::size_t m = 0; m < models.size(); ++m) {
    for (std::uint64_t t = 0; t < 100; ++t) {
      Rng rng = Rng::derive(2, {m, t});
      const auto p = gen_reconstructable(models[m], rng);
      const auto ms = project_model(p, models[m]);
      worst_diff = std::max(worst_diff, max_abs_diff(p, maxent_extension(ms).distribution));
      try {
        const auto fit = ipf_extension(ms);
        worst_res = std::max(worst_res, fit.residual);
        worst_sweeps = std::max(worst_sweeps, fit.sweeps);
      } catch (const NumericError& e) {
        o.require(false, "IPF did not converge (residual " + format_short(e.residual()) + ")");
      }
    }
  }
  const double s = seconds_since(t0);
  o.require(worst_diff < 1e-9, "max |p - J| = " + format_short(worst_diff));
  o.require(worst_res < 1e-10, "residual " + format_short(worst_res));
  o.require(s < 5.0, "runtime " + fmt(s, 2) + " s");
  if (o.pass) {
    o.detail = "max |p - J| = " + format_short(worst_diff) + ", max residual " + format_short(worst_res) +
               ", max sweeps " + std::to_string(worst_sweeps) + ", " + fmt(s, 2) + " s";
  }
  return o;
}

Outcome decomposable_oracle() {
  Outcome o;
  double worst = 0.0;
  int count = 0;
  const auto models = enumerate_models(binary3());
  for (std::size_t m = 0; m < models.size(); ++m) {
    if (!is_decomposable(models[m])) continue;
    ++count;
    for (std::uint64_t t = 0; t < 100; ++t) {
      Rng rng = Rng::derive(3, {m, t});
      const auto ms = project_model(random_distribution(binary3(), rng), models[m]);
      const auto closed = junction_product(ms);
      if (!closed) {
        o.require(false, "no closed form for " + models[m].label());
        continue;
      }
      worst = std::max(worst, max_abs_diff(*closed, ipf_extension(ms).distribution));
    }
  }
  o.require(count == 8, "expected 8 decomposable models");
  o.require(worst < 1e-9, "max |IPF - closed form| = " + format_short(worst));
  if (o.pass) o.detail = std::to_string(count) + " models x 100: max |IPF - closed form| = " + format_short(worst);
  return o;
}

Outcome maxent_dominance() {
  Outcome o;
  const auto u = Distribution::uniform(binary3());
  int moves = 0;
  for (const auto& x : {testing::loop3(), Model::independence(binary3())}) {
    Rng rng = Rng::derive(4, {x.size()});
    const auto ms = project_model(random_distribution(binary3(), rng), x);
    const auto j = maxent_extension(ms).distribution;
    const double hj = entropy(j), dj = divergence(j, u);
    const auto jm = project_model(j, x);
    for (int i = 0; i < 100; ++i) {
      // Chains of one to three moves reach beyond the immediate neighbourhood.
      auto q = j;
      const int steps = 1 + static_cast<int>(rng.below(3));
      for (int k = 0; k < steps; ++k) {
        auto next = marginal_preserving_move(q, x, rng);
        if (next) q = *next;
      }
      ++moves;
      o.require(marginal_residual(q, jm) < 1e-12, "move broke a marginal");
      o.require(entropy(q) <= hj + 1e-12, "entropy exceeded H(J) on " + x.label());
      o.require(divergence(q, u) >= dj - 1e-12, "divergence below d(J, u) on " + x.label());
      o.require(max_abs_diff(q, j) > 0.0, "move left J unchanged");
    }
  }
  if (o.pass) o.detail = std::to_string(moves) + " perturbations on v1v2:v1v3:v2v3 and v1:v2:v3";
  return o;
}

Outcome refinement_monotone() {
  Outcome o;
  const auto models = enumerate_models(binary3());
  int pairs = 0;
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 50; ++t) {
    Rng rng = Rng::derive(5, {t});
    const auto p = random_distribution(binary3(), rng);
    std::vector<double> d;
    for (const auto& m : models) d.push_back(reconstruction_divergence(p, m));
    for (std::size_t a = 0; a < models.size(); ++a) {
      for (std::size_t b = 0; b < models.size(); ++b) {
        if (!refines(models[a], models[b])) continue;
        ++pairs;
        worst = std::max(worst, d[b] - d[a]);
      }
    }
  }
  o.require(worst <= 1e-12, "violation " + format_short(worst));
  if (o.pass) o.detail = std::to_string(pairs) + " comparable (X, Y, p) triples, worst d_Y - d_X = " + format_short(worst);
  return o;
}

Outcome klir_effect() {
  Outcome o;
  const auto t = run_timed(default_config(ExperimentKind::klir_effect), o);
  for (std::size_t r = 0; r < t.cells.size(); ++r) {
    o.require(t.at(r, 1) < t.at(r, 0), "J not closer at n = " + t.row_labels[r]);
    if (r > 0) {
      o.require(t.at(r, 0) < t.at(r - 1, 0), "p_hat column not decreasing at n = " + t.row_labels[r]);
      o.require(t.at(r, 1) < t.at(r - 1, 1), "J column not decreasing at n = " + t.row_labels[r]);
    }
  }
  o.require(std::abs(t.at(0, 0) / 0.9476 - 1.0) <= 0.3, "n = 5 p_hat mean " + fmt(t.at(0, 0)));
  o.require(std::abs(t.at(0, 1) / 0.7307 - 1.0) <= 0.3, "n = 5 J mean " + fmt(t.at(0, 1)));
  o.detail += (o.detail.empty() ? "" : " | ") + std::string("h(p,p_hat): ") + column(t, 0) +
              " | h(p,J): " + column(t, 1);
  return o;
}

Outcome perturbation() {
  Outcome o;
  const auto cfg = default_config(ExperimentKind::perturbation);
  const auto t = run_timed(cfg, o);
  std::size_t eps05 = cfg.epsilon_values.size();
  for (std::size_t c = 0; c < cfg.epsilon_values.size(); ++c) {
    if (cfg.epsilon_values[c] == 0.05) eps05 = c;
    o.require(t.at(0, c) > 80.0, "n = 5 at eps = " + t.column_labels[c] + ": " + fmt(t.at(0, c), 1) + "%");
  }
  const auto row = [&](std::size_t n) {
    for (std::size_t r = 0; r < cfg.n_values.size(); ++r) {
      if (cfg.n_values[r] == n) return r;
    }
    return cfg.n_values.size();
  };
  const std::size_t r40 = row(40), r5000 = row(5000);
  if (eps05 == cfg.epsilon_values.size() || r40 == cfg.n_values.size() || r5000 == cfg.n_values.size()) {
    o.require(false, "grid lacks eps = 0.05, n = 40 or n = 5000");
    return o;
  }
  o.require(t.at(r40, eps05) > 50.0, "n = 40, eps = 0.05: " + fmt(t.at(r40, eps05), 1) + "%");
  o.require(t.at(r5000, eps05) < 50.0, "n = 5000, eps = 0.05: " + fmt(t.at(r5000, eps05), 1) + "%");
  std::string first_row;
  for (std::size_t c = 0; c < t.column_labels.size(); ++c) first_row += (c ? " " : "") + fmt(t.at(0, c), 1);
  o.detail += (o.detail.empty() ? "" : " | ") + std::string("n=5 by eps: ") + first_row +
              " | eps=0.05 by n: " + column(t, eps05, 1);
  return o;
}

Outcome decision() {
  Outcome o;
  const auto t = run_timed(default_config(ExperimentKind::decision), o);
  // Columns: p_hat_per_1000, J_per_1000, p_hat_count, J_count.
  for (std::size_t r = 0; r < t.cells.size(); ++r) {
    o.require(t.at(r, 3) > t.at(r, 2), "J count not larger at n = " + t.row_labels[r]);
    if (r > 0) {
      o.require(t.at(r, 0) >= t.at(r - 1, 0), "p_hat column decreases at n = " + t.row_labels[r]);
      o.require(t.at(r, 1) >= t.at(r - 1, 1), "J column decreases at n = " + t.row_labels[r]);
    }
  }
  o.require(t.at(0, 0) >= 400 && t.at(0, 0) <= 600, "n = 5 p_hat " + fmt(t.at(0, 0), 1) + " outside [400, 600]");
  o.require(t.at(0, 1) >= 520 && t.at(0, 1) <= 720, "n = 5 J " + fmt(t.at(0, 1), 1) + " outside [520, 720]");
  o.detail += (o.detail.empty() ? "" : " | ") + std::string("per 1000, p_hat: ") + column(t, 0, 1) +
              " | J: " + column(t, 1, 1);
  return o;
}

Outcome model_sweep() {
  Outcome o;
  const auto cfg = default_config(ExperimentKind::model_sweep);
  const auto t = run_timed(cfg, o);
  const std::size_t last_col = cfg.epsilon_values.size() - 1;
  const std::size_t last_row = cfg.n_values.size() - 1;
  o.require(cfg.epsilon_values.front() == 0.0 && cfg.epsilon_values.back() == 0.1, "epsilon grid");
  o.require(cfg.n_values.front() == 5 && cfg.n_values.back() == 5000, "n grid");
  o.require(t.at(0, 0) > 0.0, "(n = 5, eps = 0) = " + fmt(t.at(0, 0), 2));
  o.require(t.at(last_row, last_col) < 0.0, "(n = 5000, eps = 0.1) = " + fmt(t.at(last_row, last_col), 2));
  for (std::size_t c = 0; c < t.column_labels.size(); ++c) {
    for (std::size_t r = 1; r < t.cells.size(); ++r) {
      o.require(t.at(r, c) <= t.at(r - 1, c) + 2.0,
                "rise at n = " + t.row_labels[r] + ", " + t.column_labels[c] + ": " + fmt(t.at(r, c), 2));
    }
  }
  o.detail += (o.detail.empty() ? "" : " | ") + std::string("eps=0: ") + column(t, 0, 2) +
              " | eps=0.1: " + column(t, last_col, 2) + " | delta " + format_short(cfg.search.delta_bits) + " bits";
  return o;
}

Outcome bishop() {
  Outcome o;
  const auto t = run_timed(default_config(ExperimentKind::bishop), o);
  o.require(t.at(0, 1) == 100.0, "expected 100 trials");
  o.require(t.at(0, 0) >= 90.0, "closer in only " + fmt(t.at(0, 0), 0));
  o.detail += (o.detail.empty() ? "" : " | ") + std::string("J closer in ") + fmt(t.at(0, 0), 0) + " of 100";
  return o;
}

Outcome determinism() {
  Outcome o;
  for (const auto& [cfg, csv] : g_csv) {
    ExperimentConfig again = cfg;
    o.require(table_to_csv(run_experiment(again)) == csv, to_string(cfg.kind) + " rerun differs");
    again.threads = 4;
    o.require(table_to_csv(run_experiment(again)) == csv, to_string(cfg.kind) + " differs with 4 threads");
  }
  o.require(g_csv.size() == 5, "expected 5 experiment tables");
  if (o.pass) o.detail = "5 experiments byte-identical on rerun and with 4 threads";
  return o;
}

Outcome round_trip() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / "recon_acceptance";
  std::filesystem::create_directories(dir);
  int files = 0;
  const auto cycle = [&](const std::string& name, const std::string& text,
                         const std::function<std::string(const std::string&)>& reparse) {
    const auto path = dir / name;
    write_text_file(path, text);
    const std::string once = reparse(read_text_file(path));
    write_text_file(path, once);
    const std::string twice = reparse(read_text_file(path));
    o.require(once == twice && once == text, name + " changed on round-trip");
    ++files;
  };
  const std::vector<Scheme> schemes{binary3(), Scheme({{"v1", 3}, {"v2", 2}, {"v3", 2}}),
                                    Scheme({{"x", 2}, {"y", 4}})};
  for (std::size_t s = 0; s < schemes.size(); ++s) {
    const Scheme& scheme = schemes[s];
    for (std::uint64_t t = 0; t < 20; ++t) {
      Rng rng = Rng::derive(12, {s, t});
      const auto p = sample_relative_frequency(random_distribution(scheme, rng), 1 + rng.below(1000), rng);
      cycle("dist.json", write_distribution(p),
            [](const std::string& x) { return write_distribution(parse_distribution(x)); });
      const auto dp = random_decision_problem(scheme, 1 + rng.below(5), rng);
      cycle("decision.json", write_decision_problem(dp), [&](const std::string& x) {
        return write_decision_problem(parse_decision_problem(x, scheme));
      });
    }
    if (scheme.size() <= 5) {
      for (const auto& m : enumerate_models(scheme)) {
        cycle("model.json", write_model(m),
              [&](const std::string& x) { return write_model(parse_model(x, scheme)); });
      }
    }
  }
  std::filesystem::remove_all(dir);
  if (o.pass) o.detail = std::to_string(files) + " distribution, model and decision files byte-identical";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"projection correctness", projection_exact},
      {"reconstruction fixed point", fixed_point},
      {"decomposable-oracle equivalence", decomposable_oracle},
      {"maxent dominance", maxent_dominance},
      {"refinement monotonicity", refinement_monotone},
      {"Klir-effect table", klir_effect},
      {"perturbation table", perturbation},
      {"decision table", decision},
      {"model-sweep table", model_sweep},
      {"Bishop replication", bishop},
      {"determinism", determinism},
      {"file round-trip", round_trip},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += o.pass ? 0 : 1;
    std::printf("criterion %2zu %-32s %s  %s\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
