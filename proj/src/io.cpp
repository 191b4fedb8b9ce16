#include "recon/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "recon/error.hpp"

namespace recon {

using nlohmann::json;

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

std::string quote(const std::string& s) { return json(s).dump(); }

std::string number_list(std::span<const double> xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += format_double(xs[i]);
  }
  return out + "]";
}

std::vector<Variable> parse_variables(const json& j) {
  if (!j.is_array()) throw InputError("\"variables\" must be a list");
  std::vector<Variable> vars;
  for (const auto& v : j) {
    if (!v.is_object() || !v.contains("name") || !v.contains("cardinality")) {
      throw InputError("each variable needs \"name\" and \"cardinality\"");
    }
    if (!v["name"].is_string() || !v["cardinality"].is_number_integer()) {
      throw InputError("variable name must be a string and cardinality an integer");
    }
    vars.push_back({v["name"].get<std::string>(), v["cardinality"].get<int>()});
  }
  return vars;
}

std::string variables_json(const Scheme& s, const std::string& indent) {
  std::string out = "[\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += indent + "  {\"name\": " + quote(s[i].name) + ", \"cardinality\": " + std::to_string(s[i].cardinality) +
           "}" + (i + 1 < s.size() ? ",\n" : "\n");
  }
  return out + indent + "]";
}

std::string distribution_body(const Distribution& p, const std::string& indent) {
  return "{\n" + indent + "  \"variables\": " + variables_json(p.scheme(), indent + "  ") + ",\n" + indent +
         "  \"probs\": " + number_list(p.probs()) + "\n" + indent + "}";
}

std::vector<std::vector<std::string>> parse_name_lists(const json& j) {
  if (!j.is_array()) throw InputError("model must be a list of lists of variable names");
  std::vector<std::vector<std::string>> out;
  for (const auto& comp : j) {
    if (!comp.is_array()) throw InputError("model must be a list of lists of variable names");
    std::vector<std::string> names;
    for (const auto& n : comp) {
      if (!n.is_string()) throw InputError("variable names must be strings");
      names.push_back(n.get<std::string>());
    }
    out.push_back(std::move(names));
  }
  return out;
}

std::string model_inline(const Model& x) {
  std::string out = "[";
  const auto comps = x.component_names();
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (i) out += ", ";
    out += "[";
    for (std::size_t k = 0; k < comps[i].size(); ++k) out += (k ? ", " : "") + quote(comps[i][k]);
    out += "]";
  }
  return out + "]";
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_short(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

Distribution parse_distribution(std::string_view text) {
  const json j = parse_json(text);
  if (!j.is_object() || !j.contains("variables") || !j.contains("probs")) {
    throw InputError("distribution file needs \"variables\" and \"probs\"");
  }
  Scheme scheme(parse_variables(j["variables"]));
  const json& probs = j["probs"];
  if (!probs.is_array()) throw InputError("\"probs\" must be a list");
  std::vector<double> values;
  bool counts = true;
  for (const auto& v : probs) {
    if (!v.is_number()) throw InputError("\"probs\" entries must be numbers");
    const double x = v.get<double>();
    if (!std::isfinite(x) || x < 0.0) throw InputError("\"probs\" entries must be finite and non-negative");
    counts = counts && x == std::floor(x);
    values.push_back(x);
  }
  if (values.size() != scheme.cell_count()) {
    throw InputError("\"probs\" has " + std::to_string(values.size()) + " entries, expected " +
                     std::to_string(scheme.cell_count()));
  }
  double sum = 0.0;
  for (double x : values) sum += x;
  if (!counts && std::abs(sum - 1.0) > 1e-9) throw InputError("\"probs\" must sum to 1 (got " + format_short(sum) + ")");
  return Distribution::from_weights(std::move(scheme), std::move(values));
}

std::string write_distribution(const Distribution& p) { return distribution_body(p, "") + "\n"; }

Model parse_model(std::string_view text, const Scheme& scheme) {
  return Model::from_names(scheme, parse_name_lists(parse_json(text)));
}

std::string write_model(const Model& x) { return model_inline(x) + "\n"; }

DecisionProblem parse_decision_problem(std::string_view text, const Scheme& scheme) {
  const json j = parse_json(text);
  if (!j.is_object() || !j.contains("actions") || !j.contains("utilities")) {
    throw InputError("decision file needs \"actions\" and \"utilities\"");
  }
  std::vector<std::string> actions;
  for (const auto& a : j["actions"]) {
    if (!a.is_string()) throw InputError("actions must be strings");
    actions.push_back(a.get<std::string>());
  }
  std::vector<std::vector<double>> rows;
  if (!j["utilities"].is_array()) throw InputError("\"utilities\" must be a list of rows");
  for (const auto& row : j["utilities"]) {
    if (!row.is_array()) throw InputError("\"utilities\" must be a list of rows");
    std::vector<double> r;
    for (const auto& u : row) {
      if (!u.is_number()) throw InputError("utilities must be numbers");
      r.push_back(u.get<double>());
    }
    rows.push_back(std::move(r));
  }
  return DecisionProblem(scheme, std::move(actions), std::move(rows));
}

std::string write_decision_problem(const DecisionProblem& dp) {
  std::string out = "{\n  \"actions\": [";
  for (std::size_t i = 0; i < dp.action_count(); ++i) out += (i ? ", " : "") + quote(dp.actions()[i]);
  out += "],\n  \"utilities\": [\n";
  for (std::size_t i = 0; i < dp.action_count(); ++i) {
    out += "    " + number_list(dp.utilities()[i]) + (i + 1 < dp.action_count() ? ",\n" : "\n");
  }
  return out + "  ]\n}\n";
}

std::string write_klir_estimate(const KlirEstimate& est) {
  std::string out = "{\n";
  out += "  \"model\": " + model_inline(est.model) + ",\n";
  out += "  \"method\": " + quote(est.method == ExtensionMethod::closed_form ? "closed-form" : "ipf") + ",\n";
  out += "  \"sweeps\": " + std::to_string(est.sweeps) + ",\n";
  out += "  \"residual\": " + format_double(est.residual) + ",\n";
  if (est.trace) {
    out += "  \"trace\": [\n";
    const auto& steps = est.trace->steps;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      out += "    {\"model\": " + model_inline(steps[i].model) +
             ", \"divergence\": " + format_double(steps[i].divergence) + "}" + (i + 1 < steps.size() ? ",\n" : "\n");
    }
    out += "  ],\n";
  }
  out += "  \"estimate\": " + distribution_body(est.estimate, "  ") + "\n";
  return out + "}\n";
}

std::string format_trace(const SearchTrace& trace, LogBase base) {
  const double scale = base == LogBase::two ? 1.0 / std::log(2.0) : 1.0;
  const std::string unit = base == LogBase::two ? "bits" : "nats";
  std::size_t width = 5;
  for (const auto& s : trace.steps) width = std::max(width, s.model.label().size());
  if (trace.rejected) width = std::max(width, trace.rejected->model.label().size());
  std::ostringstream os;
  os << pad("step", 6) << pad("model", width + 2) << pad("divergence(" + unit + ")", 22) << "increment\n";
  double prev = 0.0;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    os << pad(std::to_string(i), 6) << pad(s.model.label(), width + 2) << pad(format_double(s.divergence * scale), 22)
       << format_double((s.divergence - prev) * scale) << "\n";
    prev = s.divergence;
  }
  if (trace.rejected) {
    os << pad("stop", 6) << pad(trace.rejected->model.label(), width + 2)
       << pad(format_double(trace.rejected->divergence * scale), 22)
       << format_double((trace.rejected->divergence - prev) * scale) << "  (rejected)\n";
  }
  os << "chosen: " << trace.chosen().label() << "\n";
  return os.str();
}

std::string table_to_csv(const TableResult& table) {
  std::string out;
  for (const auto& [k, v] : table.parameters) out += "# " + k + "=" + v + "\n";
  out += table.row_header;
  for (const auto& c : table.column_labels) out += "," + c;
  out += "\n";
  for (std::size_t r = 0; r < table.row_labels.size(); ++r) {
    out += table.row_labels[r];
    for (double x : table.cells[r]) out += "," + format_double(x);
    out += "\n";
  }
  return out;
}

std::string table_to_text(const TableResult& table) {
  std::vector<std::vector<std::string>> grid;
  grid.push_back({table.row_header});
  for (const auto& c : table.column_labels) grid.back().push_back(c);
  for (std::size_t r = 0; r < table.row_labels.size(); ++r) {
    grid.push_back({table.row_labels[r]});
    for (double x : table.cells[r]) {
      std::ostringstream os;
      os << std::fixed << std::setprecision(4) << x;
      grid.back().push_back(os.str());
    }
  }
  std::vector<std::size_t> widths(grid.front().size(), 0);
  for (const auto& row : grid) {
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  std::string out = table.experiment + " (seed " + std::to_string(table.master_seed) + ")\n";
  for (const auto& row : grid) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      const std::string& cell = row[c];
      out += std::string(widths[c] - cell.size() + (c ? 2 : 0), ' ') + cell;
    }
    out += "\n";
  }
  return out;
}

ExperimentConfig parse_experiment_config(std::string_view text) {
  const json j = parse_json(text);
  if (!j.is_object() || !j.contains("experiment") || !j["experiment"].is_string()) {
    throw InputError("experiment config needs an \"experiment\" name");
  }
  static const std::set<std::string> known = {
      "experiment", "variables", "model",     "models",          "trials",     "n_values",
      "epsilons",   "acts",      "matrices",  "seed",            "generator",  "ties_favor_klir",
      "delta_bits", "max_depth", "ipf_tolerance", "ipf_max_sweeps", "threads"};
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) throw InputError("unknown config key '" + k + "'");
  }
  ExperimentConfig cfg = default_config(parse_experiment_kind(j["experiment"].get<std::string>()));
  try {
    if (j.contains("variables")) {
      cfg.scheme = Scheme(parse_variables(j["variables"]));
      // Models tied to the default scheme no longer apply.
      cfg.fixed_model.reset();
      cfg.models.clear();
      if (cfg.kind == ExperimentKind::perturbation || cfg.kind == ExperimentKind::model_sweep) {
        for (auto& m : enumerate_models(cfg.scheme)) {
          if (!m.is_saturated()) cfg.models.push_back(std::move(m));
        }
      }
    }
    if (j.contains("model")) cfg.fixed_model = Model::from_names(cfg.scheme, parse_name_lists(j["model"]));
    if (j.contains("models")) {
      cfg.models.clear();
      for (const auto& m : j["models"]) cfg.models.push_back(Model::from_names(cfg.scheme, parse_name_lists(m)));
    }
    if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
    if (j.contains("n_values")) cfg.n_values = j["n_values"].get<std::vector<std::size_t>>();
    if (j.contains("epsilons")) cfg.epsilon_values = j["epsilons"].get<std::vector<double>>();
    if (j.contains("acts")) cfg.acts_per_matrix = j["acts"].get<std::size_t>();
    if (j.contains("matrices")) cfg.matrices_per_distribution = j["matrices"].get<std::size_t>();
    if (j.contains("seed")) cfg.master_seed = j["seed"].get<std::uint64_t>();
    if (j.contains("generator")) cfg.generator = parse_generator(j["generator"].get<std::string>());
    if (j.contains("ties_favor_klir")) cfg.ties_favor_klir = j["ties_favor_klir"].get<bool>();
    if (j.contains("delta_bits")) cfg.search.delta_bits = j["delta_bits"].get<double>();
    if (j.contains("max_depth")) cfg.search.max_depth = j["max_depth"].get<int>();
    if (j.contains("ipf_tolerance")) cfg.ipf.tolerance = j["ipf_tolerance"].get<double>();
    if (j.contains("ipf_max_sweeps")) cfg.ipf.max_sweeps = j["ipf_max_sweeps"].get<int>();
    if (j.contains("threads")) cfg.threads = j["threads"].get<unsigned>();
  } catch (const json::exception& e) {
    throw InputError(std::string("bad experiment config value: ") + e.what());
  }
  if (cfg.kind == ExperimentKind::bishop && !cfg.fixed_model) {
    throw InputError("bishop experiment with custom variables needs a \"model\"");
  }
  cfg.validate();
  return cfg;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

}  // namespace recon
