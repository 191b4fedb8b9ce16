#include "recon/decision.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "recon/error.hpp"

namespace recon {

namespace {

void require_scheme(const DecisionProblem& dp, const Distribution& p) {
  if (!(dp.scheme() == p.scheme())) throw InputError("decision problem and distribution schemes differ");
}

}  // namespace

DecisionProblem::DecisionProblem(Scheme scheme, std::vector<std::string> actions,
                                 std::vector<std::vector<double>> utilities)
    : scheme_(std::move(scheme)), actions_(std::move(actions)), utilities_(std::move(utilities)) {
  if (actions_.empty()) throw InputError("decision problem needs at least one action");
  if (utilities_.size() != actions_.size()) throw InputError("one utility row per action required");
  std::unordered_set<std::string> seen;
  for (const auto& a : actions_) {
    if (!seen.insert(a).second) throw InputError("duplicate action '" + a + "'");
  }
  for (const auto& row : utilities_) {
    if (row.size() != scheme_.cell_count()) throw InputError("utility row length must equal the cell count");
    for (double u : row) {
      if (!std::isfinite(u)) throw InputError("utilities must be finite");
    }
  }
}

std::size_t DecisionProblem::action_index(std::string_view action) const {
  const auto it = std::find(actions_.begin(), actions_.end(), action);
  if (it == actions_.end()) throw InputError("unknown action '" + std::string(action) + "'");
  return static_cast<std::size_t>(it - actions_.begin());
}

double expected_utility(const DecisionProblem& dp, std::size_t action, const Distribution& p) {
  require_scheme(dp, p);
  if (action >= dp.action_count()) throw InputError("action index out of range");
  const auto& row = dp.utilities()[action];
  double e = 0.0;
  for (std::size_t s = 0; s < row.size(); ++s) e += p[s] * row[s];
  return e;
}

double expected_utility(const DecisionProblem& dp, std::string_view action, const Distribution& p) {
  return expected_utility(dp, dp.action_index(action), p);
}

std::vector<std::size_t> maximizing_actions(const DecisionProblem& dp, const Distribution& p) {
  require_scheme(dp, p);
  std::vector<double> eu(dp.action_count());
  for (std::size_t a = 0; a < eu.size(); ++a) eu[a] = expected_utility(dp, a, p);
  const double best = *std::max_element(eu.begin(), eu.end());
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < eu.size(); ++a) {
    if (eu[a] >= best) out.push_back(a);
  }
  return out;
}

bool same_region(const DecisionProblem& dp, const Distribution& p, const Distribution& q) {
  const auto a = maximizing_actions(dp, p);
  const auto b = maximizing_actions(dp, q);
  return std::any_of(a.begin(), a.end(), [&b](std::size_t x) { return std::binary_search(b.begin(), b.end(), x); });
}

bool superior(const DecisionProblem& dp, const Distribution& p_true, const Distribution& est_i,
              const Distribution& est_j) {
  return same_region(dp, p_true, est_i) && !same_region(dp, p_true, est_j);
}

DecisionProblem random_decision_problem(const Scheme& scheme, std::size_t actions, Rng& rng) {
  if (actions == 0) throw InputError("decision problem needs at least one action");
  std::vector<std::string> names;
  std::vector<std::vector<double>> utilities(actions, std::vector<double>(scheme.cell_count()));
  for (std::size_t a = 0; a < actions; ++a) {
    names.push_back("a" + std::to_string(a + 1));
    for (double& u : utilities[a]) u = rng.uniform();
  }
  return DecisionProblem(scheme, std::move(names), std::move(utilities));
}

}  // namespace recon
