#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "recon/distribution.hpp"
#include "recon/rng.hpp"
#include "recon/scheme.hpp"

namespace recon {

/// Utility matrix over actions x cells of dom(V), in Distribution cell order.
class DecisionProblem {
 public:
  DecisionProblem(Scheme scheme, std::vector<std::string> actions, std::vector<std::vector<double>> utilities);

  const Scheme& scheme() const { return scheme_; }
  const std::vector<std::string>& actions() const { return actions_; }
  const std::vector<std::vector<double>>& utilities() const { return utilities_; }
  std::size_t action_count() const { return actions_.size(); }

  /// Throws InputError for unknown names.
  std::size_t action_index(std::string_view action) const;

 private:
  Scheme scheme_;
  std::vector<std::string> actions_;
  std::vector<std::vector<double>> utilities_;
};

/// e_p(a) = sum_s p(s) u(a, s).
double expected_utility(const DecisionProblem& dp, std::size_t action, const Distribution& p);
double expected_utility(const DecisionProblem& dp, std::string_view action, const Distribution& p);

/// Indices of every action whose expected utility equals the maximum (exact
/// comparison), in increasing order. Never empty.
std::vector<std::size_t> maximizing_actions(const DecisionProblem& dp, const Distribution& p);

/// p and q lie in a common region D(a).
bool same_region(const DecisionProblem& dp, const Distribution& p, const Distribution& q);

/// est_i > est_j relative to p_true: est_i shares a region with p_true and
/// est_j shares none.
bool superior(const DecisionProblem& dp, const Distribution& p_true, const Distribution& est_i,
              const Distribution& est_j);

/// `actions` actions named a1..am with i.i.d. uniform [0, 1) utilities.
DecisionProblem random_decision_problem(const Scheme& scheme, std::size_t actions, Rng& rng);

}  // namespace recon
