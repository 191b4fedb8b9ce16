#pragma once

#include <optional>
#include <vector>

#include "recon/distribution.hpp"
#include "recon/model.hpp"
#include "recon/rng.hpp"

namespace recon {

struct IpfSettings {
  double tolerance = 1e-10;  ///< max absolute marginal residual
  int max_sweeps = 1000;

  /// Throws InputError unless tolerance > 0 and max_sweeps >= 1.
  void validate() const;
};

/// pi_X(p): one marginal per model component. Only project_model creates
/// these, so the marginals always come from a common joint.
class MarginalSet {
 public:
  const Model& model() const { return model_; }
  std::span<const Distribution> marginals() const { return marginals_; }
  const Scheme& scheme() const { return model_.scheme(); }

 private:
  MarginalSet(Model model, std::vector<Distribution> marginals)
      : model_(std::move(model)), marginals_(std::move(marginals)) {}

  friend MarginalSet project_model(const Distribution& p, const Model& x);

  Model model_;
  std::vector<Distribution> marginals_;
};

MarginalSet project_model(const Distribution& p, const Model& x);

enum class ExtensionMethod { closed_form, ipf };

struct MaxentResult {
  Distribution distribution;
  ExtensionMethod method = ExtensionMethod::ipf;
  int sweeps = 0;         ///< IPF sweeps used (0 for the closed form)
  double residual = 0.0;  ///< max absolute marginal residual of the result
};

/// Maximum-entropy member of the extension set. Decomposable models use the
/// closed-form junction product; other models run ipf_extension.
/// Throws NumericError if IPF does not converge.
MaxentResult maxent_extension(const MarginalSet& ms, const IpfSettings& settings = {});

/**
 * Iterative proportional fitting from the uniform table.
 *
 * Cells that every member of the extension set must leave empty are fixed at
 * zero before fitting. For decomposable models these are the cells under a
 * zero marginal; otherwise the support is found by linear programming, which
 * keeps convergence geometric when the maximizer lies on the boundary of the
 * simplex. Throws NumericError on non-convergence, carrying the residual.
 */
MaxentResult ipf_extension(const MarginalSet& ms, const IpfSettings& settings = {});

/// Closed-form junction product prod(clique marginals) / prod(separator
/// marginals) along a Graham elimination order; nullopt for cyclic models.
std::optional<Distribution> junction_product(const MarginalSet& ms);

/// Largest absolute deviation between q's marginals and the targets in ms.
double marginal_residual(const Distribution& q, const MarginalSet& ms);

/// Cells that are positive for some member of the extension set.
std::vector<bool> extension_support(const MarginalSet& ms);

/// p == J(pi_X(p)) up to `tol` in the max norm.
bool reconstructable(const Distribution& p, const Model& x, double tol, const IpfSettings& settings = {});

/// d(p, J(pi_X(p))) in nats.
double reconstruction_divergence(const Distribution& p, const Model& x, const IpfSettings& settings = {});

/**
 * A random perturbation of q that keeps every component marginal of x.
 *
 * Picks a variable set W not contained in any component of x, two values for
 * each member of W and fixed values elsewhere, and adds the alternating
 * +delta/-delta interaction pattern over that 2^|W| box. Marginals over a
 * component C are unchanged because C misses some member of W, over which
 * the pattern cancels. delta is drawn so that the result stays non-negative.
 * Returns nullopt for the saturated model, whose extension set is a point.
 */
std::optional<Distribution> marginal_preserving_move(const Distribution& q, const Model& x, Rng& rng);

/// Checks that J = J(pi_X(p_hat)) is no farther from the uniform table than
/// `samples` random members of the extension set reached by chains of
/// marginal-preserving moves from J: d(J, u) <= d(q, u) + 1e-12 for each.
bool penalized_optimality_check(const Distribution& p_hat, const Model& x, Rng& rng, int samples = 100,
                                const IpfSettings& settings = {});

}  // namespace recon
