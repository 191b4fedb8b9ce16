#pragma once

#include <optional>
#include <vector>

#include "recon/distribution.hpp"
#include "recon/maxent.hpp"
#include "recon/model.hpp"

namespace recon {

struct SearchSettings {
  /// Largest accepted increase of d(p, J) per refinement step, in bits.
  /// +infinity descends all the way to the least model.
  double delta_bits = 0.01;
  /// Maximum number of refinement steps; unset means the lattice height.
  std::optional<int> max_depth;
  IpfSettings ipf;

  void validate() const;
};

struct SearchStep {
  Model model;
  double divergence = 0.0;  ///< d(p, J(pi_model(p))) in nats
};

struct SearchTrace {
  /// Accepted path X_0 = {V}, X_1, ..., ending at the chosen model.
  std::vector<SearchStep> steps;
  /// The best refinement of the chosen model, when one existed but cost more than delta.
  std::optional<SearchStep> rejected;

  const Model& chosen() const { return steps.back().model; }
  double chosen_divergence() const { return steps.back().divergence; }
};

/**
 * Greedy descent through the refinement lattice.
 *
 * Starting from {V}, each step evaluates d(p, J) for every immediate
 * refinement of the current model and moves to the minimizer (ties go to
 * the canonically smallest model). The descent stops at the least model,
 * after max_depth steps, or before the first step whose divergence increment
 * exceeds delta_bits.
 */
SearchTrace best_model(const Distribution& p, const SearchSettings& settings = {});

/// The model chosen by best_model; identifies the cell O(X) containing p.
Model classify(const Distribution& p, const SearchSettings& settings = {});

}  // namespace recon
