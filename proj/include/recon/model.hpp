#pragma once

#include <compare>
#include <span>
#include <string>
#include <vector>

#include "recon/scheme.hpp"

namespace recon {

/**
 * A hypergraph model: an antichain of variable subsets whose union is the
 * whole scheme.
 *
 * Components are kept in canonical order (lexicographic on member
 * positions), which gives every model a unique representation and a total
 * order used for deterministic tie-breaking.
 */
class Model {
 public:
  /// Validates cover and antichain conditions, then canonicalizes.
  Model(Scheme scheme, std::vector<VarSet> components);

  /// Builds from component name lists, e.g. {{"v1","v2"},{"v3"}}.
  static Model from_names(Scheme scheme, const std::vector<std::vector<std::string>>& components);

  /// Greatest element {V}.
  static Model saturated(Scheme scheme);
  /// Least element {{v} | v in V}.
  static Model independence(Scheme scheme);

  const Scheme& scheme() const { return scheme_; }
  std::span<const VarSet> components() const { return components_; }
  std::size_t size() const { return components_.size(); }

  bool is_saturated() const;
  bool is_independence() const;

  std::vector<std::vector<std::string>> component_names() const;

  /// Compact label such as "v1v2:v3".
  std::string label() const;

  bool operator==(const Model& other) const;

  /// Canonical total order over models of one scheme.
  friend bool canonical_less(const Model& a, const Model& b);

 private:
  Scheme scheme_;
  std::vector<VarSet> components_;
};

/// X <= Y: every component of X lies inside some component of Y.
/// Throws InputError when the models are over different schemes.
bool refines(const Model& x, const Model& y);

/// Models covered by x in the refinement lattice, in canonical order.
/// Throws InputError for the least element.
std::vector<Model> immediate_refinements(const Model& x);

/// Every model over the scheme, in canonical order. At most 5 variables.
std::vector<Model> enumerate_models(const Scheme& scheme);

/// Acyclicity by Graham reduction (repeatedly drop vertices that occur in a
/// single edge and edges contained in another edge).
bool is_decomposable(const Model& x);

}  // namespace recon
