#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "recon/rng.hpp"
#include "recon/scheme.hpp"

namespace recon {

enum class LogBase { natural, two };

/// A probability table over the cells of a Scheme. Immutable once built.
class Distribution {
 public:
  /// Validates non-negativity, length, and a sum within 1e-12 of one.
  Distribution(Scheme scheme, std::vector<double> probs);

  /// Normalizes non-negative weights (counts, unnormalized masses).
  static Distribution from_weights(Scheme scheme, std::vector<double> weights);
  static Distribution uniform(Scheme scheme);
  static Distribution point_mass(Scheme scheme, std::size_t cell);

  const Scheme& scheme() const { return scheme_; }
  std::span<const double> probs() const { return probs_; }
  double operator[](std::size_t cell) const { return probs_[cell]; }
  std::size_t size() const { return probs_.size(); }

  bool operator==(const Distribution&) const = default;

 private:
  Scheme scheme_;
  std::vector<double> probs_;
};

/// Marginal of p over `subset`, a distribution over p.scheme().restrict(subset).
Distribution project(const Distribution& p, VarSet subset);
/// Same, with the subset given by variable names. Unknown names throw InputError.
Distribution project(const Distribution& p, std::span<const std::string> names);

/// Shannon entropy with 0 log 0 = 0.
double entropy(const Distribution& p, LogBase base = LogBase::natural);

/// Directed divergence d(p, q) = sum p log(p/q). +infinity when q lacks support
/// where p has mass. Throws InputError on scheme mismatch.
double divergence(const Distribution& p, const Distribution& q, LogBase base = LogBase::natural);

/// Sum of absolute cell deviations.
double hamming(const Distribution& p, const Distribution& q);

/// Max-norm cell distance.
double max_abs_diff(const Distribution& p, const Distribution& q);

/// Relative frequencies of n independent categorical draws from p.
Distribution sample_relative_frequency(const Distribution& p, std::size_t n, Rng& rng);

/// Flat Dirichlet draw: normalized independent unit exponentials.
Distribution random_distribution(const Scheme& scheme, Rng& rng);

/// p0(x) + s(x) * epsilon with independent fair signs, clamped at zero and
/// renormalized. Throws NumericError when every cell is clamped away.
Distribution perturb(const Distribution& p0, double epsilon, Rng& rng);

/// Same, with explicit signs (+1 or -1 per cell).
Distribution perturb_with_signs(const Distribution& p0, double epsilon, std::span<const int> signs);

}  // namespace recon
