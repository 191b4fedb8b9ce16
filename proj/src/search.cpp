#include "recon/search.hpp"

#include <cmath>
#include <numbers>

#include "recon/error.hpp"

namespace recon {

void SearchSettings::validate() const {
  if (std::isnan(delta_bits) || delta_bits < 0.0) throw InputError("search delta must be non-negative");
  if (max_depth && *max_depth < 0) throw InputError("search max_depth must be non-negative");
  ipf.validate();
}

SearchTrace best_model(const Distribution& p, const SearchSettings& settings) {
  settings.validate();
  SearchTrace trace;
  trace.steps.push_back({Model::saturated(p.scheme()), 0.0});
  int depth = 0;
  while (!trace.chosen().is_independence()) {
    if (settings.max_depth && depth >= *settings.max_depth) break;
    const auto candidates = immediate_refinements(trace.chosen());
    std::optional<SearchStep> best;
    // Candidates arrive in canonical order; strict < keeps the first minimizer.
    for (const auto& y : candidates) {
      const double d = reconstruction_divergence(p, y, settings.ipf);
      if (!best || d < best->divergence) best = SearchStep{y, d};
    }
    const double increment_bits = (best->divergence - trace.chosen_divergence()) / std::numbers::ln2;
    if (increment_bits > settings.delta_bits) {
      trace.rejected = std::move(best);
      break;
    }
    trace.steps.push_back(std::move(*best));
    ++depth;
  }
  return trace;
}

Model classify(const Distribution& p, const SearchSettings& settings) { return best_model(p, settings).chosen(); }

}  // namespace recon
