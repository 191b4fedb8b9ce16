#include "recon/klir.hpp"

namespace recon {

KlirEstimate klir_estimate_known_model(const Distribution& p_hat, const Model& x, const IpfSettings& ipf) {
  auto j = maxent_extension(project_model(p_hat, x), ipf);
  return {std::move(j.distribution), x, p_hat, std::nullopt, j.method, j.sweeps, j.residual};
}

KlirEstimate klir_estimate_searched(const Distribution& p_hat, const SearchSettings& settings) {
  SearchTrace trace = best_model(p_hat, settings);
  KlirEstimate out = klir_estimate_known_model(p_hat, trace.chosen(), settings.ipf);
  out.trace = std::move(trace);
  return out;
}

}  // namespace recon
