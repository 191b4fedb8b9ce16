#pragma once

#include <optional>

#include "recon/distribution.hpp"
#include "recon/maxent.hpp"
#include "recon/model.hpp"
#include "recon/search.hpp"

namespace recon {

/// J(pi_X(p_hat)) together with the model it was built from.
struct KlirEstimate {
  Distribution estimate;
  Model model;
  Distribution raw;
  std::optional<SearchTrace> trace;  ///< set only when the model was searched
  ExtensionMethod method = ExtensionMethod::closed_form;
  int sweeps = 0;
  double residual = 0.0;
};

/// Reconstruction of p_hat from its projection onto a known model.
KlirEstimate klir_estimate_known_model(const Distribution& p_hat, const Model& x, const IpfSettings& ipf = {});

/// Searches the model first (p_hat in O(X)), then reconstructs.
KlirEstimate klir_estimate_searched(const Distribution& p_hat, const SearchSettings& settings = {});

}  // namespace recon
