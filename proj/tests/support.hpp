#pragma once

#include <vector>

#include "recon/distribution.hpp"
#include "recon/model.hpp"

namespace testing {

inline recon::Scheme binary3() { return recon::Scheme::uniform(3, 2); }

// The worked example: p(v1, v2) * p(v3) with p(v3 = 0) = 7/8.
inline recon::Distribution table() {
  return recon::Distribution(binary3(), {7.0 / 32, 1.0 / 32, 7.0 / 64, 1.0 / 64, 21.0 / 64, 3.0 / 64, 7.0 / 32,
                                         1.0 / 32});
}

// Weights 1..8, normalized.
inline recon::Distribution ramp() {
  std::vector<double> w;
  for (int i = 1; i <= 8; ++i) w.push_back(i);
  return recon::Distribution::from_weights(binary3(), w);
}

inline recon::Model model(const recon::Scheme& s, const std::vector<std::vector<std::string>>& comps) {
  return recon::Model::from_names(s, comps);
}

inline recon::Model loop3() { return model(binary3(), {{"v1", "v2"}, {"v1", "v3"}, {"v2", "v3"}}); }

}  // namespace testing
