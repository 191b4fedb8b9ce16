#pragma once

#include <optional>
#include <vector>

namespace recon::detail {

/// Dense row-major matrix for the small LPs solved here.
struct LpProblem {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;  // rows x cols
  std::vector<double> b;  // rows
  std::vector<double> c;  // cols, objective to maximize
};

/// maximize c.x subject to A x = b, x >= 0. Two-phase tableau simplex with
/// Bland's rule. Returns nullopt when infeasible; problems here are always
/// bounded (every variable appears in a constraint summing to one).
std::optional<std::vector<double>> solve_lp(const LpProblem& lp, double tol = 1e-11);

}  // namespace recon::detail
