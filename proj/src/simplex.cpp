#include "simplex.hpp"

#include <cmath>
#include <stdexcept>

namespace recon::detail {

namespace {

class Tableau {
 public:
  Tableau(const LpProblem& lp, double tol)
      : m_(lp.rows), n_(lp.cols), width_(lp.cols + lp.rows + 1), tol_(tol), t_(m_ * width_, 0.0),
        basis_(m_), active_(m_, true) {
    for (std::size_t i = 0; i < m_; ++i) {
      const double sign = lp.b[i] < 0.0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < n_; ++j) at(i, j) = sign * lp.a[i * n_ + j];
      at(i, n_ + i) = 1.0;
      rhs(i) = sign * lp.b[i];
      basis_[i] = n_ + i;
    }
  }

  bool phase_one() {
    std::vector<double> cost(n_ + m_, 0.0);
    for (std::size_t k = 0; k < m_; ++k) cost[n_ + k] = -1.0;
    optimize(cost, n_ + m_);
    double infeasibility = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] >= n_) infeasibility += rhs(i);
    }
    if (infeasibility > 1e-9) return false;
    // Pivot remaining artificials out; rows with no original entry are redundant.
    for (std::size_t i = 0; i < m_; ++i) {
      if (!active_[i] || basis_[i] < n_) continue;
      std::size_t pick = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (std::abs(at(i, j)) > tol_) {
          pick = j;
          break;
        }
      }
      if (pick == n_) {
        active_[i] = false;
      } else {
        pivot(i, pick);
      }
    }
    return true;
  }

  void phase_two(const std::vector<double>& c) {
    std::vector<double> cost(n_ + m_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) cost[j] = c[j];
    optimize(cost, n_);
  }

  std::vector<double> solution() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (active_[i] && basis_[i] < n_) x[basis_[i]] = std::max(0.0, rhs(i));
    }
    return x;
  }

 private:
  double& at(std::size_t i, std::size_t j) { return t_[i * width_ + j]; }
  double at(std::size_t i, std::size_t j) const { return t_[i * width_ + j]; }
  double& rhs(std::size_t i) { return t_[i * width_ + width_ - 1]; }
  double rhs(std::size_t i) const { return t_[i * width_ + width_ - 1]; }

  void pivot(std::size_t r, std::size_t c) {
    const double p = at(r, c);
    for (std::size_t j = 0; j < width_; ++j) at(r, j) /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || !active_[i]) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) at(i, j) -= f * at(r, j);
    }
    basis_[r] = c;
  }

  /// Maximizes cost.x over columns [0, allowed) entering the basis.
  void optimize(const std::vector<double>& cost, std::size_t allowed) {
    constexpr int kMaxPivots = 100000;
    for (int iter = 0; iter < kMaxPivots; ++iter) {
      std::size_t enter = allowed;
      for (std::size_t j = 0; j < allowed && enter == allowed; ++j) {
        double reduced = cost[j];
        for (std::size_t i = 0; i < m_; ++i) {
          if (active_[i]) reduced -= cost[basis_[i]] * at(i, j);
        }
        if (reduced > tol_) enter = j;
      }
      if (enter == allowed) return;
      std::size_t leave = m_;
      double best = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        if (!active_[i] || at(i, enter) <= tol_) continue;
        const double ratio = rhs(i) / at(i, enter);
        if (leave == m_ || ratio < best - tol_ || (std::abs(ratio - best) <= tol_ && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) throw std::logic_error("solve_lp: unbounded problem");
      pivot(leave, enter);
    }
    throw std::logic_error("solve_lp: pivot limit reached");
  }

  std::size_t m_;
  std::size_t n_;
  std::size_t width_;
  double tol_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
  std::vector<bool> active_;
};

}  // namespace

std::optional<std::vector<double>> solve_lp(const LpProblem& lp, double tol) {
  if (lp.a.size() != lp.rows * lp.cols || lp.b.size() != lp.rows || lp.c.size() != lp.cols) {
    throw std::invalid_argument("solve_lp: inconsistent problem dimensions");
  }
  Tableau tableau(lp, tol);
  if (!tableau.phase_one()) return std::nullopt;
  tableau.phase_two(lp.c);
  return tableau.solution();
}

}  // namespace recon::detail
