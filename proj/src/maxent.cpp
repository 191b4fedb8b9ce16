#include "recon/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "recon/error.hpp"
#include "simplex.hpp"

namespace recon {

namespace {

/// Positions of `inner` relative to the member list of `outer` (inner within outer).
VarSet relative_to(VarSet inner, VarSet outer) {
  VarSet out;
  const auto members = outer.members();
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (inner.contains(members[k])) out = out.with(k);
  }
  return out;
}

struct FittedComponent {
  std::vector<std::uint32_t> index;  // joint cell -> marginal cell
  std::vector<double> target;
};

std::vector<FittedComponent> fitted_components(const MarginalSet& ms) {
  std::vector<FittedComponent> out;
  const auto comps = ms.model().components();
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const auto probs = ms.marginals()[i].probs();
    out.push_back({ms.scheme().marginal_index(comps[i]), std::vector<double>(probs.begin(), probs.end())});
  }
  return out;
}

double residual_of(std::span<const double> q, const std::vector<FittedComponent>& comps) {
  double worst = 0.0;
  std::vector<double> m;
  for (const auto& c : comps) {
    m.assign(c.target.size(), 0.0);
    for (std::size_t cell = 0; cell < q.size(); ++cell) m[c.index[cell]] += q[cell];
    for (std::size_t k = 0; k < m.size(); ++k) worst = std::max(worst, std::abs(m[k] - c.target[k]));
  }
  return worst;
}

/// Cells under no zero marginal.
std::vector<bool> unforced_cells(const std::vector<FittedComponent>& comps, std::size_t cells) {
  std::vector<bool> out(cells, true);
  for (const auto& c : comps) {
    for (std::size_t cell = 0; cell < cells; ++cell) {
      if (c.target[c.index[cell]] <= 0.0) out[cell] = false;
    }
  }
  return out;
}

}  // namespace

void IpfSettings::validate() const {
  if (!(tolerance > 0.0) || !std::isfinite(tolerance)) throw InputError("IPF tolerance must be positive");
  if (max_sweeps < 1) throw InputError("IPF max_sweeps must be at least 1");
}

MarginalSet project_model(const Distribution& p, const Model& x) {
  if (!(p.scheme() == x.scheme())) throw InputError("project_model: model and distribution schemes differ");
  std::vector<Distribution> marginals;
  marginals.reserve(x.size());
  for (VarSet c : x.components()) marginals.push_back(project(p, c));
  return MarginalSet(x, std::move(marginals));
}

double marginal_residual(const Distribution& q, const MarginalSet& ms) {
  if (!(q.scheme() == ms.scheme())) throw InputError("marginal_residual: scheme mismatch");
  return residual_of(q.probs(), fitted_components(ms));
}

std::optional<Distribution> junction_product(const MarginalSet& ms) {
  const auto comps = ms.model().components();
  std::vector<std::size_t> remaining(comps.size());
  for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;

  // (component index, separator) in elimination order.
  std::vector<std::pair<std::size_t, VarSet>> order;
  while (remaining.size() > 1) {
    bool found = false;
    for (std::size_t r = 0; r < remaining.size() && !found; ++r) {
      const std::size_t i = remaining[r];
      VarSet rest;
      for (std::size_t j : remaining) {
        if (j != i) rest = rest | comps[j];
      }
      const VarSet sep = comps[i] & rest;
      const bool leaf = std::any_of(remaining.begin(), remaining.end(),
                                    [&](std::size_t j) { return j != i && sep.subset_of(comps[j]); });
      if (leaf) {
        order.emplace_back(i, sep);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(r));
        found = true;
      }
    }
    if (!found) return std::nullopt;
  }
  order.emplace_back(remaining.front(), VarSet{});

  const Scheme& scheme = ms.scheme();
  std::vector<double> joint(scheme.cell_count(), 1.0);
  for (const auto& [i, sep] : order) {
    const auto clique_index = scheme.marginal_index(comps[i]);
    const auto clique = ms.marginals()[i].probs();
    if (sep.empty()) {
      for (std::size_t cell = 0; cell < joint.size(); ++cell) joint[cell] *= clique[clique_index[cell]];
      continue;
    }
    const Distribution sep_marginal = project(ms.marginals()[i], relative_to(sep, comps[i]));
    const auto sep_index = scheme.marginal_index(sep);
    const auto sep_probs = sep_marginal.probs();
    for (std::size_t cell = 0; cell < joint.size(); ++cell) {
      const double s = sep_probs[sep_index[cell]];
      joint[cell] = s > 0.0 ? joint[cell] * clique[clique_index[cell]] / s : 0.0;
    }
  }
  return Distribution::from_weights(scheme, std::move(joint));
}

std::vector<bool> extension_support(const MarginalSet& ms) {
  const auto comps = fitted_components(ms);
  const std::size_t cells = ms.scheme().cell_count();
  std::vector<bool> support = unforced_cells(comps, cells);
  if (is_decomposable(ms.model())) return support;

  std::vector<std::size_t> vars;  // LP column -> joint cell
  for (std::size_t cell = 0; cell < cells; ++cell) {
    if (support[cell]) vars.push_back(cell);
  }
  detail::LpProblem lp;
  lp.cols = vars.size();
  for (const auto& c : comps) {
    for (std::size_t k = 0; k < c.target.size(); ++k) {
      if (c.target[k] <= 0.0) continue;
      lp.b.push_back(c.target[k]);
      for (std::size_t cell : vars) lp.a.push_back(c.index[cell] == k ? 1.0 : 0.0);
      ++lp.rows;
    }
  }
  constexpr double kPositive = 1e-9;
  std::vector<bool> certified(vars.size(), false);
  for (;;) {
    lp.c.assign(vars.size(), 0.0);
    bool open = false;
    for (std::size_t v = 0; v < vars.size(); ++v) {
      if (!certified[v]) {
        lp.c[v] = 1.0;
        open = true;
      }
    }
    if (!open) break;
    const auto x = detail::solve_lp(lp);
    if (!x) return support;
    double gained = 0.0;
    for (std::size_t v = 0; v < vars.size(); ++v) {
      if ((*x)[v] > kPositive) {
        if (!certified[v]) gained += (*x)[v];
        certified[v] = true;
      }
    }
    if (gained <= kPositive) break;
  }
  for (std::size_t v = 0; v < vars.size(); ++v) support[vars[v]] = certified[v];
  return support;
}

MaxentResult ipf_extension(const MarginalSet& ms, const IpfSettings& settings) {
  settings.validate();
  const auto comps = fitted_components(ms);
  const std::size_t cells = ms.scheme().cell_count();
  const std::vector<bool> support = extension_support(ms);
  const auto live = static_cast<double>(std::count(support.begin(), support.end(), true));

  std::vector<double> q(cells, 0.0);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    if (support[cell]) q[cell] = 1.0 / live;
  }
  std::vector<double> m;
  double residual = residual_of(q, comps);
  int sweep = 0;
  while (residual >= settings.tolerance && sweep < settings.max_sweeps) {
    for (const auto& c : comps) {
      m.assign(c.target.size(), 0.0);
      for (std::size_t cell = 0; cell < cells; ++cell) m[c.index[cell]] += q[cell];
      for (std::size_t cell = 0; cell < cells; ++cell) {
        const double cur = m[c.index[cell]];
        q[cell] = cur > 0.0 ? q[cell] * (c.target[c.index[cell]] / cur) : 0.0;
      }
    }
    ++sweep;
    residual = residual_of(q, comps);
  }
  if (residual >= settings.tolerance) {
    std::ostringstream msg;
    msg << "IPF did not converge in " << sweep << " sweeps (residual " << residual << ")";
    throw NumericError(msg.str(), residual);
  }
  return {Distribution::from_weights(ms.scheme(), std::move(q)), ExtensionMethod::ipf, sweep, residual};
}

MaxentResult maxent_extension(const MarginalSet& ms, const IpfSettings& settings) {
  settings.validate();
  if (auto closed = junction_product(ms)) {
    const double residual = marginal_residual(*closed, ms);
    return {std::move(*closed), ExtensionMethod::closed_form, 0, residual};
  }
  return ipf_extension(ms, settings);
}

bool reconstructable(const Distribution& p, const Model& x, double tol, const IpfSettings& settings) {
  const auto j = maxent_extension(project_model(p, x), settings);
  return max_abs_diff(p, j.distribution) < tol;
}

double reconstruction_divergence(const Distribution& p, const Model& x, const IpfSettings& settings) {
  if (x.is_saturated()) return 0.0;
  const auto j = maxent_extension(project_model(p, x), settings);
  return divergence(p, j.distribution);
}

std::optional<Distribution> marginal_preserving_move(const Distribution& q, const Model& x, Rng& rng) {
  if (!(q.scheme() == x.scheme())) throw InputError("marginal_preserving_move: scheme mismatch");
  const Scheme& scheme = q.scheme();
  std::vector<VarSet> free_sets;
  for (std::uint32_t b = 1; b <= scheme.all().bits(); ++b) {
    const VarSet w(b);
    if (w.size() < 2) continue;
    const bool inside = std::any_of(x.components().begin(), x.components().end(),
                                    [w](VarSet c) { return w.subset_of(c); });
    if (!inside) free_sets.push_back(w);
  }
  if (free_sets.empty()) return std::nullopt;

  std::vector<double> probs(q.probs().begin(), q.probs().end());
  constexpr int kAttempts = 64;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    const VarSet w = free_sets[rng.below(free_sets.size())];
    // Base cell (random everywhere) and an alternative value for each member of W.
    std::size_t base = 0;
    std::vector<std::pair<std::size_t, std::size_t>> moved;  // (variable, alternative value)
    for (std::size_t v = 0; v < scheme.size(); ++v) {
      const auto card = static_cast<std::size_t>(scheme[v].cardinality);
      const std::size_t value = rng.below(card);
      base += value * scheme.stride(v);
      if (w.contains(v)) moved.emplace_back(v, (value + 1 + rng.below(card - 1)) % card);
    }
    std::vector<std::pair<std::size_t, int>> corners;  // (cell, sign)
    for (std::size_t mask = 0; mask < (std::size_t{1} << moved.size()); ++mask) {
      std::size_t cell = base;
      int sign = 1;
      for (std::size_t t = 0; t < moved.size(); ++t) {
        if (((mask >> t) & 1U) == 0) continue;
        const auto [v, alt] = moved[t];
        const auto value = static_cast<std::size_t>(scheme.coordinate(base, v));
        cell = cell - value * scheme.stride(v) + alt * scheme.stride(v);
        sign = -sign;
      }
      corners.emplace_back(cell, sign);
    }
    double lo = 0.0;  // delta >= -min over + cells
    double hi = 0.0;  // delta <= min over - cells
    bool first_plus = true;
    bool first_minus = true;
    for (const auto& [cell, sign] : corners) {
      if (sign > 0) {
        lo = first_plus ? -probs[cell] : std::max(lo, -probs[cell]);
        first_plus = false;
      } else {
        hi = first_minus ? probs[cell] : std::min(hi, probs[cell]);
        first_minus = false;
      }
    }
    if (!(hi - lo > 0.0)) continue;
    const double delta = lo + (hi - lo) * rng.uniform();
    for (const auto& [cell, sign] : corners) probs[cell] = std::max(0.0, probs[cell] + sign * delta);
    return Distribution::from_weights(scheme, std::move(probs));
  }
  return q;
}

bool penalized_optimality_check(const Distribution& p_hat, const Model& x, Rng& rng, int samples,
                                const IpfSettings& settings) {
  const Distribution j = maxent_extension(project_model(p_hat, x), settings).distribution;
  if (x.is_saturated()) return true;
  const Distribution centroid = Distribution::uniform(p_hat.scheme());
  const double dj = divergence(j, centroid);
  for (int s = 0; s < samples; ++s) {
    Distribution q = j;
    const std::size_t steps = 1 + rng.below(3);
    for (std::size_t t = 0; t < steps; ++t) {
      if (auto next = marginal_preserving_move(q, x, rng)) q = std::move(*next);
    }
    if (divergence(q, centroid) < dj - 1e-12) return false;
  }
  return true;
}

}  // namespace recon
