#include "recon/model.hpp"

#include <algorithm>

#include "recon/error.hpp"

namespace recon {

namespace {

constexpr std::size_t kMaxEnumerationVariables = 5;

void sort_canonical(std::vector<VarSet>& comps) {
  std::sort(comps.begin(), comps.end(), [](VarSet a, VarSet b) { return canonical_less(a, b); });
}

/// Drops components contained in (or equal to) another component.
std::vector<VarSet> maximal_sets(const std::vector<VarSet>& sets) {
  std::vector<VarSet> out;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < sets.size() && !dominated; ++j) {
      if (i == j) continue;
      if (sets[i] == sets[j]) {
        dominated = j < i;
      } else if (sets[i].subset_of(sets[j])) {
        dominated = true;
      }
    }
    if (!dominated) out.push_back(sets[i]);
  }
  return out;
}

}  // namespace

Model::Model(Scheme scheme, std::vector<VarSet> components)
    : scheme_(std::move(scheme)), components_(std::move(components)) {
  if (components_.empty()) throw InputError("model must have at least one component");
  VarSet cover;
  for (VarSet c : components_) {
    if (c.empty()) throw InputError("model components must be non-empty");
    if (!c.subset_of(scheme_.all())) throw InputError("model component refers to unknown variables");
    cover = cover | c;
  }
  if (cover != scheme_.all()) throw InputError("model components must cover every variable");
  for (std::size_t i = 0; i < components_.size(); ++i) {
    for (std::size_t j = 0; j < components_.size(); ++j) {
      if (i != j && components_[i].subset_of(components_[j])) {
        throw InputError("model components must form an antichain");
      }
    }
  }
  sort_canonical(components_);
}

Model Model::from_names(Scheme scheme, const std::vector<std::vector<std::string>>& components) {
  std::vector<VarSet> sets;
  sets.reserve(components.size());
  for (const auto& names : components) sets.push_back(scheme.var_set(names));
  return Model(std::move(scheme), std::move(sets));
}

Model Model::saturated(Scheme scheme) {
  const VarSet all = scheme.all();
  return Model(std::move(scheme), {all});
}

Model Model::independence(Scheme scheme) {
  std::vector<VarSet> comps;
  for (std::size_t i = 0; i < scheme.size(); ++i) comps.push_back(VarSet::single(i));
  return Model(std::move(scheme), std::move(comps));
}

bool Model::is_saturated() const { return components_.size() == 1; }

bool Model::is_independence() const {
  return std::all_of(components_.begin(), components_.end(), [](VarSet c) { return c.size() == 1; });
}

std::vector<std::vector<std::string>> Model::component_names() const {
  std::vector<std::vector<std::string>> out;
  for (VarSet c : components_) out.push_back(scheme_.names(c));
  return out;
}

std::string Model::label() const {
  std::string out;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i > 0) out += ':';
    for (const auto& name : scheme_.names(components_[i])) out += name;
  }
  return out;
}

bool Model::operator==(const Model& other) const {
  return components_ == other.components_ && scheme_ == other.scheme_;
}

bool canonical_less(const Model& a, const Model& b) {
  return std::lexicographical_compare(a.components_.begin(), a.components_.end(), b.components_.begin(),
                                      b.components_.end(),
                                      [](VarSet x, VarSet y) { return canonical_less(x, y); });
}

bool refines(const Model& x, const Model& y) {
  if (!(x.scheme() == y.scheme())) throw InputError("refines: models are over different schemes");
  for (VarSet cx : x.components()) {
    const bool inside = std::any_of(y.components().begin(), y.components().end(),
                                    [cx](VarSet cy) { return cx.subset_of(cy); });
    if (!inside) return false;
  }
  return true;
}

std::vector<Model> immediate_refinements(const Model& x) {
  if (x.is_independence()) throw InputError("the least model has no refinements");
  // Every model strictly below x lies below one of these candidates, so the
  // covers of x are exactly the maximal candidates.
  std::vector<Model> candidates;
  const auto comps = x.components();
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (comps[i].size() < 2) continue;
    std::vector<VarSet> next;
    for (std::size_t j = 0; j < comps.size(); ++j) {
      if (j != i) next.push_back(comps[j]);
    }
    for (std::size_t v : comps[i].members()) next.push_back(comps[i].without(v));
    Model m(x.scheme(), maximal_sets(next));
    if (std::find(candidates.begin(), candidates.end(), m) == candidates.end()) {
      candidates.push_back(std::move(m));
    }
  }
  std::vector<Model> out;
  for (const auto& c : candidates) {
    const bool below_other = std::any_of(candidates.begin(), candidates.end(), [&c](const Model& o) {
      return !(o == c) && refines(c, o);
    });
    if (!below_other) out.push_back(c);
  }
  std::sort(out.begin(), out.end(), [](const Model& a, const Model& b) { return canonical_less(a, b); });
  return out;
}

std::vector<Model> enumerate_models(const Scheme& scheme) {
  if (scheme.size() > kMaxEnumerationVariables) {
    throw InputError("model enumeration is limited to " + std::to_string(kMaxEnumerationVariables) +
                     " variables");
  }
  const std::uint32_t full = scheme.all().bits();
  std::vector<VarSet> subsets;
  for (std::uint32_t b = 1; b <= full; ++b) subsets.emplace_back(b);

  std::vector<Model> out;
  std::vector<VarSet> chosen;
  // Depth-first over subsets; each subset is either skipped or added when it
  // is incomparable with everything chosen so far.
  auto recurse = [&](auto&& self, std::size_t next) -> void {
    if (next == subsets.size()) {
      VarSet cover;
      for (VarSet c : chosen) cover = cover | c;
      if (!chosen.empty() && cover == scheme.all()) out.emplace_back(scheme, chosen);
      return;
    }
    self(self, next + 1);
    const VarSet s = subsets[next];
    const bool comparable = std::any_of(chosen.begin(), chosen.end(), [s](VarSet c) {
      return s.subset_of(c) || c.subset_of(s);
    });
    if (!comparable) {
      chosen.push_back(s);
      self(self, next + 1);
      chosen.pop_back();
    }
  };
  recurse(recurse, 0);
  std::sort(out.begin(), out.end(), [](const Model& a, const Model& b) { return canonical_less(a, b); });
  return out;
}

bool is_decomposable(const Model& x) {
  std::vector<VarSet> edges(x.components().begin(), x.components().end());
  bool changed = true;
  while (changed) {
    changed = false;
    // Vertices occurring in exactly one edge.
    for (auto& e : edges) {
      for (std::size_t v : e.members()) {
        const auto occurrences = std::count_if(edges.begin(), edges.end(), [v](VarSet f) { return f.contains(v); });
        if (occurrences == 1) {
          e = e.without(v);
          changed = true;
        }
      }
    }
    // Edges that are empty or contained in another edge.
    std::vector<VarSet> kept;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      bool drop = edges[i].empty();
      for (std::size_t j = 0; j < edges.size() && !drop; ++j) {
        if (i == j) continue;
        drop = edges[i] == edges[j] ? j < i : edges[i].subset_of(edges[j]);
      }
      if (drop) {
        changed = true;
      } else {
        kept.push_back(edges[i]);
      }
    }
    edges = std::move(kept);
  }
  return edges.empty();
}

}  // namespace recon
