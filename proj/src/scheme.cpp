#include "recon/scheme.hpp"

#include <algorithm>
#include <unordered_set>

#include "recon/error.hpp"

namespace recon {

namespace {
constexpr std::size_t kMaxCells = std::size_t{1} << 28;
}

std::vector<std::size_t> VarSet::members() const {
  std::vector<std::size_t> out;
  out.reserve(size());
  for (std::uint32_t b = bits_; b != 0; b &= b - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
  return out;
}

bool canonical_less(VarSet a, VarSet b) {
  std::uint32_t x = a.bits_;
  std::uint32_t y = b.bits_;
  while (x != 0 && y != 0) {
    const int lx = std::countr_zero(x);
    const int ly = std::countr_zero(y);
    if (lx != ly) return lx < ly;
    x &= x - 1;
    y &= y - 1;
  }
  return x == 0 && y != 0;
}

Scheme::Scheme(std::vector<Variable> variables) {
  if (variables.empty()) throw InputError("scheme must have at least one variable");
  if (variables.size() > VarSet::kMaxVariables) throw InputError("scheme has too many variables");
  std::unordered_set<std::string> seen;
  auto data = std::make_shared<Data>();
  for (const auto& v : variables) {
    if (v.name.empty()) throw InputError("variable name must be non-empty");
    if (!seen.insert(v.name).second) throw InputError("duplicate variable name '" + v.name + "'");
    if (v.cardinality < 2) throw InputError("variable '" + v.name + "' must have cardinality >= 2");
    if (data->cell_count > kMaxCells / static_cast<std::size_t>(v.cardinality)) {
      throw InputError("scheme has too many cells");
    }
    data->cell_count *= static_cast<std::size_t>(v.cardinality);
  }
  data->strides.assign(variables.size(), 1);
  for (std::size_t i = variables.size(); i-- > 1;) {
    data->strides[i - 1] = data->strides[i] * static_cast<std::size_t>(variables[i].cardinality);
  }
  data->variables = std::move(variables);
  data_ = std::move(data);
}

std::optional<std::size_t> Scheme::index_of(std::string_view name) const {
  const auto& vars = data_->variables;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].name == name) return i;
  }
  return std::nullopt;
}

VarSet Scheme::var_set(std::span<const std::string> names) const {
  VarSet set;
  for (const auto& name : names) {
    const auto idx = index_of(name);
    if (!idx) throw InputError("unknown variable '" + name + "'");
    if (set.contains(*idx)) throw InputError("variable '" + name + "' listed twice");
    set = set.with(*idx);
  }
  return set;
}

Scheme Scheme::restrict(VarSet subset) const {
  if (subset.empty()) throw InputError("subscheme must be non-empty");
  if (!subset.subset_of(all())) throw InputError("subscheme refers to variables outside the scheme");
  std::vector<Variable> vars;
  for (std::size_t i : subset.members()) vars.push_back(data_->variables[i]);
  return Scheme(std::move(vars));
}

std::vector<std::uint32_t> Scheme::marginal_index(VarSet subset) const {
  const auto members = subset.members();
  // Strides of the restricted scheme, aligned with `members`.
  std::vector<std::size_t> sub_strides(members.size(), 1);
  for (std::size_t k = members.size(); k-- > 1;) {
    sub_strides[k - 1] = sub_strides[k] * static_cast<std::size_t>(data_->variables[members[k]].cardinality);
  }
  std::vector<std::uint32_t> out(cell_count());
  for (std::size_t cell = 0; cell < out.size(); ++cell) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < members.size(); ++k) {
      idx += static_cast<std::size_t>(coordinate(cell, members[k])) * sub_strides[k];
    }
    out[cell] = static_cast<std::uint32_t>(idx);
  }
  return out;
}

std::vector<std::string> Scheme::names(VarSet set) const {
  std::vector<std::string> out;
  for (std::size_t i : set.members()) out.push_back(data_->variables[i].name);
  return out;
}

bool Scheme::operator==(const Scheme& other) const {
  return data_ == other.data_ || data_->variables == other.data_->variables;
}

Scheme Scheme::uniform(std::size_t count, int cardinality, std::string_view prefix) {
  std::vector<Variable> vars;
  for (std::size_t i = 0; i < count; ++i) {
    vars.push_back({std::string(prefix) + std::to_string(i + 1), cardinality});
  }
  return Scheme(std::move(vars));
}

}  // namespace recon
