#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace recon {

/// A set of variable positions within a Scheme, stored as a bitmask.
class VarSet {
 public:
  static constexpr std::size_t kMaxVariables = 32;

  constexpr VarSet() = default;
  constexpr explicit VarSet(std::uint32_t bits) : bits_(bits) {}

  static constexpr VarSet single(std::size_t var) { return VarSet(std::uint32_t{1} << var); }
  static constexpr VarSet first(std::size_t count) {
    return VarSet(count >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << count) - 1);
  }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool contains(std::size_t var) const { return (bits_ >> var) & 1U; }
  constexpr bool subset_of(VarSet other) const { return (bits_ & ~other.bits_) == 0; }

  constexpr VarSet with(std::size_t var) const { return VarSet(bits_ | (std::uint32_t{1} << var)); }
  constexpr VarSet without(std::size_t var) const { return VarSet(bits_ & ~(std::uint32_t{1} << var)); }

  constexpr VarSet operator|(VarSet o) const { return VarSet(bits_ | o.bits_); }
  constexpr VarSet operator&(VarSet o) const { return VarSet(bits_ & o.bits_); }

  /// Member positions in increasing order.
  std::vector<std::size_t> members() const;

  constexpr bool operator==(const VarSet&) const = default;

  /// Lexicographic order on the increasing member lists ({0,1} < {0,1,2} < {0,2} < {1}).
  friend bool canonical_less(VarSet a, VarSet b);

 private:
  std::uint32_t bits_ = 0;
};

struct Variable {
  std::string name;
  int cardinality = 0;

  bool operator==(const Variable&) const = default;
};

/**
 * An ordered list of finite variables defining dom(V).
 *
 * Cells are indexed row-major with the last listed variable varying fastest.
 * Copies share the underlying storage.
 */
class Scheme {
 public:
  explicit Scheme(std::vector<Variable> variables);

  std::size_t size() const { return data_->variables.size(); }
  const Variable& operator[](std::size_t i) const { return data_->variables[i]; }
  std::span<const Variable> variables() const { return data_->variables; }
  std::size_t cell_count() const { return data_->cell_count; }

  VarSet all() const { return VarSet::first(size()); }

  std::optional<std::size_t> index_of(std::string_view name) const;

  /// Resolves names to a VarSet; throws InputError on unknown or repeated names.
  VarSet var_set(std::span<const std::string> names) const;

  /// Coordinate (value index) of variable `var` in `cell`.
  int coordinate(std::size_t cell, std::size_t var) const {
    return static_cast<int>((cell / data_->strides[var]) %
                            static_cast<std::size_t>(data_->variables[var].cardinality));
  }
  std::size_t stride(std::size_t var) const { return data_->strides[var]; }

  /// The scheme formed by the variables of `subset`, in this scheme's order.
  Scheme restrict(VarSet subset) const;

  /// For each cell of this scheme, the index of the corresponding cell of restrict(subset).
  std::vector<std::uint32_t> marginal_index(VarSet subset) const;

  /// Names of the members of `set`, in scheme order.
  std::vector<std::string> names(VarSet set) const;

  bool operator==(const Scheme& other) const;

  /// Convenience: `count` variables named v1..vcount with the given cardinality.
  static Scheme uniform(std::size_t count, int cardinality, std::string_view prefix = "v");

 private:
  struct Data {
    std::vector<Variable> variables;
    std::vector<std::size_t> strides;
    std::size_t cell_count = 1;
  };
  std::shared_ptr<const Data> data_;
};

}  // namespace recon
