#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "wmso/formula.hpp"
#include "wmso/phi_type.hpp"
#include "wmso/tree.hpp"

namespace wmso {

/// Arguments of the composition function at one node: which free variables
/// contain the root, and the types of the two subtrees.
struct CompKey {
  VarSet root_vars;
  PhiType left;
  PhiType right;
};

/// Per-formula composition engine. Variables of the formula are numbered;
/// a root-variable set is a bitmask over that numbering. Results of `comp`
/// and `tv` are memoized. Not safe for concurrent use; create one per task.
class Compositor {
 public:
  using Mask = std::uint64_t;

  explicit Compositor(Formula phi);

  const Formula& formula() const { return phi_; }
  /// Bit of a variable occurring in the formula; throws for unknown names.
  Mask var_bit(const Variable& x) const;
  Mask mask_of(const VarSet& xs) const;
  /// Bits of the free variables of a subformula.
  Mask free_mask(const Formula& sub) const;

  /// `sub` must be a subformula of formula().
  PhiType comp(const Formula& sub, const Letter& a, Mask root_vars, PhiType left, PhiType right);
  PhiType empty_type(const Formula& sub);
  bool tv(const Formula& sub, PhiType t);

  /// Bottom-up type of `sub` on `t`; `masks` maps each node address to its
  /// root-variable mask (missing addresses mean no variables).
  PhiType type_finite(const Formula& sub, const FiniteTree& t,
                      const std::unordered_map<Address, Mask>& masks);

 private:
  struct Info {
    Mask free = 0;
    Mask bound = 0;  // quantified variables of Efin / U
  };
  struct MemoKey {
    const void* node;
    const void* letter;
    Mask mask;
    std::uint32_t left, right;
    bool operator==(const MemoKey&) const = default;
  };
  struct MemoHash {
    std::size_t operator()(const MemoKey& k) const noexcept;
  };

  void index(const Formula& f);
  const Info& info(const Formula& f) const;
  PhiType comp_uncached(const Formula& sub, const Letter& a, Mask s, PhiType left, PhiType right);
  PhiType type_rec(const Formula& sub, const FiniteTree& t, Address& at,
                   const std::unordered_map<Address, Mask>& masks);

  Formula phi_;
  std::vector<Variable> vars_;
  std::unordered_map<const void*, Info> info_;
  std::unordered_map<MemoKey, PhiType, MemoHash> memo_;
  std::unordered_map<const void*, PhiType> empty_;
};

/// Expected top-level shape check: throws Error if `t` cannot be a type of `phi`.
void check_shape(const Formula& phi, PhiType t);

PhiType comp(const Letter& a, const Formula& phi, const CompKey& key);
/// Type of the empty tree under the empty valuation.
PhiType empty_tree_type(const Formula& phi);
bool tv(const Formula& phi, PhiType t);
/// Throws Error when a valuation address lies outside dom(t).
PhiType compute_type_finite(const Formula& phi, const FiniteTree& t, const Valuation& v);

}  // namespace wmso
