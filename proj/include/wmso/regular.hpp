#pragma once

#include <memory>
#include <string>
#include <vector>

#include "wmso/compose.hpp"
#include "wmso/regular_tree.hpp"
#include "wmso/sup.hpp"

namespace wmso {

/// Types of every subformula at every state of a regular tree, under the
/// empty valuation.
class StateTypeTable {
 public:
  const Formula& formula() const { return phi_; }
  const RegularTree& tree() const { return rt_; }
  /// Subformulas, innermost first (each listed once).
  const std::vector<Formula>& subformulas() const { return subs_; }
  /// Type at a state; kNone gives the type of the empty tree.
  PhiType at(StateId q, const Formula& sub) const;
  /// Type of the whole formula at the root.
  PhiType root_type() const { return at(rt_.root(), phi_); }

 private:
  friend StateTypeTable compute_type_regular(const Formula&, const RegularTree&);
  std::size_t index_of(const Formula& sub) const;

  Formula phi_;
  RegularTree rt_;
  std::vector<Formula> subs_;
  std::vector<std::vector<PhiType>> types_;  // [subformula][state]
  std::vector<PhiType> empty_;               // [subformula]
};

StateTypeTable compute_type_regular(const Formula& phi, const RegularTree& rt);

/// Truth of a sentence on the unfolding of `rt`; throws Error when `phi`
/// has free variables.
bool check_sentence(const Formula& phi, const RegularTree& rt);

/// One line per (state, subformula): `state<TAB>formula<TAB>type`.
std::string dump_types(const StateTypeTable& table);

/// Grammar over (state, body type) for U(X1..Xk).psi: a complete derivation
/// from (q, sigma) is a finite valuation of X1..Xk on the subtree at q
/// giving psi-type sigma, emitting the marker of X_i once per element of
/// X_i. `body` is the table entry set of psi per state (its types under
/// the empty valuation). Nonterminal i stands for `keys[i]`.
struct BodyGrammar {
  DerivationGrammar grammar;
  std::vector<std::pair<StateId, PhiType>> keys;
};
BodyGrammar body_grammar(Compositor& comp, const Formula& u, const RegularTree& rt,
                         const std::vector<PhiType>& body_types);

/// Marker letter emitted for the i-th variable (1-based) of a U tuple.
Letter variable_marker(std::size_t i);

}  // namespace wmso
