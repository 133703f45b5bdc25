#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wmso/letter.hpp"
#include "wmso/tree.hpp"

namespace wmso {

using Variable = std::string;
using VarSet = std::set<Variable>;

enum class FormulaKind { Letter, Child, Subset, And, Not, Efin, U };

/// Immutable formula AST node. Subformulas are shared.
class Formula {
 public:
  Formula() = default;

  static Formula letter(Letter a, Variable x);
  static Formula child(Dir d, Variable x, Variable y);
  static Formula subset(Variable x, Variable y);
  static Formula conj(Formula a, Formula b);
  static Formula neg(Formula a);
  static Formula efin(Variable x, Formula body);
  /// Throws Error for an empty or duplicate-containing tuple.
  static Formula unbounded(std::vector<Variable> xs, Formula body);

  bool valid() const { return node_ != nullptr; }
  FormulaKind kind() const;

  /// Letter of a Letter atom.
  const Letter& atom_letter() const;
  /// Direction of a Child atom.
  Dir dir() const;
  /// Atom arguments (one for Letter, two for Child/Subset) or bound variables.
  const std::vector<Variable>& vars() const;
  /// Conjunction operands, negation/quantifier body (lhs).
  const Formula& lhs() const;
  const Formula& rhs() const;
  const Formula& body() const;

  const VarSet& free_vars() const;
  bool is_sentence() const;

  /// Letters mentioned in Letter atoms.
  std::set<Letter> letters() const;
  int quantifier_depth() const;
  std::size_t size() const;

  /// Identity of the shared node.
  const void* id() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  FormulaKind kind;
  Letter letter;
  Dir dir = Dir::L;
  std::vector<Variable> vars;
  Formula lhs, rhs;
  VarSet free;
};

inline FormulaKind Formula::kind() const { return node_->kind; }
inline const Letter& Formula::atom_letter() const { return node_->letter; }
inline Dir Formula::dir() const { return node_->dir; }
inline const std::vector<Variable>& Formula::vars() const { return node_->vars; }
inline const Formula& Formula::lhs() const { return node_->lhs; }
inline const Formula& Formula::rhs() const { return node_->rhs; }
inline const Formula& Formula::body() const { return node_->lhs; }
inline const VarSet& Formula::free_vars() const { return node_->free; }
inline bool Formula::is_sentence() const { return node_->free.empty(); }

/// Maps variables to finite sets of node addresses. Variables not present
/// map to the empty set.
class Valuation {
 public:
  Valuation() = default;
  Valuation(std::initializer_list<std::pair<const Variable, std::set<Address>>> init) : sets_(init) {}

  const std::set<Address>& operator()(const Variable& x) const;
  void set(const Variable& x, std::set<Address> nodes);
  Valuation with(const Variable& x, std::set<Address> nodes) const;
  /// nu restricted to the subtree at `w` (addresses re-rooted at `w`).
  Valuation restrict(std::string_view w) const;
  /// Variables whose set contains the root address.
  VarSet root_vars() const;

  const std::map<Variable, std::set<Address>>& sets() const { return sets_; }
  bool operator==(const Valuation&) const = default;

 private:
  std::map<Variable, std::set<Address>> sets_;
};

/// Grammar: `a(X)`, `X childL Y`, `X childR Y`, `X <= Y`, `&`, `!`,
/// `Efin X.`, `U(X1,...,Xk).`, parentheses. `!` binds tighter than `&`;
/// `&` associates to the left; quantifier scopes extend as far right as
/// possible. `Efin`, `U`, `childL`, `childR` are keywords.
Formula parse_formula(std::string_view text);
std::string print_formula(const Formula& f);

}  // namespace wmso
