#pragma once

#include <cstddef>
#include <random>
#include <set>
#include <vector>

#include "wmso/formula.hpp"
#include "wmso/regular_tree.hpp"
#include "wmso/sup.hpp"
#include "wmso/tree.hpp"

namespace wmso {

using Rng = std::mt19937_64;

/// Random tree with exactly `nodes` nodes.
FiniteTree random_tree(Rng& rng, std::size_t nodes, const std::vector<Letter>& letters);

/// Every binary tree shape with exactly `nodes` nodes, labeled in every way.
std::vector<FiniteTree> all_trees(std::size_t nodes, const std::vector<Letter>& letters);

/// Random equation system with at most `states` states (unreachable ones
/// are pruned). `leaf_bias` is the chance that a child slot is empty.
RegularTree random_regular_tree(Rng& rng, std::size_t states, const std::vector<Letter>& letters,
                                double leaf_bias = 0.3);

struct FormulaShape {
  std::vector<Letter> letters{Letter("a"), Letter("b")};
  std::vector<Variable> free;                       // may occur free
  std::vector<Variable> pool{"X", "Y", "Z"};        // names for quantifiers
  int quantifier_depth = 2;
  std::size_t max_k = 2;                            // largest U tuple; 0 disables U
  int size = 6;                                     // rough number of atoms
};

/// Random formula whose free variables are among `shape.free` and whose
/// quantifier depth is at most `shape.quantifier_depth`.
Formula random_formula(Rng& rng, const FormulaShape& shape);

/// Random set of node addresses of `t`.
std::set<Address> random_subset(Rng& rng, const FiniteTree& t);

/// Random derivation grammar with at most `nonterminals` nonterminals,
/// up to two children per production.
DerivationGrammar random_grammar(Rng& rng, std::size_t nonterminals, const std::vector<Letter>& letters);

}  // namespace wmso
