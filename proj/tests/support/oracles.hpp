#pragma once

// Independent reference implementations used by the unit and acceptance
// tests. None of these call the code paths they are compared against.

#include <cstddef>
#include <set>
#include <vector>

#include "wmso/formula.hpp"
#include "wmso/random.hpp"
#include "wmso/regular_tree.hpp"
#include "wmso/sup.hpp"
#include "wmso/transducer.hpp"
#include "wmso/tree.hpp"

namespace oracle {

using namespace wmso;

/// Node sets of T (nd nodes included) that one resolution of the nd
/// choices keeps; empty when the language is empty.
std::set<std::set<Address>> choice_sets(const FiniteTree& t);

/// SUP_A on a derivation grammar by saturating capped letter counts. With
/// at most N nonterminals and at most two emissions per production, a
/// derivation with 2^(N+2) occurrences of every letter of A contains a
/// pumpable context for every such letter, so reaching that cap decides
/// unboundedness.
bool sup_by_counting(const DerivationGrammar& g, const LetterSet& a);

/// Largest n <= cap such that some member of the language of the regular
/// tree, using only nodes above `depth`, has n occurrences of every letter
/// of A; -1 when no member fits.
int truncated_min_count(const RegularTree& rt, const LetterSet& a, std::size_t depth, int cap);

/// Cardinality vectors (|X_1|, ..., |X_k|) of valuations of `vars` on t
/// whose psi-type is `tau`, keeping those with all entries <= nmax.
std::set<std::vector<int>> witness_cardinalities(const Formula& psi, const std::vector<Variable>& vars,
                                                 const FiniteTree& t, PhiType tau, int nmax);

/// Marker counts of the members of an nd-tree's language, entries <= nmax.
std::set<std::vector<int>> marker_counts(const FiniteTree& nd_tree, std::size_t k, int nmax);

/// `t` with the psi-type of every subtree (under the empty valuation)
/// appended to its letter.
FiniteTree decorate(const Formula& psi, const FiniteTree& t);

/// Random deterministic transducer over `letters`, valid by construction.
Transducer random_transducer(Rng& rng, const std::vector<Letter>& letters, std::size_t states);

/// Random type of `phi` built from its shape (not necessarily reachable).
PhiType random_type(Rng& rng, const Formula& phi);

}  // namespace oracle
