#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "wmso/letter.hpp"
#include "wmso/regular_tree.hpp"
#include "wmso/tree.hpp"

namespace wmso {

struct Production {
  std::vector<Letter> emit;   // multiset of emitted letters
  std::vector<int> children;  // at most two nonterminals
};

/// A grammar of finite derivation trees. The language is the set of letter
/// multisets of complete derivations from a nonterminal.
struct DerivationGrammar {
  std::vector<std::string> names;
  std::vector<std::vector<Production>> productions;
  int start = 0;

  int add(std::string name) {
    names.push_back(std::move(name));
    productions.emplace_back();
    return static_cast<int>(names.size() - 1);
  }
  std::size_t size() const { return names.size(); }
  /// Throws Error for dangling references or more than two children.
  void validate() const;
  /// Nonterminals with at least one complete derivation.
  std::vector<bool> terminalizable() const;
};

std::string print_grammar(const DerivationGrammar& g);

using LetterSet = std::set<Letter>;

/// Largest |A| accepted by decide_sup.
inline constexpr std::size_t kSupLetterLimit = 6;

/// For every nonterminal X: does the language from X contain, for every n,
/// a member with at least n occurrences of every letter of A?
/// Throws Error when |A| > kSupLetterLimit.
std::vector<bool> decide_sup_all(const DerivationGrammar& g, const LetterSet& a);
bool decide_sup(const DerivationGrammar& g, const LetterSet& a);

/// Nonterminal per state: nd states choose a child (a ⊥ child gives the
/// empty tree), nd_bot states have no productions, other states emit their
/// letter and derive their non-⊥ children.
DerivationGrammar tree_to_grammar(const RegularTree& rt);

struct NdLanguage {
  std::vector<FiniteTree> trees;  // sorted by printed form
  bool complete = true;
};

/// All nd-free trees reachable by resolving nd choices, at most `max_count`.
NdLanguage nd_language(const FiniteTree& t, std::size_t max_count);

/// `{A1;A2}` with letters comma-separated and `~` for the empty set.
std::string print_marks(const std::vector<LetterSet>& marks);

/// Decorates every state except nd/nd_bot ones with the members of `family`
/// for which the language of its subtree has simultaneous unboundedness.
RegularTree sup_reflect(const RegularTree& rt, const std::vector<LetterSet>& family);

}  // namespace wmso
