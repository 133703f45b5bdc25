#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wmso/letter.hpp"
#include "wmso/tree.hpp"

namespace wmso {

/// Index of a state in a RegularTree; kNone stands for the empty tree.
using StateId = int;
inline constexpr StateId kNone = -1;

struct RegularState {
  std::string name;
  Letter letter;
  StateId left = kNone;
  StateId right = kNone;

  StateId child(Dir d) const { return d == Dir::L ? left : right; }
  bool operator==(const RegularState&) const = default;
};

/// A finite equation system `q = a(q_L, q_R)` denoting a possibly infinite
/// tree by unfolding from the root. Every state is reachable from the root.
class RegularTree {
 public:
  RegularTree() = default;
  RegularTree(std::vector<RegularState> states, StateId root);

  const std::vector<RegularState>& states() const { return states_; }
  const RegularState& state(StateId q) const { return states_.at(q); }
  std::size_t size() const { return states_.size(); }
  StateId root() const { return root_; }
  bool empty() const { return root_ == kNone; }

  /// Distinct letters occurring in the tree, sorted.
  std::vector<Letter> alphabet() const;

  /// True if the unfolding is finite (no cycle reachable from the root).
  bool is_finite() const;

  /// Unfolding from a state, cut to `depth` levels (children below the
  /// cut become empty).
  FiniteTree unfold(StateId from, std::size_t depth) const;
  /// Full unfolding; requires is_finite().
  FiniteTree unfold_finite() const;

  /// Regular tree whose unfolding is `t`, one state per node.
  static RegularTree from_finite(const FiniteTree& t);

  bool operator==(const RegularTree&) const = default;

 private:
  void check_and_prune(bool strict);
  friend RegularTree parse_regular_tree(std::string_view, bool);

  std::vector<RegularState> states_;
  StateId root_ = kNone;
};

/// Lines `state = letter(arg, arg);` (or `state = letter;`, or `state = .;`)
/// with `arg := state | "."`, plus one `root state;` (or `root .;`) line.
/// Unreachable states are an error when `strict`, pruned otherwise.
RegularTree parse_regular_tree(std::string_view text, bool strict = false);
std::string print_regular_tree(const RegularTree& rt);

/// Unfolds `rt` to `depth` levels; subtrees at depth `depth` become empty.
FiniteTree truncate(const RegularTree& rt, std::size_t depth);

}  // namespace wmso
