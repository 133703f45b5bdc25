#pragma once

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "wmso/formula.hpp"
#include "wmso/phi_type.hpp"
#include "wmso/regular_tree.hpp"
#include "wmso/sup.hpp"
#include "wmso/tree.hpp"

namespace wmso {

/// Right-hand side of a transition: a finite tree whose leaves may be
/// state letters (q, L) / (q, R). A null pointer is the empty tree.
struct OutNode;
using OutTree = std::shared_ptr<const OutNode>;

struct OutNode {
  bool is_state = false;
  Letter letter;     // when !is_state
  int state = -1;    // when is_state
  Dir dir = Dir::L;  // when is_state
  OutTree left, right;

  static OutTree node(Letter a, OutTree l = nullptr, OutTree r = nullptr);
  static OutTree leaf(int state, Dir d);
};

/// Deterministic top-down tree transducer. Transitions on letters are
/// stored per state; `bot[q]` is the output on the empty tree.
class Transducer {
 public:
  int add_state(std::string name);
  void set_initial(int q) { initial_ = q; }
  void set(int q, const Letter& a, OutTree out);
  void set_bot(int q, OutTree out);

  std::size_t num_states() const { return names_.size(); }
  const std::string& name(int q) const { return names_.at(q); }
  int initial() const { return initial_; }
  /// Throws Error when undefined.
  const OutTree& delta(int q, const Letter& a) const;
  const OutTree& delta_bot(int q) const { return bot_.at(q); }
  bool defined(int q, const Letter& a) const;

  /// Letters with a transition from some state.
  const std::set<Letter>& input_alphabet() const { return input_; }
  std::set<Letter> output_alphabet() const;
  const std::vector<std::pair<Letter, OutTree>>& transitions(int q) const { return rows_.at(q); }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<std::pair<Letter, OutTree>>> rows_;
  std::vector<std::unordered_map<Letter, std::size_t>> index_;
  std::vector<OutTree> bot_;
  std::set<Letter> input_;
  int initial_ = 0;
};

/// Checks that state letters occur only at leaves of letter transitions,
/// that bot outputs contain none, that every state has a transition for
/// every input letter, and that root state-leaves form no cycle.
void validate(const Transducer& tr);

FiniteTree apply_finite(const Transducer& tr, const FiniteTree& t);
/// Output of the transducer started in state `q`.
FiniteTree apply_finite_from(const Transducer& tr, int q, const FiniteTree& t);
RegularTree apply_regular(const Transducer& tr, const RegularTree& rt);

/// Text format:
///   states q0 q1;  initial q0;
///   delta q a -> a((q,L), b(., (q1,R)));  delta q bot -> .;
/// `bot` is reserved as a letter name in this format.
Transducer parse_transducer(std::string_view text);
std::string print_transducer(const Transducer& tr);
std::string print_out_tree(const Transducer& tr, const OutTree& t);

/// Reserved letters of the constructions: `?`, `#`.
Letter query_letter();
Letter hash_letter();

/// Appends to every letter the boolean "the node at `path` from here exists
/// and its letter satisfies `predicate`".
struct PathLabelReflection {
  std::string path;
  std::function<bool(const Letter&)> predicate;
  std::string name;
};
RegularTree reflect_path(const RegularTree& rt, const PathLabelReflection& r);
/// Several reflections in one pass (bits appended in list order).
RegularTree reflect_paths(const RegularTree& rt, const std::vector<PathLabelReflection>& rs);

/// Relabels every letter with `f`, keeping the shape.
Transducer relabel_transducer(const std::set<Letter>& alphabet, const std::function<Letter(const Letter&)>& f);

/// The transducer F for U(vars).psi over a decorated alphabet whose last
/// letter component is the psi-type under the empty valuation.
struct FConstruction {
  Transducer transducer;
  std::vector<PhiType> types;  // tau_1 .. tau_r; state of tau_i is i
  Formula psi;
  std::vector<Variable> vars;
};
FConstruction build_F(const Formula& psi, const std::vector<Variable>& vars, const std::set<Letter>& alphabet);

/// Marks a reflection should test: the ?-root at R^{i+1}L carries A_I.
PathLabelReflection theta(std::size_t i, const LetterSet& a_i, const std::string& name);

/// The family A_I = {X_i : i in I}, indexed by subset mask.
std::vector<LetterSet> marker_family(std::size_t k);

/// Removes #-nodes with their right subtrees (promoting the left child) and
/// relabels (ell, tau, U, v_11, ...) to (ell, U-type) where coordinate I of
/// the U-type collects tau_i with v_{i,I} = tt.
Transducer build_cleanup(const std::vector<PhiType>& types, std::size_t k, const std::set<Letter>& alphabet);

}  // namespace wmso
