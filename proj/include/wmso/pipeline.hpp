#pragma once

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "wmso/formula.hpp"
#include "wmso/regular_tree.hpp"
#include "wmso/transducer.hpp"

namespace wmso {

struct Op {
  enum class Kind { Reflect, Sup, Apply };
  Kind kind = Kind::Apply;
  PathLabelReflection reflection;          // Reflect
  std::vector<LetterSet> family;           // Sup
  std::shared_ptr<const Transducer> transducer;  // Apply
  std::string label;                       // short description for traces
  std::set<Letter> input_alphabet;         // letters the stage accepts
};

struct OpSequence {
  std::vector<Op> ops;
  std::set<Letter> initial_alphabet;
  std::set<Letter> final_alphabet;
};

/// Called after each stage with the stage index (1-based), the op and the
/// resulting tree.
using StageHook = std::function<void(std::size_t, const Op&, const RegularTree&)>;

/// Builds the operation sequence for `phi` stage by stage. Constructions
/// that depend on the alphabet (the reachable types of F, the cleanup
/// relabelling) are sized from the letters present after the previous
/// stage, so the sequence is executed on `rt` while it is built. The
/// sequence appends the phi-type (under the empty valuation) to every
/// letter.
struct Compiled {
  OpSequence sequence;
  RegularTree result;
};
Compiled compile(const Formula& phi, const RegularTree& rt, const StageHook& hook = {});

/// Folds the operations over `rt`; throws Error naming the stage whose
/// input contains a letter outside its declared alphabet.
RegularTree run(const OpSequence& ops, const RegularTree& rt, const StageHook& hook = {});

/// The transducer that turns a tree whose root carries the phi-type as its
/// last letter component into tt or ff.
Transducer verdict_transducer(const Formula& phi, const std::set<Letter>& alphabet);

/// Decides a sentence through the operation sequence; throws Error when
/// `phi` has free variables or `rt` uses reserved letters.
bool check_via_pipeline(const Formula& phi, const RegularTree& rt, const StageHook& hook = {});

}  // namespace wmso
