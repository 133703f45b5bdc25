#include "wmso/pipeline.hpp"

#include <map>

#include "wmso/compose.hpp"
#include "wmso/error.hpp"

namespace wmso {

namespace {

std::set<Letter> letters_of(const RegularTree& rt) {
  auto a = rt.alphabet();
  return {a.begin(), a.end()};
}

Letter replace_last(const Letter& l, std::size_t drop, const std::string& with) {
  auto comps = l.components();
  if (comps.size() < drop + 1) throw Error("letter '" + l.str() + "' has too few components");
  std::string out;
  for (std::size_t i = 0; i + drop < comps.size(); ++i) {
    if (i) out += "|";
    out += comps[i];
  }
  return Letter(out + "|" + with);
}

// Executes ops[from..to) where all are reflections, in one pass.
RegularTree run_reflections(const std::vector<Op>& ops, std::size_t from, std::size_t to, const RegularTree& rt) {
  std::vector<PathLabelReflection> rs;
  for (std::size_t i = from; i < to; ++i) rs.push_back(ops[i].reflection);
  return reflect_paths(rt, rs);
}

RegularTree execute(const Op& op, const RegularTree& rt) {
  switch (op.kind) {
    case Op::Kind::Apply:
      return apply_regular(*op.transducer, rt);
    case Op::Kind::Sup:
      return sup_reflect(rt, op.family);
    case Op::Kind::Reflect:
      return reflect_path(rt, op.reflection);
  }
  return rt;
}

void check_alphabet(std::size_t stage, const Op& op, const RegularTree& rt) {
  for (const auto& l : rt.alphabet())
    if (!op.input_alphabet.count(l))
      throw Error("stage " + std::to_string(stage) + " (" + op.label + "): letter '" + l.str() +
                  "' is outside the stage alphabet");
}

class Builder {
 public:
  Builder(const RegularTree& rt, const StageHook& hook) : cur_(rt), hook_(hook) {
    seq_.initial_alphabet = letters_of(rt);
  }

  void compile(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::Letter:
      case FormulaKind::Subset:
        append_constant("tt", "append tt");
        break;
      case FormulaKind::Child:
        append_constant("empty", "append empty");
        break;
      case FormulaKind::Not:
        compile(f.body());
        break;
      case FormulaKind::And: {
        compile(f.lhs());
        compile(f.rhs());
        relabel("merge pair", [](const Letter& l) {
          auto comps = l.components();
          if (comps.size() < 3) throw Error("letter '" + l.str() + "' has too few components");
          std::string pair = "<" + std::string(comps[comps.size() - 2]) + "," + std::string(comps.back()) + ">";
          return replace_last(l, 2, pair);
        });
        break;
      }
      case FormulaKind::Efin: {
        Formula u = Formula::unbounded(f.vars(), f.body());
        compile_u(f.vars(), f.body());
        relabel("project to I = {}", [u](const Letter& l) {
          PhiType t = parse_type(u, l.components().back());
          return replace_last(l, 1, t.coord(0).str());
        });
        break;
      }
      case FormulaKind::U:
        compile_u(f.vars(), f.body());
        break;
    }
  }

  Compiled finish() {
    flush();
    seq_.final_alphabet = letters_of(cur_);
    return {std::move(seq_), std::move(cur_)};
  }

 private:
  void push(Op op) {
    op.input_alphabet = letters_of(cur_);
    if (op.kind == Op::Kind::Reflect) {
      pending_.push_back(std::move(op));
      return;
    }
    flush();
    cur_ = execute(op, cur_);
    seq_.ops.push_back(std::move(op));
    if (hook_) hook_(seq_.ops.size(), seq_.ops.back(), cur_);
  }

  void flush() {
    if (pending_.empty()) return;
    // Alphabets of later reflections in the batch follow from the first.
    std::size_t from = seq_.ops.size();
    for (auto& op : pending_) seq_.ops.push_back(std::move(op));
    pending_.clear();
    cur_ = run_reflections(seq_.ops, from, seq_.ops.size(), cur_);
    if (hook_) hook_(seq_.ops.size(), seq_.ops.back(), cur_);
  }

  void relabel(const std::string& label, const std::function<Letter(const Letter&)>& f) {
    flush();
    Op op;
    op.kind = Op::Kind::Apply;
    op.label = label;
    op.transducer = std::make_shared<Transducer>(relabel_transducer(letters_of(cur_), f));
    push(std::move(op));
  }

  void append_constant(const std::string& c, const std::string& label) {
    relabel(label, [c](const Letter& l) { return l.append(c); });
  }

  void compile_u(const std::vector<Variable>& vars, const Formula& psi) {
    compile(psi);
    flush();
    const std::size_t k = vars.size();
    FConstruction fc = build_F(psi, vars, letters_of(cur_));
    std::vector<PhiType> types = fc.types;
    Op f;
    f.kind = Op::Kind::Apply;
    f.label = "F (" + std::to_string(types.size()) + " types)";
    f.transducer = std::make_shared<Transducer>(std::move(fc.transducer));
    push(std::move(f));

    Op sup;
    sup.kind = Op::Kind::Sup;
    sup.label = "SUP";
    sup.family = marker_family(k);
    push(std::move(sup));

    auto family = marker_family(k);
    for (std::size_t i = 1; i <= types.size(); ++i)
      for (std::size_t mask = 0; mask < family.size(); ++mask) {
        Op th;
        th.kind = Op::Kind::Reflect;
        th.label = "theta " + std::to_string(i) + "," + std::to_string(mask);
        th.reflection = theta(i, family[mask], th.label);
        push(std::move(th));
      }
    flush();

    Op clean;
    clean.kind = Op::Kind::Apply;
    clean.label = "cleanup";
    clean.transducer = std::make_shared<Transducer>(build_cleanup(types, k, letters_of(cur_)));
    push(std::move(clean));
  }

  OpSequence seq_;
  RegularTree cur_;
  const StageHook& hook_;
  std::vector<Op> pending_;
};

void require_plain(const RegularTree& rt) {
  for (const auto& l : rt.alphabet())
    if (is_reserved(l)) throw Error("letter '" + l.str() + "' is reserved for internal use");
}

}  // namespace

Compiled compile(const Formula& phi, const RegularTree& rt, const StageHook& hook) {
  require_plain(rt);
  Builder b(rt, hook);
  b.compile(phi);
  return b.finish();
}

RegularTree run(const OpSequence& seq, const RegularTree& rt, const StageHook& hook) {
  RegularTree cur = rt;
  const auto& ops = seq.ops;
  for (std::size_t i = 0; i < ops.size();) {
    check_alphabet(i + 1, ops[i], cur);
    if (ops[i].kind == Op::Kind::Reflect) {
      std::size_t j = i;
      while (j < ops.size() && ops[j].kind == Op::Kind::Reflect) ++j;
      cur = run_reflections(ops, i, j, cur);
      i = j;
    } else {
      cur = execute(ops[i], cur);
      ++i;
    }
    if (hook) hook(i, ops[i - 1], cur);
  }
  return cur;
}

Transducer verdict_transducer(const Formula& phi, const std::set<Letter>& alphabet) {
  Compositor c(phi);
  Transducer tr;
  int q = tr.add_state("q0");
  tr.set_initial(q);
  auto leaf = [](bool b) { return OutNode::node(Letter(b ? "tt" : "ff")); };
  for (const auto& l : alphabet) tr.set(q, l, leaf(c.tv(phi, parse_type(phi, l.components().back()))));
  tr.set_bot(q, leaf(c.tv(phi, c.empty_type(phi))));
  return tr;
}

bool check_via_pipeline(const Formula& phi, const RegularTree& rt, const StageHook& hook) {
  if (!phi.is_sentence()) throw Error("formula has free variables");
  Compiled compiled = compile(phi, rt, hook);
  Transducer verdict = verdict_transducer(phi, letters_of(compiled.result));
  RegularTree out = apply_regular(verdict, compiled.result);
  if (hook) {
    Op op;
    op.kind = Op::Kind::Apply;
    op.label = "verdict";
    hook(compiled.sequence.ops.size() + 1, op, out);
  }
  return out.state(out.root()).letter.str() == "tt";
}

}  // namespace wmso
