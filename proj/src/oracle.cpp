#include "wmso/oracle.hpp"

#include <algorithm>
#include <bit>
#include <optional>
#include <cstdlib>
#include <string>
#include <unordered_map>

#include "wmso/error.hpp"

namespace wmso {

std::size_t enumeration_guard(std::size_t fallback) {
  if (const char* env = std::getenv("WMSOTUP_GUARD")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return fallback;
}

namespace {

using Mask = std::uint64_t;

// Nodes are numbered in preorder, so node 0 is the root.
struct FlatTree {
  std::vector<Letter> label;
  std::vector<int> left, right;
  std::unordered_map<Address, int> index;

  explicit FlatTree(const FiniteTree& t) {
    Address at;
    add(t, at);
  }

  int add(const FiniteTree& t, Address& at) {
    if (t.empty()) return -1;
    int id = static_cast<int>(label.size());
    label.push_back(t.label());
    left.push_back(-1);
    right.push_back(-1);
    index.emplace(at, id);
    at.push_back('L');
    int l = add(t.left(), at);
    at.back() = 'R';
    int r = add(t.right(), at);
    at.pop_back();
    left[id] = l;
    right[id] = r;
    return id;
  }

  std::size_t size() const { return label.size(); }

  Mask letter_mask(const Letter& a) const {
    Mask m = 0;
    for (std::size_t i = 0; i < label.size(); ++i)
      if (label[i] == a) m |= Mask{1} << i;
    return m;
  }
};

struct Node {
  FormulaKind kind;
  Letter letter;
  Dir dir = Dir::L;
  std::vector<int> vars;  // atom arguments or bound variables
  int lhs = -1, rhs = -1;
  std::vector<int> free;
  std::uint64_t letter_nodes = 0;
};

class Evaluator {
 public:
  Evaluator(const Formula& phi, const FiniteTree& t, const Valuation& v) : tree_(t) {
    if (tree_.size() > 62) throw Error("tree too large for exhaustive enumeration");
    root_ = compile(phi);
    memo_.resize(nodes_.size());
    assign(v);
  }

  // Memo entries are keyed by the values of free variables, so they stay
  // valid across valuations.
  void assign(const Valuation& v) {
    values_.assign(vars_.size(), 0);
    for (const auto& [x, nodes] : v.sets()) {
      Mask m = 0;
      for (const auto& w : nodes) {
        auto it = tree_.index.find(w);
        if (it == tree_.index.end()) throw Error("address '" + w + "' of " + x + " is outside the tree domain");
        m |= Mask{1} << it->second;
      }
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == x) values_[i] = m;
    }
  }

  bool holds() { return holds(root_); }
  PhiType type() { return type(root_); }

 private:
  int var(const Variable& x) {
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == x) return static_cast<int>(i);
    vars_.push_back(x);
    return static_cast<int>(vars_.size() - 1);
  }

  int compile(const Formula& f) {
    Node n;
    n.kind = f.kind();
    switch (f.kind()) {
      case FormulaKind::Letter:
        n.letter = f.atom_letter();
        n.letter_nodes = tree_.letter_mask(n.letter);
        n.vars = {var(f.vars()[0])};
        break;
      case FormulaKind::Child:
        n.dir = f.dir();
        [[fallthrough]];
      case FormulaKind::Subset:
        n.vars = {var(f.vars()[0]), var(f.vars()[1])};
        break;
      case FormulaKind::And:
        n.lhs = compile(f.lhs());
        n.rhs = compile(f.rhs());
        break;
      case FormulaKind::Not:
        n.lhs = compile(f.body());
        break;
      case FormulaKind::Efin:
      case FormulaKind::U:
        for (const auto& x : f.vars()) n.vars.push_back(var(x));
        n.lhs = compile(f.body());
        break;
    }
    for (const auto& x : f.free_vars()) n.free.push_back(var(x));
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size() - 1);
  }

  bool child_holds(const Node& n) const {
    Mask x = values_[n.vars[0]], y = values_[n.vars[1]];
    if (std::popcount(x) != 1 || std::popcount(y) != 1) return false;
    int u = std::countr_zero(x);
    int c = n.dir == Dir::L ? tree_.left[u] : tree_.right[u];
    return c >= 0 && y == Mask{1} << c;
  }

  bool atom_holds(const Node& n) const {
    switch (n.kind) {
      case FormulaKind::Letter:
        return (values_[n.vars[0]] & ~n.letter_nodes) == 0;
      case FormulaKind::Subset:
        return (values_[n.vars[0]] & ~values_[n.vars[1]]) == 0;
      case FormulaKind::Child:
        return child_holds(n);
      default:
        return false;
    }
  }

  Mask all_subsets() const { return Mask{1} << tree_.size(); }

  bool holds(int id) {
    const Node& n = nodes_[id];
    switch (n.kind) {
      case FormulaKind::Letter:
      case FormulaKind::Subset:
      case FormulaKind::Child:
        return atom_holds(n);
      case FormulaKind::And:
        return holds(n.lhs) && holds(n.rhs);
      case FormulaKind::Not:
        return !holds(n.lhs);
      case FormulaKind::Efin: {
        Mask saved = values_[n.vars[0]];
        bool found = false;
        for (Mask m = 0; m < all_subsets() && !found; ++m) {
          values_[n.vars[0]] = m;
          found = holds(n.lhs);
        }
        values_[n.vars[0]] = saved;
        return found;
      }
      case FormulaKind::U:
        // For n = |dom| + 1 no set of size >= n exists.
        return false;
    }
    return false;
  }

  // Packs the values of the free variables of a node; nullopt when they do
  // not fit in 64 bits.
  std::optional<Mask> memo_key(const Node& n) const {
    if (n.free.size() * tree_.size() > 64) return std::nullopt;
    Mask key = 0;
    for (int x : n.free) key = (key << tree_.size()) | values_[x];
    return key;
  }

  // Collects body types over every assignment of the bound variables
  // `vars[i..]`. A bound variable that is not free in the body cannot change
  // its type, so it stays empty.
  void enumerate(const Node& n, std::size_t i, std::vector<PhiType>& out) {
    if (i == n.vars.size()) {
      PhiType t = type(n.lhs);
      if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
      return;
    }
    Mask saved = values_[n.vars[i]];
    const auto& body_free = nodes_[n.lhs].free;
    bool used = std::find(body_free.begin(), body_free.end(), n.vars[i]) != body_free.end();
    for (Mask m = 0; m < (used ? all_subsets() : 1); ++m) {
      values_[n.vars[i]] = m;
      enumerate(n, i + 1, out);
    }
    values_[n.vars[i]] = saved;
  }

  PhiType type(int id) {
    const Node& n = nodes_[id];
    switch (n.kind) {
      case FormulaKind::Letter:
      case FormulaKind::Subset:
        return atom_holds(n) ? tt_ : ff_;
      case FormulaKind::Child: {
        if (child_holds(n)) return PhiType::quad(QuadValue::tt);
        Mask x = values_[n.vars[0]], y = values_[n.vars[1]];
        if (x == 0 && y == 0) return PhiType::quad(QuadValue::empty);
        if (x == 0 && y == 1) return PhiType::quad(QuadValue::root);
        return PhiType::quad(QuadValue::ff);
      }
      case FormulaKind::Not:
        return type(n.lhs);
      case FormulaKind::And:
      case FormulaKind::Efin:
      case FormulaKind::U: {
        auto key = memo_key(n);
        if (key) {
          auto it = memo_[id].find(*key);
          if (it != memo_[id].end()) return it->second;
        }
        PhiType r;
        if (n.kind == FormulaKind::And) {
          r = PhiType::pair(type(n.lhs), type(n.rhs));
        } else if (n.kind == FormulaKind::Efin) {
          std::vector<PhiType> out;
          enumerate(n, 0, out);
          r = PhiType::set(std::move(out));
        } else {
          // Coordinate I asks for sets X_i (i in I) of every size; none has
          // more than |dom| elements, so only I = {} can be nonempty.
          std::vector<PhiType> coords(std::size_t{1} << n.vars.size(), PhiType::set({}));
          std::vector<PhiType> out;
          enumerate(n, 0, out);
          coords[0] = PhiType::set(std::move(out));
          r = PhiType::indexed(std::move(coords));
        }
        if (key) memo_[id].emplace(*key, r);
        return r;
      }
    }
    throw Error("bad formula");
  }

  FlatTree tree_;
  std::vector<Node> nodes_;
  std::vector<Variable> vars_;
  std::vector<Mask> values_;
  std::vector<std::unordered_map<Mask, PhiType>> memo_;
  int root_ = -1;
  PhiType tt_ = PhiType::boolean(true), ff_ = PhiType::boolean(false);
};

}  // namespace

bool eval_semantics(const Formula& phi, const FiniteTree& t, const Valuation& v) {
  return Evaluator(phi, t, v).holds();
}

PhiType brute_type(const Formula& phi, const FiniteTree& t, const Valuation& v, std::size_t guard) {
  std::size_t n = t.size();
  if (n > guard)
    throw Error("tree has " + std::to_string(n) + " nodes, above the enumeration guard of " + std::to_string(guard));
  return Evaluator(phi, t, v).type();
}

std::vector<PhiType> brute_types(const Formula& phi, const FiniteTree& t, const std::vector<Valuation>& vs,
                                 std::size_t guard) {
  std::size_t n = t.size();
  if (n > guard)
    throw Error("tree has " + std::to_string(n) + " nodes, above the enumeration guard of " + std::to_string(guard));
  Evaluator e(phi, t, {});
  std::vector<PhiType> out;
  for (const auto& v : vs) {
    e.assign(v);
    out.push_back(e.type());
  }
  return out;
}

}  // namespace wmso
