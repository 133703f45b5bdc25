#include "wmso/regular_tree.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "lexer.hpp"

namespace wmso {

RegularTree::RegularTree(std::vector<RegularState> states, StateId root)
    : states_(std::move(states)), root_(root) {
  for (const auto& s : states_) {
    if ((s.left != kNone && (s.left < 0 || s.left >= static_cast<int>(states_.size()))) ||
        (s.right != kNone && (s.right < 0 || s.right >= static_cast<int>(states_.size()))))
      throw Error("regular tree: child index out of range in state " + s.name);
  }
  if (root_ != kNone && (root_ < 0 || root_ >= static_cast<int>(states_.size())))
    throw Error("regular tree: root index out of range");
  check_and_prune(false);
}

void RegularTree::check_and_prune(bool strict) {
  std::vector<bool> seen(states_.size(), false);
  std::vector<StateId> stack;
  if (root_ != kNone) stack.push_back(root_);
  while (!stack.empty()) {
    StateId q = stack.back();
    stack.pop_back();
    if (seen[q]) continue;
    seen[q] = true;
    for (StateId c : {states_[q].left, states_[q].right})
      if (c != kNone && !seen[c]) stack.push_back(c);
  }
  if (std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) return;
  if (strict) {
    for (std::size_t i = 0; i < seen.size(); ++i)
      if (!seen[i]) throw Error("regular tree: state '" + states_[i].name + "' is unreachable from the root");
  }
  std::vector<StateId> remap(states_.size(), kNone);
  std::vector<RegularState> kept;
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (!seen[i]) continue;
    remap[i] = static_cast<StateId>(kept.size());
    kept.push_back(states_[i]);
  }
  for (auto& s : kept) {
    if (s.left != kNone) s.left = remap[s.left];
    if (s.right != kNone) s.right = remap[s.right];
  }
  if (root_ != kNone) root_ = remap[root_];
  states_ = std::move(kept);
}

std::vector<Letter> RegularTree::alphabet() const {
  std::set<Letter> out;
  for (const auto& s : states_) out.insert(s.letter);
  return {out.begin(), out.end()};
}

bool RegularTree::is_finite() const {
  // 0 = unvisited, 1 = on stack, 2 = done
  std::vector<int> mark(states_.size(), 0);
  std::function<bool(StateId)> acyclic = [&](StateId q) {
    if (q == kNone || mark[q] == 2) return true;
    if (mark[q] == 1) return false;
    mark[q] = 1;
    bool ok = acyclic(states_[q].left) && acyclic(states_[q].right);
    mark[q] = 2;
    return ok;
  };
  return acyclic(root_);
}

FiniteTree RegularTree::unfold(StateId from, std::size_t depth) const {
  if (from == kNone || depth == 0) return {};
  const RegularState& s = states_[from];
  return FiniteTree::node(s.letter, unfold(s.left, depth - 1), unfold(s.right, depth - 1));
}

FiniteTree RegularTree::unfold_finite() const {
  if (!is_finite()) throw Error("regular tree is infinite");
  std::vector<std::optional<FiniteTree>> memo(states_.size());
  std::function<FiniteTree(StateId)> go = [&](StateId q) -> FiniteTree {
    if (q == kNone) return {};
    if (!memo[q]) memo[q] = FiniteTree::node(states_[q].letter, go(states_[q].left), go(states_[q].right));
    return *memo[q];
  };
  return go(root_);
}

RegularTree RegularTree::from_finite(const FiniteTree& t) {
  std::vector<RegularState> states;
  std::function<StateId(const FiniteTree&)> go = [&](const FiniteTree& n) -> StateId {
    if (n.empty()) return kNone;
    StateId id = static_cast<StateId>(states.size());
    states.push_back({"n" + std::to_string(id), n.label(), kNone, kNone});
    StateId l = go(n.left());
    StateId r = go(n.right());
    states[id].left = l;
    states[id].right = r;
    return id;
  };
  StateId root = go(t);
  return RegularTree(std::move(states), root);
}

namespace {

struct RawEquation {
  std::string name;
  bool bottom = false;
  std::string letter;
  std::string left, right;  // empty string = "."
  std::size_t line = 0, column = 0;
};

}  // namespace

RegularTree parse_regular_tree(std::string_view text, bool strict) {
  detail::Cursor in(text);
  std::vector<RawEquation> eqs;
  std::optional<std::string> root;
  std::size_t root_line = 0, root_col = 0;
  std::map<std::string, std::size_t> index;

  auto parse_arg = [&](std::string& out) {
    if (in.consume('.')) {
      out.clear();
      return;
    }
    out = in.expect_ident("a state name or '.'");
  };

  while (!in.at_end()) {
    std::size_t line = in.line(), col = in.column();
    std::string head = in.expect_ident("'root' or a state name");
    if (head == "root" && in.peek() != '=') {
      if (root) throw ParseError("duplicate root declaration", line, col);
      root_line = line;
      root_col = col;
      if (in.consume('.')) root = "";
      else root = in.expect_ident("root state");
      in.expect(';');
      continue;
    }
    RawEquation eq;
    eq.name = head;
    eq.line = line;
    eq.column = col;
    in.expect('=');
    if (in.consume('.')) {
      eq.bottom = true;
    } else {
      eq.letter = in.letter();
      if (eq.letter.empty()) in.fail("expected a letter");
      if (in.consume('(')) {
        parse_arg(eq.left);
        in.expect(',');
        parse_arg(eq.right);
        in.expect(')');
      }
    }
    in.expect(';');
    if (index.count(eq.name)) throw ParseError("duplicate definition of state '" + eq.name + "'", line, col);
    index[eq.name] = eqs.size();
    eqs.push_back(std::move(eq));
  }
  if (!root) throw ParseError("missing 'root' declaration", in.line(), in.column());

  // States defined as "." are folded into their references.
  std::vector<StateId> id(eqs.size(), kNone);
  std::vector<RegularState> states;
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    if (eqs[i].bottom) continue;
    id[i] = static_cast<StateId>(states.size());
    states.push_back({eqs[i].name, Letter(eqs[i].letter), kNone, kNone});
  }
  auto resolve = [&](const std::string& name, std::size_t line, std::size_t col) -> StateId {
    if (name.empty()) return kNone;
    auto it = index.find(name);
    if (it == index.end()) throw ParseError("undefined state '" + name + "'", line, col);
    return id[it->second];
  };
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    if (eqs[i].bottom) continue;
    states[id[i]].left = resolve(eqs[i].left, eqs[i].line, eqs[i].column);
    states[id[i]].right = resolve(eqs[i].right, eqs[i].line, eqs[i].column);
  }
  StateId r = resolve(*root, root_line, root_col);

  RegularTree rt;
  rt.states_ = std::move(states);
  rt.root_ = r;
  if (strict) {
    // Unreachable "." definitions are harmless; only real states are checked.
    rt.check_and_prune(true);
  } else {
    rt.check_and_prune(false);
  }
  return rt;
}

std::string print_regular_tree(const RegularTree& rt) {
  std::string out = "root ";
  out += rt.empty() ? "." : rt.state(rt.root()).name;
  out += ";\n";
  auto arg = [&](StateId q) { return q == kNone ? std::string(".") : rt.state(q).name; };
  for (const auto& s : rt.states()) {
    out += s.name + " = " + s.letter.str();
    if (s.left != kNone || s.right != kNone) out += "(" + arg(s.left) + ", " + arg(s.right) + ")";
    out += ";\n";
  }
  return out;
}

FiniteTree truncate(const RegularTree& rt, std::size_t depth) { return rt.unfold(rt.root(), depth); }

}  // namespace wmso
