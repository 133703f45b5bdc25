#include "wmso/transducer.hpp"

#include <algorithm>
#include <map>

#include "lexer.hpp"
#include "wmso/compose.hpp"
#include "wmso/error.hpp"
#include "wmso/regular.hpp"

namespace wmso {

OutTree OutNode::node(Letter a, OutTree l, OutTree r) {
  auto n = std::make_shared<OutNode>();
  n->letter = a;
  n->left = std::move(l);
  n->right = std::move(r);
  return n;
}

OutTree OutNode::leaf(int state, Dir d) {
  auto n = std::make_shared<OutNode>();
  n->is_state = true;
  n->state = state;
  n->dir = d;
  return n;
}

Letter query_letter() {
  static const Letter l("_q");
  return l;
}

Letter hash_letter() {
  static const Letter l("_h");
  return l;
}

int Transducer::add_state(std::string name) {
  names_.push_back(std::move(name));
  rows_.emplace_back();
  index_.emplace_back();
  bot_.emplace_back();
  return static_cast<int>(names_.size() - 1);
}

void Transducer::set(int q, const Letter& a, OutTree out) {
  auto& idx = index_.at(q);
  auto it = idx.find(a);
  if (it != idx.end()) {
    rows_[q][it->second].second = std::move(out);
  } else {
    idx.emplace(a, rows_[q].size());
    rows_[q].emplace_back(a, std::move(out));
  }
  input_.insert(a);
}

void Transducer::set_bot(int q, OutTree out) { bot_.at(q) = std::move(out); }

bool Transducer::defined(int q, const Letter& a) const { return index_.at(q).count(a) > 0; }

const OutTree& Transducer::delta(int q, const Letter& a) const {
  const auto& idx = index_.at(q);
  auto it = idx.find(a);
  if (it == idx.end()) throw Error("transducer: no transition from state " + names_[q] + " on letter '" + a.str() + "'");
  return rows_[q][it->second].second;
}

std::set<Letter> Transducer::output_alphabet() const {
  std::set<Letter> out;
  std::set<const OutNode*> seen;
  std::function<void(const OutTree&)> walk = [&](const OutTree& t) {
    if (!t || !seen.insert(t.get()).second) return;
    if (!t->is_state) out.insert(t->letter);
    walk(t->left);
    walk(t->right);
  };
  for (std::size_t q = 0; q < names_.size(); ++q) {
    for (const auto& [_, t] : rows_[q]) walk(t);
    walk(bot_[q]);
  }
  return out;
}

void validate(const Transducer& tr) {
  const int n = static_cast<int>(tr.num_states());
  if (n == 0) throw Error("transducer has no states");
  if (tr.initial() < 0 || tr.initial() >= n) throw Error("transducer: initial state out of range");
  std::function<void(const OutTree&, bool, bool, int, const std::string&)> check =
      [&](const OutTree& t, bool allow_state, bool at_root, int q, const std::string& where) {
        if (!t) return;
        if (t->is_state) {
          if (!allow_state) throw Error("transducer: state letter in " + where + " of state " + tr.name(q));
          if (t->left || t->right)
            throw Error("transducer: state letter at an internal position in " + where + " of state " + tr.name(q));
          if (t->state < 0 || t->state >= n) throw Error("transducer: unknown target state in " + where);
          return;
        }
        (void)at_root;
        check(t->left, allow_state, false, q, where);
        check(t->right, allow_state, false, q, where);
      };
  std::vector<std::set<int>> eps(n);
  for (int q = 0; q < n; ++q) {
    for (const auto& [a, t] : tr.transitions(q)) {
      check(t, true, true, q, "delta(" + tr.name(q) + ", " + a.str() + ")");
      if (t && t->is_state) eps[q].insert(t->state);
    }
    check(tr.delta_bot(q), false, true, q, "delta(" + tr.name(q) + ", bot)");
    for (const auto& a : tr.input_alphabet())
      if (!tr.defined(q, a)) throw Error("transducer: no transition from state " + tr.name(q) + " on letter '" + a.str() + "'");
  }
  // Cycles among root state-leaves.
  std::vector<int> mark(n, 0), stack;
  std::function<void(int)> dfs = [&](int q) {
    mark[q] = 1;
    stack.push_back(q);
    for (int r : eps[q]) {
      if (mark[r] == 1) {
        std::string cycle;
        auto it = std::find(stack.begin(), stack.end(), r);
        for (; it != stack.end(); ++it) cycle += tr.name(*it) + " -> ";
        throw Error("transducer: epsilon cycle " + cycle + tr.name(r));
      }
      if (mark[r] == 0) dfs(r);
    }
    stack.pop_back();
    mark[q] = 2;
  };
  for (int q = 0; q < n; ++q)
    if (mark[q] == 0) dfs(q);
}

namespace {

// Outputs for one (state, input subtree) pair are built once and shared.
class Instantiator {
 public:
  explicit Instantiator(const Transducer& tr) : tr_(tr) {}

  FiniteTree from(int q, const FiniteTree& t) {
    auto key = std::make_pair(q, t.id());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    FiniteTree out = build(t.empty() ? tr_.delta_bot(q) : tr_.delta(q, t.label()), t);
    memo_.emplace(key, out);
    return out;
  }

 private:
  FiniteTree build(const OutTree& out, const FiniteTree& in) {
    if (!out) return {};
    if (out->is_state) return from(out->state, in.child(out->dir));
    return FiniteTree::node(out->letter, build(out->left, in), build(out->right, in));
  }

  const Transducer& tr_;
  std::map<std::pair<int, const void*>, FiniteTree> memo_;
};

}  // namespace

FiniteTree apply_finite_from(const Transducer& tr, int q, const FiniteTree& t) { return Instantiator(tr).from(q, t); }

FiniteTree apply_finite(const Transducer& tr, const FiniteTree& t) { return apply_finite_from(tr, tr.initial(), t); }

RegularTree apply_regular(const Transducer& tr, const RegularTree& rt) {
  struct KeyHash {
    std::size_t operator()(const std::pair<const OutNode*, StateId>& k) const noexcept {
      return std::hash<const void*>{}(k.first) * 31 + static_cast<std::size_t>(k.second);
    }
  };
  std::unordered_map<std::pair<const OutNode*, StateId>, StateId, KeyHash> ids;
  std::vector<RegularState> states;
  std::vector<std::pair<const OutNode*, StateId>> work;

  // Output state for the letter node `out` read against input state `in`;
  // state leaves are followed down the input until a letter node appears.
  auto resolve = [&](const OutNode* out, StateId in) -> StateId {
    while (out && out->is_state) {
      StateId c = rt.state(in).child(out->dir);
      if (c == kNone) {
        out = tr.delta_bot(out->state).get();
        in = kNone;
      } else {
        out = tr.delta(out->state, rt.state(c).letter).get();
        in = c;
      }
    }
    if (!out) return kNone;
    auto key = std::make_pair(out, in);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    StateId id = static_cast<StateId>(states.size());
    ids.emplace(key, id);
    states.push_back({"s" + std::to_string(id), out->letter, kNone, kNone});
    work.push_back(key);
    return id;
  };

  StateId root = rt.empty() ? resolve(tr.delta_bot(tr.initial()).get(), kNone)
                            : resolve(tr.delta(tr.initial(), rt.state(rt.root()).letter).get(), rt.root());
  while (!work.empty()) {
    auto [out, in] = work.back();
    work.pop_back();
    StateId id = ids.at({out, in});
    StateId l = resolve(out->left.get(), in);
    StateId r = resolve(out->right.get(), in);
    states[id].left = l;
    states[id].right = r;
  }
  return RegularTree(std::move(states), root);
}

// ---- text format ----

namespace {

OutTree parse_out(detail::Cursor& in, const std::map<std::string, int>& states) {
  if (in.consume('.')) return nullptr;
  if (in.consume('(')) {
    std::string q = in.expect_ident("state name");
    auto it = states.find(q);
    if (it == states.end()) in.fail("undeclared state '" + q + "'");
    in.expect(',');
    std::string d = in.expect_ident("direction L or R");
    if (d != "L" && d != "R") in.fail("expected direction L or R");
    in.expect(')');
    return OutNode::leaf(it->second, d == "L" ? Dir::L : Dir::R);
  }
  std::string a = in.letter();
  if (a.empty()) in.fail("expected a tree");
  if (!in.consume('(')) return OutNode::node(Letter(a));
  OutTree l = parse_out(in, states);
  in.expect(',');
  OutTree r = parse_out(in, states);
  in.expect(')');
  return OutNode::node(Letter(a), l, r);
}

}  // namespace

Transducer parse_transducer(std::string_view text) {
  detail::Cursor in(text);
  Transducer tr;
  std::map<std::string, int> states;
  bool have_states = false, have_initial = false;
  std::set<std::pair<int, std::string>> seen;
  std::vector<bool> has_bot;
  while (!in.at_end()) {
    std::string kw = in.expect_ident("'states', 'initial' or 'delta'");
    if (kw == "states") {
      if (have_states) in.fail("duplicate states declaration");
      have_states = true;
      while (in.peek() != ';') {
        std::string q = in.expect_ident("state name");
        if (states.count(q)) in.fail("duplicate state '" + q + "'");
        states.emplace(q, tr.add_state(q));
      }
      in.expect(';');
      has_bot.assign(states.size(), false);
    } else if (kw == "initial") {
      if (!have_states) in.fail("initial before states");
      if (have_initial) in.fail("duplicate initial state");
      std::string q = in.expect_ident("state name");
      auto it = states.find(q);
      if (it == states.end()) in.fail("undeclared state '" + q + "'");
      tr.set_initial(it->second);
      have_initial = true;
      in.expect(';');
    } else if (kw == "delta") {
      if (!have_states) in.fail("delta before states");
      std::string q = in.expect_ident("state name");
      auto it = states.find(q);
      if (it == states.end()) in.fail("undeclared state '" + q + "'");
      std::string a = in.letter();
      if (a.empty()) in.fail("expected a letter or bot");
      if (!seen.insert({it->second, a}).second) in.fail("duplicate transition for " + q + " on " + a);
      if (!in.consume("->")) in.fail("expected '->'");
      OutTree out = parse_out(in, states);
      in.expect(';');
      if (a == "bot") {
        tr.set_bot(it->second, out);
        has_bot[it->second] = true;
      } else {
        tr.set(it->second, Letter(a), out);
      }
    } else {
      in.fail("unknown keyword '" + kw + "'");
    }
  }
  if (!have_states) throw Error("transducer: missing states declaration");
  if (!have_initial) throw Error("transducer: missing initial state");
  validate(tr);
  return tr;
}

std::string print_out_tree(const Transducer& tr, const OutTree& t) {
  if (!t) return ".";
  if (t->is_state) return "(" + tr.name(t->state) + "," + (t->dir == Dir::L ? "L" : "R") + ")";
  if (!t->left && !t->right) return t->letter.str();
  return t->letter.str() + "(" + print_out_tree(tr, t->left) + ", " + print_out_tree(tr, t->right) + ")";
}

std::string print_transducer(const Transducer& tr) {
  std::string out = "states";
  for (std::size_t q = 0; q < tr.num_states(); ++q) out += " " + tr.name(static_cast<int>(q));
  out += ";\ninitial " + tr.name(tr.initial()) + ";\n";
  for (std::size_t q = 0; q < tr.num_states(); ++q) {
    for (const auto& [a, t] : tr.transitions(static_cast<int>(q)))
      out += "delta " + tr.name(static_cast<int>(q)) + " " + a.str() + " -> " + print_out_tree(tr, t) + ";\n";
    out += "delta " + tr.name(static_cast<int>(q)) + " bot -> " + print_out_tree(tr, tr.delta_bot(static_cast<int>(q))) +
           ";\n";
  }
  return out;
}

// ---- reflections ----

RegularTree reflect_paths(const RegularTree& rt, const std::vector<PathLabelReflection>& rs) {
  std::vector<RegularState> states = rt.states();
  std::map<std::pair<Letter, std::string>, Letter> cache;
  for (std::size_t q = 0; q < states.size(); ++q) {
    std::string bits;
    for (const auto& r : rs) {
      StateId at = static_cast<StateId>(q);
      for (char c : r.path) {
        if (at == kNone) break;
        at = rt.state(at).child(c == 'L' ? Dir::L : Dir::R);
      }
      bits += (at != kNone && r.predicate(rt.state(at).letter)) ? '1' : '0';
    }
    auto key = std::make_pair(states[q].letter, bits);
    auto it = cache.find(key);
    if (it == cache.end()) {
      Letter l = states[q].letter;
      for (char b : bits) l = l.append(b == '1' ? "tt" : "ff");
      it = cache.emplace(key, l).first;
    }
    states[q].letter = it->second;
  }
  return RegularTree(std::move(states), rt.root());
}

RegularTree reflect_path(const RegularTree& rt, const PathLabelReflection& r) { return reflect_paths(rt, {r}); }

Transducer relabel_transducer(const std::set<Letter>& alphabet, const std::function<Letter(const Letter&)>& f) {
  Transducer tr;
  int q = tr.add_state("q");
  tr.set_initial(q);
  auto l = OutNode::leaf(q, Dir::L), r = OutNode::leaf(q, Dir::R);
  for (const auto& a : alphabet) tr.set(q, a, OutNode::node(f(a), l, r));
  return tr;
}

std::vector<LetterSet> marker_family(std::size_t k) {
  std::vector<LetterSet> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    LetterSet a;
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1) a.insert(variable_marker(i + 1));
    out.push_back(std::move(a));
  }
  return out;
}

namespace {

std::string join(const std::vector<std::string_view>& parts, std::size_t from, std::size_t to) {
  std::string out;
  for (std::size_t i = from; i < to; ++i) {
    if (i > from) out += "|";
    out += parts[i];
  }
  return out;
}

// Members of a printed mark set `{A;B;...}`.
std::vector<std::string> mark_members(std::string_view s) {
  std::vector<std::string> out;
  if (s.size() < 2 || s.front() != '{' || s.back() != '}') return out;
  s = s.substr(1, s.size() - 2);
  if (s.empty()) return out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i)
    if (i == s.size() || s[i] == ';') {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  return out;
}

}  // namespace

PathLabelReflection theta(std::size_t i, const LetterSet& a_i, const std::string& name) {
  std::string want = print_marks({a_i});
  want = want.substr(1, want.size() - 2);
  PathLabelReflection r;
  r.path = std::string(i + 1, 'R') + "L";
  r.name = name;
  r.predicate = [want](const Letter& l) {
    auto comps = l.components();
    if (comps.size() < 2 || comps[0] != query_letter().str()) return false;
    auto members = mark_members(comps[1]);
    return std::find(members.begin(), members.end(), want) != members.end();
  };
  return r;
}

FConstruction build_F(const Formula& psi, const std::vector<Variable>& vars, const std::set<Letter>& alphabet) {
  FConstruction fc;
  fc.psi = psi;
  fc.vars = vars;
  Formula u = Formula::unbounded(vars, psi);
  Compositor c(u);
  const Formula& body = u.body();
  const std::size_t k = vars.size();
  std::vector<Compositor::Mask> bits;
  for (const auto& x : vars) bits.push_back(c.mask_of({x}));

  // Types that can occur at a node under a finite valuation: the letters'
  // own types and everything composable from them.
  std::map<Letter, PhiType> own;
  std::map<Letter, Letter> base;
  std::set<PhiType> reach{c.empty_type(body)};
  for (const auto& l : alphabet) {
    auto comps = l.components();
    if (comps.size() < 2) throw Error("build_F: letter '" + l.str() + "' carries no type component");
    PhiType t = parse_type(psi, comps.back());
    own.emplace(l, t);
    base.emplace(l, l.base());
    reach.insert(t);
  }
  std::set<Letter> bases;
  for (auto& [_, b] : base) bases.insert(b);
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<PhiType> cur(reach.begin(), reach.end());
    for (const auto& a : bases)
      for (std::size_t s = 0; s < (std::size_t{1} << k); ++s) {
        Compositor::Mask m = 0;
        for (std::size_t i = 0; i < k; ++i)
          if (s >> i & 1) m |= bits[i];
        for (PhiType l : cur)
          for (PhiType r : cur) changed |= reach.insert(c.comp(body, a, m, l, r)).second;
      }
  }
  fc.types.assign(reach.begin(), reach.end());

  Transducer& tr = fc.transducer;
  int q0 = tr.add_state("q0");
  tr.set_initial(q0);
  std::map<PhiType, int> state_of;
  for (std::size_t i = 0; i < fc.types.size(); ++i)
    state_of.emplace(fc.types[i], tr.add_state("t" + std::to_string(i + 1)));

  // Triples (S, tau_L, tau_R) listed by sorted S, then tau_L, then tau_R.
  std::vector<std::size_t> subsets;
  for (std::size_t s = 0; s < (std::size_t{1} << k); ++s) subsets.push_back(s);
  std::sort(subsets.begin(), subsets.end(), [&](std::size_t x, std::size_t y) {
    std::vector<std::size_t> a, b;
    for (std::size_t i = 0; i < k; ++i) {
      if (x >> i & 1) a.push_back(i);
      if (y >> i & 1) b.push_back(i);
    }
    return a < b;
  });
  std::map<std::tuple<std::size_t, PhiType, PhiType>, OutTree> subs;
  auto sub = [&](std::size_t s, PhiType l, PhiType r) {
    auto key = std::make_tuple(s, l, r);
    auto it = subs.find(key);
    if (it != subs.end()) return it->second;
    OutTree t = OutNode::node(hash_letter(), OutNode::leaf(state_of.at(l), Dir::L), OutNode::leaf(state_of.at(r), Dir::R));
    for (std::size_t i = k; i-- > 0;)
      if (s >> i & 1) t = OutNode::node(variable_marker(i + 1), nullptr, t);
    subs.emplace(key, t);
    return t;
  };
  OutTree nd_bot = OutNode::node(nd_bot_letter());
  for (const auto& a : bases) {
    std::map<PhiType, std::vector<OutTree>> triples;
    for (std::size_t s : subsets) {
      Compositor::Mask m = 0;
      for (std::size_t i = 0; i < k; ++i)
        if (s >> i & 1) m |= bits[i];
      for (PhiType l : fc.types)
        for (PhiType r : fc.types) triples[c.comp(body, a, m, l, r)].push_back(sub(s, l, r));
    }
    for (const auto& l : alphabet) {
      if (base.at(l) != a) continue;
      std::vector<OutTree> rows;
      for (PhiType t : fc.types) {
        OutTree chain = own.at(l) == t ? nullptr : nd_bot;
        auto it = triples.find(t);
        if (it != triples.end())
          for (auto s = it->second.rbegin(); s != it->second.rend(); ++s) chain = OutNode::node(nd_letter(), *s, chain);
        OutTree row = OutNode::node(query_letter(), nullptr, chain);
        tr.set(state_of.at(t), l, row);
        rows.push_back(row);
      }
      OutTree spine = OutNode::node(hash_letter(), rows.back(), nullptr);
      for (std::size_t i = rows.size() - 1; i-- > 0;) spine = OutNode::node(hash_letter(), rows[i], spine);
      spine = OutNode::node(hash_letter(), OutNode::leaf(q0, Dir::R), spine);
      tr.set(q0, l, OutNode::node(l, OutNode::leaf(q0, Dir::L), spine));
    }
  }
  PhiType bot_type = c.empty_type(body);
  for (PhiType t : fc.types) tr.set_bot(state_of.at(t), t == bot_type ? nullptr : nd_bot);
  return fc;
}

Transducer build_cleanup(const std::vector<PhiType>& types, std::size_t k, const std::set<Letter>& alphabet) {
  const std::size_t r = types.size();
  const std::size_t nbits = r << k;
  Transducer tr;
  int q = tr.add_state("q");
  int qh = tr.add_state("qh");
  tr.set_initial(q);
  auto relabel = [&](const Letter& l) -> OutTree {
    auto comps = l.components();
    if (comps.size() < nbits + 3) return nullptr;
    std::size_t first_bit = comps.size() - nbits;
    std::vector<std::vector<PhiType>> coords(std::size_t{1} << k);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask)
        if (comps[first_bit + (i << k) + mask] == "tt") coords[mask].push_back(types[i]);
    std::vector<PhiType> cs;
    for (auto& v : coords) cs.push_back(PhiType::set(std::move(v)));
    std::string spelled = join(comps, 0, first_bit - 2) + "|" + PhiType::indexed(std::move(cs)).str();
    return OutNode::node(Letter(spelled), OutNode::leaf(q, Dir::L), OutNode::leaf(qh, Dir::R));
  };
  for (const auto& l : alphabet) {
    if (l.base() == hash_letter()) {
      tr.set(q, l, nullptr);
      tr.set(qh, l, OutNode::leaf(q, Dir::L));
    } else {
      tr.set(q, l, relabel(l));
      tr.set(qh, l, nullptr);
    }
  }
  return tr;
}

}  // namespace wmso
