#include "wmso/sup.hpp"

#include <algorithm>
#include <map>

#include "wmso/error.hpp"

namespace wmso {

void DerivationGrammar::validate() const {
  if (names.size() != productions.size()) throw Error("grammar: names and productions differ in size");
  if (names.empty()) throw Error("grammar: no nonterminals");
  if (start < 0 || start >= static_cast<int>(size())) throw Error("grammar: start symbol out of range");
  for (const auto& ps : productions)
    for (const auto& p : ps) {
      if (p.children.size() > 2) throw Error("grammar: production with more than two children");
      for (int c : p.children)
        if (c < 0 || c >= static_cast<int>(size())) throw Error("grammar: dangling nonterminal reference");
    }
}

std::vector<bool> DerivationGrammar::terminalizable() const {
  std::vector<bool> ok(size(), false);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t x = 0; x < size(); ++x) {
      if (ok[x]) continue;
      for (const auto& p : productions[x]) {
        if (std::all_of(p.children.begin(), p.children.end(), [&](int c) { return ok[c]; })) {
          ok[x] = true;
          changed = true;
          break;
        }
      }
    }
  }
  return ok;
}

std::string print_grammar(const DerivationGrammar& g) {
  std::string out = "start " + g.names.at(g.start) + ";\n";
  for (std::size_t x = 0; x < g.size(); ++x) {
    out += g.names[x] + " ->";
    if (g.productions[x].empty()) out += " (none)";
    for (std::size_t i = 0; i < g.productions[x].size(); ++i) {
      const auto& p = g.productions[x][i];
      out += i ? " |" : "";
      out += " [";
      for (std::size_t j = 0; j < p.emit.size(); ++j) out += (j ? "," : "") + p.emit[j].str();
      out += "]";
      for (int c : p.children) out += " " + g.names[c];
    }
    out += ";\n";
  }
  return out;
}

namespace {

using Bits = std::uint64_t;

// Iterative Tarjan; returns the component index of every vertex.
std::vector<int> components(const std::vector<std::vector<int>>& succ) {
  int n = static_cast<int>(succ.size());
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1), stack;
  std::vector<bool> on_stack(n, false);
  int counter = 0, ncomp = 0;
  for (int s = 0; s < n; ++s) {
    if (index[s] != -1) continue;
    std::vector<std::pair<int, std::size_t>> work{{s, 0}};
    index[s] = low[s] = counter++;
    stack.push_back(s);
    on_stack[s] = true;
    while (!work.empty()) {
      auto& [v, i] = work.back();
      if (i < succ[v].size()) {
        int w = succ[v][i++];
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          work.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = ncomp;
        } while (w != v);
        ++ncomp;
      }
      int done = v;
      work.pop_back();
      if (!work.empty()) low[work.back().first] = std::min(low[work.back().first], low[done]);
    }
  }
  return comp;
}

}  // namespace

// The set G(X) of letter subsets B ⊆ A that are simultaneously unbounded
// from X is the least family closed under: for a production X -> e Y1..Ym
// whose children all terminate, and B_j in G(Y_j), the set
// P(X) ∪ B_1 ∪ ... ∪ B_m is in G(X), where P(X) holds the letters of A
// that can be pumped on a cycle through the component of X (emitted by a
// production on the cycle or by a subtree hanging off it).
std::vector<bool> decide_sup_all(const DerivationGrammar& g, const LetterSet& a) {
  g.validate();
  if (a.size() > kSupLetterLimit)
    throw Error("SUP query over " + std::to_string(a.size()) + " letters exceeds the limit of " +
                std::to_string(kSupLetterLimit));
  std::map<Letter, int> bit;
  for (const auto& l : a) bit.emplace(l, static_cast<int>(bit.size()));
  const std::size_t n = g.size();
  const Bits full = (Bits{1} << a.size()) - 1;

  auto emitted = [&](const Production& p) {
    Bits m = 0;
    for (const auto& l : p.emit) {
      auto it = bit.find(l);
      if (it != bit.end()) m |= Bits{1} << it->second;
    }
    return m;
  };

  std::vector<bool> term = g.terminalizable();
  std::vector<std::vector<const Production*>> usable(n);
  for (std::size_t x = 0; x < n; ++x) {
    if (!term[x]) continue;
    for (const auto& p : g.productions[x])
      if (std::all_of(p.children.begin(), p.children.end(), [&](int c) { return term[c]; }))
        usable[x].push_back(&p);
  }

  std::vector<Bits> emit(n, 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t x = 0; x < n; ++x) {
      Bits m = emit[x];
      for (const auto* p : usable[x]) {
        m |= emitted(*p);
        for (int c : p->children) m |= emit[c];
      }
      if (m != emit[x]) {
        emit[x] = m;
        changed = true;
      }
    }
  }

  std::vector<std::vector<int>> succ(n);
  for (std::size_t x = 0; x < n; ++x)
    for (const auto* p : usable[x])
      for (int c : p->children) succ[x].push_back(c);
  std::vector<int> comp = components(succ);
  std::vector<Bits> pump(n, 0);
  {
    std::vector<Bits> per_comp(n, 0);
    for (std::size_t x = 0; x < n; ++x)
      for (const auto* p : usable[x])
        for (std::size_t j = 0; j < p->children.size(); ++j) {
          int y = p->children[j];
          if (comp[y] != comp[x]) continue;
          Bits label = emitted(*p);
          if (p->children.size() == 2) label |= emit[p->children[1 - j]];
          per_comp[comp[x]] |= label;
        }
    for (std::size_t x = 0; x < n; ++x) pump[x] = per_comp[comp[x]];
  }

  // G(X) as a bitmask over the subsets of A (|A| <= 6, so 64 subsets).
  std::vector<Bits> gs(n, 0);
  auto members = [](Bits family) {
    std::vector<Bits> out;
    for (Bits s = 0; family; ++s, family >>= 1)
      if (family & 1) out.push_back(s);
    return out;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t x = 0; x < n; ++x) {
      Bits add = gs[x];
      for (const auto* p : usable[x]) {
        const auto& ch = p->children;
        if (ch.empty()) {
          add |= Bits{1} << pump[x];
        } else if (ch.size() == 1) {
          for (Bits b : members(gs[ch[0]])) add |= Bits{1} << (pump[x] | b);
        } else {
          auto left = members(gs[ch[0]]);
          auto right = members(gs[ch[1]]);
          for (Bits b1 : left)
            for (Bits b2 : right) add |= Bits{1} << (pump[x] | b1 | b2);
        }
      }
      if (add != gs[x]) {
        gs[x] = add;
        changed = true;
      }
    }
  }

  std::vector<bool> out(n);
  for (std::size_t x = 0; x < n; ++x) out[x] = (gs[x] >> full) & 1;
  return out;
}

bool decide_sup(const DerivationGrammar& g, const LetterSet& a) { return decide_sup_all(g, a).at(g.start); }

DerivationGrammar tree_to_grammar(const RegularTree& rt) {
  DerivationGrammar g;
  if (rt.empty()) {
    g.start = g.add("_bot");
    g.productions[0].push_back({});
    return g;
  }
  for (const auto& s : rt.states()) g.add(s.name);
  for (std::size_t q = 0; q < rt.size(); ++q) {
    const auto& s = rt.state(static_cast<StateId>(q));
    auto& out = g.productions[q];
    if (s.letter == nd_letter()) {
      for (StateId c : {s.left, s.right}) {
        Production p;
        if (c != kNone) p.children.push_back(c);
        out.push_back(std::move(p));
      }
    } else if (s.letter != nd_bot_letter()) {
      Production p;
      p.emit.push_back(s.letter);
      for (StateId c : {s.left, s.right})
        if (c != kNone) p.children.push_back(c);
      out.push_back(std::move(p));
    }
  }
  g.start = rt.root();
  return g;
}

namespace {

// Language of `t` by printed form, at most `cap` entries; sets `complete`
// to false when something was dropped.
std::map<std::string, FiniteTree> resolve(const FiniteTree& t, std::size_t cap, bool& complete) {
  std::map<std::string, FiniteTree> out;
  if (t.empty()) {
    out.emplace(".", t);
    return out;
  }
  if (t.label() == nd_bot_letter()) return out;
  auto add = [&](const FiniteTree& v) {
    if (out.size() >= cap && !out.count(print_tree(v))) {
      complete = false;
      return;
    }
    out.emplace(print_tree(v), v);
  };
  if (t.label() == nd_letter()) {
    for (const auto* c : {&t.left(), &t.right()})
      for (auto& [_, v] : resolve(*c, cap, complete)) add(v);
    return out;
  }
  auto ls = resolve(t.left(), cap, complete);
  auto rs = resolve(t.right(), cap, complete);
  for (auto& [_, l] : ls)
    for (auto& [_, r] : rs) add(FiniteTree::node(t.label(), l, r));
  return out;
}

}  // namespace

NdLanguage nd_language(const FiniteTree& t, std::size_t max_count) {
  NdLanguage res;
  for (auto& [_, v] : resolve(t, max_count, res.complete)) res.trees.push_back(v);
  return res;
}

std::string print_marks(const std::vector<LetterSet>& marks) {
  std::string out = "{";
  for (std::size_t i = 0; i < marks.size(); ++i) {
    if (i) out += ";";
    if (marks[i].empty()) out += "~";
    bool first = true;
    for (const auto& l : marks[i]) {
      out += (first ? "" : ",") + l.str();
      first = false;
    }
  }
  return out + "}";
}

RegularTree sup_reflect(const RegularTree& rt, const std::vector<LetterSet>& family) {
  if (rt.empty()) return rt;
  DerivationGrammar g = tree_to_grammar(rt);
  std::vector<std::vector<bool>> holds;
  for (const auto& a : family) holds.push_back(decide_sup_all(g, a));
  std::vector<RegularState> states = rt.states();
  for (std::size_t q = 0; q < states.size(); ++q) {
    auto& s = states[q];
    if (s.letter == nd_letter() || s.letter == nd_bot_letter()) continue;
    std::vector<LetterSet> marks;
    for (std::size_t i = 0; i < family.size(); ++i)
      if (holds[i][q]) marks.push_back(family[i]);
    s.letter = s.letter.append(print_marks(marks));
  }
  return RegularTree(std::move(states), rt.root());
}

}  // namespace wmso
