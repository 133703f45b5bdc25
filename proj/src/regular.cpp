#include "wmso/regular.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "wmso/error.hpp"

namespace wmso {

Letter variable_marker(std::size_t i) { return Letter("_x" + std::to_string(i)); }

std::size_t StateTypeTable::index_of(const Formula& sub) const {
  for (std::size_t i = 0; i < subs_.size(); ++i)
    if (subs_[i].id() == sub.id()) return i;
  throw Error("not a subformula of the table's formula");
}

PhiType StateTypeTable::at(StateId q, const Formula& sub) const {
  std::size_t i = index_of(sub);
  if (q == kNone) return empty_[i];
  return types_[i].at(q);
}

namespace {

void collect(const Formula& f, std::vector<Formula>& out, std::set<const void*>& seen) {
  if (seen.count(f.id())) return;
  switch (f.kind()) {
    case FormulaKind::And:
      collect(f.lhs(), out, seen);
      collect(f.rhs(), out, seen);
      break;
    case FormulaKind::Not:
    case FormulaKind::Efin:
    case FormulaKind::U:
      collect(f.body(), out, seen);
      break;
    default:
      break;
  }
  seen.insert(f.id());
  out.push_back(f);
}

Compositor::Mask bound_mask(const Compositor& c, const Formula& quant) {
  Compositor::Mask m = 0;
  for (const auto& x : quant.vars()) m |= c.var_bit(x);
  return m;
}

std::vector<Compositor::Mask> submasks(Compositor::Mask m) {
  std::vector<Compositor::Mask> out;
  for (Compositor::Mask s = m;; s = (s - 1) & m) {
    out.push_back(s);
    if (s == 0) break;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

// Body types reachable at each state when the quantified variables range
// over finite sets: the least family containing the empty-valuation types
// and closed under composition at every state.
std::vector<std::vector<PhiType>> achievable(Compositor& c, const Formula& quant, const RegularTree& rt,
                                             const std::vector<PhiType>& body_types) {
  const Formula& body = quant.body();
  PhiType bot = c.empty_type(body);
  auto settings = submasks(bound_mask(c, quant));
  std::vector<std::set<PhiType>> ach(rt.size());
  for (std::size_t q = 0; q < rt.size(); ++q) ach[q].insert(body_types[q]);
  std::vector<std::vector<StateId>> parents(rt.size());
  for (std::size_t q = 0; q < rt.size(); ++q)
    for (StateId ch : {rt.state(q).left, rt.state(q).right})
      if (ch != kNone) parents[ch].push_back(static_cast<StateId>(q));
  std::vector<bool> queued(rt.size(), true);
  std::vector<StateId> work;
  for (std::size_t q = rt.size(); q-- > 0;) work.push_back(static_cast<StateId>(q));
  const std::set<PhiType> bot_set{bot};
  while (!work.empty()) {
    StateId q = work.back();
    work.pop_back();
    queued[q] = false;
    const auto& s = rt.state(q);
    // Copies: ach[q] may alias a child set.
    std::vector<PhiType> ls(s.left == kNone ? bot_set.begin() : ach[s.left].begin(),
                            s.left == kNone ? bot_set.end() : ach[s.left].end());
    std::vector<PhiType> rs(s.right == kNone ? bot_set.begin() : ach[s.right].begin(),
                            s.right == kNone ? bot_set.end() : ach[s.right].end());
    bool grew = false;
    for (auto m : settings)
      for (PhiType l : ls)
        for (PhiType r : rs) grew |= ach[q].insert(c.comp(body, s.letter, m, l, r)).second;
    if (!grew) continue;
    for (StateId p : parents[q])
      if (!queued[p]) {
        queued[p] = true;
        work.push_back(p);
      }
  }
  std::vector<std::vector<PhiType>> out;
  for (auto& s : ach) out.emplace_back(s.begin(), s.end());
  return out;
}

}  // namespace

BodyGrammar body_grammar(Compositor& c, const Formula& u, const RegularTree& rt,
                         const std::vector<PhiType>& body_types) {
  const Formula& body = u.body();
  auto ach = achievable(c, u, rt, body_types);
  BodyGrammar bg;
  std::map<std::pair<StateId, PhiType>, int> index;
  for (std::size_t q = 0; q < rt.size(); ++q)
    for (PhiType t : ach[q]) {
      auto key = std::make_pair(static_cast<StateId>(q), t);
      index.emplace(key, static_cast<int>(bg.keys.size()));
      bg.keys.push_back(key);
      bg.grammar.add(rt.state(q).name + ":" + t.str());
    }
  std::vector<Letter> markers;
  std::vector<Compositor::Mask> bits;
  for (std::size_t i = 0; i < u.vars().size(); ++i) {
    markers.push_back(variable_marker(i + 1));
    bits.push_back(c.var_bit(u.vars()[i]));
  }
  PhiType bot = c.empty_type(body);
  auto settings = submasks(bound_mask(c, u));
  for (std::size_t q = 0; q < rt.size(); ++q) {
    const auto& s = rt.state(q);
    bg.grammar.productions[index.at({static_cast<StateId>(q), body_types[q]})].push_back({});
    std::vector<PhiType> ls = s.left == kNone ? std::vector<PhiType>{bot} : ach[s.left];
    std::vector<PhiType> rs = s.right == kNone ? std::vector<PhiType>{bot} : ach[s.right];
    for (auto m : settings) {
      Production base;
      for (std::size_t i = 0; i < bits.size(); ++i)
        if (m & bits[i]) base.emit.push_back(markers[i]);
      for (PhiType l : ls)
        for (PhiType r : rs) {
          PhiType t = c.comp(body, s.letter, m, l, r);
          Production p = base;
          if (s.left != kNone) p.children.push_back(index.at({s.left, l}));
          if (s.right != kNone) p.children.push_back(index.at({s.right, r}));
          bg.grammar.productions[index.at({static_cast<StateId>(q), t})].push_back(std::move(p));
        }
    }
  }
  if (bg.grammar.size() == 0) bg.grammar.add("_none");
  return bg;
}

StateTypeTable compute_type_regular(const Formula& phi, const RegularTree& rt) {
  StateTypeTable table;
  table.phi_ = phi;
  table.rt_ = rt;
  std::set<const void*> seen;
  collect(phi, table.subs_, seen);
  Compositor c(phi);
  const std::size_t n = rt.size();
  auto types_of = [&](const Formula& f) -> const std::vector<PhiType>& { return table.types_[table.index_of(f)]; };
  for (const auto& f : table.subs_) {
    std::vector<PhiType> col(n);
    switch (f.kind()) {
      case FormulaKind::Letter:
      case FormulaKind::Subset:
      case FormulaKind::Child:
        std::fill(col.begin(), col.end(), c.empty_type(f));
        break;
      case FormulaKind::Not:
        col = types_of(f.body());
        break;
      case FormulaKind::And: {
        const auto& l = types_of(f.lhs());
        const auto& r = types_of(f.rhs());
        for (std::size_t q = 0; q < n; ++q) col[q] = PhiType::pair(l[q], r[q]);
        break;
      }
      case FormulaKind::Efin: {
        auto ach = achievable(c, f, rt, types_of(f.body()));
        for (std::size_t q = 0; q < n; ++q) col[q] = PhiType::set(ach[q]);
        break;
      }
      case FormulaKind::U: {
        BodyGrammar bg = body_grammar(c, f, rt, types_of(f.body()));
        std::size_t k = f.vars().size();
        std::vector<std::vector<std::vector<PhiType>>> coords(n, std::vector<std::vector<PhiType>>(std::size_t{1} << k));
        for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
          LetterSet a;
          for (std::size_t i = 0; i < k; ++i)
            if (mask >> i & 1) a.insert(variable_marker(i + 1));
          auto sup = decide_sup_all(bg.grammar, a);
          for (std::size_t x = 0; x < bg.keys.size(); ++x)
            if (sup[x]) coords[bg.keys[x].first][mask].push_back(bg.keys[x].second);
        }
        for (std::size_t q = 0; q < n; ++q) {
          std::vector<PhiType> cs;
          for (auto& v : coords[q]) cs.push_back(PhiType::set(std::move(v)));
          col[q] = PhiType::indexed(std::move(cs));
        }
        break;
      }
    }
    table.types_.push_back(std::move(col));
    table.empty_.push_back(c.empty_type(f));
  }
  return table;
}

bool check_sentence(const Formula& phi, const RegularTree& rt) {
  if (!phi.is_sentence()) {
    std::string vars;
    for (const auto& x : phi.free_vars()) vars += (vars.empty() ? "" : ", ") + x;
    throw Error("formula has free variables: " + vars);
  }
  StateTypeTable table = compute_type_regular(phi, rt);
  return tv(phi, table.root_type());
}

std::string dump_types(const StateTypeTable& table) {
  std::string out;
  const auto& rt = table.tree();
  for (std::size_t q = 0; q < rt.size(); ++q)
    for (const auto& f : table.subformulas())
      out += rt.state(static_cast<StateId>(q)).name + "\t" + print_formula(f) + "\t" +
             table.at(static_cast<StateId>(q), f).str() + "\n";
  return out;
}

}  // namespace wmso
