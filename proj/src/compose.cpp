#include "wmso/compose.hpp"

#include <functional>
#include <memory>

#include "wmso/error.hpp"

namespace wmso {

namespace {

const char kTvTag = 0;

const char* kind_name(TypeKind k) {
  switch (k) {
    case TypeKind::Bool: return "boolean";
    case TypeKind::Quad: return "child label";
    case TypeKind::Pair: return "pair";
    case TypeKind::Set: return "set";
    case TypeKind::Indexed: return "indexed";
  }
  return "?";
}

TypeKind expected_kind(const Formula& phi) {
  switch (phi.kind()) {
    case FormulaKind::Letter:
    case FormulaKind::Subset: return TypeKind::Bool;
    case FormulaKind::Child: return TypeKind::Quad;
    case FormulaKind::And: return TypeKind::Pair;
    case FormulaKind::Not: return expected_kind(phi.body());
    case FormulaKind::Efin: return TypeKind::Set;
    case FormulaKind::U: return TypeKind::Indexed;
  }
  return TypeKind::Bool;
}

}  // namespace

void check_shape(const Formula& phi, PhiType t) {
  if (!t.valid()) throw Error("missing type");
  TypeKind want = expected_kind(phi);
  if (t.kind() != want)
    throw Error(std::string("type shape mismatch: expected ") + kind_name(want) + ", got " + kind_name(t.kind()));
  const Formula* f = &phi;
  while (f->kind() == FormulaKind::Not) f = &f->body();
  if (f->kind() == FormulaKind::U && t.elements().size() != (std::size_t{1} << f->vars().size()))
    throw Error("type shape mismatch: wrong number of coordinates");
}

std::size_t Compositor::MemoHash::operator()(const MemoKey& k) const noexcept {
  std::size_t h = std::hash<const void*>{}(k.node);
  auto mix = [&h](std::size_t x) { h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
  mix(std::hash<const void*>{}(k.letter));
  mix(k.mask);
  mix(k.left);
  mix(k.right);
  return h;
}

Compositor::Compositor(Formula phi) : phi_(std::move(phi)) {
  if (!phi_.valid()) throw Error("empty formula");
  index(phi_);
}

void Compositor::index(const Formula& f) {
  if (info_.count(f.id())) return;
  auto bit = [this](const Variable& x) -> Mask {
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == x) return Mask{1} << i;
    if (vars_.size() == 64) throw Error("too many variables in formula");
    vars_.push_back(x);
    return Mask{1} << (vars_.size() - 1);
  };
  Info in;
  for (const auto& x : f.free_vars()) in.free |= bit(x);
  switch (f.kind()) {
    case FormulaKind::Letter:
    case FormulaKind::Child:
    case FormulaKind::Subset:
      break;
    case FormulaKind::And:
      index(f.lhs());
      index(f.rhs());
      break;
    case FormulaKind::Not:
      index(f.body());
      break;
    case FormulaKind::Efin:
    case FormulaKind::U:
      for (const auto& x : f.vars()) in.bound |= bit(x);
      index(f.body());
      break;
  }
  info_.emplace(f.id(), in);
}

const Compositor::Info& Compositor::info(const Formula& f) const {
  auto it = info_.find(f.id());
  if (it == info_.end()) throw Error("not a subformula of the compositor's formula");
  return it->second;
}

Compositor::Mask Compositor::var_bit(const Variable& x) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i] == x) return Mask{1} << i;
  throw Error("variable " + x + " does not occur in the formula");
}

Compositor::Mask Compositor::mask_of(const VarSet& xs) const {
  Mask m = 0;
  for (const auto& x : xs) {
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == x) m |= Mask{1} << i;
  }
  return m;
}

Compositor::Mask Compositor::free_mask(const Formula& sub) const { return info(sub).free; }

PhiType Compositor::comp(const Formula& sub, const Letter& a, Mask root_vars, PhiType left, PhiType right) {
  root_vars &= info(sub).free;
  MemoKey key{sub.id(), &a.str(), root_vars, left.id(), right.id()};
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  check_shape(sub, left);
  check_shape(sub, right);
  PhiType r = comp_uncached(sub, a, root_vars, left, right);
  memo_.emplace(key, r);
  return r;
}

PhiType Compositor::comp_uncached(const Formula& sub, const Letter& a, Mask s, PhiType left, PhiType right) {
  switch (sub.kind()) {
    case FormulaKind::Letter: {
      bool ok = left.as_bool() && right.as_bool() && (a == sub.atom_letter() || !(s & var_bit(sub.vars()[0])));
      return PhiType::boolean(ok);
    }
    case FormulaKind::Subset: {
      bool x = s & var_bit(sub.vars()[0]);
      bool y = s & var_bit(sub.vars()[1]);
      return PhiType::boolean(left.as_bool() && right.as_bool() && (!x || y));
    }
    case FormulaKind::Child: {
      bool x = s & var_bit(sub.vars()[0]);
      bool y = s & var_bit(sub.vars()[1]);
      QuadValue l = left.as_quad(), r = right.as_quad();
      QuadValue d = sub.dir() == Dir::L ? l : r;
      QuadValue other = sub.dir() == Dir::L ? r : l;
      using Q = QuadValue;
      if (!x && !y && ((l == Q::tt && r == Q::empty) || (l == Q::empty && r == Q::tt))) return PhiType::quad(Q::tt);
      if (x && !y && d == Q::root && other == Q::empty) return PhiType::quad(Q::tt);
      if (!x && !y && l == Q::empty && r == Q::empty) return PhiType::quad(Q::empty);
      if (!x && y && l == Q::empty && r == Q::empty) return PhiType::quad(Q::root);
      return PhiType::quad(Q::ff);
    }
    case FormulaKind::Not:
      return comp(sub.body(), a, s, left, right);
    case FormulaKind::And:
      return PhiType::pair(comp(sub.lhs(), a, s, left.first(), right.first()),
                           comp(sub.rhs(), a, s, left.second(), right.second()));
    case FormulaKind::Efin: {
      Mask b = info(sub).bound;
      std::vector<PhiType> out;
      for (Mask s2 : {s & ~b, s | b})
        for (PhiType sl : left.elements())
          for (PhiType sr : right.elements()) out.push_back(comp(sub.body(), a, s2, sl, sr));
      return PhiType::set(std::move(out));
    }
    case FormulaKind::U: {
      std::vector<Mask> bits;
      for (const auto& x : sub.vars()) bits.push_back(var_bit(x));
      std::size_t k = bits.size();
      Mask bound = info(sub).bound;
      std::vector<Mask> settings;
      for (std::size_t t = 0; t < (std::size_t{1} << k); ++t) {
        Mask m = s & ~bound;
        for (std::size_t i = 0; i < k; ++i)
          if (t >> i & 1) m |= bits[i];
        settings.push_back(m);
      }
      std::vector<PhiType> coords;
      for (std::size_t i = 0; i < (std::size_t{1} << k); ++i) {
        std::vector<PhiType> out;
        // I_L ranges over subsets of I; I_R must cover I \ I_L.
        for (std::size_t il = i;; il = (il - 1) & i) {
          std::size_t rest = i & ~il;
          for (std::size_t extra = il;; extra = (extra - 1) & il) {
            std::size_t ir = rest | extra;
            for (Mask s2 : settings)
              for (PhiType sl : left.coord(il).elements())
                for (PhiType sr : right.coord(ir).elements()) out.push_back(comp(sub.body(), a, s2, sl, sr));
            if (extra == 0) break;
          }
          if (il == 0) break;
        }
        coords.push_back(PhiType::set(std::move(out)));
      }
      return PhiType::indexed(std::move(coords));
    }
  }
  throw Error("bad formula");
}

PhiType Compositor::empty_type(const Formula& sub) {
  auto it = empty_.find(sub.id());
  if (it != empty_.end()) return it->second;
  PhiType r;
  switch (sub.kind()) {
    case FormulaKind::Letter:
    case FormulaKind::Subset:
      r = PhiType::boolean(true);
      break;
    case FormulaKind::Child:
      r = PhiType::quad(QuadValue::empty);
      break;
    case FormulaKind::Not:
      r = empty_type(sub.body());
      break;
    case FormulaKind::And:
      r = PhiType::pair(empty_type(sub.lhs()), empty_type(sub.rhs()));
      break;
    case FormulaKind::Efin:
      r = PhiType::set({empty_type(sub.body())});
      break;
    case FormulaKind::U: {
      std::vector<PhiType> coords(std::size_t{1} << sub.vars().size(), PhiType::set({}));
      coords[0] = PhiType::set({empty_type(sub.body())});
      r = PhiType::indexed(std::move(coords));
      break;
    }
  }
  empty_.emplace(sub.id(), r);
  return r;
}

bool Compositor::tv(const Formula& sub, PhiType t) {
  MemoKey key{sub.id(), &kTvTag, 0, t.id(), 0};
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second.as_bool();
  check_shape(sub, t);
  bool r = false;
  switch (sub.kind()) {
    case FormulaKind::Letter:
    case FormulaKind::Subset:
      r = t.as_bool();
      break;
    case FormulaKind::Child:
      r = t.as_quad() == QuadValue::tt;
      break;
    case FormulaKind::Not:
      r = !tv(sub.body(), t);
      break;
    case FormulaKind::And:
      r = tv(sub.lhs(), t.first()) && tv(sub.rhs(), t.second());
      break;
    case FormulaKind::Efin:
      for (PhiType s : t.elements()) r = r || tv(sub.body(), s);
      break;
    case FormulaKind::U: {
      PhiType all = t.coord((std::size_t{1} << sub.vars().size()) - 1);
      for (PhiType s : all.elements()) r = r || tv(sub.body(), s);
      break;
    }
  }
  memo_.emplace(key, PhiType::boolean(r));
  return r;
}

PhiType Compositor::type_rec(const Formula& sub, const FiniteTree& t, Address& at,
                             const std::unordered_map<Address, Mask>& masks) {
  if (t.empty()) return empty_type(sub);
  at.push_back('L');
  PhiType l = type_rec(sub, t.left(), at, masks);
  at.back() = 'R';
  PhiType r = type_rec(sub, t.right(), at, masks);
  at.pop_back();
  auto it = masks.find(at);
  return comp(sub, t.label(), it == masks.end() ? 0 : it->second, l, r);
}

PhiType Compositor::type_finite(const Formula& sub, const FiniteTree& t,
                                const std::unordered_map<Address, Mask>& masks) {
  Address at;
  return type_rec(sub, t, at, masks);
}

PhiType comp(const Letter& a, const Formula& phi, const CompKey& key) {
  Compositor c(phi);
  return c.comp(phi, a, c.mask_of(key.root_vars), key.left, key.right);
}

PhiType empty_tree_type(const Formula& phi) { return Compositor(phi).empty_type(phi); }

bool tv(const Formula& phi, PhiType t) { return Compositor(phi).tv(phi, t); }

PhiType compute_type_finite(const Formula& phi, const FiniteTree& t, const Valuation& v) {
  // Repeated calls for one formula reuse its composition memo. The cache
  // holds the formula, so its node identity cannot be recycled.
  thread_local std::unique_ptr<Compositor> cached;
  if (!cached || cached->formula().id() != phi.id()) cached = std::make_unique<Compositor>(phi);
  Compositor& c = *cached;
  std::unordered_map<Address, Compositor::Mask> masks;
  for (const auto& [x, nodes] : v.sets()) {
    for (const auto& w : nodes) {
      if (!t.contains(w)) throw Error("address '" + w + "' of " + x + " is outside the tree domain");
      if (phi.free_vars().count(x)) masks[w] |= c.var_bit(x);
    }
  }
  return c.type_finite(phi, t, masks);
}

}  // namespace wmso
