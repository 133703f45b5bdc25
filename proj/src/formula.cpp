#include "wmso/formula.hpp"

#include <algorithm>

#include "lexer.hpp"
#include "wmso/error.hpp"

namespace wmso {

Formula Formula::letter(Letter a, Variable x) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Letter;
  n->letter = a;
  n->free = {x};
  n->vars = {std::move(x)};
  return Formula(std::move(n));
}

Formula Formula::child(Dir d, Variable x, Variable y) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Child;
  n->dir = d;
  n->free = {x, y};
  n->vars = {std::move(x), std::move(y)};
  return Formula(std::move(n));
}

Formula Formula::subset(Variable x, Variable y) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Subset;
  n->free = {x, y};
  n->vars = {std::move(x), std::move(y)};
  return Formula(std::move(n));
}

Formula Formula::conj(Formula a, Formula b) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::And;
  n->free = a.free_vars();
  n->free.insert(b.free_vars().begin(), b.free_vars().end());
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return Formula(std::move(n));
}

Formula Formula::neg(Formula a) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Not;
  n->free = a.free_vars();
  n->lhs = std::move(a);
  return Formula(std::move(n));
}

Formula Formula::efin(Variable x, Formula body) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Efin;
  n->free = body.free_vars();
  n->free.erase(x);
  n->vars = {std::move(x)};
  n->lhs = std::move(body);
  return Formula(std::move(n));
}

Formula Formula::unbounded(std::vector<Variable> xs, Formula body) {
  if (xs.empty()) throw Error("U must bind at least one variable");
  std::vector<Variable> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error("duplicate variable in U tuple");
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::U;
  n->free = body.free_vars();
  for (const auto& x : xs) n->free.erase(x);
  n->vars = std::move(xs);
  n->lhs = std::move(body);
  return Formula(std::move(n));
}

std::set<Letter> Formula::letters() const {
  std::set<Letter> out;
  switch (kind()) {
    case FormulaKind::Letter:
      out.insert(atom_letter());
      break;
    case FormulaKind::And: {
      out = lhs().letters();
      auto r = rhs().letters();
      out.insert(r.begin(), r.end());
      break;
    }
    case FormulaKind::Not:
    case FormulaKind::Efin:
    case FormulaKind::U:
      out = body().letters();
      break;
    default:
      break;
  }
  return out;
}

int Formula::quantifier_depth() const {
  switch (kind()) {
    case FormulaKind::And:
      return std::max(lhs().quantifier_depth(), rhs().quantifier_depth());
    case FormulaKind::Not:
      return body().quantifier_depth();
    case FormulaKind::Efin:
    case FormulaKind::U:
      return 1 + body().quantifier_depth();
    default:
      return 0;
  }
}

std::size_t Formula::size() const {
  switch (kind()) {
    case FormulaKind::And:
      return 1 + lhs().size() + rhs().size();
    case FormulaKind::Not:
    case FormulaKind::Efin:
    case FormulaKind::U:
      return 1 + body().size();
    default:
      return 1;
  }
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind || x.vars != y.vars) return false;
  switch (x.kind) {
    case FormulaKind::Letter:
      return x.letter == y.letter;
    case FormulaKind::Child:
      return x.dir == y.dir;
    case FormulaKind::Subset:
      return true;
    case FormulaKind::And:
      return x.lhs == y.lhs && x.rhs == y.rhs;
    default:
      return x.lhs == y.lhs;
  }
}

// --- valuations -----------------------------------------------------------

const std::set<Address>& Valuation::operator()(const Variable& x) const {
  static const std::set<Address> none;
  auto it = sets_.find(x);
  return it == sets_.end() ? none : it->second;
}

void Valuation::set(const Variable& x, std::set<Address> nodes) {
  if (nodes.empty()) sets_.erase(x);
  else sets_[x] = std::move(nodes);
}

Valuation Valuation::with(const Variable& x, std::set<Address> nodes) const {
  Valuation v = *this;
  v.set(x, std::move(nodes));
  return v;
}

Valuation Valuation::restrict(std::string_view w) const {
  Valuation out;
  for (const auto& [x, nodes] : sets_) {
    std::set<Address> r;
    for (const auto& a : nodes)
      if (a.size() >= w.size() && std::string_view(a).substr(0, w.size()) == w) r.insert(a.substr(w.size()));
    out.set(x, std::move(r));
  }
  return out;
}

VarSet Valuation::root_vars() const {
  VarSet out;
  for (const auto& [x, nodes] : sets_)
    if (nodes.count("")) out.insert(x);
  return out;
}

// --- parser ---------------------------------------------------------------

namespace {

bool is_keyword(const std::string& s) { return s == "Efin" || s == "U" || s == "childL" || s == "childR"; }

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : in_(text) {}

  Formula parse() {
    Formula f = conjunction();
    if (!in_.at_end()) in_.fail("unexpected input");
    return f;
  }

 private:
  Variable variable() {
    std::string v = in_.expect_ident("a variable");
    if (is_keyword(v)) in_.fail("keyword '" + v + "' used as a variable");
    return v;
  }

  Formula conjunction() {
    Formula f = unary();
    while (in_.consume('&')) f = Formula::conj(f, unary());
    return f;
  }

  Formula unary() {
    if (in_.consume('!')) return Formula::neg(unary());
    if (in_.consume('(')) {
      Formula f = conjunction();
      in_.expect(')');
      return f;
    }
    std::string head = in_.peek_ident();
    if (head.empty()) in_.fail("expected a formula");
    if (head == "Efin") {
      in_.ident();
      Variable x = variable();
      in_.expect('.');
      return Formula::efin(x, conjunction());
    }
    if (head == "U") {
      in_.ident();
      std::size_t line = in_.line(), col = in_.column();
      in_.expect('(');
      std::vector<Variable> xs{variable()};
      while (in_.consume(',')) xs.push_back(variable());
      in_.expect(')');
      in_.expect('.');
      std::vector<Variable> sorted = xs;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ParseError("duplicate variable in U tuple", line, col);
      return Formula::unbounded(std::move(xs), conjunction());
    }
    std::string first = in_.ident();
    if (in_.consume('(')) {
      if (is_keyword(first)) in_.fail("keyword '" + first + "' used as a letter");
      Variable x = variable();
      in_.expect(')');
      return Formula::letter(Letter(first), x);
    }
    if (is_keyword(first)) in_.fail("keyword '" + first + "' used as a variable");
    std::string op = in_.peek_ident();
    if (op == "childL" || op == "childR") {
      in_.ident();
      return Formula::child(op == "childL" ? Dir::L : Dir::R, first, variable());
    }
    if (in_.consume("<=")) return Formula::subset(first, variable());
    in_.fail("expected 'childL', 'childR', '<=' or '('");
  }

  detail::Cursor in_;
};

enum class Slot { Top, ConjLeft, ConjRight, NotArg };

void print_rec(const Formula& f, Slot slot, bool trailing, std::string& out) {
  switch (f.kind()) {
    case FormulaKind::Letter:
      out += f.atom_letter().str() + "(" + f.vars()[0] + ")";
      return;
    case FormulaKind::Child:
      out += f.vars()[0] + (f.dir() == Dir::L ? " childL " : " childR ") + f.vars()[1];
      return;
    case FormulaKind::Subset:
      out += f.vars()[0] + " <= " + f.vars()[1];
      return;
    case FormulaKind::And: {
      bool wrap = slot == Slot::ConjRight || slot == Slot::NotArg;
      bool tail = wrap ? false : trailing;
      if (wrap) out += '(';
      print_rec(f.lhs(), Slot::ConjLeft, true, out);
      out += " & ";
      print_rec(f.rhs(), Slot::ConjRight, tail, out);
      if (wrap) out += ')';
      return;
    }
    case FormulaKind::Not:
      out += '!';
      print_rec(f.body(), Slot::NotArg, trailing, out);
      return;
    case FormulaKind::Efin:
    case FormulaKind::U: {
      if (trailing) out += '(';
      if (f.kind() == FormulaKind::Efin) {
        out += "Efin " + f.vars()[0] + ". ";
      } else {
        out += "U(";
        for (std::size_t i = 0; i < f.vars().size(); ++i) out += (i ? "," : "") + f.vars()[i];
        out += "). ";
      }
      print_rec(f.body(), Slot::Top, false, out);
      if (trailing) out += ')';
      return;
    }
  }
}

}  // namespace

Formula parse_formula(std::string_view text) { return FormulaParser(text).parse(); }

std::string print_formula(const Formula& f) {
  std::string out;
  print_rec(f, Slot::Top, false, out);
  return out;
}

}  // namespace wmso
