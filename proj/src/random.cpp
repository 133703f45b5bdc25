#include "wmso/random.hpp"

#include <algorithm>
#include <string>

#include "wmso/error.hpp"

namespace wmso {

namespace {

template <class T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

void collect_addresses(const FiniteTree& t, const Address& at, std::vector<Address>& out) {
  if (t.empty()) return;
  out.push_back(at);
  collect_addresses(t.left(), at + "L", out);
  collect_addresses(t.right(), at + "R", out);
}

}  // namespace

FiniteTree random_tree(Rng& rng, std::size_t nodes, const std::vector<Letter>& letters) {
  if (nodes == 0) return {};
  std::size_t left = std::uniform_int_distribution<std::size_t>(0, nodes - 1)(rng);
  Letter a = pick(rng, letters);
  FiniteTree l = random_tree(rng, left, letters);
  FiniteTree r = random_tree(rng, nodes - 1 - left, letters);
  return FiniteTree::node(a, l, r);
}

std::vector<FiniteTree> all_trees(std::size_t nodes, const std::vector<Letter>& letters) {
  if (nodes == 0) return {FiniteTree()};
  std::vector<FiniteTree> out;
  for (std::size_t left = 0; left < nodes; ++left) {
    auto ls = all_trees(left, letters);
    auto rs = all_trees(nodes - 1 - left, letters);
    for (const auto& a : letters)
      for (const auto& l : ls)
        for (const auto& r : rs) out.push_back(FiniteTree::node(a, l, r));
  }
  return out;
}

RegularTree random_regular_tree(Rng& rng, std::size_t states, const std::vector<Letter>& letters, double leaf_bias) {
  if (states == 0) return parse_regular_tree("root .;");
  auto arg = [&]() -> std::string {
    if (coin(rng, leaf_bias)) return ".";
    return "q" + std::to_string(std::uniform_int_distribution<std::size_t>(0, states - 1)(rng));
  };
  std::string text = "root q0;\n";
  for (std::size_t i = 0; i < states; ++i) {
    std::string l = arg();
    std::string r = arg();
    text += "q" + std::to_string(i) + " = " + pick(rng, letters).str() + "(" + l + ", " + r + ");\n";
  }
  return parse_regular_tree(text);
}

namespace {

struct FormulaGen {
  Rng& rng;
  const FormulaShape& shape;

  Formula atom(const std::vector<Variable>& scope) {
    const Variable& x = pick(rng, scope);
    const Variable& y = pick(rng, scope);
    switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
      case 0:
      case 1:
        return Formula::letter(pick(rng, shape.letters), x);
      case 2:
        return Formula::child(coin(rng, 0.5) ? Dir::L : Dir::R, x, y);
      default:
        return Formula::subset(x, y);
    }
  }

  Formula quantifier(int depth, std::vector<Variable> scope, int size) {
    std::vector<Variable> bound;
    if (shape.max_k > 0 && coin(rng, 0.3)) {
      std::size_t k = std::uniform_int_distribution<std::size_t>(1, std::min(shape.max_k, shape.pool.size()))(rng);
      std::vector<Variable> names = shape.pool;
      std::shuffle(names.begin(), names.end(), rng);
      bound.assign(names.begin(), names.begin() + static_cast<std::ptrdiff_t>(k));
    } else {
      bound.push_back(pick(rng, shape.pool));
    }
    for (const auto& x : bound)
      if (std::find(scope.begin(), scope.end(), x) == scope.end()) scope.push_back(x);
    Formula body = gen(depth - 1, scope, std::max(1, size - 1));
    if (bound.size() == 1 && !(shape.max_k > 0 && coin(rng, 0.3))) return Formula::efin(bound[0], body);
    return Formula::unbounded(bound, body);
  }

  Formula gen(int depth, const std::vector<Variable>& scope, int size) {
    if (scope.empty()) {
      if (depth <= 0) throw Error("random_formula: no variable in scope and no quantifier left");
      return quantifier(depth, scope, size);
    }
    if (size <= 1) return depth > 0 && coin(rng, 0.2) ? quantifier(depth, scope, 1) : atom(scope);
    double r = std::uniform_real_distribution<double>(0, 1)(rng);
    if (r < 0.15) return Formula::neg(gen(depth, scope, size));
    if (r < 0.5) {
      int left = std::uniform_int_distribution<int>(1, size - 1)(rng);
      return Formula::conj(gen(depth, scope, left), gen(depth, scope, size - left));
    }
    if (r < 0.8 && depth > 0) return quantifier(depth, scope, size);
    return atom(scope);
  }
};

}  // namespace

Formula random_formula(Rng& rng, const FormulaShape& shape) {
  FormulaGen g{rng, shape};
  return g.gen(shape.quantifier_depth, shape.free, shape.size);
}

std::set<Address> random_subset(Rng& rng, const FiniteTree& t) {
  std::vector<Address> dom;
  collect_addresses(t, "", dom);
  std::set<Address> out;
  for (const auto& a : dom)
    if (coin(rng, 0.4)) out.insert(a);
  return out;
}

DerivationGrammar random_grammar(Rng& rng, std::size_t nonterminals, const std::vector<Letter>& letters) {
  DerivationGrammar g;
  std::size_t n = std::uniform_int_distribution<std::size_t>(1, std::max<std::size_t>(1, nonterminals))(rng);
  for (std::size_t i = 0; i < n; ++i) g.add("N" + std::to_string(i));
  auto any_nt = std::uniform_int_distribution<int>(0, static_cast<int>(n) - 1);
  for (std::size_t i = 0; i < n; ++i) {
    int prods = std::uniform_int_distribution<int>(0, 3)(rng);
    for (int p = 0; p < prods; ++p) {
      Production pr;
      int emits = std::uniform_int_distribution<int>(0, 2)(rng);
      for (int e = 0; e < emits; ++e) pr.emit.push_back(pick(rng, letters));
      std::sort(pr.emit.begin(), pr.emit.end());
      int kids = std::uniform_int_distribution<int>(0, 2)(rng);
      for (int c = 0; c < kids; ++c) pr.children.push_back(any_nt(rng));
      g.productions[i].push_back(std::move(pr));
    }
  }
  g.start = 0;
  return g;
}

}  // namespace wmso
