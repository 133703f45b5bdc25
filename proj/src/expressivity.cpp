#include "wmso/expressivity.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "wmso/compose.hpp"
#include "wmso/error.hpp"
#include "wmso/sup.hpp"

namespace wmso {

FiniteTree make_vault(const VaultSpec& v, const Letter& upper, const Letter& lower) {
  if (v.m < 1 || v.n < 1 || v.p < 1) throw Error("vault parameters must be positive");
  FiniteTree t;
  for (int i = 0; i < v.n * v.p; ++i) t = FiniteTree::node(lower, t);
  for (int i = 0; i < v.m * v.p; ++i) t = FiniteTree::node(upper, t);
  return t;
}

FiniteTree make_T(const T12Spec& spec) {
  if (spec.which != 1 && spec.which != 2) throw Error("tree must be T1 or T2");
  if (spec.p < 1) throw Error("p must be positive");
  if (spec.depth < 1) throw Error("depth must be positive");
  auto attached = [&](int index) -> VaultSpec {
    if (index % spec.p != 0) return {1, 1, spec.p};
    int k = index / spec.p;
    if (spec.which == 1) return k % 2 == 0 ? VaultSpec{1, k / 2 + 1, spec.p} : VaultSpec{(k + 1) / 2 + 1, 1, spec.p};
    return k == 0 ? VaultSpec{1, 1, spec.p} : VaultSpec{k, k, spec.p};
  };
  FiniteTree trunk;
  for (int i = spec.depth - 1; i >= 0; --i) trunk = FiniteTree::node(nd_letter(), make_vault(attached(i)), trunk);
  return trunk;
}

Formula choice_formula() {
  auto any = [](const std::string& a, const std::string& b) { return "!(!(" + a + ") & !(" + b + "))"; };
  std::string child = any("P childL C", "P childR C");
  std::string nd = nd_letter().str(), nd_bot = nd_bot_letter().str();
  std::vector<std::string> violations = {
      "Efin P. P <= Y & " + nd_bot + "(P) & (Efin C. !(P <= C))",
      "Efin C. C <= Y & (Efin P. !(P <= Y) & " + child + ")",
      "Efin C. !(C <= Y) & (Efin P. P <= Y & !" + nd + "(P) & " + child + ")",
      "Efin C. C <= Y & (Efin P. " + nd + "(P) & P childL C & (Efin D. P childR D & D <= Y))",
      "Efin P. P <= Y & " + nd + "(P) & (Efin C. !(C <= Y) & P childL C & (Efin D. !(D <= Y) & P childR D))",
  };
  std::string text;
  for (const auto& v : violations) text += (text.empty() ? "!(" : " & !(") + v + ")";
  return parse_formula(text);
}

Formula sup_formula(const std::vector<Letter>& letters) {
  if (letters.empty() || letters.size() > 3) throw Error("sup_formula needs between 1 and 3 letters");
  std::set<Letter> distinct(letters.begin(), letters.end());
  if (distinct.size() != letters.size()) throw Error("sup_formula letters must be distinct");
  std::string vars, body;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    std::string x = "X" + std::to_string(i + 1);
    vars += (i ? "," : "") + x;
    body += letters[i].str() + "(" + x + ") & ";
  }
  for (std::size_t i = 0; i < letters.size(); ++i) body += "X" + std::to_string(i + 1) + " <= Y & ";
  body += "(" + print_formula(choice_formula()) + ")";
  return parse_formula("U(" + vars + "). Efin Y. (" + body + ")");
}

int minmax_statistic(const FiniteTree& t, const std::vector<Letter>& letters, std::size_t limit) {
  NdLanguage lang = nd_language(t, limit + 1);
  if (!lang.complete || lang.trees.size() > limit)
    throw Error("nd-language exceeds the enumeration limit of " + std::to_string(limit));
  int best = -1;
  for (const auto& v : lang.trees) {
    int low = std::numeric_limits<int>::max();
    for (const auto& a : letters) low = std::min(low, static_cast<int>(v.count(a)));
    if (letters.empty()) low = 0;
    best = std::max(best, low);
  }
  return best;
}

namespace {

Periodicity find_period(const std::vector<std::string>& s) {
  const int n = static_cast<int>(s.size());
  for (int period = 1; 2 * period <= n; ++period)
    for (int start = 1; start + 2 * period - 1 <= n; ++start) {
      bool ok = true;
      for (int i = start; i + period <= n && ok; ++i) ok = s[i - 1] == s[i - 1 + period];
      if (ok) return {true, start, period};
    }
  return {};
}

}  // namespace

PeriodReport chain_period_scan(const Formula& psi, int m_max, int n_max, const Letter& upper, const Letter& lower) {
  if (psi.free_vars().size() != 1) throw Error("scan formula must have exactly one free variable");
  if (m_max < 1 || n_max < 1) throw Error("scan box must be nonempty");
  Formula phi = Formula::efin(*psi.free_vars().begin(), psi);
  PeriodReport rep;
  rep.m_max = m_max;
  rep.n_max = n_max;
  std::set<PhiType> outer, inner;
  rep.table.assign(m_max, std::vector<std::string>(n_max));
  for (int m = 1; m <= m_max; ++m)
    for (int n = 1; n <= n_max; ++n) {
      PhiType t = compute_type_finite(phi, make_vault({m, n, 1}, upper, lower), {});
      outer.insert(t);
      for (PhiType e : t.elements()) inner.insert(e);
      rep.table[m - 1][n - 1] = t.str();
    }
  rep.distinct_types = outer.size();
  rep.psi_types = inner.size();
  rep.stabilized = true;
  auto fold = [&](const Periodicity& p, int& start) {
    if (!p.found) {
      rep.stabilized = false;
      return;
    }
    start = std::max(start, p.start);
    rep.period = std::max(rep.period, p.period);
  };
  for (int m = 1; m <= m_max; ++m) {
    rep.rows.push_back(find_period(rep.table[m - 1]));
    fold(rep.rows.back(), rep.n0);
  }
  for (int n = 1; n <= n_max; ++n) {
    std::vector<std::string> col;
    for (int m = 1; m <= m_max; ++m) col.push_back(rep.table[m - 1][n - 1]);
    rep.columns.push_back(find_period(col));
    fold(rep.columns.back(), rep.m0);
  }
  return rep;
}

std::string print_period_report(const PeriodReport& r) {
  std::string out = "# kind index start period\n";
  auto row = [](const char* kind, std::size_t i, const Periodicity& p) {
    return std::string(kind) + " " + std::to_string(i + 1) + " " + (p.found ? std::to_string(p.start) : "-") + " " +
           (p.found ? std::to_string(p.period) : "-") + "\n";
  };
  for (std::size_t i = 0; i < r.rows.size(); ++i) out += row("m", i, r.rows[i]);
  for (std::size_t i = 0; i < r.columns.size(); ++i) out += row("n", i, r.columns[i]);
  out += "stabilized " + std::string(r.stabilized ? "yes" : "no") + "\n";
  out += "m0 " + std::to_string(r.m0) + "\nn0 " + std::to_string(r.n0) + "\nperiod " + std::to_string(r.period) + "\n";
  out += "types " + std::to_string(r.distinct_types) + "\npsi_types " + std::to_string(r.psi_types) + "\n";
  return out;
}

}  // namespace wmso
