#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wmso/formula.hpp"
#include "wmso/tree.hpp"

namespace wmso {

struct VaultSpec {
  int m = 1;
  int n = 1;
  int p = 1;
};

/// Leftward chain: m*p nodes labeled `upper`, then n*p nodes labeled `lower`.
FiniteTree make_vault(const VaultSpec& v, const Letter& upper = Letter("a"), const Letter& lower = Letter("b"));

struct T12Spec {
  int which = 1;  // 1 or 2
  int p = 1;
  int depth = 1;  // number of trunk nodes kept
};

/// The trunk is the rightmost path of nd nodes, cut after `depth` nodes.
/// Trunk node k*p carries the vault for k (T1: S_{1,k/2+1} for even k,
/// S_{(k+1)/2+1,1} for odd k; T2: S_{k,k}, with S_{1,1} for k = 0); the
/// other trunk nodes carry a copy of S_{1,1}.
FiniteTree make_T(const T12Spec& spec);

/// Free variable Y: Y is the node set of one member of the nd-language
/// together with its nd ancestors (or empty). Each conjunct rules out one
/// kind of defect between a node and its children.
Formula choice_formula();

/// U(X1..Xk). Efin Y. (a1(X1) & ... & X1 <= Y & ... & "Y is one tree of
/// the nd-language together with its nd ancestors"), for 1 <= k <= 3.
Formula sup_formula(const std::vector<Letter>& letters);

/// max over V in the nd-language of min over `letters` of #_letter(V).
/// Throws Error when the language has more than `limit` members.
int minmax_statistic(const FiniteTree& t, const std::vector<Letter>& letters, std::size_t limit = 100000);

/// Eventual periodicity of a finite sequence: s[i] = s[i + period] for all
/// i >= start within range, witnessed by at least two full periods.
struct Periodicity {
  bool found = false;
  int start = 0;  // 1-based
  int period = 0;
};

struct PeriodReport {
  int m_max = 0, n_max = 0;
  std::vector<Periodicity> rows;     // fixed m, varying n
  std::vector<Periodicity> columns;  // fixed n, varying m
  bool stabilized = false;
  int m0 = 0, n0 = 0, period = 0;  // largest start / period over the box
  std::size_t distinct_types = 0;  // Efin X.psi types seen
  std::size_t psi_types = 0;       // psi-types occurring in them
  std::vector<std::vector<std::string>> table;  // [m-1][n-1]
};

/// Types of Efin X.psi on the chains S_{m,n} (p = 1) for m <= m_max,
/// n <= n_max. `psi` must have exactly one free variable.
PeriodReport chain_period_scan(const Formula& psi, int m_max, int n_max, const Letter& upper = Letter("a"),
                               const Letter& lower = Letter("b"));

std::string print_period_report(const PeriodReport& r);

}  // namespace wmso
