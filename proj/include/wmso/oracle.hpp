#pragma once

#include <cstddef>
#include <vector>

#include "wmso/formula.hpp"
#include "wmso/phi_type.hpp"
#include "wmso/tree.hpp"

namespace wmso {

/// Default bound on |dom(t)| for exhaustive enumeration.
inline constexpr std::size_t kDefaultGuard = 8;

/// The enumeration guard: WMSOTUP_GUARD if set to a positive integer,
/// otherwise `fallback`.
std::size_t enumeration_guard(std::size_t fallback = kDefaultGuard);

/// Direct semantics on a finite tree. Set quantifiers range over all
/// subsets of dom(t); U with k >= 1 is false since |dom(t)| bounds every set.
/// Throws Error if a valuation address is outside dom(t) or |dom(t)| > 62.
bool eval_semantics(const Formula& phi, const FiniteTree& t, const Valuation& v);

/// The type by its definition, enumerating every subset of dom(t) at each
/// quantifier. Throws Error when |dom(t)| exceeds `guard`.
PhiType brute_type(const Formula& phi, const FiniteTree& t, const Valuation& v,
                   std::size_t guard = enumeration_guard());

/// brute_type for several valuations of the same formula and tree.
std::vector<PhiType> brute_types(const Formula& phi, const FiniteTree& t, const std::vector<Valuation>& vs,
                                 std::size_t guard = enumeration_guard());

}  // namespace wmso
