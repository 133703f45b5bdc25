#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wmso/formula.hpp"

namespace wmso {

enum class TypeKind : std::uint8_t { Bool, Quad, Pair, Set, Indexed };

/// Labels of the type of a `X childL/childR Y` atom.
enum class QuadValue : std::uint8_t { tt, empty, root, ff };

/// A value of the type space of some formula: a boolean (letter and
/// inclusion atoms), a four-valued label (child atoms), a pair
/// (conjunction), a set of body types (Efin) or a tuple of 2^k sets indexed
/// by subsets of [1,k] (U).
///
/// Values are hash-consed in a process-wide table, so equality and hashing
/// are O(1). Set elements are kept deduplicated in a canonical internal
/// order. The table is safe for concurrent use.
class PhiType {
 public:
  PhiType() = default;

  static PhiType boolean(bool b);
  static PhiType quad(QuadValue q);
  static PhiType pair(PhiType a, PhiType b);
  static PhiType set(std::vector<PhiType> elems);
  /// `coords[I]` is the coordinate for the subset I given as a bitmask
  /// (bit i-1 set iff i in I); every coordinate must be a Set.
  static PhiType indexed(std::vector<PhiType> coords);

  bool valid() const { return id_ != kInvalid; }
  TypeKind kind() const;
  bool as_bool() const;
  QuadValue as_quad() const;
  PhiType first() const;
  PhiType second() const;
  /// Elements of a Set, or coordinates of an Indexed value.
  std::span<const PhiType> elements() const;
  bool contains(PhiType elem) const;
  PhiType coord(std::size_t subset_mask) const { return elements()[subset_mask]; }

  std::uint32_t id() const { return id_; }
  bool operator==(const PhiType& o) const { return id_ == o.id_; }
  /// Internal (interning) order; deterministic for a deterministic run.
  bool operator<(const PhiType& o) const { return id_ < o.id_; }

  /// Canonical text: `tt`/`ff`, `tt|empty|root|ff` values, `<a,b>`,
  /// `{x,y}` with elements sorted by spelling, `[c0;c1;...]` by subset mask.
  std::string str() const;

  /// Number of values interned so far.
  static std::size_t table_size();

 private:
  static constexpr std::uint32_t kInvalid = 0xffffffffu;
  explicit PhiType(std::uint32_t id) : id_(id) {}
  friend struct TypeTable;
  std::uint32_t id_ = kInvalid;
};

/// Parses the canonical text of a type of `phi`.
PhiType parse_type(const Formula& phi, std::string_view text);

/// Upper bound on the size of the type space of `phi`, or nullopt when it
/// exceeds 2^62.
std::optional<std::uint64_t> type_space_bound(const Formula& phi);

}  // namespace wmso

template <>
struct std::hash<wmso::PhiType> {
  std::size_t operator()(const wmso::PhiType& t) const noexcept { return std::hash<std::uint32_t>{}(t.id()); }
};
