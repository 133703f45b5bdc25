#include "wmso/phi_type.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "lexer.hpp"
#include "wmso/error.hpp"

namespace wmso {

struct TypeEntry {
  TypeKind kind;
  std::uint8_t atom;
  std::vector<PhiType> kids;
};

namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto x : v) {
      h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

constexpr std::size_t kChunkBits = 12;
constexpr std::size_t kChunkSize = std::size_t{1} << kChunkBits;
constexpr std::size_t kMaxChunks = std::size_t{1} << 16;

}  // namespace

// Entries live in fixed-size chunks that never move, so readers only need
// the (atomic) chunk pointer; insertion is serialized by the mutex.
struct TypeTable {
  std::mutex mu;
  std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, KeyHash> index;
  std::unique_ptr<std::atomic<TypeEntry*>[]> chunks{new std::atomic<TypeEntry*>[kMaxChunks]()};
  std::unordered_map<std::uint64_t, std::uint32_t> pairs;
  std::atomic<std::uint32_t> count{0};

  ~TypeTable() {
    for (std::size_t i = 0; i < kMaxChunks; ++i) delete[] chunks[i].load();
  }

  static TypeTable& get() {
    static TypeTable t;
    return t;
  }

  const TypeEntry& entry(std::uint32_t id) const {
    return chunks[id >> kChunkBits].load(std::memory_order_acquire)[id & (kChunkSize - 1)];
  }

  PhiType intern_pair(PhiType a, PhiType b) {
    std::uint64_t key = std::uint64_t{a.id()} << 32 | b.id();
    {
      std::lock_guard<std::mutex> lock(mu);
      auto it = pairs.find(key);
      if (it != pairs.end()) return PhiType(it->second);
    }
    PhiType r = intern(TypeKind::Pair, 0, {a, b});
    std::lock_guard<std::mutex> lock(mu);
    pairs.emplace(key, r.id());
    return r;
  }

  PhiType intern(TypeKind kind, std::uint8_t atom, std::vector<PhiType> kids) {
    std::vector<std::uint32_t> key;
    key.reserve(kids.size() + 2);
    key.push_back(static_cast<std::uint32_t>(kind));
    key.push_back(atom);
    for (auto k : kids) key.push_back(k.id());
    std::lock_guard<std::mutex> lock(mu);
    auto it = index.find(key);
    if (it != index.end()) return PhiType(it->second);
    std::uint32_t id = count.load(std::memory_order_relaxed);
    std::size_t c = id >> kChunkBits;
    if (c >= kMaxChunks) throw Error("type table exhausted");
    TypeEntry* chunk = chunks[c].load(std::memory_order_relaxed);
    if (!chunk) {
      chunk = new TypeEntry[kChunkSize];
      chunks[c].store(chunk, std::memory_order_release);
    }
    chunk[id & (kChunkSize - 1)] = TypeEntry{kind, atom, std::move(kids)};
    count.store(id + 1, std::memory_order_release);
    index.emplace(std::move(key), id);
    return PhiType(id);
  }
};

PhiType PhiType::boolean(bool b) {
  static const PhiType t = TypeTable::get().intern(TypeKind::Bool, 1, {});
  static const PhiType f = TypeTable::get().intern(TypeKind::Bool, 0, {});
  return b ? t : f;
}

PhiType PhiType::quad(QuadValue q) {
  static const std::array<PhiType, 4> values = {
      TypeTable::get().intern(TypeKind::Quad, 0, {}), TypeTable::get().intern(TypeKind::Quad, 1, {}),
      TypeTable::get().intern(TypeKind::Quad, 2, {}), TypeTable::get().intern(TypeKind::Quad, 3, {})};
  return values[static_cast<std::size_t>(q)];
}

PhiType PhiType::pair(PhiType a, PhiType b) { return TypeTable::get().intern_pair(a, b); }

PhiType PhiType::set(std::vector<PhiType> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  return TypeTable::get().intern(TypeKind::Set, 0, std::move(elems));
}

PhiType PhiType::indexed(std::vector<PhiType> coords) {
  if (coords.empty() || (coords.size() & (coords.size() - 1)) != 0)
    throw Error("indexed type needs 2^k coordinates");
  for (auto c : coords)
    if (c.kind() != TypeKind::Set) throw Error("indexed type coordinates must be sets");
  return TypeTable::get().intern(TypeKind::Indexed, 0, std::move(coords));
}

TypeKind PhiType::kind() const { return TypeTable::get().entry(id_).kind; }

bool PhiType::as_bool() const {
  const auto& e = TypeTable::get().entry(id_);
  if (e.kind != TypeKind::Bool) throw Error("type is not boolean");
  return e.atom != 0;
}

QuadValue PhiType::as_quad() const {
  const auto& e = TypeTable::get().entry(id_);
  if (e.kind != TypeKind::Quad) throw Error("type is not a child-atom label");
  return static_cast<QuadValue>(e.atom);
}

PhiType PhiType::first() const {
  const auto& e = TypeTable::get().entry(id_);
  if (e.kind != TypeKind::Pair) throw Error("type is not a pair");
  return e.kids[0];
}

PhiType PhiType::second() const {
  const auto& e = TypeTable::get().entry(id_);
  if (e.kind != TypeKind::Pair) throw Error("type is not a pair");
  return e.kids[1];
}

std::span<const PhiType> PhiType::elements() const {
  const auto& e = TypeTable::get().entry(id_);
  if (e.kind != TypeKind::Set && e.kind != TypeKind::Indexed) throw Error("type has no elements");
  return e.kids;
}

bool PhiType::contains(PhiType elem) const {
  auto els = elements();
  return std::binary_search(els.begin(), els.end(), elem);
}

std::size_t PhiType::table_size() { return TypeTable::get().count.load(); }

std::string PhiType::str() const {
  thread_local std::unordered_map<std::uint32_t, std::string> cache;
  auto it = cache.find(id_);
  if (it != cache.end()) return it->second;
  const auto& e = TypeTable::get().entry(id_);
  std::string out;
  switch (e.kind) {
    case TypeKind::Bool:
      out = e.atom ? "tt" : "ff";
      break;
    case TypeKind::Quad: {
      static const char* names[] = {"tt", "empty", "root", "ff"};
      out = names[e.atom];
      break;
    }
    case TypeKind::Pair:
      out = "<" + e.kids[0].str() + "," + e.kids[1].str() + ">";
      break;
    case TypeKind::Set: {
      std::vector<std::string> parts;
      for (auto k : e.kids) parts.push_back(k.str());
      std::sort(parts.begin(), parts.end());
      out = "{";
      for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
      out += "}";
      break;
    }
    case TypeKind::Indexed:
      out = "[";
      for (std::size_t i = 0; i < e.kids.size(); ++i) out += (i ? ";" : "") + e.kids[i].str();
      out += "]";
      break;
  }
  cache.emplace(id_, out);
  return out;
}

namespace {

PhiType parse_rec(const Formula& phi, detail::Cursor& in) {
  switch (phi.kind()) {
    case FormulaKind::Letter:
    case FormulaKind::Subset: {
      std::string w = in.ident();
      if (w == "tt") return PhiType::boolean(true);
      if (w == "ff") return PhiType::boolean(false);
      in.fail("expected tt or ff");
    }
    case FormulaKind::Child: {
      std::string w = in.ident();
      if (w == "tt") return PhiType::quad(QuadValue::tt);
      if (w == "empty") return PhiType::quad(QuadValue::empty);
      if (w == "root") return PhiType::quad(QuadValue::root);
      if (w == "ff") return PhiType::quad(QuadValue::ff);
      in.fail("expected tt, empty, root or ff");
    }
    case FormulaKind::And: {
      in.expect('<');
      PhiType a = parse_rec(phi.lhs(), in);
      in.expect(',');
      PhiType b = parse_rec(phi.rhs(), in);
      in.expect('>');
      return PhiType::pair(a, b);
    }
    case FormulaKind::Not:
      return parse_rec(phi.body(), in);
    case FormulaKind::Efin: {
      in.expect('{');
      std::vector<PhiType> elems;
      if (!in.consume('}')) {
        do elems.push_back(parse_rec(phi.body(), in));
        while (in.consume(','));
        in.expect('}');
      }
      return PhiType::set(std::move(elems));
    }
    case FormulaKind::U: {
      std::size_t n = std::size_t{1} << phi.vars().size();
      in.expect('[');
      std::vector<PhiType> coords;
      for (std::size_t i = 0; i < n; ++i) {
        if (i) in.expect(';');
        in.expect('{');
        std::vector<PhiType> elems;
        if (!in.consume('}')) {
          do elems.push_back(parse_rec(phi.body(), in));
          while (in.consume(','));
          in.expect('}');
        }
        coords.push_back(PhiType::set(std::move(elems)));
      }
      in.expect(']');
      return PhiType::indexed(std::move(coords));
    }
  }
  in.fail("bad formula");
}

std::optional<std::uint64_t> checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > (std::uint64_t{1} << 62) / a) return std::nullopt;
  return a * b;
}

std::optional<std::uint64_t> checked_pow2(std::uint64_t e) {
  if (e > 62) return std::nullopt;
  return std::uint64_t{1} << e;
}

}  // namespace

PhiType parse_type(const Formula& phi, std::string_view text) {
  detail::Cursor in(text);
  PhiType t = parse_rec(phi, in);
  if (!in.at_end()) in.fail("trailing input after type");
  return t;
}

std::optional<std::uint64_t> type_space_bound(const Formula& phi) {
  switch (phi.kind()) {
    case FormulaKind::Letter:
    case FormulaKind::Subset:
      return 2;
    case FormulaKind::Child:
      return 4;
    case FormulaKind::And: {
      auto a = type_space_bound(phi.lhs());
      auto b = type_space_bound(phi.rhs());
      if (!a || !b) return std::nullopt;
      return checked_mul(*a, *b);
    }
    case FormulaKind::Not:
      return type_space_bound(phi.body());
    case FormulaKind::Efin: {
      auto a = type_space_bound(phi.body());
      if (!a) return std::nullopt;
      return checked_pow2(*a);
    }
    case FormulaKind::U: {
      auto a = type_space_bound(phi.body());
      if (!a) return std::nullopt;
      auto coords = std::uint64_t{1} << phi.vars().size();
      auto e = checked_mul(*a, coords);
      if (!e) return std::nullopt;
      return checked_pow2(*e);
    }
  }
  return std::nullopt;
}

}  // namespace wmso
