#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace wmso {

/// An alphabet letter. Letters are interned: copies are a pointer, equality
/// is pointer equality, ordering is by spelling.
///
/// Decorated letters (tuples produced by reflections and transducers) are
/// spelled `base|dec1|dec2|...`. A decoration may contain bracket groups
/// (`{...}`, `<...>`, `[...]`) whose interior is opaque to the splitter.
class Letter {
 public:
  Letter();
  explicit Letter(std::string_view spelling);

  const std::string& str() const { return *spelling_; }
  bool operator==(const Letter& o) const { return spelling_ == o.spelling_; }
  std::strong_ordering operator<=>(const Letter& o) const;

  std::size_t hash() const { return std::hash<const void*>{}(spelling_); }

  /// Top-level `|`-separated components.
  std::vector<std::string_view> components() const;
  /// First component (the letter of the formula alphabet).
  Letter base() const;
  Letter append(std::string_view component) const;
  bool is_tuple() const;

 private:
  const std::string* spelling_;
};

/// Built-in letters of the nondeterministic encoding.
Letter nd_letter();
Letter nd_bot_letter();

/// Letters reserved for internal constructions start with `_`.
bool is_reserved(const Letter& l);

/// True if `s` is a well-formed letter spelling (see Letter).
bool valid_letter_spelling(std::string_view s);

/// Scans a letter spelling starting at `pos`; returns the end position
/// (== pos when no letter starts there).
std::size_t scan_letter(std::string_view text, std::size_t pos);

/// Plain identifier characters.
inline bool is_ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

}  // namespace wmso

template <>
struct std::hash<wmso::Letter> {
  std::size_t operator()(const wmso::Letter& l) const noexcept { return l.hash(); }
};
