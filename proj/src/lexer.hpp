#pragma once

// Shared cursor for the hand-written text-format parsers. Tracks line and
// column, and skips whitespace and `#` line comments.

#include <cstddef>
#include <string>
#include <string_view>

#include "wmso/error.hpp"
#include "wmso/letter.hpp"

namespace wmso::detail {

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        advance();
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool consume(char c) {
    if (peek() != c) return false;
    advance();
    return true;
  }

  bool consume(std::string_view s) {
    skip_space();
    if (text_.substr(pos_, s.size()) != s) return false;
    for (std::size_t i = 0; i < s.size(); ++i) advance();
    return true;
  }

  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }

  /// Identifier over [A-Za-z0-9_]; empty if none.
  std::string ident() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) advance();
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string expect_ident(const char* what) {
    std::string s = ident();
    if (s.empty()) fail(std::string("expected ") + what);
    return s;
  }

  /// Identifier without consuming it.
  std::string peek_ident() {
    skip_space();
    std::size_t save = pos_, line = line_, col = col_;
    std::string s = ident();
    pos_ = save;
    line_ = line;
    col_ = col;
    return s;
  }

  std::string letter() {
    skip_space();
    std::size_t end = scan_letter(text_, pos_);
    std::string s(text_.substr(pos_, end - pos_));
    if (!s.empty() && !valid_letter_spelling(s)) fail("malformed letter '" + s + "'");
    while (pos_ < end) advance();
    return s;
  }

  [[noreturn]] void fail(const std::string& msg) {
    skip_space();
    std::string what = msg;
    if (pos_ < text_.size()) {
      what += " near '" + std::string(1, text_[pos_]) + "'";
    } else {
      what += " at end of input";
    }
    throw ParseError(what, line_, col_);
  }

  std::size_t line() const { return line_; }
  std::size_t column() const { return col_; }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

}  // namespace wmso::detail
