#include "wmso/letter.hpp"

#include <mutex>
#include <unordered_set>

namespace wmso {
namespace {

struct Pool {
  std::mutex mu;
  std::unordered_set<std::string> strings;
};

Pool& pool() {
  static Pool p;
  return p;
}

const std::string* intern(std::string_view s) {
  Pool& p = pool();
  std::lock_guard<std::mutex> lock(p.mu);
  return &*p.strings.emplace(s).first;
}

bool is_open(char c) { return c == '{' || c == '<' || c == '['; }
bool is_close(char c) { return c == '}' || c == '>' || c == ']'; }
bool is_inner(char c) { return is_ident_char(c) || c == '|' || c == ',' || c == ';' || c == ':' || c == '~'; }

}  // namespace

Letter::Letter() {
  static const std::string* empty = intern("");
  spelling_ = empty;
}

Letter::Letter(std::string_view spelling) : spelling_(intern(spelling)) {}

std::strong_ordering Letter::operator<=>(const Letter& o) const {
  if (spelling_ == o.spelling_) return std::strong_ordering::equal;
  return spelling_->compare(*o.spelling_) < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
}

std::vector<std::string_view> Letter::components() const {
  std::vector<std::string_view> out;
  std::string_view s = *spelling_;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (is_open(c)) ++depth;
    else if (is_close(c)) --depth;
    else if (c == '|' && depth == 0) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(s.substr(start));
  return out;
}

Letter Letter::base() const {
  std::string_view s = *spelling_;
  std::size_t bar = s.find('|');
  return bar == std::string_view::npos ? *this : Letter(s.substr(0, bar));
}

Letter Letter::append(std::string_view component) const {
  std::string s = *spelling_;
  s.push_back('|');
  s.append(component);
  return Letter(s);
}

bool Letter::is_tuple() const { return spelling_->find('|') != std::string::npos; }

Letter nd_letter() {
  static const Letter l("nd");
  return l;
}

Letter nd_bot_letter() {
  static const Letter l("nd_bot");
  return l;
}

bool is_reserved(const Letter& l) { return !l.str().empty() && l.str()[0] == '_'; }

std::size_t scan_letter(std::string_view text, std::size_t pos) {
  std::size_t i = pos;
  int depth = 0;
  while (i < text.size()) {
    char c = text[i];
    if (is_open(c)) {
      ++depth;
    } else if (is_close(c)) {
      if (depth == 0) break;
      --depth;
    } else if (depth > 0) {
      if (!is_inner(c)) break;
    } else if (!is_ident_char(c) && c != '|') {
      break;
    }
    ++i;
  }
  if (depth != 0) return pos;
  return i;
}

bool valid_letter_spelling(std::string_view s) {
  if (s.empty() || s.front() == '|' || s.back() == '|') return false;
  return scan_letter(s, 0) == s.size();
}

}  // namespace wmso
