#include "wmso/tree.hpp"

#include <algorithm>
#include <functional>

#include "lexer.hpp"

namespace wmso {

FiniteTree FiniteTree::node(Letter label, FiniteTree left, FiniteTree right) {
  return FiniteTree(std::make_shared<const Node>(Node{label, std::move(left), std::move(right)}));
}

const Letter& FiniteTree::label() const {
  if (!root_) throw Error("label of the empty tree");
  return root_->label;
}

const FiniteTree& FiniteTree::left() const {
  static const FiniteTree none;
  return root_ ? root_->left : none;
}

const FiniteTree& FiniteTree::right() const {
  static const FiniteTree none;
  return root_ ? root_->right : none;
}

std::size_t FiniteTree::size() const {
  if (!root_) return 0;
  return 1 + root_->left.size() + root_->right.size();
}

std::size_t FiniteTree::height() const {
  if (!root_) return 0;
  return 1 + std::max(root_->left.height(), root_->right.height());
}

std::size_t FiniteTree::count(const Letter& l) const {
  if (!root_) return 0;
  return (root_->label == l ? 1 : 0) + root_->left.count(l) + root_->right.count(l);
}

FiniteTree FiniteTree::subtree(std::string_view v) const {
  const FiniteTree* t = this;
  for (char c : v) {
    if (t->empty()) return {};
    t = c == 'L' ? &t->left() : &t->right();
  }
  return *t;
}

std::vector<Address> FiniteTree::domain() const {
  std::vector<Address> out;
  Address cur;
  std::function<void(const FiniteTree&)> walk = [&](const FiniteTree& t) {
    if (t.empty()) return;
    out.push_back(cur);
    cur.push_back('L');
    walk(t.left());
    cur.back() = 'R';
    walk(t.right());
    cur.pop_back();
  };
  walk(*this);
  return out;
}

bool operator==(const FiniteTree& a, const FiniteTree& b) {
  if (a.root_ == b.root_) return true;
  if (!a.root_ || !b.root_) return false;
  return a.root_->label == b.root_->label && a.root_->left == b.root_->left && a.root_->right == b.root_->right;
}

namespace {

FiniteTree parse_node(detail::Cursor& in) {
  if (in.consume('.')) return {};
  std::string name = in.letter();
  if (name.empty()) in.fail("expected a letter or '.'");
  if (!in.consume('(')) return FiniteTree::node(Letter(name));
  FiniteTree l = parse_node(in);
  in.expect(',');
  FiniteTree r = parse_node(in);
  in.expect(')');
  return FiniteTree::node(Letter(name), std::move(l), std::move(r));
}

void print_node(const FiniteTree& t, std::string& out) {
  if (t.empty()) {
    out += '.';
    return;
  }
  out += t.label().str();
  if (t.left().empty() && t.right().empty()) return;
  out += '(';
  print_node(t.left(), out);
  out += ',';
  print_node(t.right(), out);
  out += ')';
}

}  // namespace

FiniteTree parse_tree(std::string_view text) {
  detail::Cursor in(text);
  FiniteTree t = parse_node(in);
  if (!in.at_end()) in.fail("trailing input");
  return t;
}

std::string print_tree(const FiniteTree& t) {
  std::string out;
  print_node(t, out);
  return out;
}

}  // namespace wmso
