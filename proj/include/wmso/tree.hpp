#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "wmso/letter.hpp"

namespace wmso {

enum class Dir { L, R };

/// A node address: a word over {L,R}; the root is the empty word.
using Address = std::string;

/// Finite binary tree with optional children. The default value is the
/// empty tree (no root). Nodes are immutable and shared between trees.
class FiniteTree {
 public:
  FiniteTree() = default;

  static FiniteTree node(Letter label, FiniteTree left = {}, FiniteTree right = {});

  bool empty() const { return !root_; }
  const Letter& label() const;
  const FiniteTree& left() const;
  const FiniteTree& right() const;
  const FiniteTree& child(Dir d) const { return d == Dir::L ? left() : right(); }

  std::size_t size() const;
  std::size_t height() const;
  std::size_t count(const Letter& l) const;

  /// T restricted to the subtree at `v`; empty if `v` is outside the domain.
  FiniteTree subtree(std::string_view v) const;
  bool contains(std::string_view v) const { return !subtree(v).empty(); }

  /// All node addresses in lexicographic order (L < R), i.e. preorder.
  std::vector<Address> domain() const;

  /// Identity of the shared root node; used by memo tables.
  const void* id() const { return root_.get(); }

  friend bool operator==(const FiniteTree& a, const FiniteTree& b);

 private:
  struct Node;
  explicit FiniteTree(std::shared_ptr<const Node> n) : root_(std::move(n)) {}
  std::shared_ptr<const Node> root_;
};

struct FiniteTree::Node {
  Letter label;
  FiniteTree left;
  FiniteTree right;
};

/// `tree := "." | letter | letter "(" tree "," tree ")"`.
FiniteTree parse_tree(std::string_view text);
std::string print_tree(const FiniteTree& t);

}  // namespace wmso
