#pragma once

#include <memory>
#include <string>
#include <vector>

namespace chartlstm {

// Binary constituency tree over token positions. Leaves, read left to right,
// cover positions 0..n-1 in order; every branch has exactly two children.
struct BinaryTree {
  int pos = -1;  // leaf position, -1 for branches
  std::unique_ptr<BinaryTree> left, right;

  bool is_leaf() const { return !left; }

  static std::unique_ptr<BinaryTree> leaf(int position);
  static std::unique_ptr<BinaryTree> branch(std::unique_ptr<BinaryTree> l,
                                            std::unique_ptr<BinaryTree> r);

  int leaf_count() const;
  std::unique_ptr<BinaryTree> clone() const;
  bool same_structure(const BinaryTree& other) const;
};

std::unique_ptr<BinaryTree> build_left_tree(int n);
std::unique_ptr<BinaryTree> build_right_tree(int n);

// "( ( a b ) c )" form; a single-leaf tree prints as the bare token.
std::string print_bracketed(const BinaryTree& tree,
                            const std::vector<std::string>& tokens);

struct ParsedTree {
  std::unique_ptr<BinaryTree> tree;
  std::vector<std::string> tokens;  // lowercased yield, left to right
};

// Inverse of print_bracketed up to whitespace. Rejects unbalanced input and
// nodes with anything other than exactly two children.
ParsedTree parse_bracketed(const std::string& text);

}  // namespace chartlstm
