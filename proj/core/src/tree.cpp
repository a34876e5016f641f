#include "chartlstm/tree.hpp"

#include <stdexcept>

#include "chartlstm/data.hpp"

namespace chartlstm {

std::unique_ptr<BinaryTree> BinaryTree::leaf(int position) {
  auto t = std::make_unique<BinaryTree>();
  t->pos = position;
  return t;
}

std::unique_ptr<BinaryTree> BinaryTree::branch(std::unique_ptr<BinaryTree> l,
                                               std::unique_ptr<BinaryTree> r) {
  auto t = std::make_unique<BinaryTree>();
  t->left = std::move(l);
  t->right = std::move(r);
  return t;
}

int BinaryTree::leaf_count() const {
  if (is_leaf()) return 1;
  return left->leaf_count() + right->leaf_count();
}

std::unique_ptr<BinaryTree> BinaryTree::clone() const {
  if (is_leaf()) return leaf(pos);
  return branch(left->clone(), right->clone());
}

bool BinaryTree::same_structure(const BinaryTree& other) const {
  if (is_leaf() != other.is_leaf()) return false;
  if (is_leaf()) return pos == other.pos;
  return left->same_structure(*other.left) &&
         right->same_structure(*other.right);
}

std::unique_ptr<BinaryTree> build_left_tree(int n) {
  if (n < 1) throw std::invalid_argument("build_left_tree: n must be >= 1");
  auto t = BinaryTree::leaf(0);
  for (int i = 1; i < n; ++i)
    t = BinaryTree::branch(std::move(t), BinaryTree::leaf(i));
  return t;
}

std::unique_ptr<BinaryTree> build_right_tree(int n) {
  if (n < 1) throw std::invalid_argument("build_right_tree: n must be >= 1");
  auto t = BinaryTree::leaf(n - 1);
  for (int i = n - 2; i >= 0; --i)
    t = BinaryTree::branch(BinaryTree::leaf(i), std::move(t));
  return t;
}

std::string print_bracketed(const BinaryTree& tree,
                            const std::vector<std::string>& tokens) {
  if (tree.is_leaf()) return tokens.at(static_cast<size_t>(tree.pos));
  return "( " + print_bracketed(*tree.left, tokens) + " " +
         print_bracketed(*tree.right, tokens) + " )";
}

namespace {

struct BracketParser {
  const std::vector<std::string>& toks;
  size_t at = 0;
  std::vector<std::string> yield;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error("parse_bracketed: " + what + " at token " +
                             std::to_string(at));
  }

  const std::string& peek() const {
    if (at >= toks.size()) {
      throw std::runtime_error(
          "parse_bracketed: unexpected end of input at token " +
          std::to_string(at));
    }
    return toks[at];
  }

  std::unique_ptr<BinaryTree> node() {
    if (peek() == ")") fail("unexpected ')'");
    if (peek() != "(") {
      yield.push_back(toks[at]);
      ++at;
      return BinaryTree::leaf(static_cast<int>(yield.size()) - 1);
    }
    ++at;  // consume '('
    std::vector<std::unique_ptr<BinaryTree>> children;
    while (peek() != ")") children.push_back(node());
    ++at;  // consume ')'
    if (children.size() != 2)
      fail("binary trees only, node has " + std::to_string(children.size()) +
           " children");
    return BinaryTree::branch(std::move(children[0]), std::move(children[1]));
  }
};

}  // namespace

ParsedTree parse_bracketed(const std::string& text) {
  BracketParser p{tokenize(text)};
  if (p.toks.empty()) throw std::runtime_error("parse_bracketed: empty input");
  auto tree = p.node();
  if (p.at != p.toks.size()) p.fail("trailing input");
  return ParsedTree{std::move(tree), std::move(p.yield)};
}

}  // namespace chartlstm
