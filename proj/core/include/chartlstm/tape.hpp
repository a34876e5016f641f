#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "chartlstm/tensor.hpp"

namespace chartlstm {

enum class OpKind : std::uint8_t {
  input,
  affine,         // W x + b
  matvec,         // W x
  add,
  mul,            // elementwise
  sigmoid,
  tanh,
  relu,
  concat,
  sum_vecs,       // elementwise sum of k same-shape inputs
  scale,          // x * attr.scalar
  add_scalar,     // x + attr.scalar
  softmax,
  cosine,         // cos(a, b), norms guarded by 1e-12
  squared_diff,   // (a - b)^2 elementwise
  weighted_sum,   // sum_i s_i x_i, s differentiable
  log_loss_pick,  // -log softmax(logits)[attr.index]
  slice,          // contiguous [attr.index, attr.index + attr.len)
  reduce_sum,     // sum of all entries -> scalar
};

const char* op_kind_name(OpKind k);

struct NodeRef {
  std::int32_t id = -1;
  bool valid() const { return id >= 0; }
};

// Per-op payload: scalar constant for scale/add_scalar, picked index for
// log_loss_pick, offset/len for slice.
struct OpAttr {
  double scalar = 0.0;
  int index = 0;
  int len = 0;
};

// Reverse-mode tape over a dynamically built per-example graph. Insertion
// order is topological order; backward() walks it once in reverse and then
// writes leaf gradients through to any bound parameter tensors.
class Tape {
 public:
  NodeRef input(const Shape& shape, std::span<const double> value);
  NodeRef input_scalar(double v);
  NodeRef zeros(const Shape& shape);
  // Leaf bound to a parameter tensor; backward() accumulates into t.grad.
  NodeRef param(Tensor& t);
  // Leaf over one row of a matrix tensor (an embedding lookup). When
  // bind_grad is false the row is treated as a constant.
  NodeRef row(Tensor& t, int row, bool bind_grad = true);

  NodeRef apply(OpKind kind, std::span<const NodeRef> inputs, OpAttr attr = {});

  NodeRef affine(NodeRef w, NodeRef x, NodeRef b);
  NodeRef matvec(NodeRef w, NodeRef x);
  NodeRef add(NodeRef a, NodeRef b);
  NodeRef mul(NodeRef a, NodeRef b);
  NodeRef sigmoid(NodeRef x);
  NodeRef tanh(NodeRef x);
  NodeRef relu(NodeRef x);
  NodeRef concat(std::span<const NodeRef> xs);
  NodeRef sum(std::span<const NodeRef> xs);
  NodeRef scale(NodeRef x, double factor);
  NodeRef add_scalar(NodeRef x, double shift);
  NodeRef softmax(NodeRef x);
  NodeRef cosine(NodeRef a, NodeRef b);
  NodeRef squared_diff(NodeRef a, NodeRef b);
  NodeRef weighted_sum(NodeRef weights, std::span<const NodeRef> xs);
  NodeRef log_loss_pick(NodeRef logits, int target);
  NodeRef slice(NodeRef x, int offset, int len);
  NodeRef reduce_sum(NodeRef x);

  // Seeds d(loss)/d(loss) = seed; a batch mean passes seed = 1/batch.
  void backward(NodeRef loss, double seed = 1.0);

  const Tensor& tensor(NodeRef r) const;
  double scalar_value(NodeRef r) const;
  std::span<const double> value(NodeRef r) const;
  std::span<const double> grad(NodeRef r) const;
  std::size_t size() const { return nodes_.size(); }
  void clear() { nodes_.clear(); }

 private:
  struct Node {
    OpKind kind = OpKind::input;
    OpAttr attr;
    std::vector<NodeRef> inputs;
    Tensor data;
    Tensor* bound = nullptr;  // parameter leaves only
    int bound_offset = 0;
  };

  NodeRef push(Node&& n);
  Node& at(NodeRef r);
  const Node& at(NodeRef r) const;
  void forward(Node& n);
  void backprop(const Node& n);

  std::vector<Node> nodes_;
};

}  // namespace chartlstm
