#include "chartlstm/tape.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace chartlstm {

namespace {

constexpr double kNormGuard = 1e-12;

[[noreturn]] void fail_shapes(OpKind kind, const Shape& a, const Shape& b) {
  throw std::invalid_argument(std::string(op_kind_name(kind)) +
                              ": incompatible shapes " + a.str() + " and " +
                              b.str());
}

[[noreturn]] void fail_shape(OpKind kind, const Shape& a, const char* what) {
  throw std::invalid_argument(std::string(op_kind_name(kind)) + ": " + what +
                              ", got " + a.str());
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

const char* op_kind_name(OpKind k) {
  switch (k) {
    case OpKind::input: return "input";
    case OpKind::affine: return "affine";
    case OpKind::matvec: return "matvec";
    case OpKind::add: return "add";
    case OpKind::mul: return "elementwise-multiply";
    case OpKind::sigmoid: return "sigmoid";
    case OpKind::tanh: return "tanh";
    case OpKind::relu: return "relu";
    case OpKind::concat: return "concat";
    case OpKind::sum_vecs: return "sum-of-vectors";
    case OpKind::scale: return "scalar-scale";
    case OpKind::add_scalar: return "add-scalar";
    case OpKind::softmax: return "softmax";
    case OpKind::cosine: return "cosine-similarity";
    case OpKind::squared_diff: return "squared-difference";
    case OpKind::weighted_sum: return "weighted-sum";
    case OpKind::log_loss_pick: return "log-loss-pick";
    case OpKind::slice: return "slice";
    case OpKind::reduce_sum: return "reduce-sum";
  }
  return "?";
}

NodeRef Tape::push(Node&& n) {
  nodes_.push_back(std::move(n));
  return NodeRef{static_cast<std::int32_t>(nodes_.size() - 1)};
}

Tape::Node& Tape::at(NodeRef r) {
  if (!r.valid() || static_cast<size_t>(r.id) >= nodes_.size())
    throw std::out_of_range("invalid node ref");
  return nodes_[static_cast<size_t>(r.id)];
}

const Tape::Node& Tape::at(NodeRef r) const {
  if (!r.valid() || static_cast<size_t>(r.id) >= nodes_.size())
    throw std::out_of_range("invalid node ref");
  return nodes_[static_cast<size_t>(r.id)];
}

const Tensor& Tape::tensor(NodeRef r) const { return at(r).data; }

double Tape::scalar_value(NodeRef r) const {
  const Tensor& t = at(r).data;
  if (t.numel() != 1)
    throw std::invalid_argument("scalar_value: node is not scalar, shape " +
                                t.shape.str());
  return t.value[0];
}

std::span<const double> Tape::value(NodeRef r) const { return at(r).data.value; }
std::span<const double> Tape::grad(NodeRef r) const { return at(r).data.grad; }

NodeRef Tape::input(const Shape& shape, std::span<const double> value) {
  if (static_cast<int>(value.size()) != shape.numel())
    throw std::invalid_argument("input: value length " +
                                std::to_string(value.size()) +
                                " does not match shape " + shape.str());
  Node n;
  n.kind = OpKind::input;
  n.data = Tensor(shape);
  std::copy(value.begin(), value.end(), n.data.value.begin());
  return push(std::move(n));
}

NodeRef Tape::input_scalar(double v) {
  return input(Shape::scalar(), std::span<const double>(&v, 1));
}

NodeRef Tape::zeros(const Shape& shape) {
  Node n;
  n.kind = OpKind::input;
  n.data = Tensor(shape);
  return push(std::move(n));
}

NodeRef Tape::param(Tensor& t) {
  Node n;
  n.kind = OpKind::input;
  n.data = Tensor(t.shape);
  n.data.value = t.value;
  n.bound = &t;
  n.bound_offset = 0;
  return push(std::move(n));
}

NodeRef Tape::row(Tensor& t, int row, bool bind_grad) {
  if (!t.shape.is_mat())
    throw std::invalid_argument("row: tensor is not a matrix, shape " +
                                t.shape.str());
  if (row < 0 || row >= t.shape.rows())
    throw std::out_of_range("row: index " + std::to_string(row) +
                            " out of range for " + t.shape.str());
  const int c = t.shape.cols();
  Node n;
  n.kind = OpKind::input;
  n.data = Tensor(Shape::vec(c));
  std::copy_n(t.value.begin() + static_cast<size_t>(row) * c, c,
              n.data.value.begin());
  if (bind_grad) {
    n.bound = &t;
    n.bound_offset = row * c;
  }
  return push(std::move(n));
}

NodeRef Tape::apply(OpKind kind, std::span<const NodeRef> inputs, OpAttr attr) {
  Node n;
  n.kind = kind;
  n.attr = attr;
  n.inputs.assign(inputs.begin(), inputs.end());
  for (NodeRef r : n.inputs) at(r);  // validate refs

  auto shape_of = [&](size_t i) -> const Shape& {
    return at(n.inputs[i]).data.shape;
  };
  auto expect_arity = [&](size_t k) {
    if (n.inputs.size() != k)
      throw std::invalid_argument(std::string(op_kind_name(kind)) +
                                  ": expected " + std::to_string(k) +
                                  " inputs, got " +
                                  std::to_string(n.inputs.size()));
  };

  Shape out;
  switch (kind) {
    case OpKind::input:
      throw std::invalid_argument("apply: input nodes are created directly");
    case OpKind::affine: {
      expect_arity(3);
      const Shape &w = shape_of(0), &x = shape_of(1), &b = shape_of(2);
      if (!w.is_mat() || !x.is_vec() || w.cols() != x.len())
        fail_shapes(kind, w, x);
      if (!b.is_vec() || b.len() != w.rows()) fail_shapes(kind, w, b);
      out = Shape::vec(w.rows());
      break;
    }
    case OpKind::matvec: {
      expect_arity(2);
      const Shape &w = shape_of(0), &x = shape_of(1);
      if (!w.is_mat() || !x.is_vec() || w.cols() != x.len())
        fail_shapes(kind, w, x);
      out = Shape::vec(w.rows());
      break;
    }
    case OpKind::add:
    case OpKind::mul:
    case OpKind::squared_diff: {
      expect_arity(2);
      if (shape_of(0) != shape_of(1)) fail_shapes(kind, shape_of(0), shape_of(1));
      out = shape_of(0);
      break;
    }
    case OpKind::sigmoid:
    case OpKind::tanh:
    case OpKind::relu:
    case OpKind::scale:
    case OpKind::add_scalar: {
      expect_arity(1);
      out = shape_of(0);
      break;
    }
    case OpKind::concat: {
      if (n.inputs.empty()) fail_shape(kind, Shape::scalar(), "needs inputs");
      int total = 0;
      for (size_t i = 0; i < n.inputs.size(); ++i) {
        if (shape_of(i).is_mat())
          fail_shape(kind, shape_of(i), "expects vectors or scalars");
        total += shape_of(i).numel();
      }
      out = Shape::vec(total);
      break;
    }
    case OpKind::sum_vecs: {
      if (n.inputs.empty()) fail_shape(kind, Shape::scalar(), "needs inputs");
      for (size_t i = 1; i < n.inputs.size(); ++i)
        if (shape_of(i) != shape_of(0)) fail_shapes(kind, shape_of(0), shape_of(i));
      out = shape_of(0);
      break;
    }
    case OpKind::softmax: {
      expect_arity(1);
      if (!shape_of(0).is_vec()) fail_shape(kind, shape_of(0), "expects a vector");
      out = shape_of(0);
      break;
    }
    case OpKind::cosine: {
      expect_arity(2);
      const Shape &a = shape_of(0), &b = shape_of(1);
      if (!a.is_vec() || a != b) fail_shapes(kind, a, b);
      out = Shape::scalar();
      break;
    }
    case OpKind::weighted_sum: {
      if (n.inputs.size() < 2)
        fail_shape(kind, Shape::scalar(), "needs weights plus one item");
      const Shape& s = shape_of(0);
      if (!s.is_vec() || s.len() != static_cast<int>(n.inputs.size()) - 1)
        fail_shape(kind, s, "weight length must equal item count");
      for (size_t i = 2; i < n.inputs.size(); ++i)
        if (shape_of(i) != shape_of(1)) fail_shapes(kind, shape_of(1), shape_of(i));
      out = shape_of(1);
      break;
    }
    case OpKind::log_loss_pick: {
      expect_arity(1);
      const Shape& s = shape_of(0);
      if (!s.is_vec()) fail_shape(kind, s, "expects a logits vector");
      if (attr.index < 0 || attr.index >= s.len())
        throw std::out_of_range(std::string(op_kind_name(kind)) +
                                ": picked index " + std::to_string(attr.index) +
                                " out of range for " + s.str());
      out = Shape::scalar();
      break;
    }
    case OpKind::slice: {
      expect_arity(1);
      const Shape& s = shape_of(0);
      if (!s.is_vec()) fail_shape(kind, s, "expects a vector");
      if (attr.index < 0 || attr.len <= 0 || attr.index + attr.len > s.len())
        throw std::out_of_range(
            std::string(op_kind_name(kind)) + ": range [" +
            std::to_string(attr.index) + ", " +
            std::to_string(attr.index + attr.len) + ") out of " + s.str());
      out = Shape::vec(attr.len);
      break;
    }
    case OpKind::reduce_sum: {
      expect_arity(1);
      out = Shape::scalar();
      break;
    }
  }

  n.data = Tensor(out);
  forward(n);
  return push(std::move(n));
}

void Tape::forward(Node& n) {
  auto in = [&](size_t i) -> const Tensor& { return at(n.inputs[i]).data; };
  std::vector<double>& y = n.data.value;

  switch (n.kind) {
    case OpKind::input:
      break;
    case OpKind::affine:
    case OpKind::matvec: {
      const Tensor& w = in(0);
      const Tensor& x = in(1);
      const int r = w.shape.rows(), c = w.shape.cols();
      for (int i = 0; i < r; ++i) {
        double s = n.kind == OpKind::affine ? in(2).value[i] : 0.0;
        const double* wrow = w.value.data() + static_cast<size_t>(i) * c;
        for (int j = 0; j < c; ++j) s += wrow[j] * x.value[j];
        y[i] = s;
      }
      break;
    }
    case OpKind::add:
      for (size_t i = 0; i < y.size(); ++i)
        y[i] = in(0).value[i] + in(1).value[i];
      break;
    case OpKind::mul:
      for (size_t i = 0; i < y.size(); ++i)
        y[i] = in(0).value[i] * in(1).value[i];
      break;
    case OpKind::squared_diff:
      for (size_t i = 0; i < y.size(); ++i) {
        const double d = in(0).value[i] - in(1).value[i];
        y[i] = d * d;
      }
      break;
    case OpKind::sigmoid:
      for (size_t i = 0; i < y.size(); ++i)
        y[i] = 1.0 / (1.0 + std::exp(-in(0).value[i]));
      break;
    case OpKind::tanh:
      for (size_t i = 0; i < y.size(); ++i) y[i] = std::tanh(in(0).value[i]);
      break;
    case OpKind::relu:
      for (size_t i = 0; i < y.size(); ++i)
        y[i] = in(0).value[i] > 0.0 ? in(0).value[i] : 0.0;
      break;
    case OpKind::concat: {
      size_t off = 0;
      for (size_t k = 0; k < n.inputs.size(); ++k) {
        const auto& v = in(k).value;
        std::copy(v.begin(), v.end(), y.begin() + off);
        off += v.size();
      }
      break;
    }
    case OpKind::sum_vecs:
      for (size_t i = 0; i < y.size(); ++i) {
        double s = 0.0;
        for (size_t k = 0; k < n.inputs.size(); ++k) s += in(k).value[i];
        y[i] = s;
      }
      break;
    case OpKind::scale:
      for (size_t i = 0; i < y.size(); ++i) y[i] = n.attr.scalar * in(0).value[i];
      break;
    case OpKind::add_scalar:
      for (size_t i = 0; i < y.size(); ++i) y[i] = in(0).value[i] + n.attr.scalar;
      break;
    case OpKind::softmax: {
      // Max subtraction keeps exp() in range at low temperatures.
      const auto& x = in(0).value;
      double m = x[0];
      for (double v : x) m = std::max(m, v);
      double z = 0.0;
      for (size_t i = 0; i < y.size(); ++i) {
        y[i] = std::exp(x[i] - m);
        z += y[i];
      }
      for (size_t i = 0; i < y.size(); ++i) y[i] /= z;
      break;
    }
    case OpKind::cosine: {
      const auto& a = in(0).value;
      const auto& b = in(1).value;
      const double na = std::sqrt(dot(a, a) + kNormGuard);
      const double nb = std::sqrt(dot(b, b) + kNormGuard);
      y[0] = dot(a, b) / (na * nb);
      break;
    }
    case OpKind::weighted_sum: {
      const auto& s = in(0).value;
      for (size_t i = 0; i < y.size(); ++i) {
        double acc = 0.0;
        for (size_t k = 0; k < s.size(); ++k) acc += s[k] * in(k + 1).value[i];
        y[i] = acc;
      }
      break;
    }
    case OpKind::log_loss_pick: {
      const auto& x = in(0).value;
      double m = x[0];
      for (double v : x) m = std::max(m, v);
      double z = 0.0;
      for (double v : x) z += std::exp(v - m);
      y[0] = m + std::log(z) - x[static_cast<size_t>(n.attr.index)];
      break;
    }
    case OpKind::slice:
      std::copy_n(in(0).value.begin() + n.attr.index, n.attr.len, y.begin());
      break;
    case OpKind::reduce_sum: {
      double s = 0.0;
      for (double v : in(0).value) s += v;
      y[0] = s;
      break;
    }
  }
}

void Tape::backprop(const Node& n) {
  auto in_val = [&](size_t i) -> const std::vector<double>& {
    return at(n.inputs[i]).data.value;
  };
  auto in_grad = [&](size_t i) -> std::vector<double>& {
    return at(n.inputs[i]).data.grad;
  };
  const std::vector<double>& y = n.data.value;
  const std::vector<double>& g = n.data.grad;

  switch (n.kind) {
    case OpKind::input:
      if (n.bound) {
        for (size_t i = 0; i < g.size(); ++i)
          n.bound->grad[static_cast<size_t>(n.bound_offset) + i] += g[i];
      }
      break;
    case OpKind::affine:
    case OpKind::matvec: {
      const Tensor& w = at(n.inputs[0]).data;
      const int r = w.shape.rows(), c = w.shape.cols();
      auto& gw = in_grad(0);
      auto& gx = in_grad(1);
      const auto& x = in_val(1);
      for (int i = 0; i < r; ++i) {
        const double gi = g[static_cast<size_t>(i)];
        double* gwrow = gw.data() + static_cast<size_t>(i) * c;
        const double* wrow = w.value.data() + static_cast<size_t>(i) * c;
        for (int j = 0; j < c; ++j) {
          gwrow[j] += gi * x[static_cast<size_t>(j)];
          gx[static_cast<size_t>(j)] += gi * wrow[j];
        }
      }
      if (n.kind == OpKind::affine) {
        auto& gb = in_grad(2);
        for (int i = 0; i < r; ++i) gb[static_cast<size_t>(i)] += g[static_cast<size_t>(i)];
      }
      break;
    }
    case OpKind::add:
      for (size_t i = 0; i < g.size(); ++i) {
        in_grad(0)[i] += g[i];
        in_grad(1)[i] += g[i];
      }
      break;
    case OpKind::mul:
      for (size_t i = 0; i < g.size(); ++i) {
        in_grad(0)[i] += g[i] * in_val(1)[i];
        in_grad(1)[i] += g[i] * in_val(0)[i];
      }
      break;
    case OpKind::squared_diff:
      for (size_t i = 0; i < g.size(); ++i) {
        const double d = 2.0 * (in_val(0)[i] - in_val(1)[i]) * g[i];
        in_grad(0)[i] += d;
        in_grad(1)[i] -= d;
      }
      break;
    case OpKind::sigmoid:
      for (size_t i = 0; i < g.size(); ++i)
        in_grad(0)[i] += g[i] * y[i] * (1.0 - y[i]);
      break;
    case OpKind::tanh:
      for (size_t i = 0; i < g.size(); ++i)
        in_grad(0)[i] += g[i] * (1.0 - y[i] * y[i]);
      break;
    case OpKind::relu:
      for (size_t i = 0; i < g.size(); ++i)
        if (in_val(0)[i] > 0.0) in_grad(0)[i] += g[i];
      break;
    case OpKind::concat: {
      size_t off = 0;
      for (size_t k = 0; k < n.inputs.size(); ++k) {
        auto& gi = in_grad(k);
        for (size_t i = 0; i < gi.size(); ++i) gi[i] += g[off + i];
        off += gi.size();
      }
      break;
    }
    case OpKind::sum_vecs:
      for (size_t k = 0; k < n.inputs.size(); ++k)
        for (size_t i = 0; i < g.size(); ++i) in_grad(k)[i] += g[i];
      break;
    case OpKind::scale:
      for (size_t i = 0; i < g.size(); ++i)
        in_grad(0)[i] += n.attr.scalar * g[i];
      break;
    case OpKind::add_scalar:
      for (size_t i = 0; i < g.size(); ++i) in_grad(0)[i] += g[i];
      break;
    case OpKind::softmax: {
      double inner = 0.0;
      for (size_t i = 0; i < g.size(); ++i) inner += g[i] * y[i];
      for (size_t i = 0; i < g.size(); ++i)
        in_grad(0)[i] += y[i] * (g[i] - inner);
      break;
    }
    case OpKind::cosine: {
      const auto& a = in_val(0);
      const auto& b = in_val(1);
      const double na2 = dot(a, a) + kNormGuard;
      const double nb2 = dot(b, b) + kNormGuard;
      const double na = std::sqrt(na2), nb = std::sqrt(nb2);
      const double c = y[0], gs = g[0];
      for (size_t i = 0; i < a.size(); ++i) {
        in_grad(0)[i] += gs * (b[i] / (na * nb) - c * a[i] / na2);
        in_grad(1)[i] += gs * (a[i] / (na * nb) - c * b[i] / nb2);
      }
      break;
    }
    case OpKind::weighted_sum: {
      const auto& s = in_val(0);
      auto& gs = in_grad(0);
      for (size_t k = 0; k < s.size(); ++k) {
        const auto& xk = in_val(k + 1);
        auto& gxk = in_grad(k + 1);
        double acc = 0.0;
        for (size_t i = 0; i < g.size(); ++i) {
          acc += g[i] * xk[i];
          gxk[i] += s[k] * g[i];
        }
        gs[k] += acc;
      }
      break;
    }
    case OpKind::log_loss_pick: {
      const auto& x = in_val(0);
      double m = x[0];
      for (double v : x) m = std::max(m, v);
      double z = 0.0;
      for (double v : x) z += std::exp(v - m);
      const double gs = g[0];
      auto& gx = in_grad(0);
      for (size_t i = 0; i < x.size(); ++i)
        gx[i] += gs * std::exp(x[i] - m) / z;
      gx[static_cast<size_t>(n.attr.index)] -= gs;
      break;
    }
    case OpKind::slice: {
      auto& gx = in_grad(0);
      for (int i = 0; i < n.attr.len; ++i)
        gx[static_cast<size_t>(n.attr.index + i)] += g[static_cast<size_t>(i)];
      break;
    }
    case OpKind::reduce_sum: {
      auto& gx = in_grad(0);
      for (size_t i = 0; i < gx.size(); ++i) gx[i] += g[0];
      break;
    }
  }
}

void Tape::backward(NodeRef loss, double seed) {
  Node& top = at(loss);
  if (top.data.numel() != 1)
    throw std::invalid_argument("backward: loss must be scalar, got shape " +
                                top.data.shape.str());
  top.data.grad[0] = seed;
  for (std::int32_t i = loss.id; i >= 0; --i)
    backprop(nodes_[static_cast<size_t>(i)]);
}

NodeRef Tape::affine(NodeRef w, NodeRef x, NodeRef b) {
  NodeRef in[] = {w, x, b};
  return apply(OpKind::affine, in);
}
NodeRef Tape::matvec(NodeRef w, NodeRef x) {
  NodeRef in[] = {w, x};
  return apply(OpKind::matvec, in);
}
NodeRef Tape::add(NodeRef a, NodeRef b) {
  NodeRef in[] = {a, b};
  return apply(OpKind::add, in);
}
NodeRef Tape::mul(NodeRef a, NodeRef b) {
  NodeRef in[] = {a, b};
  return apply(OpKind::mul, in);
}
NodeRef Tape::sigmoid(NodeRef x) {
  NodeRef in[] = {x};
  return apply(OpKind::sigmoid, in);
}
NodeRef Tape::tanh(NodeRef x) {
  NodeRef in[] = {x};
  return apply(OpKind::tanh, in);
}
NodeRef Tape::relu(NodeRef x) {
  NodeRef in[] = {x};
  return apply(OpKind::relu, in);
}
NodeRef Tape::concat(std::span<const NodeRef> xs) {
  return apply(OpKind::concat, xs);
}
NodeRef Tape::sum(std::span<const NodeRef> xs) {
  return apply(OpKind::sum_vecs, xs);
}
NodeRef Tape::scale(NodeRef x, double factor) {
  NodeRef in[] = {x};
  return apply(OpKind::scale, in, OpAttr{.scalar = factor});
}
NodeRef Tape::add_scalar(NodeRef x, double shift) {
  NodeRef in[] = {x};
  return apply(OpKind::add_scalar, in, OpAttr{.scalar = shift});
}
NodeRef Tape::softmax(NodeRef x) {
  NodeRef in[] = {x};
  return apply(OpKind::softmax, in);
}
NodeRef Tape::cosine(NodeRef a, NodeRef b) {
  NodeRef in[] = {a, b};
  return apply(OpKind::cosine, in);
}
NodeRef Tape::squared_diff(NodeRef a, NodeRef b) {
  NodeRef in[] = {a, b};
  return apply(OpKind::squared_diff, in);
}
NodeRef Tape::weighted_sum(NodeRef weights, std::span<const NodeRef> xs) {
  std::vector<NodeRef> in;
  in.reserve(xs.size() + 1);
  in.push_back(weights);
  in.insert(in.end(), xs.begin(), xs.end());
  return apply(OpKind::weighted_sum, in);
}
NodeRef Tape::log_loss_pick(NodeRef logits, int target) {
  NodeRef in[] = {logits};
  return apply(OpKind::log_loss_pick, in, OpAttr{.index = target});
}
NodeRef Tape::slice(NodeRef x, int offset, int len) {
  NodeRef in[] = {x};
  return apply(OpKind::slice, in, OpAttr{.index = offset, .len = len});
}
NodeRef Tape::reduce_sum(NodeRef x) {
  NodeRef in[] = {x};
  return apply(OpKind::reduce_sum, in);
}

}  // namespace chartlstm
