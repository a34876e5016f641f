#pragma once

#include <algorithm>
#include <cassert>
#include <string>
#include <vector>

namespace chartlstm {

// Dimensions of a stored value: {} scalar, {n} vector, {rows, cols} matrix.
struct Shape {
  std::vector<int> dims;

  static Shape scalar() { return {}; }
  static Shape vec(int n) { return {{n}}; }
  static Shape mat(int rows, int cols) { return {{rows, cols}}; }

  int numel() const {
    int n = 1;
    for (int d : dims) n *= d;
    return n;
  }
  int rank() const { return static_cast<int>(dims.size()); }
  bool is_scalar() const { return dims.empty(); }
  bool is_vec() const { return dims.size() == 1; }
  bool is_mat() const { return dims.size() == 2; }
  int rows() const {
    assert(is_mat());
    return dims[0];
  }
  int cols() const {
    assert(is_mat());
    return dims[1];
  }
  int len() const {
    assert(is_vec());
    return dims[0];
  }

  bool operator==(const Shape&) const = default;

  std::string str() const {
    if (dims.empty()) return "[scalar]";
    std::string s = "[";
    for (size_t i = 0; i < dims.size(); ++i) {
      if (i) s += " x ";
      s += std::to_string(dims[i]);
    }
    return s + "]";
  }
};

// Value plus gradient buffer of identical length; the carrier for every
// parameter and intermediate on the tape.
struct Tensor {
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;

  Tensor() = default;
  explicit Tensor(Shape s)
      : shape(std::move(s)),
        value(static_cast<size_t>(shape.numel()), 0.0),
        grad(static_cast<size_t>(shape.numel()), 0.0) {}

  int numel() const { return shape.numel(); }
  void zero_grad() { std::fill(grad.begin(), grad.end(), 0.0); }
};

}  // namespace chartlstm
