#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "chartlstm/tensor.hpp"

namespace chartlstm {

// Named trainable tensors of one model configuration. Names are unique and
// shapes are fixed at creation; iteration order is name order, which keeps
// checkpoints, SGD, and gradient checks deterministic.
class ParameterStore {
 public:
  Tensor& create(const std::string& name, const Shape& shape) {
    auto [it, inserted] = entries_.try_emplace(name, Tensor(shape));
    if (!inserted)
      throw std::invalid_argument("parameter already exists: " + name);
    return it->second;
  }

  Tensor& at(const std::string& name) {
    auto it = entries_.find(name);
    if (it == entries_.end())
      throw std::out_of_range("no such parameter: " + name);
    return it->second;
  }
  const Tensor& at(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end())
      throw std::out_of_range("no such parameter: " + name);
    return it->second;
  }

  bool contains(const std::string& name) const {
    return entries_.count(name) > 0;
  }

  void zero_grads() {
    for (auto& [name, t] : entries_) t.zero_grad();
  }

  int total_params() const {
    int n = 0;
    for (const auto& [name, t] : entries_) n += t.numel();
    return n;
  }

  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, Tensor>& entries() const { return entries_; }
  std::map<std::string, Tensor>& entries_mut() { return entries_; }

 private:
  std::map<std::string, Tensor> entries_;
};

}  // namespace chartlstm
