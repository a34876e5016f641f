#include "chartlstm/gradcheck.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

namespace chartlstm {

namespace {

double eval_loss(const std::function<NodeRef(Tape&, ParameterStore&)>& builder,
                 ParameterStore& store, const std::string& param) {
  Tape tape;
  NodeRef loss = builder(tape, store);
  const double v = tape.scalar_value(loss);
  if (!std::isfinite(v))
    throw std::runtime_error("grad_check: non-finite loss while perturbing " +
                             param);
  return v;
}

}  // namespace

GradCheckReport grad_check(
    const std::function<NodeRef(Tape&, ParameterStore&)>& builder,
    ParameterStore& store, double eps) {
  store.zero_grads();
  {
    Tape tape;
    NodeRef loss = builder(tape, store);
    const double v = tape.scalar_value(loss);
    if (!std::isfinite(v))
      throw std::runtime_error("grad_check: non-finite loss at base point");
    tape.backward(loss);
  }
  std::map<std::string, std::vector<double>> analytic;
  for (const auto& [name, t] : store.entries()) analytic[name] = t.grad;

  GradCheckReport rep;
  for (auto& [name, t] : store.entries_mut()) {
    for (int i = 0; i < t.numel(); ++i) {
      const double keep = t.value[static_cast<size_t>(i)];
      t.value[static_cast<size_t>(i)] = keep + eps;
      const double lp = eval_loss(builder, store, name);
      t.value[static_cast<size_t>(i)] = keep - eps;
      const double lm = eval_loss(builder, store, name);
      t.value[static_cast<size_t>(i)] = keep;

      const double num = (lp - lm) / (2.0 * eps);
      const double ana = analytic[name][static_cast<size_t>(i)];
      const double rel = std::abs(ana - num) /
                         std::max({std::abs(ana), std::abs(num), 1e-8});
      if (rel > rep.max_rel_err) {
        rep.max_rel_err = rel;
        rep.worst_param = name;
        rep.worst_index = i;
        rep.analytic = ana;
        rep.numeric = num;
      }
    }
  }
  store.zero_grads();
  return rep;
}

}  // namespace chartlstm
