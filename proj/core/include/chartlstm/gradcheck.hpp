#pragma once

#include <functional>
#include <string>

#include "chartlstm/parameters.hpp"
#include "chartlstm/tape.hpp"

namespace chartlstm {

struct GradCheckReport {
  double max_rel_err = 0.0;
  std::string worst_param;
  int worst_index = -1;
  double analytic = 0.0;
  double numeric = 0.0;
};

// The builder must deterministically construct a scalar loss from the store's
// current values, importing parameters through Tape::param / Tape::row so
// gradients flow back into the store. Numeric side uses central differences
// with step eps; relative error is |a - n| / max(|a|, |n|, 1e-8).
GradCheckReport grad_check(
    const std::function<NodeRef(Tape&, ParameterStore&)>& builder,
    ParameterStore& store, double eps = 1e-5);

}  // namespace chartlstm
