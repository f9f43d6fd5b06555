#ifndef BARVF_QFUNCTION_HPP
#define BARVF_QFUNCTION_HPP

#include <vector>

namespace barvf {

/// Dense tabular action-value function, row-major over (state, action).
struct QFunction {
  int num_states = 0;
  int num_actions = 0;
  std::vector<double> values;  // num_states * num_actions

  QFunction() = default;
  QFunction(int s, int a) : num_states(s), num_actions(a), values(static_cast<std::size_t>(s) * a, 0.0) {}

  double& at(int s, int a) { return values[static_cast<std::size_t>(s) * num_actions + a]; }
  double at(int s, int a) const { return values[static_cast<std::size_t>(s) * num_actions + a]; }
};

}  // namespace barvf

#endif  // BARVF_QFUNCTION_HPP
