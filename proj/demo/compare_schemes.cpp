// KM, inertial KM and the multi-inertial scheme on T(x) = x / (1 + |x|),
// printed side by side as |x_n|.

#include <iostream>

#include "coneiter/coneiter.hpp"

int main() {
  using namespace coneiter;
  const auto space = builtin_scalar_p(1.0);
  const auto T = builtin_saturating(space);

  const auto km = run_km(space, T, Schedule::constant(0.5), Vector{1.0}, 20);
  const auto ikm = run_inertial_km(space, T, Schedule::constant(0.6), Schedule::constant(0.2), Vector{1.0},
                                   Vector{0.5}, 19);

  IterationConfig cfg;
  cfg.alpha = cfg.beta = cfg.gamma = Schedule::constant(0.2);
  cfg.lambda = Schedule::constant(0.6);
  cfg.x0 = Vector{1.0};
  cfg.x1 = Vector{0.5};
  cfg.max_iter = 19;
  const auto mi = run_multi_inertial(space, T, cfg);

  const auto table = make_table({{"km", &km}, {"inertial_km", &ikm}, {"multi_inertial", &mi}}, Vector{0.0});
  std::cout << table.format(4);

  const auto bounds = check_step_bound(mi, BoundMode::ResidualCorrected);
  std::cout << "\nstep bound (residual corrected), first steps:\n";
  for (std::size_t i = 0; i < 5 && i < bounds.size(); ++i)
    std::cout << "  n=" << bounds[i].n << " lhs=" << format_fixed(bounds[i].lhs, 6)
              << " rhs=" << format_fixed(bounds[i].rhs, 6) << "\n";
}
