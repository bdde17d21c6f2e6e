#pragma once

// Third-order TVD Runge-Kutta (Shu-Osher form). Stage k evaluates the
// right-hand side at time rk3_stage_time(tau_n, dt, k), see grid.hpp.

#include <utility>

namespace fsmhd {

/// `combine(a, x, b, y)` returns a*x + b*y; `rhs(u, stage)` returns L(u).
template <class State, class Rhs, class Combine>
State rk3_advance(const State& un, Rhs&& rhs, double dt, Combine&& combine) {
  State u1 = combine(1.0, un, dt, rhs(un, 0));
  State t1 = combine(1.0, u1, dt, rhs(u1, 1));
  State u2 = combine(0.75, un, 0.25, t1);
  State t2 = combine(1.0, u2, dt, rhs(u2, 2));
  return combine(1.0 / 3.0, un, 2.0 / 3.0, t2);
}

/// Overload for types with vector-space operators (scalars, Eigen vectors).
template <class State, class Rhs>
State rk3_advance(const State& un, Rhs&& rhs, double dt) {
  return rk3_advance(un, std::forward<Rhs>(rhs), dt,
                     [](double a, const State& x, double b, const State& y) -> State {
                       return a * x + b * y;
                     });
}

}  // namespace fsmhd
