#pragma once

#include <cmath>

#include "climctl/model.hpp"

// Fixed-step classical RK4 for the controlled dynamics. The control is a
// zero-order hold: constant across the whole interval.

namespace climctl {

// The paper never defines its time units; we pin the calendar here.
inline constexpr double kDaySeconds = 86400.0;
inline constexpr double kYearSeconds = 365.25 * kDaySeconds;      // 3.15576e7
inline constexpr double kQuarterSeconds = kYearSeconds / 4.0;     // 7.88940e6

// Defaults give roughly one-day substeps; self-convergence of the scheme
// at these sizes is checked in the test suite.
inline constexpr int kQuarterSubsteps = 90;
inline constexpr int kYearSubsteps = 360;

struct TimeStep {
    double tau = kQuarterSeconds;  // mapping/hold interval, s
    int substeps = kQuarterSubsteps;

    void validate() const {
        if (!(tau > 0.0)) throw ModelError("TimeStep: tau must be positive");
        if (substeps < 1) throw ModelError("TimeStep: substeps must be >= 1");
        if (tau / substeps > 2e5) {
            throw ModelError("TimeStep: substep exceeds 2e5 s accuracy limit");
        }
    }

    static TimeStep quarter() { return {kQuarterSeconds, kQuarterSubsteps}; }
    static TimeStep year() { return {kYearSeconds, kYearSubsteps}; }
};

// Generic RK4 step over a 2-component state; the callable maps state to rate.
template <class Rhs>
ClimateState rk4_step_with(const Rhs& f, const ClimateState& x, double dt) {
    const StateRate k1 = f(x);
    const StateRate k2 = f(ClimateState{x.t_a + 0.5 * dt * k1.d_t_a, x.t_s + 0.5 * dt * k1.d_t_s});
    const StateRate k3 = f(ClimateState{x.t_a + 0.5 * dt * k2.d_t_a, x.t_s + 0.5 * dt * k2.d_t_s});
    const StateRate k4 = f(ClimateState{x.t_a + dt * k3.d_t_a, x.t_s + dt * k3.d_t_s});
    return {x.t_a + dt / 6.0 * (k1.d_t_a + 2.0 * k2.d_t_a + 2.0 * k3.d_t_a + k4.d_t_a),
            x.t_s + dt / 6.0 * (k1.d_t_s + 2.0 * k2.d_t_s + 2.0 * k3.d_t_s + k4.d_t_s)};
}

inline ClimateState rk4_step(const ClimateState& x, ControlLevel u, const ModelParams& p,
                             double dt) {
    if (!(dt > 0.0)) throw ModelError("rk4_step: dt must be positive");
    const ClimateState next =
        rk4_step_with([&](const ClimateState& s) { return rhs(s, u, p); }, x, dt);
    if (!std::isfinite(next.t_a) || !std::isfinite(next.t_s)) {
        throw ModelError("rk4_step: non-finite result (numerical blow-up)");
    }
    return next;
}

inline ClimateState integrate_interval(ClimateState x, ControlLevel u, const ModelParams& p,
                                       const TimeStep& step) {
    step.validate();
    const double dt = step.tau / step.substeps;
    for (int i = 0; i < step.substeps; ++i) {
        x = rk4_step(x, u, p, dt);
    }
    return x;
}

}  // namespace climctl
