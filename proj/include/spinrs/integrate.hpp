#pragma once

#include <string>
#include <vector>

#include "spinrs/rhs.hpp"

namespace spinrs {

enum class StateLayout { rs, spin, n2 };

std::string to_string(StateLayout l);

struct IntegratorStats {
    long accepted_steps = 0;
    long rejected_steps = 0;
    double rel_tol = 0.0;
    double abs_tol = 0.0;
    bool terminated_early = false;
    double termination_time = 0.0;
    std::string termination_reason;
};

struct Trajectory {
    StateLayout layout = StateLayout::rs;
    int n = 0;
    std::vector<double> times;
    std::vector<std::vector<cplx>> states;
    IntegratorStats stats;
};

// Adaptive embedded 5(4) pair with continuous extension; states are sampled
// at sample_times (monotone in the direction of integration, inside
// [t0, t1]).  A pole_proximity_error from the right-hand side truncates the
// trajectory and is reported through stats rather than rethrown.
Trajectory integrate(const FlatRhs& rhs, const std::vector<cplx>& y0, double t0, double t1, double rel_tol,
                     double abs_tol, const std::vector<double>& sample_times, StateLayout layout, int n);

// convenience: m+1 equally spaced sample times covering [t0, t1]
std::vector<double> linspace(double t0, double t1, int m);

}  // namespace spinrs
