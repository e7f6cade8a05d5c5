#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace walker {

/// Why an integration stopped.
enum class Termination { ReachedTmax, StepUnderflow, NonFinite, LeftDomain };

const char* to_string(Termination t);

/// dy/dt = F(t, y). The callable may throw DomainError to signal that the
/// state has left the region where the right-hand side is defined.
using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dy)>;

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    /// Initial step; 0 picks one from the local derivative scale.
    double h0 = 0.0;
    double h_max = std::numeric_limits<double>::infinity();
    double h_min = 1e-14;
    /// |y_i| above this is treated as blowup.
    double max_state = 1e12;
    long max_steps = 10'000'000;
    /// Keep every accepted step (true) or only the endpoints.
    bool record = true;
};

struct OdeSolution {
    std::vector<double> t;
    /// states[i] is the state at t[i].
    std::vector<std::vector<double>> states;
    Termination termination = Termination::ReachedTmax;
    long steps = 0;
    long rejected = 0;

    const std::vector<double>& back() const { return states.back(); }
};

/// Dormand-Prince 5(4) with PI step control. Works forward or backward in t.
/// Never throws for numerical trouble; the reason lands in `termination`.
OdeSolution integrate_ode(const OdeRhs& rhs, double t0, std::vector<double> y0, double t1,
                          const OdeOptions& opts = {});

}  // namespace walker
