#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "walker/expr.hpp"
#include "walker/ode.hpp"

namespace walker {

/// Value and first two derivatives of a function of one variable.
struct Deriv2 {
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

/// Dense tabulated solution of a first-order system on [lo, hi], started at
/// x0 and integrated both ways. Off-node values come from a short
/// re-integration out of the nearest stored node.
class OdeTable {
public:
    /// Throws OdeSolveError if the solver cannot cover the interval.
    OdeTable(OdeRhs rhs, double x0, std::vector<double> z0, double lo, double hi, OdeOptions opts = {});

    std::vector<double> state(double x) const;
    std::vector<double> derivative(double x) const;
    /// Right-hand side at a known state.
    std::vector<double> rhs_at(double x, std::span<const double> z) const;
    std::span<const double> nodes() const noexcept { return xs_; }
    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }

private:
    OdeRhs rhs_;
    OdeOptions opts_;
    double lo_, hi_;
    std::vector<double> xs_;
    std::vector<std::vector<double>> zs_;
};

/// A scalar function of x carrying (value, d/dx, d^2/dx^2).
class Profile {
public:
    using Fn = std::function<Deriv2(double)>;

    Profile();  // identically zero
    Profile(Fn fn, std::string description);

    static Profile constant(double c);
    /// From an expression in x alone (y must not appear).
    static Profile from_expr(const Expr& e);
    /// Component `value` of the table's state, with derivative taken from the
    /// state slot `d1` (or from the right-hand side when d1 < 0, in which
    /// case the second derivative is not tracked and reported as NaN).
    static Profile from_table(std::shared_ptr<const OdeTable> table, int value, int d1);

    Deriv2 operator()(double x) const { return fn_(x); }
    double value(double x) const { return fn_(x).v; }
    const std::string& description() const noexcept { return description_; }

private:
    Fn fn_;
    std::string description_;
};

}  // namespace walker
