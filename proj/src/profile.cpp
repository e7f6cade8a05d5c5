#include "walker/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "walker/errors.hpp"
#include "walker/jet.hpp"

namespace walker {

OdeTable::OdeTable(OdeRhs rhs, double x0, std::vector<double> z0, double lo, double hi, OdeOptions opts)
    : rhs_(std::move(rhs)), opts_(opts), lo_(lo), hi_(hi)
{
    if (!(lo <= x0 && x0 <= hi)) throw OdeSolveError("start point outside the interval");
    opts_.record = true;
    const OdeSolution left = integrate_ode(rhs_, x0, z0, lo, opts_);
    const OdeSolution right = integrate_ode(rhs_, x0, z0, hi, opts_);
    for (const OdeSolution* s : {&left, &right})
        if (s->termination != Termination::ReachedTmax)
            throw OdeSolveError(std::string("profile solve stopped early: ") + to_string(s->termination));

    for (std::size_t i = left.t.size(); i-- > 1;) {
        xs_.push_back(left.t[i]);
        zs_.push_back(left.states[i]);
    }
    xs_.insert(xs_.end(), right.t.begin(), right.t.end());
    zs_.insert(zs_.end(), right.states.begin(), right.states.end());
    opts_.record = false;
}

std::vector<double> OdeTable::state(double x) const
{
    auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - xs_.begin());
    if (i == xs_.size() || (i > 0 && x - xs_[i - 1] < xs_[i] - x)) --i;
    if (xs_[i] == x) return zs_[i];
    const OdeSolution s = integrate_ode(rhs_, xs_[i], zs_[i], x, opts_);
    if (s.termination != Termination::ReachedTmax)
        throw OdeSolveError(std::string("profile evaluation failed: ") + to_string(s.termination));
    return s.back();
}

std::vector<double> OdeTable::derivative(double x) const
{
    const std::vector<double> z = state(x);
    return rhs_at(x, z);
}

std::vector<double> OdeTable::rhs_at(double x, std::span<const double> z) const
{
    std::vector<double> dz(z.size());
    rhs_(x, z, dz);
    return dz;
}

Profile::Profile() : Profile([](double) { return Deriv2{}; }, "0") {}

Profile::Profile(Fn fn, std::string description) : fn_(std::move(fn)), description_(std::move(description)) {}

Profile Profile::constant(double c)
{
    return Profile([c](double) { return Deriv2{c, 0.0, 0.0}; }, std::to_string(c));
}

Profile Profile::from_expr(const Expr& e)
{
    if (!e.independent_of(Coord::Y)) throw DomainError("profile expression depends on y");
    return Profile(
        [e](double x) {
            const auto d = x_derivatives(e, x, 2);
            return Deriv2{d[0], d[1], d[2]};
        },
        to_infix(e));
}

Profile Profile::from_table(std::shared_ptr<const OdeTable> table, int value, int d1)
{
    const auto vi = static_cast<std::size_t>(value);
    return Profile(
        [table, vi, d1](double x) {
            const auto z = table->state(x);
            const auto dz = table->rhs_at(x, z);
            if (d1 < 0) return Deriv2{z[vi], dz[vi], std::numeric_limits<double>::quiet_NaN()};
            const auto di = static_cast<std::size_t>(d1);
            return Deriv2{z[vi], z[di], dz[di]};
        },
        "ode");
}

}  // namespace walker
