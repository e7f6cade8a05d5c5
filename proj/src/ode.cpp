#include "walker/ode.hpp"

#include <algorithm>
#include <cmath>

#include "walker/errors.hpp"

namespace walker {

const char* to_string(Termination t)
{
    switch (t) {
    case Termination::ReachedTmax: return "ReachedTmax";
    case Termination::StepUnderflow: return "StepUnderflow";
    case Termination::NonFinite: return "NonFinite";
    case Termination::LeftDomain: return "LeftDomain";
    }
    return "?";
}

namespace {

// Dormand-Prince tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b* (error weights)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

bool all_finite(std::span<const double> v)
{
    return std::all_of(v.begin(), v.end(), [](double a) { return std::isfinite(a); });
}

double max_abs(std::span<const double> v)
{
    double m = 0;
    for (double a : v) m = std::max(m, std::abs(a));
    return m;
}

}  // namespace

OdeSolution integrate_ode(const OdeRhs& rhs, double t0, std::vector<double> y0, double t1,
                          const OdeOptions& opts)
{
    const std::size_t n = y0.size();
    OdeSolution sol;
    sol.t.push_back(t0);
    sol.states.push_back(y0);
    if (t1 == t0) return sol;
    const double dir = t1 > t0 ? 1.0 : -1.0;

    std::vector<double> y = std::move(y0), k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n);

    auto eval = [&](double t, const std::vector<double>& s, std::vector<double>& out) -> bool {
        try {
            rhs(t, s, out);
        } catch (const DomainError&) {
            sol.termination = Termination::LeftDomain;
            return false;
        }
        if (!all_finite(out)) {
            sol.termination = Termination::NonFinite;
            return false;
        }
        return true;
    };
    auto finish = [&](double t, const std::vector<double>& s) {
        if (!opts.record) {
            sol.t.push_back(t);
            sol.states.push_back(s);
        }
        return sol;
    };

    double t = t0;
    if (!eval(t, y, k1)) return finish(t, y);

    double h = opts.h0;
    if (h <= 0) {
        const double sc = opts.atol + opts.rtol * max_abs(y);
        const double d0 = max_abs(y) / sc, d1 = max_abs(k1) / sc;
        h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h = std::min(h, std::abs(t1 - t0));
    }
    h = std::min(h, opts.h_max);

    double err_prev = 1e-4;
    constexpr double safety = 0.9, alpha = 0.7 / 5, beta = 0.4 / 5;

    while (dir * (t1 - t) > 0) {
        if (sol.steps + sol.rejected >= opts.max_steps) {
            sol.termination = Termination::StepUnderflow;
            return finish(t, y);
        }
        bool last = false;
        if (h >= std::abs(t1 - t)) {
            h = std::abs(t1 - t);
            last = true;
        }
        if (h < opts.h_min && !last) {
            sol.termination = Termination::StepUnderflow;
            return finish(t, y);
        }
        const double hs = dir * h;

        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * a21 * k1[i];
        if (!eval(t + c2 * hs, tmp, k2)) return finish(t, y);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
        if (!eval(t + c3 * hs, tmp, k3)) return finish(t, y);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        if (!eval(t + c4 * hs, tmp, k4)) return finish(t, y);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        if (!eval(t + c5 * hs, tmp, k5)) return finish(t, y);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        if (!eval(t + hs, tmp, k6)) return finish(t, y);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        if (!all_finite(ynew)) {
            sol.termination = Termination::NonFinite;
            return finish(t, y);
        }
        if (!eval(t + hs, ynew, k7)) return finish(t, y);

        double err = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err = std::max(err, std::abs(e) / sc);
        }
        if (!std::isfinite(err)) err = 1e10;

        if (err <= 1.0) {
            t = last ? t1 : t + hs;
            y.swap(ynew);
            k1.swap(k7);  // FSAL
            ++sol.steps;
            if (opts.record) {
                sol.t.push_back(t);
                sol.states.push_back(y);
            }
            if (max_abs(y) > opts.max_state) {
                sol.termination = Termination::NonFinite;
                return finish(t, y);
            }
            double fac = err == 0 ? 5.0 : safety * std::pow(err, -alpha) * std::pow(err_prev, beta);
            fac = std::clamp(fac, 0.2, 5.0);
            err_prev = std::max(err, 1e-4);
            h = std::min(h * fac, opts.h_max);
        } else {
            ++sol.rejected;
            h *= std::max(0.1, safety * std::pow(err, -alpha));
        }
    }
    sol.termination = Termination::ReachedTmax;
    return finish(t, y);
}

}  // namespace walker
