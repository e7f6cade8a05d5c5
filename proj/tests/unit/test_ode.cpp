#include <doctest.h>

#include <cmath>

#include "walker/errors.hpp"
#include "walker/ode.hpp"
#include "walker/profile.hpp"

using namespace walker;

TEST_CASE("integrate_ode: harmonic oscillator to high accuracy")
{
    OdeOptions o;
    o.rtol = o.atol = 1e-12;
    auto rhs = [](double, std::span<const double> z, std::span<double> dz) {
        dz[0] = z[1];
        dz[1] = -z[0];
    };
    const OdeSolution s = integrate_ode(rhs, 0.0, {1.0, 0.0}, 10.0, o);
    CHECK(s.termination == Termination::ReachedTmax);
    CHECK(s.t.back() == 10.0);
    CHECK(std::abs(s.back()[0] - std::cos(10.0)) < 1e-9);
    for (std::size_t i = 1; i < s.t.size(); ++i) CHECK(s.t[i] > s.t[i - 1]);

    const OdeSolution back = integrate_ode(rhs, 0.0, {1.0, 0.0}, -3.0, o);
    CHECK(std::abs(back.back()[1] - std::sin(3.0)) < 1e-9);
}

TEST_CASE("integrate_ode: blowup and domain exits are reported, not thrown")
{
    auto blow = [](double, std::span<const double> z, std::span<double> dz) { dz[0] = z[0] * z[0]; };
    const OdeSolution s = integrate_ode(blow, 0.0, {1.0}, 2.0);
    CHECK(s.termination != Termination::ReachedTmax);
    CHECK(s.t.back() < 1.0);
    CHECK(s.t.back() > 0.99);

    auto dom = [](double t, std::span<const double>, std::span<double> dz) {
        if (t > 0.5) throw DomainError("out");
        dz[0] = 1.0;
    };
    CHECK(integrate_ode(dom, 0.0, {0.0}, 1.0).termination == Termination::LeftDomain);
}

TEST_CASE("OdeTable: off-node evaluation matches the exact solution")
{
    OdeOptions o;
    o.rtol = o.atol = 1e-12;
    auto table = std::make_shared<const OdeTable>(
        [](double, std::span<const double> z, std::span<double> dz) {
            dz[0] = z[1];
            dz[1] = -4.0 * z[0];
        },
        0.0, std::vector<double>{0.0, 2.0}, -1.0, 2.0, o);
    const Profile p = Profile::from_table(table, 0, 1);
    for (double x : {-0.93, -0.2, 0.0, 0.4141, 1.7, 2.0}) {
        const Deriv2 d = p(x);
        CHECK(std::abs(d.v - std::sin(2 * x)) < 1e-10);
        CHECK(std::abs(d.d1 - 2 * std::cos(2 * x)) < 1e-10);
        CHECK(std::abs(d.d2 + 4 * std::sin(2 * x)) < 1e-9);
    }
    CHECK_THROWS_AS(OdeTable([](double, std::span<const double> z, std::span<double> dz) { dz[0] = z[0] * z[0]; }, 0.0,
                             std::vector<double>{1.0}, 0.0, 3.0),
                    OdeSolveError);
}

TEST_CASE("Profile::from_expr carries two derivatives")
{
    const Profile p = Profile::from_expr(pow(Expr::x(), 3));
    const Deriv2 d = p(2.0);
    CHECK(d.v == doctest::Approx(8.0));
    CHECK(d.d1 == doctest::Approx(12.0));
    CHECK(d.d2 == doctest::Approx(12.0));
    CHECK_THROWS_AS(Profile::from_expr(Expr::y()), DomainError);
}
