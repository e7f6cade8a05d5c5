#include <doctest.h>

#include <cmath>

#include "random_expr.hpp"
#include "walker/errors.hpp"
#include "walker/geodesics.hpp"

using namespace walker;

namespace {
const Expr x = Expr::x();
const Expr y = Expr::y();

Expr nb_metric(double b) { return Expr(1.0 / (b * b)) * exp(Expr(b) * y); }
}  // namespace

TEST_CASE("geodesics: rhs examples")
{
    const Expr f = nb_metric(1.0);
    GeodesicState s{0.0, {0.3, -0.2, 1.0}, {0.0, 0.7, -0.4}};
    const GeodesicState d = geodesic_rhs(f, s);
    CHECK(d.vel[kX] == 0.0);
    CHECK(d.vel[kY] == 0.0);
    CHECK(d.vel[kXt] == 0.0);
    CHECK(d.pos[kY] == doctest::Approx(0.7));

    const GeodesicState flat = geodesic_rhs(Expr(0.0), {0.0, {1, 2, 3}, {0.5, -1, 2}});
    for (int i = 0; i < 3; ++i) CHECK(flat.vel[i] == 0.0);

    // N_b specialisation: y'' = -x'^2 b^-1 e^{by}, xt'' = 2 x' y' b^-1 e^{by}
    const double b = 1.7;
    const GeodesicState s2{0.0, {0.1, 0.4, 0.0}, {0.9, -0.3, 0.2}};
    const GeodesicState d2 = geodesic_rhs(nb_metric(b), s2);
    const double e = std::exp(b * 0.4) / b;
    CHECK(d2.vel[kY] == doctest::Approx(-0.81 * e).epsilon(1e-14));
    CHECK(d2.vel[kXt] == doctest::Approx(2 * 0.9 * -0.3 * e).epsilon(1e-14));

    // along gamma = (t, phi, psi): phi_tt + 2(1-t)^-2 phi = 0
    const Expr g = blowup_metric();
    const double t = 0.37, phi = 0.8;
    const GeodesicState d3 = geodesic_rhs(g, {t, {t, phi, 0.0}, {1.0, 0.1, 1.5}});
    CHECK(d3.vel[kY] + 2.0 / ((1 - t) * (1 - t)) * phi == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("geodesics: closed form oracle")
{
    const double b = 1.0, a = 1.0, C1 = 1.0, C2 = 0.0;
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double t = -5.0 + 0.5 * i;
        const double h = 1e-3;
        const double ypp = (nb_closed_form(b, a, C1, C2, t + h) - 2 * nb_closed_form(b, a, C1, C2, t) +
                            nb_closed_form(b, a, C1, C2, t - h)) /
                           (h * h);
        // y'' from the integrated-once form removes finite-difference noise
        const double yv = nb_closed_form(b, a, C1, C2, t);
        const double exact = -a * a / b * std::exp(b * yv);
        const double yd = nb_closed_form_dot(b, a, C1, C2, t);
        const double ydd = -0.5 * b * C1 * C1 * (1.0 - std::tanh(0.5 * b * C1 * (t + C2)) * std::tanh(0.5 * b * C1 * (t + C2)));
        worst = std::max(worst, std::abs(ydd - exact));
        CHECK(std::abs(ypp - exact) < 1e-6);
        // first derivative vs central difference
        CHECK(yd == doctest::Approx((nb_closed_form(b, a, C1, C2, t + h) - nb_closed_form(b, a, C1, C2, t - h)) / (2 * h)).epsilon(1e-6));
        CHECK(nb_closed_form(b, a, C1, C2, -C2 + t) == doctest::Approx(nb_closed_form(b, a, C1, C2, -C2 - t)));
    }
    CHECK(worst < 1e-9);
    CHECK(std::isfinite(nb_closed_form(b, a, C1, C2, 1e6)));
    CHECK_THROWS_AS(nb_closed_form(b, 0.0, C1, C2, 0.0), DomainError);
    CHECK_THROWS_AS(nb_closed_form(b, a, 0.0, C2, 0.0), DomainError);

    const NbConstants c = nb_fit_constants(2.0, 0.7, 0.3, -0.4);
    CHECK(nb_closed_form(2.0, 0.7, c.C1, c.C2, 0.0) == doctest::Approx(0.3).epsilon(1e-13));
    CHECK(nb_closed_form_dot(2.0, 0.7, c.C1, c.C2, 0.0) == doctest::Approx(-0.4).epsilon(1e-13));
}

TEST_CASE("geodesics: N_b trajectory matches sech^2")
{
    testing::Rng rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const double b = trial == 0 ? 1.0 : testing::uniform(rng, 0.5, 2.0);
        const double a = trial == 0 ? 1.0 : testing::uniform(rng, -1.5, 1.5);
        const double y0 = testing::uniform(rng, -1, 1), v0 = testing::uniform(rng, -1, 1);
        const Expr f = nb_metric(b);
        const GeodesicState init{0.0, {0.0, y0, 0.0}, {a, v0, 0.3}};
        const GeodesicTrajectory tr = integrate_geodesic(f, init, 10.0, 1e-11);
        REQUIRE(tr.termination == Termination::ReachedTmax);
        const NbConstants c = nb_fit_constants(b, a, y0, v0);
        const double e0 = energy(f, init);
        double prev = -1.0;
        for (const auto& s : tr.states) {
            CHECK(s.t > prev);
            prev = s.t;
            const double yc = nb_closed_form(b, a, c.C1, c.C2, s.t);
            CHECK(std::abs(s.pos[kY] - yc) <= 1e-6 * std::max(1.0, std::abs(yc)));
            CHECK(s.pos[kX] == doctest::Approx(a * s.t).epsilon(1e-12));
            CHECK(std::abs(energy(f, s) - e0) <= 10 * 1e-11 * (1 + s.t) * std::max(1.0, std::abs(e0)));
        }
    }
}

TEST_CASE("geodesics: completeness probe and flat lines")
{
    testing::Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const double b = testing::uniform(rng, 0.5, 2.0);
        const GeodesicState init{0.0,
                                 {testing::uniform(rng, -1, 1), testing::uniform(rng, -1, 1), 0.0},
                                 {testing::uniform(rng, -1, 1), testing::uniform(rng, -1, 1), testing::uniform(rng, -1, 1)}};
        const GeodesicTrajectory tr = integrate_geodesic(nb_metric(b), init, 1e3, 1e-9);
        CHECK(tr.termination == Termination::ReachedTmax);
        CHECK(tr.steps < 1000000);
    }
    const GeodesicState init{0.0, {1, 2, 3}, {0.5, -1, 2}};
    const GeodesicTrajectory tr = integrate_geodesic(Expr(0.0), init, 4.0, 1e-10);
    REQUIRE(tr.termination == Termination::ReachedTmax);
    const auto& last = tr.states.back();
    CHECK(last.pos[kX] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(last.pos[kY] == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(last.pos[kXt] == doctest::Approx(11.0).epsilon(1e-14));
    CHECK(std::abs(energy(Expr(0.0), last) - energy(Expr(0.0), init)) < 1e-12);

    // x' = 0: straight line in every metric
    const GeodesicTrajectory st = integrate_geodesic(nb_metric(1.0), {0.0, {0.2, 0.1, 0.0}, {0.0, 0.5, -1.0}}, 3.0);
    CHECK(st.states.back().pos[kY] == doctest::Approx(1.6).epsilon(1e-12));
    CHECK(st.states.back().pos[kXt] == doctest::Approx(-3.0).epsilon(1e-12));
}

TEST_CASE("geodesics: domain predicate and blowup termination")
{
    const Expr f = blowup_metric();
    const GeodesicState init{0.0, {0.0, 1.0, 0.0}, {1.0, 0.0, 1.5}};
    const GeodesicTrajectory tr = integrate_geodesic(f, init, 2.0, 1e-12);
    CHECK((tr.termination == Termination::NonFinite || tr.termination == Termination::StepUnderflow));
    CHECK(tr.states.back().t < 1.0);
    CHECK(1.0 - tr.states.back().t < 1e-3);

    const GeodesicTrajectory cut =
        integrate_geodesic(f, init, 2.0, 1e-10, [](Point2 p) { return p.x < 0.5; });
    CHECK(cut.termination == Termination::LeftDomain);
    CHECK(cut.states.back().pos[kX] <= 0.5 + 1e-12);
}

TEST_CASE("geodesics: parallel transport")
{
    // flat: constant
    const GeodesicTrajectory flat = integrate_geodesic(Expr(0.0), {0.0, {0, 0, 0}, {1, 1, 1}}, 2.0);
    const auto fl = parallel_transport(Expr(0.0), flat, {0.3, -0.2, 0.7});
    REQUIRE(fl.size() == flat.states.size());
    for (const auto& s : fl) {
        CHECK(s.Y[0] == doctest::Approx(0.3));
        CHECK(s.Y[1] == doctest::Approx(-0.2));
        CHECK(s.Y[2] == doctest::Approx(0.7));
    }

    testing::Rng rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const Expr f = testing::random_poly_exp(rng);
        const GeodesicState init{0.0, {testing::uniform(rng, -0.5, 0.5), testing::uniform(rng, -0.5, 0.5), 0.0},
                                 {testing::uniform(rng, -0.5, 0.5), testing::uniform(rng, -0.5, 0.5),
                                  testing::uniform(rng, -0.5, 0.5)}};
        const GeodesicTrajectory tr = integrate_geodesic(f, init, 1.0, 1e-10);
        if (tr.termination != Termination::ReachedTmax) continue;
        const Vec3 Y0{0.0, 1.0, testing::uniform(rng, -1, 1)};  // <Y,Y> = 1 > 0
        const auto out = parallel_transport(f, tr, Y0, 1e-11);
        REQUIRE(out.size() == tr.states.size());
        for (const auto& s : out) {
            CHECK(std::abs(s.YY - out.front().YY) < 1e-7);
            CHECK(std::abs(s.vY - out.front().vY) < 1e-7);
            CHECK(std::abs(s.vv - out.front().vv) < 1e-7);
        }
    }
}

TEST_CASE("geodesics: blowup experiment")
{
    const BlowupReport rep = blowup_experiment_pc(1e-12);
    REQUIRE(!rep.rows.empty());
    CHECK((rep.termination == Termination::NonFinite || rep.termination == Termination::StepUnderflow));
    CHECK(1.0 - rep.t_star < 1e-3);
    const BlowupRow& r0 = rep.rows.front();
    CHECK(r0.sectional == doctest::Approx(2.0));
    CHECK(r0.vv == doctest::Approx(1.0));
    CHECK(rep.max_rel_curvature_error < 1e-4);
    CHECK(rep.max_frame_error < 1e-6);
    CHECK(rep.max_phi_error < 1e-6);
    double top = 0.0;
    for (const auto& r : rep.rows) top = std::max(top, r.sectional);
    CHECK(top > 1e6);
    // sectional curvature formula at t = 0.9
    CHECK(2.0 / (0.1 * 0.1) == doctest::Approx(200.0));
}
