#include <doctest.h>

#include <cmath>

#include "random_expr.hpp"
#include "walker/errors.hpp"
#include "walker/solitons.hpp"

using namespace walker;

namespace {
const Expr x = Expr::x();
const Expr y = Expr::y();
const Grid kBox{5, 5, -0.5, 0.5, -0.5, 0.5};

std::vector<Vec3> samples(int n, unsigned seed, double lo = -0.5, double hi = 0.5)
{
    testing::Rng rng(seed);
    std::vector<Vec3> out;
    for (int i = 0; i < n; ++i)
        out.push_back({testing::uniform(rng, lo, hi), testing::uniform(rng, lo, hi), testing::uniform(rng, -1, 1)});
    return out;
}

Potential potential(double mu_y, const Expr& hhat) { return {mu_y, Profile::from_expr(hhat)}; }
}  // namespace

TEST_CASE("hessian: worked examples")
{
    const Mat3 h = hessian(potential(0.5, Expr(0.0)), exp(y), {0.2, 0.3});
    CHECK(h[kX][kX] == doctest::Approx(-0.5 * std::exp(0.3)));
    CHECK(h[kY][kY] == 0.0);

    const Mat3 z = hessian(potential(0.0, Expr(4.0)), exp(x * y), {0.2, 0.3});
    for (const auto& row : z)
        for (double v : row) CHECK(v == 0.0);

    const Mat3 hx = hessian(potential(0.0, pow(x, 3)), exp(x * y) + pow(y, 3), {0.5, 0.3});
    CHECK(hx[kX][kX] == doctest::Approx(3.0));
}

TEST_CASE("lie_metric: Killing, gradient and homothety")
{
    VectorFieldAnsatz dxt;
    dxt.T = Profile::constant(1.0);
    for (const Vec3& p : samples(10, 1)) {
        const Mat3 l = lie_metric(as_field(dxt), exp(x) * sin(y), p);
        for (const auto& row : l)
            for (double v : row) CHECK(std::abs(v) < 1e-14);
    }

    testing::Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const Expr f = testing::random_poly_exp(rng);
        const Potential h = potential(testing::uniform(rng, -2, 2), testing::random_x_polynomial(rng, 4));
        const Vec3 p{testing::uniform(rng, -1, 1), testing::uniform(rng, -1, 1), testing::uniform(rng, -1, 1)};
        const Mat3 l = lie_metric(gradient_field(h), f, p);
        const Mat3 hs = hessian(h, f, {p[0], p[1]});
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) CHECK(std::abs(l[a][b] - 2 * hs[a][b]) <= 1e-9);
    }

    VectorFieldAnsatz scale;
    scale.mu = 2.0;
    const Vec3 p{0.3, -0.2, 0.7};
    const Mat3 l = lie_metric(as_field(scale), Expr(0.0), p);
    const MetricAtPoint m = metric_at(Expr(0.0), {p[0], p[1]});
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) CHECK(l[a][b] == doctest::Approx(2 * m.g[a][b]));
}

TEST_CASE("Ricci solitons R1/R2 are steady")
{
    const BuiltSoliton r1 = build_ricci_soliton({RicciCase::R1, 1.0, Expr(1.0), Expr(0.0), Expr(0.0)}, kBox);
    CHECK(r1.residual < 1e-12);
    CHECK(r1.h.mu_y == doctest::Approx(0.5));
    CHECK(std::abs(r1.h.hhat(0.3).d2) < 1e-14);
    const auto c1 = verify_soliton(r1.f, gradient_field(r1.h), 0.0, SolitonKind::Ricci, samples(20, 4));
    CHECK(c1.residual < 1e-9);
    CHECK(c1.label() == "steady");
    // grad h = (k/2) d_y is spacelike.
    const FieldValue g = gradient_field(r1.h)({0.1, 0.1, 0});
    CHECK(metric_at(r1.f, {0.1, 0.1}).inner(g.X, g.X) > 0);

    const BuiltSoliton r2 = build_ricci_soliton({RicciCase::R2, 0.0, Expr(1.0), Expr(0.0), Expr(0.0)}, kBox);
    CHECK(r2.h.hhat(0.2).d2 == doctest::Approx(-1.0));
    CHECK(r2.residual < 1e-12);

    testing::Rng rng(8);
    for (int trial = 0; trial < 5; ++trial) {
        const RicciCase rc{trial % 2 ? RicciCase::R1 : RicciCase::R2, testing::uniform(rng, 0.5, 2),
                           exp(Expr(testing::uniform(rng, -1, 1)) * x), testing::random_x_polynomial(rng, 3),
                           testing::random_x_polynomial(rng, 3)};
        const BuiltSoliton s = build_ricci_soliton(rc, kBox);
        CHECK(verify_soliton(s.f, gradient_field(s.h), 0.0, SolitonKind::Ricci, samples(20, 40 + trial)).residual <
              1e-8);
    }
}

TEST_CASE("Cotton solitons: family constraints and consistency report")
{
    const BuiltCottonSoliton c3 =
        build_cotton_soliton({CottonCase::C3, 0.0, Expr(1.0), Expr(0.0), Expr(0.0), Expr(0.0)}, kBox);
    CHECK(std::abs(cotton(c3.f, {0.1, 0.2}).c2[kX][kX]) == doctest::Approx(3.0));
    CHECK(c3.family_residual < 1e-12);
    CHECK(c3.report.derived_residual < 1e-8);
    CHECK(c3.report.hxx_discrepancy > 1.0);  // printed -3 alpha1 vs derived 3/2 alpha1

    const BuiltCottonSoliton triv =
        build_cotton_soliton({CottonCase::C1, 2.0, Expr(0.0), Expr(0.0), x, Expr(1.0)}, kBox);
    CHECK(triv.report.derived_residual < 1e-12);
    CHECK(triv.h.mu_y == 0.0);

    const BuiltCottonSoliton c2 =
        build_cotton_soliton({CottonCase::C2, 1.0, Expr(1.0), Expr(0.0), Expr(0.0), Expr(0.0)}, kBox);
    for (const Vec3& p : samples(10, 11)) {
        const Jet2 j = jet_eval(c2.f, {p[0], p[1]}, 4);
        CHECK(std::abs(j.partial(0, 4) + j.partial(0, 2)) < 1e-12);
    }
    CHECK(c2.report.derived_residual < 1e-8);

    const BuiltCottonSoliton c1 =
        build_cotton_soliton({CottonCase::C1, 1.5, exp(x), Expr(2.0) + sin(x), x * x, Expr(0.0)}, kBox);
    CHECK(c1.family_residual < 1e-9);
    CHECK(c1.report.printed_depends_on_y);
    CHECK(c1.report.derived_mu_y == doctest::Approx(-1.5 * 1.5 / 4));
    CHECK(c1.report.derived_residual < 1e-8);
    CHECK(!c1.report.notes.empty());

    // Flipping the sign flips the derived potential.
    const BuiltCottonSoliton c1f =
        build_cotton_soliton({CottonCase::C1, 1.5, exp(x), Expr(2.0) + sin(x), x * x, Expr(0.0)}, kBox, {-1});
    CHECK(c1f.report.derived_mu_y == doctest::Approx(1.5 * 1.5 / 4));
    CHECK(c1f.report.derived_residual < 1e-8);

    CHECK_THROWS_AS(derive_cotton_potential(exp(x * y) + pow(y, 5), kBox), InconsistencyError);
}

TEST_CASE("verify_soliton: flat and Cotton example")
{
    VectorFieldAnsatz zero;
    const auto flat = verify_soliton(Expr(0.0), as_field(zero), 0.0, SolitonKind::Cotton, samples(5, 2));
    CHECK(flat.residual == 0.0);

    const double lam = 0.7;
    const Expr gamma = sin(x);
    const Expr f = cotton_example_metric(lam, gamma);
    const auto pts = samples(20, 6);
    const auto fixed =
        verify_soliton(f, as_field(cotton_example_field(lam, gamma, true)), lam, SolitonKind::Cotton, pts);
    CHECK(fixed.residual < 1e-10);
    CHECK(fixed.label() == "shrinking");
    const auto printed =
        verify_soliton(f, as_field(cotton_example_field(lam, gamma, false)), lam, SolitonKind::Cotton, pts);
    CHECK(printed.residual > 1e-3);
    CHECK(printed.residual_flipped > 1e-3);
}

TEST_CASE("homothety residuals")
{
    const auto pts = samples(25, 12, -1, 1);
    VectorFieldAnsatz killing;
    killing.T = Profile::constant(1.0);
    CHECK(homothety_residual(killing, exp(y) + x, pts).full == 0.0);

    VectorFieldAnsatz dx;
    dx.abar = 1.0;
    CHECK(homothety_residual(dx, exp(y), pts).full < 1e-14);

    VectorFieldAnsatz hom;
    hom.mu = 1.0;
    const HomothetyResidual r = homothety_residual(hom, exp(y), pts);
    CHECK(r.scalar > 0.1);
    CHECK(r.full == doctest::Approx(2 * r.scalar));

    // Plane waves do carry homotheties: f = y^2 with X = y d_y + 2 xt d_xt (mu = 2).
    VectorFieldAnsatz pw;
    pw.mu = 2.0;
    CHECK(homothety_residual(pw, pow(y, 2), pts).full < 1e-14);
}

TEST_CASE("homothety grid search on exp(y) finds only Killing fields")
{
    std::vector<Point2> pts;
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) pts.push_back({-1.0 + i / 3.0, -1.0 + j / 3.0});
    const std::vector<double> as{-1, 0, 1}, abars{-1, 0, 1}, mus{-2, -1, -0.5, 0, 0.5, 1, 2};
    const HomothetySearchResult r = homothety_grid_search(exp(y), as, abars, mus, pts);
    CHECK(r.best_killing < 1e-10);
    CHECK(r.best_nonkilling > 1e3 * r.best_killing);
    CHECK(r.rows.size() == 63);

    // The same search on a plane wave finds mu != 0.
    const HomothetySearchResult pw = homothety_grid_search(pow(y, 2), as, abars, mus, pts);
    CHECK(pw.best_nonkilling < 1e-10);
}
