#include <doctest.h>

#include <cmath>

#include "random_expr.hpp"
#include "walker/errors.hpp"
#include "walker/frames.hpp"

using namespace walker;

namespace {
const Expr x = Expr::x();
const Expr y = Expr::y();

void check_pseudo_orthonormal(const Expr& f, Point2 p, const FrameCoeffs& c)
{
    const Mat3 g = frame_gram(f, p, c);
    const Mat3 want{{{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(std::abs(g[i][j] - want[i][j]) <= 1e-10);
}

// f = b^-2 alpha(x) e^{b y} + beta y + gamma with the 2-homogeneous beta.
Expr nb_family(double b, const Expr& alpha, const Expr& gamma)
{
    const Expr ax = differentiate(alpha, Coord::X);
    const Expr axx = differentiate(ax, Coord::X);
    const Expr beta = Expr(1.0 / b) / alpha * (axx - ax * ax / alpha);
    return Expr(1.0 / (b * b)) * alpha * exp(Expr(b) * y) + beta * y + gamma;
}
}  // namespace

TEST_CASE("frame_0: normalization and Gram matrix")
{
    const FrameCoeffs c = frame_0(Expr(2.0) * pow(y, 2), {0.3, 0.1});
    CHECK(c.a11 == doctest::Approx(0.5));
    CHECK(c.a33 == doctest::Approx(2.0));
    const FrameCoeffs u = frame_0(Expr(0.5) * pow(y, 2), {0, 0});
    CHECK(u.a11 == doctest::Approx(1.0));
    CHECK(u.a33 == doctest::Approx(1.0));

    testing::Rng rng(21);
    int done = 0;
    while (done < 30) {
        const Expr f = testing::random_poly_exp(rng);
        const Point2 p = testing::random_point(rng);
        if (jet_eval(f, p, 2).partial(0, 2) < 0.05) continue;
        const double a12 = testing::uniform(rng, -2, 2);
        const FrameCoeffs fc = frame_0(f, p, a12);
        check_pseudo_orthonormal(f, p, fc);
        CHECK(fc.a13 == doctest::Approx(-0.5 * a12 * a12));
        CHECK(fc.a23 == doctest::Approx(-a12));
        const ModelRecord rec = model_invariants(f, p, fc, 1);
        CHECK(rec.r == doctest::Approx(1.0));
        // f_yyy / f_yy read from the xi2 slot does not see a12.
        const ModelRecord other = model_invariants(f, p, frame_0(f, p, a12 + 1.0), 1);
        CHECK(std::abs(rec.d1[1] - other.d1[1]) <= 1e-12 * (1 + std::abs(rec.d1[1])));
        ++done;
    }
    CHECK_THROWS_AS(frame_0(-pow(y, 2), {0, 0}), SignError);
    CHECK_THROWS_AS(frame_0(x * y, {0, 0}), SignError);
}

TEST_CASE("frame_1 and the N_b invariants")
{
    // alpha = e^{x}: a12 = -alpha_x / (b alpha) = -1/b.
    const double b = 2.0;
    const Expr f = Expr(1.0 / (b * b)) * exp(x) * exp(Expr(b) * y);
    const FrameCoeffs c = frame_1(f, {0.2, 0.4});
    CHECK(c.a12 == doctest::Approx(-1.0 / b));
    CHECK(frame_1(Expr(0.25) * exp(Expr(2.0) * y), {0, 0}).a12 == doctest::Approx(0.0));

    for (double px : {-0.5, 0.0, 0.7})
        for (double py : {-1.0, 0.3}) {
            const Expr nb = exp(y);
            const ModelRecord r = model_invariants(nb, {px, py}, frame_1(nb, {px, py}), 2);
            CHECK(r.d1[0] == doctest::Approx(0.0));
            CHECK(r.d1[1] == doctest::Approx(1.0));
        }
    CHECK_THROWS_AS(frame_1(pow(y, 2), {0, 0}), DivisionError);
}

TEST_CASE("model_invariants realize N2(b), P2(c) and CW")
{
    const Expr alpha = exp(Expr(0.7) * x) + Expr(2.0);
    const double b = -1.5;
    const Expr f = nb_family(b, alpha, sin(x));
    for (double px : {-0.4, 0.1, 0.6})
        for (double py : {-0.5, 0.5}) {
            const ModelRecord r = model_invariants(f, {px, py}, frame_1(f, {px, py}), 2);
            CHECK(r.r == doctest::Approx(1.0));
            CHECK(std::abs(r.d1[0]) <= 1e-9);
            CHECK(r.d1[1] == doctest::Approx(b));
            CHECK(r.d2[0][0] == doctest::Approx(-1.0));
            CHECK(std::abs(r.d2[0][1]) <= 1e-8);
            CHECK(std::abs(r.d2[1][0]) <= 1e-8);
            CHECK(r.d2[1][1] == doctest::Approx(b * b));
            const ModelTag tag = match_model(r);
            CHECK(tag.kind == ModelKind::N2);
            CHECK(tag.parameter == doctest::Approx(b));
        }

    // alpha = chat (x - x0)^-2 with x > x0 has c = -2 chat^{-1/2}.
    const double chat = 4.0;
    const Expr pc = Expr(0.5) * pow(y, 2) * Expr(chat) * pow(x + Expr(1.0), -2) + x * y;
    const double c = -2.0 / std::sqrt(chat);
    const ModelRecord rp = model_invariants(pc, {0.5, 0.3}, frame_0(pc, {0.5, 0.3}), 2);
    CHECK(rp.d1[0] == doctest::Approx(c));
    CHECK(rp.d2[0][0] == doctest::Approx(1.5 * c * c));
    CHECK(match_model(rp).kind == ModelKind::P2);

    const Expr cw = Expr(0.8) * pow(y, 2) + sin(x) * y;
    const ModelRecord rc = model_invariants(cw, {0.1, 0.2}, frame_0(cw, {0.1, 0.2}), 2);
    for (double v : rc.d1) CHECK(std::abs(v) <= 1e-12);
    CHECK(match_model(rc).kind == ModelKind::CW);
}

TEST_CASE("match_model: reference records")
{
    ModelRecord n;
    n.k = 2;
    n.r = 1;
    n.d1 = {0, 2};
    n.d2 = {{{-1, 0}, {0, 4}}};
    const ModelTag tn = match_model(n);
    CHECK(tn.kind == ModelKind::N2);
    CHECK(tn.parameter == doctest::Approx(2.0));

    ModelRecord z;
    z.k = 2;
    z.r = 1;
    CHECK(match_model(z).kind == ModelKind::CW);

    const double c = -std::sqrt(2.0);
    ModelRecord p;
    p.k = 2;
    p.r = 1;
    p.d1 = {c, 0};
    p.d2 = {{{1.5 * c * c, 0}, {0, 0}}};
    const ModelTag tp = match_model(p);
    CHECK(tp.kind == ModelKind::P2);
    CHECK(tp.parameter == doctest::Approx(c));

    ModelRecord n1 = n;
    n1.d2[0][0] = 3.0;
    CHECK(match_model(n1).kind == ModelKind::N1);
    ModelRecord a0;
    a0.r = 1;
    CHECK(match_model(a0).kind == ModelKind::A0);
    ModelRecord bad = n;
    bad.r = 2;
    CHECK_THROWS_AS(match_model(bad), NotNormalizedError);
    ModelRecord none = n;
    none.d1 = {1, 1};
    CHECK(match_model(none).kind == ModelKind::None);
}

TEST_CASE("kv_frame: lambda and weighted constants")
{
    const double b = 1.7;
    const KvFrame k = kv_frame(exp(Expr(b) * y), {0.3, 0.0});
    CHECK(k.lambda == doctest::Approx(b));
    CHECK(kv_frame(pow(y, 3), {0.0, 1.0}).lambda == doctest::Approx(1.0));

    const KvFrame w = kv_frame(pow(y, 3) + exp(x + y) + x * pow(y, 2), {0.2, 0.6});
    CHECK(w.weighted[0] == doctest::Approx(1.0));
    CHECK(std::abs(w.weighted[1]) <= 1e-10);
    CHECK(w.weighted[2] == doctest::Approx(1.0));
    CHECK_THROWS_AS(kv_frame(pow(y, 2), {0, 0}), SignError);
}
