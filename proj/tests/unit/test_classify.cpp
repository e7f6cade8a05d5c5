#include <doctest.h>

#include <cmath>

#include "random_expr.hpp"
#include "walker/classify.hpp"
#include "walker/errors.hpp"

using namespace walker;

namespace {
const Expr x = Expr::x();
const Expr y = Expr::y();

std::vector<Vec3> sample_points(const Grid& box, int n, unsigned seed)
{
    testing::Rng rng(seed);
    std::vector<Vec3> pts;
    for (int i = 0; i < n; ++i)
        pts.push_back({testing::uniform(rng, box.x0, box.x1), testing::uniform(rng, box.y0, box.y1),
                       testing::uniform(rng, -1, 1)});
    return pts;
}

Expr beta_for(double b, const Expr& alpha)
{
    const Expr ax = differentiate(alpha, Coord::X);
    return Expr(1.0 / b) / alpha * (differentiate(ax, Coord::X) - ax * ax / alpha);
}
}  // namespace

TEST_CASE("classify_structured: reference cases")
{
    const Grid box{5, 5, 0.25, 1.25, -0.5, 0.5};
    const Classification cw = classify_structured({QuadYFamily{Expr(6.0), sin(x), x}, box});
    CHECK(cw.tag == ClassTag::LocallySymmetricCW);
    CHECK(cw.parameter == doctest::Approx(3.0));

    const double chat = 2.5;
    const Classification pr = classify_structured({QuadYFamily{Expr(chat) * pow(x + Expr(1.0), -2), x, Expr(0.0)}, box});
    CHECK(pr.tag == ClassTag::HomogeneousP);
    CHECK(pr.parameter == doctest::Approx(-2.0 / std::sqrt(chat)));

    const Grid left{5, 5, -3.0, -1.5, -0.5, 0.5};
    const Classification pl = classify_structured({QuadYFamily{Expr(chat) * pow(x + Expr(1.0), -2), x, Expr(0.0)}, left});
    CHECK(pl.tag == ClassTag::HomogeneousP);
    CHECK(pl.parameter == doctest::Approx(2.0 / std::sqrt(chat)));

    const Classification n = classify_structured({ExpYFamily{Expr(1.0), 1.0, Expr(0.0), Expr(0.0)}, box});
    CHECK(n.tag == ClassTag::HomogeneousN);
    CHECK(n.parameter == doctest::Approx(1.0));

    const Classification n1 = classify_structured({ExpYFamily{exp(x), 1.0, x, Expr(0.0)}, box});
    CHECK(n1.tag == ClassTag::OneCurvHomOnlyN1);

    CHECK(classify_structured({QuadYFamily{Expr(1.0) + x * x, x, Expr(0.0)}, box}).tag == ClassTag::NotOneCurvHom);
    CHECK(classify_structured({QuadYFamily{Expr(0.0), x, x}, box}).tag == ClassTag::Flat);
    CHECK_THROWS_AS(classify_structured({QuadYFamily{Expr(-1.0) + x, x, x}, box}), DomainError);
}

TEST_CASE("classify_sampled: reference cases")
{
    const Grid grid;
    CHECK(classify_sampled(exp(x * y), grid).tag == ClassTag::NotOneCurvHom);
    const Classification n = classify_sampled(exp(y), grid);
    CHECK(n.tag == ClassTag::HomogeneousN);
    CHECK(n.parameter == doctest::Approx(1.0));
    const double chat = 3.0;
    const Classification p = classify_sampled(Expr(0.5 * chat) * pow(y, 2) * pow(x + Expr(1.0), -2), grid);
    CHECK(p.tag == ClassTag::HomogeneousP);
    CHECK(p.parameter == doctest::Approx(-2.0 / std::sqrt(chat)));
    const Classification c = classify_sampled(Expr(2.0) * pow(y, 2) + x * y, grid);
    CHECK(c.tag == ClassTag::LocallySymmetricCW);
    CHECK(c.parameter == doctest::Approx(2.0));
    CHECK(classify_sampled(x * y, grid).tag == ClassTag::Flat);
    CHECK_THROWS_AS(classify_sampled(-exp(y), grid), SignError);
    CHECK(classify_sampled(exp(x) * exp(y) + x * y, grid).tag == ClassTag::OneCurvHomOnlyN1);
}

TEST_CASE("structured and sampled classification agree")
{
    const Grid box{5, 5, 0.1, 1.1, -0.6, 0.6};
    testing::Rng rng(31);
    for (int trial = 0; trial < 6; ++trial) {
        const double b = testing::uniform(rng, 0.5, 2.0) * (trial % 2 ? -1 : 1);
        const Expr alpha = exp(Expr(testing::uniform(rng, -1, 1)) * x) + Expr(1.0);
        const Expr gamma = testing::random_x_polynomial(rng, 2);
        for (const StructuredFamily& fam :
             {StructuredFamily{ExpYFamily{alpha, b, beta_for(b, alpha), gamma}, box},
              StructuredFamily{ExpYFamily{alpha, b, x, gamma}, box},
              StructuredFamily{QuadYFamily{Expr(testing::uniform(rng, 0.5, 3)), x, gamma}, box},
              StructuredFamily{QuadYFamily{Expr(testing::uniform(rng, 0.5, 3)) * pow(x + Expr(1.0), -2), x, gamma}, box},
              StructuredFamily{QuadYFamily{Expr(1.0) + x * x, x, gamma}, box}}) {
            const Classification s = classify_structured(fam);
            const Classification g = classify_sampled(fam.f(), box);
            CHECK(to_string(s.tag) == std::string(to_string(g.tag)));
            CHECK(s.parameter == doctest::Approx(g.parameter).epsilon(1e-6));
        }
    }
}

TEST_CASE("pullback_f and verify_isometry basics")
{
    const Expr f = exp(x) * pow(y, 2) + sin(y);
    const Transform id;
    const auto ft = pullback_f(f, id);
    CHECK(ft({0.3, 0.4}) == doctest::Approx(f(0.3, 0.4)));
    const std::vector<Vec3> pts{{0.1, 0.2, 0.3}, {-1, 2, 0}};
    CHECK(verify_isometry(id, f, f, pts) == 0.0);

    // N_b with phi = ln(alpha)/b, psi_x = -gamma - phi_x^2/2 gives the family f.
    const double b = 1.5;
    const Expr alpha = Expr(2.0) + sin(x);
    const Expr gamma = x * x;
    Transform t;
    const Expr phi = log(alpha) / Expr(b);
    t.phi = Profile::from_expr(phi);
    const Expr phix = differentiate(phi, Coord::X);
    // psi = -x^3/3 - int phi_x^2 / 2; only psi_x enters the metric.
    t.psi = Profile([=](double xx) { return Deriv2{0.0, -gamma(xx, 0) - 0.5 * std::pow(phix(xx, 0), 2), 0.0}; }, "psi");
    const Expr model = Expr(1 / (b * b)) * exp(Expr(b) * y);
    const auto fam = pullback_f(model, t);
    const Expr want = Expr(1 / (b * b)) * alpha * exp(Expr(b) * y) + beta_for(b, alpha) * y + gamma;
    for (double px : {-0.5, 0.2, 1.0})
        for (double py : {-1.0, 0.5}) CHECK(fam({px, py}) == doctest::Approx(want(px, py)));
}

TEST_CASE("homogeneity maps are exact isometries")
{
    testing::Rng rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        const double a1 = testing::uniform(rng, -0.5, 0.5), a2 = testing::uniform(rng, -1, 1),
                     a3 = testing::uniform(rng, -1, 1);
        const Grid box{1, 1, -0.5, 0.5, -1, 1};
        const auto pts = sample_points(box, 50, 100 + trial);

        const double b = testing::uniform(rng, 0.3, 2.0);
        const Expr nb = Expr(1 / (b * b)) * exp(Expr(b) * y);
        const Transform tn = nb_homogeneity_map(b, a1, a2, a3);
        CHECK(verify_isometry(tn, nb, nb, pts) < 1e-10);
        const Vec3 o = tn.apply({0, 0, 0});
        CHECK(o[0] == doctest::Approx(a1));
        CHECK(o[1] == doctest::Approx(a2));
        CHECK(o[2] == doctest::Approx(a3));

        for (double coef : {0.05, 0.125, 0.3, 2.0}) {
            const Expr pc = Expr(coef) * pow(y, 2) * pow(x + Expr(1.0), -2);
            const Transform tp = pc_homogeneity_map(coef, a1, a2, a3);
            CHECK(verify_isometry(tp, pc, pc, pts) < 1e-10);
            const Vec3 q = tp.apply({0, 0, 0});
            CHECK(q[1] == doctest::Approx(a2));
            CHECK(q[2] == doctest::Approx(a3));
        }

        const Expr cw = pow(y, 2);
        const Transform tc = cw_homogeneity_map(a1, a2, a3);
        CHECK(verify_isometry(tc, cw, cw, pts) < 1e-10);
    }
}

TEST_CASE("build_isometry_to_model for the three families")
{
    const Grid box{5, 5, 0.2, 1.2, -0.7, 0.7};
    const auto pts = sample_points(box, 50, 9);

    const Expr alpha = exp(Expr(0.5) * x) + Expr(0.5);
    const double b = 1.3;
    const StructuredFamily nfam{ExpYFamily{alpha, b, beta_for(b, alpha), sin(x)}, box};
    const ModelIsometry n = build_isometry_to_model(nfam);
    CHECK(n.ode_residual < 1e-8);
    CHECK(verify_isometry(n.transform, n.model, n.target, pts) < 1e-7);

    const StructuredFamily pfam{QuadYFamily{Expr(2.0) * pow(x + Expr(1.0), -2), cos(x), x * x}, box};
    const ModelIsometry p = build_isometry_to_model(pfam);
    CHECK(p.ode_residual < 1e-8);
    CHECK(verify_isometry(p.transform, p.model, p.target, pts) < 1e-7);

    const StructuredFamily cfam{QuadYFamily{Expr(3.0), exp(x), Expr(1.0) - x}, box};
    const ModelIsometry c = build_isometry_to_model(cfam);
    CHECK(verify_isometry(c.transform, c.model, c.target, pts) < 1e-7);

    const ModelIsometry triv = build_isometry_to_model({QuadYFamily{Expr(2.0), Expr(0.0), Expr(0.0)}, box});
    CHECK(std::abs(triv.transform.phi.value(0.9)) < 1e-14);
    CHECK(std::abs(triv.transform.psi.value(0.9)) < 1e-14);

    CHECK_THROWS_AS(build_isometry_to_model({QuadYFamily{Expr(1.0) + x * x, x, x}, box}), UnclassifiedError);
}
