#include "walker/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "walker/errors.hpp"

namespace walker {

namespace {

const Expr kYVar = Expr::y();

std::vector<double> x_samples(const Grid& g, int n = 25)
{
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = g.x0 + (g.x1 - g.x0) * i / (n - 1);
    return xs;
}

double at_x(const Expr& e, double x) { return e(x, 0.0); }

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

std::vector<Point2> Grid::points() const
{
    if (nx < 1 || ny < 1) throw Error("grid needs at least one point per axis");
    std::vector<Point2> pts;
    pts.reserve(static_cast<std::size_t>(nx * ny));
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            const double x = nx == 1 ? x0 : x0 + (x1 - x0) * i / (nx - 1);
            const double y = ny == 1 ? y0 : y0 + (y1 - y0) * j / (ny - 1);
            pts.push_back({x, y});
        }
    return pts;
}

Expr StructuredFamily::f() const
{
    const Expr& y = kYVar;
    return std::visit(
        [&](const auto& fam) -> Expr {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, ExpYFamily>)
                return Expr(1.0 / (fam.b * fam.b)) * fam.alpha * exp(Expr(fam.b) * y) + fam.beta * y + fam.gamma;
            else if constexpr (std::is_same_v<T, QuadYFamily>)
                return Expr(0.5) * pow(y, 2) * fam.alpha + fam.beta * y + fam.gamma;
            else
                return fam.f;
        },
        variant);
}

const char* to_string(ClassTag t)
{
    switch (t) {
    case ClassTag::LocallySymmetricCW: return "LocallySymmetricCW";
    case ClassTag::HomogeneousN: return "Homogeneous_N";
    case ClassTag::HomogeneousP: return "Homogeneous_P";
    case ClassTag::OneCurvHomOnlyN1: return "OneCurvHomOnly_N1";
    case ClassTag::NotOneCurvHom: return "NotOneCurvHom";
    case ClassTag::Flat: return "Flat";
    }
    return "?";
}

std::string Classification::name() const
{
    switch (tag) {
    case ClassTag::LocallySymmetricCW: return std::string(to_string(tag)) + "(eps=" + fmt(parameter) + ")";
    case ClassTag::HomogeneousN:
    case ClassTag::OneCurvHomOnlyN1: return std::string(to_string(tag)) + "(b=" + fmt(parameter) + ")";
    case ClassTag::HomogeneousP: return std::string(to_string(tag)) + "(c=" + fmt(parameter) + ")";
    default: return to_string(tag);
    }
}

double mean(std::span<const double> v)
{
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

bool is_constant(std::span<const double> v, double rtol)
{
    if (v.empty()) return true;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo <= rtol * (1.0 + std::abs(mean(v)));
}

Classification classify_structured(const StructuredFamily& fam)
{
    if (const auto* g = std::get_if<GenericFamily>(&fam.variant)) return classify_sampled(g->f, fam.box);

    Classification out;
    const std::vector<double> xs = x_samples(fam.box);
    for (double x : xs) out.points.push_back({x, 0.0});

    if (const auto* e = std::get_if<ExpYFamily>(&fam.variant)) {
        if (std::abs(e->b) <= kZeroB) throw DomainError("exponential family needs b != 0");
        EvidenceColumn beta{"beta", {}}, need{"beta_required", {}};
        for (double x : xs) {
            const auto a = x_derivatives(e->alpha, x, 2);
            if (!(a[0] > 0.0)) throw DomainError("alpha must be positive on the domain");
            beta.values.push_back(at_x(e->beta, x));
            need.values.push_back((a[2] - a[1] * a[1] / a[0]) / (e->b * a[0]));
        }
        bool match = true;
        for (std::size_t i = 0; i < xs.size(); ++i)
            match = match && std::abs(beta.values[i] - need.values[i]) <= kConstancyRel * (1.0 + std::abs(need.values[i]));
        out.tag = match ? ClassTag::HomogeneousN : ClassTag::OneCurvHomOnlyN1;
        out.parameter = e->b;
        out.evidence = {beta, need};
        return out;
    }

    const auto& q = std::get<QuadYFamily>(fam.variant);
    EvidenceColumn alpha{"alpha", {}}, cval{"alpha_x/alpha^1.5", {}};
    for (double x : xs) alpha.values.push_back(at_x(q.alpha, x));
    if (std::all_of(alpha.values.begin(), alpha.values.end(), [](double a) { return std::abs(a) <= 1e-12; })) {
        out.tag = ClassTag::Flat;
        out.evidence = {alpha};
        return out;
    }
    for (double a : alpha.values)
        if (!(a > 0.0)) throw DomainError("alpha must be positive on the domain");
    if (is_constant(alpha.values)) {
        out.tag = ClassTag::LocallySymmetricCW;
        out.parameter = 0.5 * mean(alpha.values);
        out.evidence = {alpha};
        return out;
    }
    for (double x : xs) {
        const auto a = x_derivatives(q.alpha, x, 1);
        cval.values.push_back(a[1] / std::pow(a[0], 1.5));
    }
    out.evidence = {alpha, cval};
    if (is_constant(cval.values)) {
        out.tag = ClassTag::HomogeneousP;
        out.parameter = mean(cval.values);
    } else {
        out.tag = ClassTag::NotOneCurvHom;
    }
    return out;
}

Classification classify_sampled(const Expr& f, const Grid& grid)
{
    Classification out;
    out.points = grid.points();
    EvidenceColumn fyy{"f_yy", {}}, ratio{"f_yyy/f_yy", {}};
    bool all_flat = true;
    for (const Point2& p : out.points) {
        const Jet2 j = jet_eval(f, p, 3);
        const double v = j.partial(0, 2);
        fyy.values.push_back(v);
        all_flat = all_flat && is_negligible(v, j.scale());
        ratio.values.push_back(j.partial(0, 3) / v);
    }
    if (all_flat) {
        out.tag = ClassTag::Flat;
        out.evidence = {fyy};
        return out;
    }
    for (double v : fyy.values)
        if (!(v > 0.0)) throw SignError("classification needs f_yy > 0 on the grid");

    out.evidence = {fyy, ratio};
    if (!is_constant(ratio.values)) {
        out.tag = ClassTag::NotOneCurvHom;
        return out;
    }
    const double b = mean(ratio.values);
    if (std::abs(b) > kZeroB) {
        std::array<EvidenceColumn, 4> d2{EvidenceColumn{"d2_11", {}}, EvidenceColumn{"d2_12", {}},
                                         EvidenceColumn{"d2_21", {}}, EvidenceColumn{"d2_22", {}}};
        for (const Point2& p : out.points) {
            const ModelRecord rec = model_invariants(f, p, frame_1(f, p), 2);
            for (int i = 0; i < 2; ++i)
                for (int k = 0; k < 2; ++k) d2[static_cast<std::size_t>(2 * i + k)].values.push_back(rec.d2[i][k]);
        }
        bool constant = true;
        for (auto& col : d2) {
            constant = constant && is_constant(col.values);
            out.evidence.push_back(std::move(col));
        }
        out.tag = constant ? ClassTag::HomogeneousN : ClassTag::OneCurvHomOnlyN1;
        out.parameter = b;
        return out;
    }

    EvidenceColumn cval{"f_xyy/f_yy^1.5", {}};
    for (const Point2& p : out.points) {
        const Jet2 j = jet_eval(f, p, 3);
        cval.values.push_back(j.partial(1, 2) / std::pow(j.partial(0, 2), 1.5));
    }
    const bool constant = is_constant(cval.values);
    const double c = mean(cval.values);
    out.evidence.push_back(std::move(cval));
    if (!constant) {
        out.tag = ClassTag::NotOneCurvHom;
    } else if (std::abs(c) <= kZeroB) {
        out.tag = ClassTag::LocallySymmetricCW;
        out.parameter = 0.5 * mean(fyy.values);
    } else {
        out.tag = ClassTag::HomogeneousP;
        out.parameter = c;
    }
    return out;
}

Vec3 Transform::apply(const Vec3& p) const
{
    const Deriv2 ph = phi(p[kX]);
    const Deriv2 ps = psi(p[kX]);
    return {s * p[kX] + a1, p[kY] + ph.v, kappa * p[kXt] - rho * ph.d1 * p[kY] + ps.v};
}

Mat3 Transform::jacobian(const Vec3& p) const
{
    const Deriv2 ph = phi(p[kX]);
    const Deriv2 ps = psi(p[kX]);
    Mat3 j{};
    j[kX][kX] = s;
    j[kY][kX] = ph.d1;
    j[kXt][kX] = -rho * ph.d2 * p[kY] + ps.d1;
    j[kY][kY] = 1.0;
    j[kXt][kY] = -rho * ph.d1;
    j[kXt][kXt] = kappa;
    return j;
}

Mat3 pullback_metric(const Expr& f, const Transform& t, const Vec3& p)
{
    const Vec3 q = t.apply(p);
    const Mat3 j = t.jacobian(p);
    const MetricAtPoint m = metric_at(f, {q[kX], q[kY]});
    Mat3 out{};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            double s = 0.0;
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) s += j[c][a] * m.g[c][d] * j[d][b];
            out[a][b] = s;
        }
    return out;
}

std::function<double(Point2)> pullback_f(const Expr& f, const Transform& t)
{
    return [f, t](Point2 p) { return -0.5 * pullback_metric(f, t, {p.x, p.y, 0.0})[kX][kX]; };
}

double verify_isometry(const Transform& t, const Expr& f, const Expr& f_target, std::span<const Vec3> samples)
{
    double worst = 0.0;
    for (const Vec3& p : samples) {
        const Mat3 pulled = pullback_metric(f, t, p);
        const MetricAtPoint target = metric_at(f_target, {p[kX], p[kY]});
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) worst = std::max(worst, std::abs(pulled[a][b] - target.g[a][b]));
    }
    return worst;
}

ModelIsometry build_isometry_to_model(const StructuredFamily& fam, double tol)
{
    ModelIsometry out;
    out.classification = classify_structured(fam);
    out.target = fam.f();
    const double lo = fam.box.x0, hi = fam.box.x1, xs = 0.5 * (lo + hi);
    OdeOptions opts;
    opts.rtol = tol;
    opts.atol = tol;
    const Expr& y = kYVar;

    Expr alpha, beta, gamma;
    std::vector<double> z0(3, 0.0);
    OdeRhs rhs;
    switch (out.classification.tag) {
    case ClassTag::HomogeneousN: {
        const auto& e = std::get<ExpYFamily>(fam.variant);
        const double b = e.b;
        out.model = Expr(1.0 / (b * b)) * exp(Expr(b) * y);
        const Expr l = log(e.alpha);
        const Expr l1 = differentiate(l, Coord::X);
        const Expr l2 = differentiate(l1, Coord::X);
        gamma = e.gamma;
        z0 = {at_x(l, xs) / b, at_x(l1, xs) / b, 0.0};
        rhs = [l2, gamma, b](double x, std::span<const double> z, std::span<double> dz) {
            dz[0] = z[1];
            dz[1] = at_x(l2, x) / b;
            dz[2] = -at_x(gamma, x) - 0.5 * z[1] * z[1];
        };
        break;
    }
    case ClassTag::HomogeneousP: {
        const auto& q = std::get<QuadYFamily>(fam.variant);
        out.model = Expr(0.5) * pow(y, 2) * q.alpha;
        alpha = q.alpha;
        beta = q.beta;
        gamma = q.gamma;
        rhs = [alpha, beta, gamma](double x, std::span<const double> z, std::span<double> dz) {
            const double a = at_x(alpha, x);
            dz[0] = z[1];
            dz[1] = at_x(beta, x) - a * z[0];
            dz[2] = 0.5 * a * z[0] * z[0] - 0.5 * z[1] * z[1] - at_x(gamma, x);
        };
        break;
    }
    case ClassTag::LocallySymmetricCW: {
        const auto* q = std::get_if<QuadYFamily>(&fam.variant);
        if (!q) throw UnclassifiedError("locally symmetric generic f has no structured coefficients");
        const double eps = out.classification.parameter;
        out.model = Expr(eps) * pow(y, 2);
        beta = q->beta;
        gamma = q->gamma;
        rhs = [eps, beta, gamma](double x, std::span<const double> z, std::span<double> dz) {
            dz[0] = z[1];
            dz[1] = at_x(beta, x) - 2.0 * eps * z[0];
            dz[2] = eps * z[0] * z[0] - 0.5 * z[1] * z[1] - at_x(gamma, x);
        };
        break;
    }
    default:
        throw UnclassifiedError(std::string("no model isometry for class ") + to_string(out.classification.tag));
    }

    auto table = std::make_shared<const OdeTable>(rhs, xs, z0, lo, hi, opts);
    out.transform.phi = Profile::from_table(table, 0, 1);
    out.transform.psi = Profile::from_table(table, 2, -1);

    // Independent check of the phi equation: phi'' from differences of the
    // tabulated phi', compared against the equation's own right-hand side.
    const double h = 1e-3 * std::max(1.0, hi - lo);
    double worst = 0.0;
    for (double x : table->nodes()) {
        if (x - h < lo || x + h > hi) continue;
        auto d1 = [&](double at) { return table->state(at)[1]; };
        const double dh = (d1(x + h) - d1(x - h)) / (2 * h);
        const double dh2 = (d1(x + h / 2) - d1(x - h / 2)) / h;
        const double phi_xx = (4 * dh2 - dh) / 3;
        const double want = table->rhs_at(x, table->state(x))[1];
        worst = std::max(worst, std::abs(phi_xx - want));
        if (out.classification.tag == ClassTag::HomogeneousN) {
            const auto& e = std::get<ExpYFamily>(fam.variant);
            worst = std::max(worst, std::abs(table->state(x)[0] - std::log(at_x(e.alpha, x)) / e.b));
        }
    }
    out.ode_residual = worst;
    return out;
}

Transform nb_homogeneity_map(double b, double a1, double a2, double a3)
{
    Transform t;
    t.s = std::exp(-b * a2 / 2);
    t.kappa = std::exp(b * a2 / 2);
    t.a1 = a1;
    t.phi = Profile::constant(a2);
    t.psi = Profile::constant(a3);
    return t;
}

Transform pc_homogeneity_map(double coef, double a1, double a2, double a3)
{
    if (!(a1 > -1.0)) throw DomainError("the P_c homogeneity map needs a1 > -1");
    Transform t;
    t.s = a1 + 1.0;
    t.kappa = 1.0 / t.s;
    t.rho = 1.0 / t.s;
    t.a1 = a1;
    const double s = t.s;
    const double disc = 1.0 - 8.0 * coef;
    // phi solves phi'' + 2 coef (x+1)^-2 phi = 0 (Euler equation), phi(0) = a2.
    if (disc > 1e-14) {
        const double delta = std::sqrt(disc), lam = 0.5 * (1.0 + delta);
        const double k = a2 * a2 * (coef - 0.5 * lam * lam) / s;
        t.phi = Profile(
            [=](double x) {
                const double u = x + 1.0;
                return Deriv2{a2 * std::pow(u, lam), a2 * lam * std::pow(u, lam - 1),
                              a2 * lam * (lam - 1) * std::pow(u, lam - 2)};
            },
            "a2 (x+1)^lambda");
        t.psi = Profile(
            [=](double x) {
                const double u = x + 1.0;
                return Deriv2{a3 + k / delta * (std::pow(u, delta) - 1.0), k * std::pow(u, delta - 1),
                              k * (delta - 1) * std::pow(u, delta - 2)};
            },
            "psi");
    } else if (disc < -1e-14) {
        const double w = 0.5 * std::sqrt(-disc);
        const double k = a2 * a2 / s;
        t.phi = Profile(
            [=](double x) {
                const double u = x + 1.0, th = w * std::log(u);
                const double g = 0.5 * std::cos(th) - w * std::sin(th);
                const double gp = -0.5 * std::sin(th) - w * std::cos(th);
                return Deriv2{a2 * std::sqrt(u) * std::cos(th), a2 * g / std::sqrt(u),
                              a2 * std::pow(u, -1.5) * (-0.5 * g + w * gp)};
            },
            "a2 sqrt(x+1) cos(w ln(x+1))");
        t.psi = Profile(
            [=](double x) {
                const double u = x + 1.0, th = w * std::log(u);
                const double d1 = k * (0.5 * w * w * std::cos(2 * th) + 0.25 * w * std::sin(2 * th)) / u;
                const double d2 = k * (-w * w * w * std::sin(2 * th) + 0.5 * w * w * std::cos(2 * th)) / (u * u) - d1 / u;
                return Deriv2{a3 + k * (0.25 * w * std::sin(2 * th) - 0.125 * (std::cos(2 * th) - 1.0)), d1, d2};
            },
            "psi");
    } else {
        t.phi = Profile(
            [=](double x) {
                const double u = x + 1.0;
                return Deriv2{a2 * std::sqrt(u), 0.5 * a2 / std::sqrt(u), -0.25 * a2 * std::pow(u, -1.5)};
            },
            "a2 sqrt(x+1)");
        t.psi = Profile::constant(a3);
    }
    return t;
}

Transform cw_homogeneity_map(double a1, double a2, double a3)
{
    Transform t;
    t.a1 = a1;
    const double r2 = std::sqrt(2.0);
    t.phi = Profile(
        [=](double x) {
            return Deriv2{a2 * std::cos(r2 * x), -r2 * a2 * std::sin(r2 * x), -2.0 * a2 * std::cos(r2 * x)};
        },
        "a2 cos(sqrt2 x)");
    t.psi = Profile(
        [=](double x) {
            const double q = 2.0 * r2 * x;
            return Deriv2{a3 + a2 * a2 * std::sin(q) / (2.0 * r2), a2 * a2 * std::cos(q), -2.0 * r2 * a2 * a2 * std::sin(q)};
        },
        "a3 + a2^2 sin(2 sqrt2 x) / (2 sqrt2)");
    return t;
}

}  // namespace walker
