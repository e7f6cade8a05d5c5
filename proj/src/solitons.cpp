#include "walker/solitons.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "walker/errors.hpp"

namespace walker {

namespace {

const Expr kYVar = Expr::y();

double max_abs_entry(const Mat3& m)
{
    double w = 0.0;
    for (const auto& row : m)
        for (double v : row) w = std::max(w, std::abs(v));
    return w;
}

std::shared_ptr<const OdeTable> double_quadrature(std::function<double(double)> hxx, const Grid& box)
{
    OdeOptions o;
    o.rtol = 1e-12;
    o.atol = 1e-12;
    const double xm = 0.5 * (box.x0 + box.x1);
    return std::make_shared<const OdeTable>(
        [hxx = std::move(hxx)](double x, std::span<const double> z, std::span<double> dz) {
            dz[0] = z[1];
            dz[1] = hxx(x);
        },
        xm, std::vector<double>{0.0, 0.0}, box.x0, box.x1, o);
}

std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

FieldValue VectorFieldAnsatz::operator()(const Vec3& p) const
{
    const Deriv2 u = U(p[kX]);
    const Deriv2 t = T(p[kX]);
    FieldValue v;
    v.X = {a * p[kX] + abar, 0.5 * mu * p[kY] + u.v, t.v - p[kY] * u.d1 + p[kXt] * (mu - a)};
    v.dX[kX][kX] = a;
    v.dX[kY][kX] = u.d1;
    v.dX[kY][kY] = 0.5 * mu;
    v.dX[kXt][kX] = t.d1 - p[kY] * u.d2;
    v.dX[kXt][kY] = -u.d1;
    v.dX[kXt][kXt] = mu - a;
    return v;
}

VectorField as_field(const VectorFieldAnsatz& x)
{
    return [x](const Vec3& p) { return x(p); };
}

VectorField gradient_field(const Potential& h)
{
    return [h](const Vec3& p) {
        const Deriv2 d = h.hhat(p[kX]);
        FieldValue v;
        v.X = {0.0, h.mu_y, d.d1};
        v.dX[kXt][kX] = d.d2;
        return v;
    };
}

Mat3 hessian(const Potential& h, const Expr& f, Point2 p)
{
    const Deriv2 d = h.hhat(p.x);
    const Vec3 dh{d.d1, h.mu_y, 0.0};
    const Christoffel g = christoffel(f, p);
    Mat3 out{};
    out[kX][kX] = d.d2;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) out[a][b] -= g(c, a, b) * dh[c];
    return out;
}

Mat3 lie_metric(const VectorField& X, const Expr& f, const Vec3& p)
{
    const FieldValue v = X(p);
    const Point2 q{p[kX], p[kY]};
    const MetricAtPoint m = metric_at(f, q);
    const Jet2 j = jet_eval(f, q, 1);
    const double dgxx[3] = {-2.0 * j.partial(1, 0), -2.0 * j.partial(0, 1), 0.0};
    Mat3 out{};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            double s = 0.0;
            for (int c = 0; c < 3; ++c) s += v.dX[c][a] * m.g[c][b] + v.dX[c][b] * m.g[c][a];
            if (a == kX && b == kX)
                for (int c = 0; c < 3; ++c) s += v.X[c] * dgxx[c];
            out[a][b] = s;
        }
    return out;
}

BuiltSoliton build_ricci_soliton(const RicciCase& rc, const Grid& box, double tol)
{
    const Expr& y = kYVar;
    BuiltSoliton out;
    std::function<double(double)> hxx;
    if (rc.kind == RicciCase::R1) {
        if (rc.kappa == 0.0) throw BuildError("R1 needs kappa != 0");
        const double k = rc.kappa;
        out.f = Expr(1.0 / (k * k)) * exp(Expr(k) * y) * rc.alpha + y * rc.beta + rc.gamma;
        out.h.mu_y = 0.5 * k;
        hxx = [beta = rc.beta, k](double x) { return 0.5 * k * beta(x, 0.0); };
    } else {
        out.f = pow(y, 2) * rc.alpha + y * rc.beta + rc.gamma;
        hxx = [alpha = rc.alpha](double x) { return -alpha(x, 0.0); };
    }
    out.h.hhat = Profile::from_table(double_quadrature(hxx, box), 0, 1);

    for (const Point2& p : box.points()) {
        const Mat3 hes = hessian(out.h, out.f, p);
        const RicciData r = ricci_scalar_schouten(out.f, p);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) out.residual = std::max(out.residual, std::abs(2 * hes[a][b] + r.ric[a][b]));
    }
    if (!(out.residual <= tol)) throw BuildError("Ricci soliton residual " + num(out.residual) + " exceeds tolerance");
    return out;
}

Potential derive_cotton_potential(const Expr& f, const Grid& box, CottonConvention conv)
{
    // 2 (hhat'' - mu_y f_y) + C_xx = 0 must hold with hhat'' independent of y.
    const std::vector<Point2> pts = box.points();
    std::map<double, std::vector<std::pair<double, double>>> columns;  // x -> (f_y, C_xx)
    for (const Point2& p : pts) {
        const double fy = jet_eval(f, p, 1).partial(0, 1);
        columns[p.x].emplace_back(fy, cotton(f, p, conv).c2[kX][kX]);
    }
    double num_ = 0.0, den = 0.0, scale = 0.0;
    for (const auto& [x, col] : columns) {
        double mf = 0.0, mc = 0.0;
        for (const auto& [fy, c] : col) {
            mf += fy;
            mc += c;
            scale = std::max({scale, std::abs(fy), std::abs(c)});
        }
        mf /= static_cast<double>(col.size());
        mc /= static_cast<double>(col.size());
        for (const auto& [fy, c] : col) {
            num_ += (fy - mf) * 0.5 * (c - mc);
            den += (fy - mf) * (fy - mf);
        }
    }
    Potential h;
    h.mu_y = den > 1e-24 * (1.0 + scale * scale) ? num_ / den : 0.0;

    for (const auto& [x, col] : columns) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo, mag = 0.0;
        for (const auto& [fy, c] : col) {
            const double v = h.mu_y * fy - 0.5 * c;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            mag = std::max(mag, std::abs(h.mu_y * fy) + std::abs(0.5 * c));
        }
        if (hi - lo > 1e-7 * (1.0 + mag))
            throw InconsistencyError("gradient Cotton equation forces hhat'' to depend on y at x = " + num(x));
    }
    const double yref = 0.5 * (box.y0 + box.y1);
    const double mu_y = h.mu_y;
    auto hxx = [f, mu_y, yref, conv](double x) {
        const Point2 p{x, yref};
        return mu_y * jet_eval(f, p, 1).partial(0, 1) - 0.5 * cotton(f, p, conv).c2[kX][kX];
    };
    h.hhat = Profile::from_table(double_quadrature(hxx, box), 0, 1);
    return h;
}

BuiltCottonSoliton build_cotton_soliton(const CottonCase& cc, const Grid& box, CottonConvention conv)
{
    const Expr& y = kYVar;
    const double k = cc.kappa;
    const int s = conv.sign;
    BuiltCottonSoliton out;
    CottonConsistency& rep = out.report;
    double fam_coef = 0.0;
    std::function<double(double, double)> printed_hxx;

    switch (cc.kind) {
    case CottonCase::C1:
        if (k == 0.0) throw BuildError("C1 needs kappa != 0");
        out.f = Expr(1.0 / (k * k)) * (exp(Expr(k) * y) * cc.alpha1 + exp(Expr(-k) * y) * cc.alpha2) + y * cc.beta +
                cc.gamma;
        fam_coef = k * k;
        rep.printed_mu_y = 0.5 * k;
        rep.printed_field_y = k * k;
        printed_hxx = [cc, k](double x, double yy) {
            return 0.5 * k *
                   (std::exp(k * yy) * cc.alpha1(x, 0) - std::exp(-k * yy) * cc.alpha2(x, 0) + 2 * k * cc.beta(x, 0));
        };
        rep.printed_formula = "hhat_xx = (k/2)(e^{k y} alpha1 - e^{-k y} alpha2 + 2 k beta), h = (k/2) y + hhat";
        rep.derived_formula = "hhat_xx = " + num(-s / 4.0) + " k^2 beta, mu_y = " + num(-s / 4.0) + " k^2";
        break;
    case CottonCase::C2:
        if (k == 0.0) throw BuildError("C2 needs kappa != 0");
        out.f = Expr(-1.0 / (k * k)) * (cos(Expr(k) * y) * cc.alpha1 + sin(Expr(k) * y) * cc.alpha2) + y * cc.beta +
                cc.gamma;
        fam_coef = -k * k;
        rep.printed_mu_y = -0.5 * k;
        rep.printed_field_y = -k * k;
        // beta(y) taken literally: beta evaluated at the y coordinate.
        printed_hxx = [cc, k](double, double yy) {
            return 0.5 * k * (std::cos(k * yy) - std::sin(k * yy) - 2 * k * cc.beta(yy, 0));
        };
        rep.printed_formula = "hhat_xx = (k/2)(cos(k y) - sin(k y) - 2 k beta(y)), h = -(k/2) y + hhat";
        rep.derived_formula = "hhat_xx = " + num(s / 4.0) + " k^2 beta, mu_y = " + num(s / 4.0) + " k^2";
        break;
    case CottonCase::C3:
        out.f = pow(y, 3) * cc.alpha1 + pow(y, 2) * cc.alpha2 + y * cc.beta + cc.gamma;
        fam_coef = 0.0;
        rep.printed_mu_y = 0.0;
        rep.printed_field_y = std::numeric_limits<double>::quiet_NaN();
        printed_hxx = [cc](double x, double) { return -3.0 * cc.alpha1(x, 0); };
        rep.printed_formula = "hhat_xx = -3 alpha1, h = hhat";
        rep.derived_formula = "hhat_xx = " + num(1.5 * s) + " alpha1, mu_y = 0";
        rep.notes.push_back("printed field -k^2 d_y + hhat_x d_xt names a k that does not exist here; read as hhat_x d_xt");
        break;
    }

    out.h = derive_cotton_potential(out.f, box, conv);
    rep.derived_mu_y = out.h.mu_y;

    const std::vector<Point2> pts = box.points();
    std::map<double, std::pair<double, double>> spread;
    for (const Point2& p : pts) {
        const Jet2 j = jet_eval(out.f, p, 4);
        out.family_residual = std::max(out.family_residual, std::abs(j.partial(0, 4) - fam_coef * j.partial(0, 2)));

        const double cxx = cotton(out.f, p, conv).c2[kX][kX];
        const double pr = printed_hxx(p.x, p.y);
        const double derived = out.h.hhat(p.x).d2;
        rep.hxx_discrepancy = std::max(rep.hxx_discrepancy, std::abs(pr - derived));
        rep.printed_residual =
            std::max(rep.printed_residual, std::abs(2 * (pr - rep.printed_mu_y * j.partial(0, 1)) + cxx));

        const Mat3 hes = hessian(out.h, out.f, p);
        const Mat3 c2 = cotton(out.f, p, conv).c2;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                rep.derived_residual = std::max(rep.derived_residual, std::abs(2 * hes[a][b] + c2[a][b]));

        auto it = spread.find(p.x);
        if (it == spread.end())
            spread[p.x] = {pr, pr};
        else
            it->second = {std::min(it->second.first, pr), std::max(it->second.second, pr)};
    }
    for (const auto& [x, lohi] : spread)
        if (lohi.second - lohi.first > 1e-9 * (1.0 + std::abs(lohi.second))) rep.printed_depends_on_y = true;

    if (rep.printed_depends_on_y) rep.notes.push_back("printed hhat_xx depends on y although hhat is a function of x");
    if (std::abs(rep.printed_mu_y - rep.derived_mu_y) > 1e-9 * (1.0 + std::abs(rep.derived_mu_y)))
        rep.notes.push_back("printed y-coefficient of h (" + num(rep.printed_mu_y) + ") differs from the derived one (" +
                            num(rep.derived_mu_y) + ")");
    if (std::isfinite(rep.printed_field_y) && std::abs(rep.printed_field_y - rep.derived_mu_y) > 1e-9)
        rep.notes.push_back("printed d_y coefficient of grad h (" + num(rep.printed_field_y) +
                            ") does not match h either way");
    if (rep.hxx_discrepancy > 1e-8)
        rep.notes.push_back("printed hhat_xx differs from the derived one by up to " + num(rep.hxx_discrepancy));
    return out;
}

std::string SolitonCertificate::label() const
{
    if (lambda == 0.0) return "steady";
    return lambda > 0 ? "shrinking" : "expanding";
}

SolitonCertificate verify_soliton(const Expr& f, const VectorField& X, double lambda, SolitonKind kind,
                                  std::span<const Vec3> samples, CottonConvention conv)
{
    SolitonCertificate cert;
    cert.kind = kind;
    cert.lambda = lambda;
    cert.samples = samples.size();
    cert.cotton_sign = conv.sign;
    for (const Vec3& p : samples) {
        const Point2 q{p[kX], p[kY]};
        const Mat3 l = lie_metric(X, f, p);
        const MetricAtPoint m = metric_at(f, q);
        Mat3 t{};
        if (kind == SolitonKind::Ricci)
            t = ricci_scalar_schouten(f, q).ric;
        else
            t = cotton(f, q, conv).c2;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                const double base = l[a][b] - lambda * m.g[a][b];
                cert.residual = std::max(cert.residual, std::abs(base + t[a][b]));
                if (kind == SolitonKind::Cotton)
                    cert.residual_flipped = std::max(cert.residual_flipped, std::abs(base - t[a][b]));
            }
    }
    return cert;
}

HomothetyResidual homothety_residual(const VectorFieldAnsatz& X, const Expr& f, std::span<const Vec3> samples)
{
    HomothetyResidual r;
    const VectorField field = as_field(X);
    for (const Vec3& p : samples) {
        const Mat3 l = lie_metric(field, f, p);
        const MetricAtPoint m = metric_at(f, {p[kX], p[kY]});
        Mat3 d{};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) d[a][b] = l[a][b] - X.mu * m.g[a][b];
        r.scalar = std::max(r.scalar, 0.5 * std::abs(d[kX][kX]));
        r.full = std::max(r.full, max_abs_entry(d));
    }
    return r;
}

HomothetySearchResult homothety_grid_search(const Expr& f, std::span<const double> a_values,
                                            std::span<const double> abar_values, std::span<const double> mu_values,
                                            std::span<const Point2> samples, int degree)
{
    struct Local {
        double x, y, f, fx, fy;
    };
    std::vector<Local> pts;
    for (const Point2& p : samples) {
        const Jet2 j = jet_eval(f, p, 1);
        pts.push_back({p.x, p.y, j.value(), j.partial(1, 0), j.partial(0, 1)});
    }
    const auto n = static_cast<Eigen::Index>(pts.size());
    const int nu = degree + 1, nt = degree;  // t_0 never enters
    Eigen::MatrixXd M(n, nu + nt);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Local& q = pts[static_cast<std::size_t>(i)];
        for (int k = 0; k < nu; ++k) {
            const double xk2 = k >= 2 ? k * (k - 1) * std::pow(q.x, k - 2) : 0.0;
            M(i, k) = -2.0 * std::pow(q.x, k) * q.fy - 2.0 * q.y * xk2;
        }
        for (int k = 1; k <= nt; ++k) M(i, nu + k - 1) = 2.0 * k * std::pow(q.x, k - 1);
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);

    HomothetySearchResult out;
    out.best_killing = std::numeric_limits<double>::infinity();
    out.best_nonkilling = std::numeric_limits<double>::infinity();
    for (double a : a_values)
        for (double abar : abar_values)
            for (double mu : mu_values) {
                Eigen::VectorXd c(n);
                for (Eigen::Index i = 0; i < n; ++i) {
                    const Local& q = pts[static_cast<std::size_t>(i)];
                    c(i) = -2.0 * (a * q.x + abar) * q.fx - mu * q.y * q.fy - 4.0 * a * q.f + 2.0 * mu * q.f;
                }
                const Eigen::VectorXd w = qr.solve(-c);
                const double res = (M * w + c).cwiseAbs().maxCoeff();
                out.rows.push_back({a, abar, mu, res});
                if (mu == 0.0)
                    out.best_killing = std::min(out.best_killing, res);
                else if (std::abs(mu) > 1e-3 && res < out.best_nonkilling) {
                    out.best_nonkilling = res;
                    out.best_nonkilling_mu = mu;
                }
            }
    return out;
}

Expr cotton_example_metric(double lambda, const Expr& gamma)
{
    const Expr x = Expr::x();
    const Expr& y = kYVar;
    return pow(y, 3) * exp(Expr(-lambda) * x) + pow(y, 2) + y * exp(Expr(lambda) * x) + gamma;
}

VectorFieldAnsatz cotton_example_field(double lambda, const Expr& gamma, bool corrected, CottonConvention conv)
{
    VectorFieldAnsatz X;
    X.a = 0.0;
    X.abar = 0.5;
    X.mu = lambda;
    const Expr gx = differentiate(gamma, Coord::X);
    const int s = conv.sign;
    // Only theta_x enters L_X g; theta itself is not tracked.
    if (corrected)
        X.T = Profile(
            [=](double x) {
                return Deriv2{0.0, 1.5 * s * std::exp(-lambda * x) + 0.5 * gx(x, 0) - lambda * gamma(x, 0), 0.0};
            },
            "theta (corrected)");
    else
        X.T = Profile(
            [=](double x) { return Deriv2{0.0, 3.0 * std::exp(-lambda * x) + (0.5 - lambda) * gamma(x, 0), 0.0}; },
            "theta (printed)");
    return X;
}

}  // namespace walker
