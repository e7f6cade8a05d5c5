#include "walker/geodesics.hpp"

#include <cmath>

#include "walker/errors.hpp"

namespace walker {

namespace {

struct Local {
    double f, fx, fy;
};

Local local(const Expr& f, double x, double y)
{
    const Jet2 j = jet_eval(f, {x, y}, 1);
    return {j.value(), j.partial(1, 0), j.partial(0, 1)};
}

// state layout: x, y, xt, x', y', xt' [, Yx, Yy, Yxt]
void geodesic_part(const Local& l, std::span<const double> z, std::span<double> dz)
{
    const double xd = z[3], yd = z[4];
    dz[0] = xd;
    dz[1] = yd;
    dz[2] = z[5];
    dz[3] = 0.0;
    dz[4] = -l.fy * xd * xd;
    dz[5] = l.fx * xd * xd + 2.0 * l.fy * xd * yd;
}

void transport_part(const Local& l, std::span<const double> z, std::span<double> dz)
{
    const double xd = z[3], yd = z[4];
    const double Yx = z[6], Yy = z[7];
    dz[6] = 0.0;
    dz[7] = -l.fy * xd * Yx;
    dz[8] = l.fx * xd * Yx + l.fy * (xd * Yy + yd * Yx);
}

GeodesicState to_state(double t, std::span<const double> z)
{
    return {t, {z[0], z[1], z[2]}, {z[3], z[4], z[5]}};
}

void check_inside(const DomainPredicate& inside, double x, double y)
{
    if (inside && !inside({x, y})) throw DomainError("left the domain");
}

}  // namespace

double energy(const Expr& f, const GeodesicState& s)
{
    const double fv = f(s.pos[kX], s.pos[kY]);
    return -2.0 * fv * s.vel[kX] * s.vel[kX] + 2.0 * s.vel[kX] * s.vel[kXt] + s.vel[kY] * s.vel[kY];
}

GeodesicState geodesic_rhs(const Expr& f, const GeodesicState& s)
{
    const Local l = local(f, s.pos[kX], s.pos[kY]);
    const double z[6] = {s.pos[0], s.pos[1], s.pos[2], s.vel[0], s.vel[1], s.vel[2]};
    double dz[6];
    geodesic_part(l, z, dz);
    return {s.t, {dz[0], dz[1], dz[2]}, {dz[3], dz[4], dz[5]}};
}

GeodesicTrajectory integrate_geodesic(const Expr& f, const GeodesicState& initial, double tmax, double tol,
                                      const DomainPredicate& inside)
{
    OdeOptions o;
    o.rtol = tol;
    o.atol = tol;
    auto rhs = [&](double, std::span<const double> z, std::span<double> dz) {
        check_inside(inside, z[0], z[1]);
        geodesic_part(local(f, z[0], z[1]), z, dz);
    };
    const auto& p = initial.pos;
    const auto& v = initial.vel;
    const OdeSolution s = integrate_ode(rhs, initial.t, {p[0], p[1], p[2], v[0], v[1], v[2]}, tmax, o);
    GeodesicTrajectory out;
    out.termination = s.termination;
    out.steps = s.steps;
    out.states.reserve(s.t.size());
    for (std::size_t i = 0; i < s.t.size(); ++i) out.states.push_back(to_state(s.t[i], s.states[i]));
    return out;
}

double nb_closed_form(double b, double alpha, double C1, double C2, double t)
{
    if (alpha == 0.0 || C1 == 0.0 || b == 0.0) throw DomainError("closed form needs b, alpha, C1 nonzero");
    const double u = 0.5 * std::abs(b * C1 * (t + C2));
    // ln sech^2 u = -2 ln cosh u, written to stay finite for large u.
    const double log_cosh = u + std::log1p(std::exp(-2.0 * u)) - std::log(2.0);
    return (std::log(b * b * C1 * C1 / (2.0 * alpha * alpha)) - 2.0 * log_cosh) / b;
}

double nb_closed_form_dot(double b, double, double C1, double C2, double t)
{
    return -C1 * std::tanh(0.5 * b * C1 * (t + C2));
}

NbConstants nb_fit_constants(double b, double alpha, double y0, double v0)
{
    if (alpha == 0.0 || b == 0.0) throw DomainError("closed form needs b, alpha nonzero");
    NbConstants c;
    c.C1 = std::sqrt(v0 * v0 + 2.0 * alpha * alpha * std::exp(b * y0) / (b * b));
    const double u0 = std::atanh(-v0 / c.C1);
    c.C2 = 2.0 * u0 / (b * c.C1);
    return c;
}

std::vector<TransportSample> parallel_transport(const Expr& f, const GeodesicTrajectory& traj, const Vec3& Y0,
                                                double tol, const DomainPredicate& inside)
{
    std::vector<TransportSample> out;
    if (traj.states.empty()) return out;
    OdeOptions o;
    o.rtol = tol;
    o.atol = tol;
    o.record = false;
    auto rhs = [&](double, std::span<const double> z, std::span<double> dz) {
        check_inside(inside, z[0], z[1]);
        const Local l = local(f, z[0], z[1]);
        geodesic_part(l, z, dz);
        transport_part(l, z, dz);
    };
    const GeodesicState& s0 = traj.states.front();
    std::vector<double> z{s0.pos[0], s0.pos[1], s0.pos[2], s0.vel[0], s0.vel[1], s0.vel[2], Y0[0], Y0[1], Y0[2]};

    auto record = [&](double t) {
        TransportSample ts;
        ts.t = t;
        ts.state = to_state(t, z);
        ts.Y = {z[6], z[7], z[8]};
        const MetricAtPoint m = metric_at(f, {z[0], z[1]});
        ts.YY = m.inner(ts.Y, ts.Y);
        ts.vY = m.inner(ts.state.vel, ts.Y);
        ts.vv = m.inner(ts.state.vel, ts.state.vel);
        out.push_back(ts);
    };
    record(s0.t);
    for (std::size_t i = 1; i < traj.states.size(); ++i) {
        const OdeSolution s = integrate_ode(rhs, traj.states[i - 1].t, z, traj.states[i].t, o);
        if (s.termination != Termination::ReachedTmax) break;
        z = s.back();
        record(traj.states[i].t);
    }
    return out;
}

Expr blowup_metric()
{
    const Expr x = Expr::x();
    const Expr y = Expr::y();
    return pow(Expr(1.0) - x, -2) * pow(y, 2);
}

BlowupReport blowup_experiment_pc(double tol, double curvature_cap)
{
    const Expr f = blowup_metric();
    BlowupReport rep;
    rep.a1 = 1.0;
    rep.a2 = -1.0 / std::sqrt(7.0);
    rep.psi_t0 = 1.5;
    const DomainPredicate inside = [](Point2 p) { return p.x < 1.0; };

    OdeOptions o;
    o.rtol = tol;
    o.atol = tol;
    auto rhs = [&](double, std::span<const double> z, std::span<double> dz) {
        check_inside(inside, z[0], z[1]);
        const Local l = local(f, z[0], z[1]);
        geodesic_part(l, z, dz);
        transport_part(l, z, dz);
    };
    const OdeSolution s = integrate_ode(rhs, 0.0, {0, 1, 0, 1, 0, rep.psi_t0, 0, 1, 0}, 2.0, o);
    rep.termination = s.termination;
    rep.t_star = s.t.back();

    const double w = std::sqrt(7.0) / 2.0;
    for (std::size_t i = 0; i < s.t.size(); ++i) {
        const auto& z = s.states[i];
        if (!(z[0] < 1.0)) break;
        BlowupRow r;
        r.t = s.t[i];
        r.state = to_state(r.t, z);
        r.Y = {z[6], z[7], z[8]};
        const Point2 p{z[0], z[1]};
        const CovTensor R = riemann(f, p);
        const std::array<Vec3, 4> v{r.state.vel, r.Y, r.Y, r.state.vel};
        r.sectional = R.contract(v);
        const double om = 1.0 - r.t;
        r.analytic = 2.0 / (om * om);
        const MetricAtPoint m = metric_at(f, p);
        r.vv = m.inner(r.state.vel, r.state.vel);
        r.vY = m.inner(r.state.vel, r.Y);
        r.YY = m.inner(r.Y, r.Y);
        const double th = w * std::log(om);
        r.phi_closed = std::sqrt(om) * (rep.a1 * std::cos(th) + rep.a2 * std::sin(th));
        if (r.analytic <= curvature_cap) {
            rep.max_rel_curvature_error =
                std::max(rep.max_rel_curvature_error, std::abs(r.sectional - r.analytic) / r.analytic);
            rep.max_frame_error =
                std::max({rep.max_frame_error, std::abs(r.vv - 1.0), std::abs(r.vY), std::abs(r.YY - 1.0)});
        }
        if (r.t <= 0.99) rep.max_phi_error = std::max(rep.max_phi_error, std::abs(z[1] - r.phi_closed) / std::sqrt(om));
        rep.rows.push_back(r);
    }
    return rep;
}

}  // namespace walker
