#pragma once

#include <functional>
#include <string>
#include <vector>

#include "walker/metric.hpp"
#include "walker/ode.hpp"

namespace walker {

struct GeodesicState {
    double t = 0.0;
    Vec3 pos{};
    Vec3 vel{};
};

struct GeodesicTrajectory {
    std::vector<GeodesicState> states;
    Termination termination = Termination::ReachedTmax;
    long steps = 0;
};

/// Optional restriction of the (x, y) domain; false means "left the domain".
using DomainPredicate = std::function<bool(Point2)>;

/// g_f(v, v) = -2 f x'^2 + 2 x' xt' + y'^2.
double energy(const Expr& f, const GeodesicState& s);

/// Time derivative of (pos, vel): x'' = 0, y'' = -f_y x'^2,
/// xt'' = f_x x'^2 + 2 f_y x' y'.
GeodesicState geodesic_rhs(const Expr& f, const GeodesicState& s);

/// Dormand-Prince with rtol = atol = tol.
GeodesicTrajectory integrate_geodesic(const Expr& f, const GeodesicState& initial, double tmax, double tol = 1e-10,
                                      const DomainPredicate& inside = {});

/// Closed-form y(t) for f = b^-2 e^{b y} with x' = alpha:
/// y = b^-1 ln((b^2 C1^2 / 2 alpha^2) sech^2(|b C1 (t + C2)| / 2)).
double nb_closed_form(double b, double alpha, double C1, double C2, double t);
/// dy/dt of the closed form.
double nb_closed_form_dot(double b, double alpha, double C1, double C2, double t);

struct NbConstants {
    double C1 = 0.0;
    double C2 = 0.0;
};

/// C1 > 0, C2 matching y(0) = y0, y'(0) = v0 for x' = alpha.
NbConstants nb_fit_constants(double b, double alpha, double y0, double v0);

struct TransportSample {
    double t = 0.0;
    GeodesicState state;
    Vec3 Y{};
    double YY = 0.0;
    double vY = 0.0;
    double vv = 0.0;
};

/// Solves nabla_{gamma'} Y = 0 together with the geodesic, sampled at the
/// trajectory's own times. Stops early (keeping what was computed) if the
/// joint solve breaks down.
std::vector<TransportSample> parallel_transport(const Expr& f, const GeodesicTrajectory& traj, const Vec3& Y0,
                                                double tol = 1e-10, const DomainPredicate& inside = {});

struct BlowupRow {
    double t = 0.0;
    GeodesicState state;
    Vec3 Y{};
    double sectional = 0.0;
    double analytic = 0.0;
    double vv = 0.0;
    double vY = 0.0;
    double YY = 0.0;
    /// phi from the integrator vs (1-t)^{1/2}(a1 cos + a2 sin)(sqrt7 ln(1-t)/2).
    double phi_closed = 0.0;
};

struct BlowupReport {
    std::vector<BlowupRow> rows;
    Termination termination = Termination::ReachedTmax;
    double t_star = 0.0;
    /// Largest |sectional - 2(1-t)^-2| / (2(1-t)^-2) over rows up to curvature 1e6.
    double max_rel_curvature_error = 0.0;
    /// Largest deviation of <v,v> - 1, <v,Y>, <Y,Y> - 1 over the same rows.
    double max_frame_error = 0.0;
    /// Largest |phi - phi_closed| / (1-t)^{1/2} over rows with t <= 0.99.
    double max_phi_error = 0.0;
    double a1 = 1.0;
    double a2 = 0.0;
    /// Initial xt'.
    double psi_t0 = 0.0;
};

/// The special case f = (1-x)^-2 y^2 on x < 1 with gamma(0) = (0, 1, 0),
/// gamma'(0) = d_x + psi_t0 d_xt and Y(0) = d_y. Uses psi_t0 = 3/2 so that
/// <gamma', gamma'> = 1, and a2 = -1/sqrt7 so that phi'(0) = 0.
BlowupReport blowup_experiment_pc(double tol = 1e-12, double curvature_cap = 1e6);

/// Metric function of that experiment.
Expr blowup_metric();

}  // namespace walker
