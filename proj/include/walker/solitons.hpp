#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "walker/classify.hpp"
#include "walker/metric.hpp"
#include "walker/profile.hpp"

namespace walker {

/// h(x, y, xt) = mu_y y + hhat(x).
struct Potential {
    double mu_y = 0.0;
    Profile hhat;
};

/// Value of a vector field and its first partials: dX[c][a] = d_a X^c.
struct FieldValue {
    Vec3 X{};
    Mat3 dX{};
};

using VectorField = std::function<FieldValue(const Vec3& p)>;

/// X = (a x + abar) d_x + (mu/2 y + U) d_y + (T - y U_x + xt (mu - a)) d_xt.
struct VectorFieldAnsatz {
    double a = 0.0;
    double abar = 0.0;
    double mu = 0.0;
    Profile U;
    Profile T;

    FieldValue operator()(const Vec3& p) const;
};

VectorField as_field(const VectorFieldAnsatz& x);
/// grad h = mu_y d_y + hhat_x d_xt.
VectorField gradient_field(const Potential& h);

/// Hes(h)_ab = d_a d_b h - Gamma^c_ab d_c h.
Mat3 hessian(const Potential& h, const Expr& f, Point2 p);

/// (L_X g)_ab = d_a X^c g_cb + d_b X^c g_ca + X^c d_c g_ab.
Mat3 lie_metric(const VectorField& X, const Expr& f, const Vec3& p);

struct RicciCase {
    enum Kind { R1, R2 } kind = R1;
    double kappa = 1.0;  // R1 only
    Expr alpha, beta, gamma;
};

struct BuiltSoliton {
    Expr f;
    Potential h;
    /// Max |2 Hes h + Ric| over the check samples.
    double residual = 0.0;
};

/// R1: f = k^-2 e^{k y} alpha + y beta + gamma, h = (k/2) y + hhat, hhat'' = (k/2) beta.
/// R2: f = y^2 alpha + y beta + gamma, h = hhat, hhat'' = -alpha.
/// hhat comes from double quadrature on [x0, x1] with hhat(xm) = hhat'(xm) = 0.
/// Throws BuildError when the steady residual exceeds `tol` on the box.
BuiltSoliton build_ricci_soliton(const RicciCase& rc, const Grid& box, double tol = 1e-8);

struct CottonCase {
    enum Kind { C1, C2, C3 } kind = C1;
    double kappa = 1.0;  // C1, C2
    Expr alpha1, alpha2, beta, gamma;
};

struct CottonConsistency {
    /// Coefficient of y in h derived from the xx equation.
    double derived_mu_y = 0.0;
    /// As printed for the family.
    double printed_mu_y = 0.0;
    /// Coefficient of d_y in the printed soliton field.
    double printed_field_y = 0.0;
    /// Whether the printed hhat'' depends on y (it cannot, hhat is a function of x).
    bool printed_depends_on_y = false;
    /// max |printed hhat'' - derived hhat''| over the samples.
    double hxx_discrepancy = 0.0;
    /// max |2 Hes h + C| with the derived potential.
    double derived_residual = 0.0;
    /// Same with the printed potential (evaluated pointwise, y included).
    double printed_residual = 0.0;
    std::string derived_formula;
    std::string printed_formula;
    std::vector<std::string> notes;
};

struct BuiltCottonSoliton {
    Expr f;
    Potential h;
    CottonConsistency report;
    /// max |f_yyyy - s f_yy| with s = k^2, -k^2, 0.
    double family_residual = 0.0;
};

/// Builds the C1/C2/C3 family, derives hhat'' from the xx component of
/// 2 Hes h + C = 0 under `conv`, and compares it with the printed potential.
/// Throws InconsistencyError if no y-independent hhat'' closes the equation.
BuiltCottonSoliton build_cotton_soliton(const CottonCase& cc, const Grid& box, CottonConvention conv = {});

/// Potential closing 2 Hes h + sign C = 0 for an arbitrary f, from samples;
/// throws InconsistencyError when that forces hhat'' to depend on y.
Potential derive_cotton_potential(const Expr& f, const Grid& box, CottonConvention conv = {});

enum class SolitonKind { Ricci, Cotton };

struct SolitonCertificate {
    SolitonKind kind = SolitonKind::Ricci;
    double lambda = 0.0;
    double residual = 0.0;
    /// Cotton only: residual with the opposite (0,2) Cotton sign.
    double residual_flipped = 0.0;
    std::size_t samples = 0;
    int cotton_sign = +1;

    /// "steady", "shrinking" (lambda > 0) or "expanding".
    std::string label() const;
};

/// max over samples of |L_X g + (Ric or C) - lambda g| over the six entries.
SolitonCertificate verify_soliton(const Expr& f, const VectorField& X, double lambda, SolitonKind kind,
                                  std::span<const Vec3> samples, CottonConvention conv = {});

struct HomothetyResidual {
    /// max |(L_X g)_xx - mu g_xx| / 2, the scalar equation left once the ansatz holds.
    double scalar = 0.0;
    /// max over all entries of |L_X g - mu g|.
    double full = 0.0;
};

HomothetyResidual homothety_residual(const VectorFieldAnsatz& X, const Expr& f, std::span<const Vec3> samples);

struct HomothetySearchResult {
    double best_killing = 0.0;
    double best_nonkilling = 0.0;
    double best_nonkilling_mu = 0.0;
    /// One row per (a, abar, mu): the least-squares residual.
    struct Row {
        double a, abar, mu, residual;
    };
    std::vector<Row> rows;
};

/// For each (a, abar, mu) on the given grids, fit U and T as polynomials of
/// degree <= `degree` by least squares on the samples and record the max
/// residual of the homothety equation.
HomothetySearchResult homothety_grid_search(const Expr& f, std::span<const double> a_values,
                                            std::span<const double> abar_values, std::span<const double> mu_values,
                                            std::span<const Point2> samples, int degree = 3);

/// The (C.3) example with X = (1/2) d_x + (l/2) y d_y + (l xt + theta) d_xt on
/// f = y^3 e^{-l x} + y^2 + y e^{l x} + gamma. Returns the field with the
/// printed theta_x = 3 e^{-l x} + (1/2 - l) gamma, or with the corrected one
/// theta_x = (3 sign / 2) e^{-l x} + gamma_x / 2 - l gamma when `corrected`.
VectorFieldAnsatz cotton_example_field(double lambda, const Expr& gamma, bool corrected, CottonConvention conv = {});
Expr cotton_example_metric(double lambda, const Expr& gamma);

}  // namespace walker
