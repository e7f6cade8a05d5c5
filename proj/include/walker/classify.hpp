#pragma once

#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "walker/frames.hpp"
#include "walker/profile.hpp"

namespace walker {

/// Rectangular sample grid over (x, y).
struct Grid {
    int nx = 5;
    int ny = 5;
    double x0 = 0.25, x1 = 1.25;
    double y0 = -0.5, y1 = 0.5;

    std::vector<Point2> points() const;
};

/// f = b^{-2} alpha(x) e^{b y} + beta(x) y + gamma(x).
struct ExpYFamily {
    Expr alpha;
    double b = 1.0;
    Expr beta;
    Expr gamma;
};

/// f = (1/2) y^2 alpha(x) + beta(x) y + gamma(x).
struct QuadYFamily {
    Expr alpha;
    Expr beta;
    Expr gamma;
};

struct GenericFamily {
    Expr f;
};

struct StructuredFamily {
    std::variant<ExpYFamily, QuadYFamily, GenericFamily> variant;
    Grid box;

    Expr f() const;
};

enum class ClassTag { LocallySymmetricCW, HomogeneousN, HomogeneousP, OneCurvHomOnlyN1, NotOneCurvHom, Flat };

const char* to_string(ClassTag t);

struct EvidenceColumn {
    std::string name;
    std::vector<double> values;
};

struct Classification {
    ClassTag tag = ClassTag::NotOneCurvHom;
    /// b for N-types, c for P, epsilon for CW, 0 otherwise.
    double parameter = 0.0;
    std::vector<Point2> points;
    std::vector<EvidenceColumn> evidence;

    std::string name() const;
};

/// Constant over samples when (max - min) <= rtol (1 + |mean|).
inline constexpr double kConstancyRel = 1e-7;
/// |b| at or below this counts as b = 0.
inline constexpr double kZeroB = 1e-8;

bool is_constant(std::span<const double> v, double rtol = kConstancyRel);
double mean(std::span<const double> v);

Classification classify_structured(const StructuredFamily& fam);
Classification classify_sampled(const Expr& f, const Grid& grid);

/// T(x, y, xt) = (s x + a1, y + phi(x), kappa xt - rho phi'(x) y + psi(x)).
struct Transform {
    double s = 1.0;
    double a1 = 0.0;
    double kappa = 1.0;
    double rho = 1.0;
    Profile phi;
    Profile psi;

    Vec3 apply(const Vec3& p) const;
    /// Columns are T_* d_x, T_* d_y, T_* d_xt: jacobian[row][col].
    Mat3 jacobian(const Vec3& p) const;
};

/// Pulled-back metric J^T g_f(T p) J at p.
Mat3 pullback_metric(const Expr& f, const Transform& t, const Vec3& p);

/// Point evaluator of f~ with T^* g_f = g_{f~}, read off the (x,x) entry.
std::function<double(Point2)> pullback_f(const Expr& f, const Transform& t);

/// max over samples and entries of |J^T g_f(T p) J - g_target(p)|.
double verify_isometry(const Transform& t, const Expr& f, const Expr& f_target, std::span<const Vec3> samples);

struct ModelIsometry {
    Classification classification;
    /// The model metric function (N_b, P_c or CW form).
    Expr model;
    /// The family's f.
    Expr target;
    /// T^*(g_model) = g_target.
    Transform transform;
    /// Max ODE residual of the phi equation over the table nodes.
    double ode_residual = 0.0;
};

/// Solves for phi, psi so that T pulls the model back onto the family.
/// Throws UnclassifiedError unless the family is N, P or CW homogeneous.
ModelIsometry build_isometry_to_model(const StructuredFamily& fam, double tol = 1e-12);

/// Homogeneity maps sending (0,0,0) to (a1, a2, a3).
/// f = b^{-2} e^{b y}.
Transform nb_homogeneity_map(double b, double a1, double a2, double a3);
/// f = coef y^2 (x+1)^{-2} on x > -1.
Transform pc_homogeneity_map(double coef, double a1, double a2, double a3);
/// f = y^2.
Transform cw_homogeneity_map(double a1, double a2, double a3);

}  // namespace walker
