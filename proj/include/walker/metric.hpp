#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "walker/expr.hpp"
#include "walker/jet.hpp"

namespace walker {

/// Coordinate slots, always in the order (x, y, x~).
enum Axis : int { kX = 0, kY = 1, kXt = 2 };
inline constexpr int kDim = 3;

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

/// Label used in serialized tables: "x", "y" or "xt".
const char* axis_label(int axis);

/// A component is treated as zero when |v| <= rel * (1 + scale).
inline constexpr double kZeroRel = 1e-9;
bool is_negligible(double v, double scale, double rel = kZeroRel);

struct MetricAtPoint {
    Mat3 g{};
    Mat3 g_inv{};
    double det = 0.0;

    double inner(const Vec3& u, const Vec3& v) const;
};

/// Walker metric g(dx,dx) = -2f, g(dx,dx~) = g(dy,dy) = 1.
MetricAtPoint metric_at(const Expr& f, Point2 p);

/// Gamma^c_{ab}, accessed as (c, a, b).
struct Christoffel {
    std::array<double, 27> values{};
    double operator()(int c, int a, int b) const { return values[static_cast<std::size_t>(9 * c + 3 * a + b)]; }
};

Christoffel christoffel(const Expr& f, Point2 p);

/// Component table of the k-th covariant derivative of the (0,4) curvature
/// tensor at a point. Slots are (a, b, c, d; e1, ..., ek) where
/// R(a,b,c,d) = g(Rop(a,b)c, d) and e_j is the direction of the j-th
/// derivative: nabla^{k}R(...; e1..ek) = (nabla_{ek} nabla^{k-1}R)(...; e1..e(k-1)).
class CovTensor {
public:
    CovTensor() = default;
    CovTensor(int k, Point2 point, std::vector<double> components, double scale);

    int k() const noexcept { return k_; }
    int rank() const noexcept { return 4 + k_; }
    Point2 point() const noexcept { return point_; }
    /// Magnitude of the largest jet coefficient that entered the computation.
    double scale() const noexcept { return scale_; }
    std::span<const double> components() const noexcept { return components_; }

    double at(std::span<const int> index) const;
    double at(std::initializer_list<int> index) const;

    /// Full contraction with one vector per slot.
    double contract(std::span<const Vec3> vectors) const;

private:
    int k_ = 0;
    Point2 point_{};
    std::vector<double> components_;
    double scale_ = 0.0;
};

/// Flat offset of a multi-index (first slot most significant).
std::size_t flat_index(std::span<const int> index);
/// Inverse of flat_index for a given rank.
std::vector<int> unflatten(std::size_t flat, int rank);

/// R with generic Christoffel-based evaluation; only (x,y,y,x) and its
/// symmetry images are nonzero, with value f_yy.
CovTensor riemann(const Expr& f, Point2 p);

/// nabla^k R by covariant-derivative recursion on full component tables.
/// Throws OrderError when k + 2 exceeds `max_order`.
CovTensor nabla_k_R(const Expr& f, Point2 p, int k, int max_order = kDefaultJetOrder);

/// R, nabla R, ..., nabla^k R from a single jet evaluation.
std::vector<CovTensor> curvature_tower(const Expr& f, Point2 p, int k, int max_order = kDefaultJetOrder);

struct RicciData {
    Mat3 ric{};
    double scalar = 0.0;
    /// Schouten tensor Ric - (Sc/4) g.
    Mat3 schouten{};
};

RicciData ricci_scalar_schouten(const Expr& f, Point2 p);

/// Orientation and normalization used for the (0,2) Cotton tensor
/// C_ij = sign * (1 / (4 sqrt|g|)) C_nmi eps^{nml} g_lj, eps^{x y x~} = +1.
/// With sign = +1 the single nonzero entry is C(x,x) = -f_yyy / 2.
struct CottonConvention {
    int sign = +1;
};

struct CottonData {
    /// C_ijk = (nabla_i S)_jk - (nabla_j S)_ik, accessed as c3[i][j][k].
    std::array<Mat3, 3> c3{};
    Mat3 c2{};
    CottonConvention convention{};
};

CottonData cotton(const Expr& f, Point2 p, CottonConvention convention = {});

struct OneForm {
    Vec3 w{};
};

struct RecurrenceResult {
    OneForm omega;
    /// max |nabla R - omega (x) R| over all components.
    double residual = 0.0;
};

/// omega = d(ln |f_yy|); throws ZeroCurvatureError where f_yy vanishes.
RecurrenceResult recurrence_form(const Expr& f, Point2 p);

}  // namespace walker
