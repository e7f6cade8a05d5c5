#pragma once

#include <array>
#include <span>
#include <string>

#include "walker/metric.hpp"

namespace walker {

/// Coefficients of the pseudo-orthonormal frame
///   xi1 = a11 (d_x + (f + a13) d_xt + a12 d_y),
///   xi2 = a22 d_y + a23 d_xt,
///   xi3 = a33 d_xt.
struct FrameCoeffs {
    double a11 = 1.0;
    double a12 = 0.0;
    double a13 = 0.0;
    double a22 = 1.0;
    double a23 = 0.0;
    double a33 = 1.0;
};

using FrameVectors = std::array<Vec3, 3>;

/// Fills a13, a22, a23, a33 from a11 and a12 so that the frame is
/// pseudo-orthonormal.
FrameCoeffs normalized_frame(double a11, double a12);

/// Coordinate components of (xi1, xi2, xi3); f is the value of f at the point.
FrameVectors frame_vectors(const FrameCoeffs& c, double f);

/// Gram matrix <xi_i, xi_j> at p.
Mat3 frame_gram(const Expr& f, Point2 p, const FrameCoeffs& c);

/// a11 = f_yy^{-1/2}, a12 free. Throws SignError unless f_yy > 0.
FrameCoeffs frame_0(const Expr& f, Point2 p, double a12 = 0.0);

/// frame_0 with a12 = -f_xyy / f_yyy, which kills nabla R(xi1,xi2,xi2,xi1;xi1).
/// Throws DivisionError when f_yyy vanishes.
FrameCoeffs frame_1(const Expr& f, Point2 p);

/// Full contraction of a curvature tensor with frame vectors; `slots` holds
/// 1-based frame indices, one per tensor slot.
double frame_slot(const CovTensor& t, const FrameVectors& xi, std::span<const int> slots);
double frame_slot(const CovTensor& t, const FrameVectors& xi, std::initializer_list<int> slots);

/// Curvature data on a frame up to order k <= 2:
/// R(1221); nabla R(1221;1), (1221;2); nabla^2 R(1221;i,j).
struct ModelRecord {
    int k = 0;
    double r = 0.0;
    std::array<double, 2> d1{};
    /// d2[i][j] = nabla^2 R(xi1,xi2,xi2,xi1; xi_{i+1}, xi_{j+1}).
    std::array<std::array<double, 2>, 2> d2{};
};

ModelRecord model_invariants(const Expr& f, Point2 p, const FrameCoeffs& frame, int k);

enum class ModelKind { A0, N1, P1, N2, P2, CW, None };

struct ModelTag {
    ModelKind kind = ModelKind::None;
    /// b for N1/N2, c for P1/P2, 0 otherwise.
    double parameter = 0.0;

    std::string name() const;
};

const char* to_string(ModelKind k);

/// Highest-order curvature model the record realizes. Comparisons use
/// |a - b| <= rtol (1 + |b|). Throws NotNormalizedError when R(1221) != 1.
ModelTag match_model(const ModelRecord& record, double rtol = 1e-7);

struct KvFrame {
    double lambda = 0.0;
    FrameCoeffs frame;
    /// lambda^{-(2+l)}-weighted slots: R(1221), nabla R(1221;1), nabla R(1221;2).
    Vec3 weighted{};
};

/// Frame with a11 = lambda f_yy^{-1/2}, lambda = f_yyy / f_yy and a12 as in
/// frame_1. Throws SignError unless f_yy > 0 and f_yyy > 0.
KvFrame kv_frame(const Expr& f, Point2 p);

}  // namespace walker
