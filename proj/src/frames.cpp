#include "walker/frames.hpp"

#include <cmath>
#include <vector>

#include "walker/errors.hpp"

namespace walker {

namespace {

struct LocalPartials {
    double f, fyy, fxyy, fyyy, scale;
};

LocalPartials partials_at(const Expr& f, Point2 p)
{
    const Jet2 j = jet_eval(f, p, 3);
    return {j.value(), j.partial(0, 2), j.partial(1, 2), j.partial(0, 3), j.scale()};
}

bool close(double a, double b, double rtol) { return std::abs(a - b) <= rtol * (1.0 + std::abs(b)); }

}  // namespace

FrameCoeffs normalized_frame(double a11, double a12)
{
    FrameCoeffs c;
    c.a11 = a11;
    c.a12 = a12;
    c.a13 = -0.5 * a12 * a12;
    c.a22 = 1.0;
    c.a23 = -a12;
    c.a33 = 1.0 / a11;
    return c;
}

FrameVectors frame_vectors(const FrameCoeffs& c, double f)
{
    FrameVectors xi{};
    xi[0] = {c.a11, c.a11 * c.a12, c.a11 * (f + c.a13)};
    xi[1] = {0.0, c.a22, c.a23};
    xi[2] = {0.0, 0.0, c.a33};
    return xi;
}

Mat3 frame_gram(const Expr& f, Point2 p, const FrameCoeffs& c)
{
    const MetricAtPoint m = metric_at(f, p);
    const FrameVectors xi = frame_vectors(c, f(p.x, p.y));
    Mat3 gram{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) gram[i][j] = m.inner(xi[i], xi[j]);
    return gram;
}

FrameCoeffs frame_0(const Expr& f, Point2 p, double a12)
{
    const LocalPartials d = partials_at(f, p);
    if (!(d.fyy > 0.0) || is_negligible(d.fyy, d.scale))
        throw SignError("frame needs f_yy > 0 at the point (f_yy = " + std::to_string(d.fyy) + ")");
    return normalized_frame(1.0 / std::sqrt(d.fyy), a12);
}

FrameCoeffs frame_1(const Expr& f, Point2 p)
{
    const LocalPartials d = partials_at(f, p);
    if (!(d.fyy > 0.0) || is_negligible(d.fyy, d.scale))
        throw SignError("frame needs f_yy > 0 at the point");
    if (is_negligible(d.fyyy, d.scale)) throw DivisionError("f_yyy vanishes; a12 = -f_xyy/f_yyy undefined");
    return normalized_frame(1.0 / std::sqrt(d.fyy), -d.fxyy / d.fyyy);
}

double frame_slot(const CovTensor& t, const FrameVectors& xi, std::span<const int> slots)
{
    if (static_cast<int>(slots.size()) != t.rank()) throw Error("slot count does not match tensor rank");
    std::vector<Vec3> vs;
    vs.reserve(slots.size());
    for (int s : slots) {
        if (s < 1 || s > 3) throw Error("frame slot index must be 1, 2 or 3");
        vs.push_back(xi[static_cast<std::size_t>(s - 1)]);
    }
    return t.contract(vs);
}

double frame_slot(const CovTensor& t, const FrameVectors& xi, std::initializer_list<int> slots)
{
    return frame_slot(t, xi, std::span<const int>(slots.begin(), slots.size()));
}

ModelRecord model_invariants(const Expr& f, Point2 p, const FrameCoeffs& frame, int k)
{
    if (k < 0 || k > 2) throw OrderError("model records are defined for k <= 2");
    const auto tower = curvature_tower(f, p, k);
    const FrameVectors xi = frame_vectors(frame, f(p.x, p.y));
    ModelRecord rec;
    rec.k = k;
    rec.r = frame_slot(tower[0], xi, {1, 2, 2, 1});
    if (k >= 1)
        for (int i = 0; i < 2; ++i) rec.d1[i] = frame_slot(tower[1], xi, {1, 2, 2, 1, i + 1});
    if (k >= 2)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) rec.d2[i][j] = frame_slot(tower[2], xi, {1, 2, 2, 1, i + 1, j + 1});
    return rec;
}

const char* to_string(ModelKind k)
{
    switch (k) {
    case ModelKind::A0: return "A0";
    case ModelKind::N1: return "N1";
    case ModelKind::P1: return "P1";
    case ModelKind::N2: return "N2";
    case ModelKind::P2: return "P2";
    case ModelKind::CW: return "CW";
    case ModelKind::None: return "None";
    }
    return "?";
}

std::string ModelTag::name() const
{
    switch (kind) {
    case ModelKind::N1:
    case ModelKind::N2: return std::string(to_string(kind)) + "(b=" + std::to_string(parameter) + ")";
    case ModelKind::P1:
    case ModelKind::P2: return std::string(to_string(kind)) + "(c=" + std::to_string(parameter) + ")";
    default: return to_string(kind);
    }
}

ModelTag match_model(const ModelRecord& rec, double rtol)
{
    if (!close(rec.r, 1.0, rtol)) throw NotNormalizedError("R(xi1,xi2,xi2,xi1) = " + std::to_string(rec.r));
    if (rec.k == 0) return {ModelKind::A0, 0.0};

    const bool d1x = close(rec.d1[0], 0.0, rtol);
    const bool d1y = close(rec.d1[1], 0.0, rtol);
    auto d2_is = [&](double xx, double xy, double yx, double yy) {
        return close(rec.d2[0][0], xx, rtol) && close(rec.d2[0][1], xy, rtol) && close(rec.d2[1][0], yx, rtol) &&
               close(rec.d2[1][1], yy, rtol);
    };

    if (d1x && d1y) {
        if (rec.k < 2 || d2_is(0, 0, 0, 0)) return {ModelKind::CW, 0.0};
        return {ModelKind::None, 0.0};
    }
    if (d1x) {
        const double b = rec.d1[1];
        if (rec.k >= 2 && d2_is(-1.0, 0.0, 0.0, b * b)) return {ModelKind::N2, b};
        return {ModelKind::N1, b};
    }
    if (d1y) {
        const double c = rec.d1[0];
        if (rec.k >= 2 && d2_is(1.5 * c * c, 0.0, 0.0, 0.0)) return {ModelKind::P2, c};
        return {ModelKind::P1, c};
    }
    return {ModelKind::None, 0.0};
}

KvFrame kv_frame(const Expr& f, Point2 p)
{
    const LocalPartials d = partials_at(f, p);
    if (!(d.fyy > 0.0) || !(d.fyyy > 0.0) || is_negligible(d.fyy, d.scale) || is_negligible(d.fyyy, d.scale))
        throw SignError("KV frame needs f_yy > 0 and f_yyy > 0");
    KvFrame out;
    out.lambda = d.fyyy / d.fyy;
    out.frame = normalized_frame(out.lambda / std::sqrt(d.fyy), -d.fxyy / d.fyyy);
    const ModelRecord rec = model_invariants(f, p, out.frame, 1);
    const double l2 = out.lambda * out.lambda;
    out.weighted = {rec.r / l2, rec.d1[0] / (l2 * out.lambda), rec.d1[1] / (l2 * out.lambda)};
    return out;
}

}  // namespace walker
