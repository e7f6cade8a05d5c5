#include "walker/metric.hpp"

#include <algorithm>
#include <cmath>

#include "walker/errors.hpp"

namespace walker {

const char* axis_label(int axis)
{
    switch (axis) {
    case kX: return "x";
    case kY: return "y";
    case kXt: return "xt";
    default: return "?";
    }
}

bool is_negligible(double v, double scale, double rel) { return std::abs(v) <= rel * (1.0 + scale); }

double MetricAtPoint::inner(const Vec3& u, const Vec3& v) const
{
    double s = 0.0;
    for (int a = 0; a < kDim; ++a)
        for (int b = 0; b < kDim; ++b) s += g[a][b] * u[a] * v[b];
    return s;
}

MetricAtPoint metric_at(const Expr& f, Point2 p)
{
    const double fv = jet_eval(f, p, 0).value();
    MetricAtPoint m;
    m.g[kX][kX] = -2.0 * fv;
    m.g[kX][kXt] = m.g[kXt][kX] = 1.0;
    m.g[kY][kY] = 1.0;
    m.g_inv[kXt][kXt] = 2.0 * fv;
    m.g_inv[kX][kXt] = m.g_inv[kXt][kX] = 1.0;
    m.g_inv[kY][kY] = 1.0;
    const Mat3& g = m.g;
    m.det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
            g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
    return m;
}

CovTensor::CovTensor(int k, Point2 point, std::vector<double> components, double scale)
    : k_(k), point_(point), components_(std::move(components)), scale_(scale)
{
}

std::size_t flat_index(std::span<const int> index)
{
    std::size_t flat = 0;
    for (int i : index) flat = flat * kDim + static_cast<std::size_t>(i);
    return flat;
}

std::vector<int> unflatten(std::size_t flat, int rank)
{
    std::vector<int> idx(static_cast<std::size_t>(rank));
    for (int s = rank - 1; s >= 0; --s) {
        idx[static_cast<std::size_t>(s)] = static_cast<int>(flat % kDim);
        flat /= kDim;
    }
    return idx;
}

double CovTensor::at(std::span<const int> index) const
{
    if (static_cast<int>(index.size()) != rank()) throw Error("CovTensor::at: wrong number of indices");
    return components_.at(flat_index(index));
}

double CovTensor::at(std::initializer_list<int> index) const
{
    return at(std::span<const int>(index.begin(), index.size()));
}

double CovTensor::contract(std::span<const Vec3> vectors) const
{
    if (static_cast<int>(vectors.size()) != rank()) throw Error("CovTensor::contract: wrong number of vectors");
    std::vector<double> cur(components_.begin(), components_.end());
    for (int s = rank() - 1; s >= 0; --s) {
        const Vec3& v = vectors[static_cast<std::size_t>(s)];
        std::vector<double> next(cur.size() / kDim);
        for (std::size_t j = 0; j < next.size(); ++j)
            next[j] = cur[j * kDim] * v[0] + cur[j * kDim + 1] * v[1] + cur[j * kDim + 2] * v[2];
        cur = std::move(next);
    }
    return cur[0];
}

namespace {

struct JetTensor {
    int rank = 0;
    std::vector<Jet2> c;
};

using ChristoffelJets = std::array<Jet2, 27>;

std::size_t gamma_index(int c, int a, int b) { return static_cast<std::size_t>(9 * c + 3 * a + b); }

ChristoffelJets christoffel_jets(const Jet2& f)
{
    const int q = f.order() - 1;
    ChristoffelJets gam;
    gam.fill(Jet2(q));
    const Jet2 fx = f.derivative(Coord::X);
    const Jet2 fy = f.derivative(Coord::Y);
    gam[gamma_index(kXt, kX, kX)] = -fx;
    gam[gamma_index(kY, kX, kX)] = fy;
    gam[gamma_index(kXt, kX, kY)] = -fy;
    gam[gamma_index(kXt, kY, kX)] = -fy;
    return gam;
}

std::array<Jet2, 9> metric_jets(const Jet2& f)
{
    std::array<Jet2, 9> g;
    g.fill(Jet2(f.order()));
    g[3 * kX + kX] = -2.0 * f;
    g[3 * kX + kXt] = g[3 * kXt + kX] = Jet2::constant(f.order(), 1.0);
    g[3 * kY + kY] = Jet2::constant(f.order(), 1.0);
    return g;
}

std::array<Jet2, 9> inverse_metric_jets(const Jet2& f)
{
    std::array<Jet2, 9> gi;
    gi.fill(Jet2(f.order()));
    gi[3 * kXt + kXt] = 2.0 * f;
    gi[3 * kX + kXt] = gi[3 * kXt + kX] = Jet2::constant(f.order(), 1.0);
    gi[3 * kY + kY] = Jet2::constant(f.order(), 1.0);
    return gi;
}

Jet2 coordinate_derivative(const Jet2& j, int axis)
{
    // Every quantity is independent of x~.
    if (axis == kXt || j.is_zero()) return Jet2(std::max(j.order() - 1, 0));
    return j.derivative(axis == kX ? Coord::X : Coord::Y);
}

// Rop(a, b, c, d) = a-component of Rop(d_c, d_d) d_b, then lowered:
// R(c, d, b, w) = g_{wa} Rop(a, b, c, d).
JetTensor riemann_jets(const Jet2& f)
{
    if (f.order() < 2) throw OrderError("curvature needs a jet of order >= 2");
    const ChristoffelJets gam = christoffel_jets(f);
    const auto g = metric_jets(f);
    const int q = f.order() - 2;

    std::array<std::array<Jet2, 27>, 3> dgam;
    for (int e = 0; e < kDim; ++e)
        for (std::size_t i = 0; i < 27; ++i) dgam[static_cast<std::size_t>(e)][i] = coordinate_derivative(gam[i], e);

    std::vector<Jet2> rop(81, Jet2(q));
    for (int a = 0; a < kDim; ++a)
        for (int b = 0; b < kDim; ++b)
            for (int c = 0; c < kDim; ++c)
                for (int d = 0; d < kDim; ++d) {
                    Jet2 v = dgam[static_cast<std::size_t>(c)][gamma_index(a, d, b)] -
                             dgam[static_cast<std::size_t>(d)][gamma_index(a, c, b)];
                    for (int e = 0; e < kDim; ++e) {
                        const Jet2& g1 = gam[gamma_index(a, c, e)];
                        const Jet2& g2 = gam[gamma_index(e, d, b)];
                        if (!g1.is_zero() && !g2.is_zero()) v += g1 * g2;
                        const Jet2& g3 = gam[gamma_index(a, d, e)];
                        const Jet2& g4 = gam[gamma_index(e, c, b)];
                        if (!g3.is_zero() && !g4.is_zero()) v -= g3 * g4;
                    }
                    rop[static_cast<std::size_t>(27 * a + 9 * b + 3 * c + d)] = v.truncated(q);
                }

    JetTensor r{4, std::vector<Jet2>(81, Jet2(q))};
    for (int c = 0; c < kDim; ++c)
        for (int d = 0; d < kDim; ++d)
            for (int b = 0; b < kDim; ++b)
                for (int w = 0; w < kDim; ++w) {
                    Jet2 v(q);
                    for (int a = 0; a < kDim; ++a) {
                        const Jet2& ga = g[static_cast<std::size_t>(3 * w + a)];
                        const Jet2& ra = rop[static_cast<std::size_t>(27 * a + 9 * b + 3 * c + d)];
                        if (!ga.is_zero() && !ra.is_zero()) v += ga * ra;
                    }
                    r.c[static_cast<std::size_t>(27 * c + 9 * d + 3 * b + w)] = std::move(v);
                }
    return r;
}

// (nabla T)(i1..ir; e) = d_e T(i1..ir) - sum_s Gamma^m_{e i_s} T(i1..m..ir).
JetTensor covariant_derivative(const JetTensor& t, const ChristoffelJets& gam)
{
    struct Entry {
        int m, e, i;
        const Jet2* jet;
    };
    std::vector<Entry> nonzero;
    for (int m = 0; m < kDim; ++m)
        for (int e = 0; e < kDim; ++e)
            for (int i = 0; i < kDim; ++i)
                if (const Jet2& j = gam[gamma_index(m, e, i)]; !j.is_zero()) nonzero.push_back({m, e, i, &j});

    const int r = t.rank;
    const int q = t.c.front().order();
    if (q < 1) throw OrderError("jet order exhausted in covariant derivative recursion");
    std::vector<std::size_t> stride(static_cast<std::size_t>(r));
    for (int s = r - 1, st = 1; s >= 0; --s, st *= kDim) stride[static_cast<std::size_t>(s)] = static_cast<std::size_t>(st);

    JetTensor out{r + 1, std::vector<Jet2>(t.c.size() * kDim, Jet2(q - 1))};
    for (std::size_t base = 0; base < t.c.size(); ++base) {
        const std::vector<int> idx = unflatten(base, r);
        for (int e = 0; e < kDim; ++e) {
            Jet2 acc = coordinate_derivative(t.c[base], e);
            for (int s = 0; s < r; ++s) {
                const int is = idx[static_cast<std::size_t>(s)];
                for (const Entry& en : nonzero) {
                    if (en.e != e || en.i != is) continue;
                    const std::size_t other = base + static_cast<std::size_t>(en.m) * stride[static_cast<std::size_t>(s)] -
                                              static_cast<std::size_t>(is) * stride[static_cast<std::size_t>(s)];
                    const Jet2& tv = t.c[other];
                    if (!tv.is_zero()) acc -= *en.jet * tv;
                }
            }
            out.c[base * kDim + static_cast<std::size_t>(e)] = std::move(acc);
        }
    }
    return out;
}

std::vector<double> values_of(const JetTensor& t)
{
    std::vector<double> v(t.c.size());
    std::transform(t.c.begin(), t.c.end(), v.begin(), [](const Jet2& j) { return j.value(); });
    return v;
}

}  // namespace

std::vector<CovTensor> curvature_tower(const Expr& f, Point2 p, int k, int max_order)
{
    if (k < 0) throw OrderError("negative covariant derivative order");
    if (k + 2 > max_order) throw OrderError("nabla^" + std::to_string(k) + " R needs jet order " +
                                            std::to_string(k + 2) + " > configured " + std::to_string(max_order));
    const Jet2 fj = jet_eval(f, p, k + 2);
    const double scale = fj.scale();
    const ChristoffelJets gam = christoffel_jets(fj);
    std::vector<CovTensor> tower;
    JetTensor cur = riemann_jets(fj);
    tower.emplace_back(0, p, values_of(cur), scale);
    for (int l = 1; l <= k; ++l) {
        cur = covariant_derivative(cur, gam);
        tower.emplace_back(l, p, values_of(cur), scale);
    }
    return tower;
}

CovTensor riemann(const Expr& f, Point2 p) { return curvature_tower(f, p, 0).front(); }

CovTensor nabla_k_R(const Expr& f, Point2 p, int k, int max_order) { return curvature_tower(f, p, k, max_order).back(); }

Christoffel christoffel(const Expr& f, Point2 p)
{
    const ChristoffelJets gam = christoffel_jets(jet_eval(f, p, 1));
    Christoffel c;
    for (std::size_t i = 0; i < 27; ++i) c.values[i] = gam[i].value();
    return c;
}

namespace {

// Ric_bc = g^{ad} R(a, b, c, d), as jets.
std::array<Jet2, 9> ricci_jets(const JetTensor& r, const std::array<Jet2, 9>& gi)
{
    const int q = r.c.front().order();
    std::array<Jet2, 9> ric;
    ric.fill(Jet2(q));
    for (int b = 0; b < kDim; ++b)
        for (int c = 0; c < kDim; ++c)
            for (int a = 0; a < kDim; ++a)
                for (int d = 0; d < kDim; ++d) {
                    const Jet2& ginv = gi[static_cast<std::size_t>(3 * a + d)];
                    const Jet2& rv = r.c[static_cast<std::size_t>(27 * a + 9 * b + 3 * c + d)];
                    if (!ginv.is_zero() && !rv.is_zero()) ric[static_cast<std::size_t>(3 * b + c)] += ginv * rv;
                }
    return ric;
}

struct SchoutenJets {
    std::array<Jet2, 9> ric;
    Jet2 scalar;
    std::array<Jet2, 9> schouten;
};

SchoutenJets schouten_jets(const Jet2& fj)
{
    const JetTensor r = riemann_jets(fj);
    const auto gi = inverse_metric_jets(fj);
    const auto g = metric_jets(fj);
    SchoutenJets s;
    s.ric = ricci_jets(r, gi);
    const int q = s.ric[0].order();
    s.scalar = Jet2(q);
    for (std::size_t i = 0; i < 9; ++i)
        if (!gi[i].is_zero() && !s.ric[i].is_zero()) s.scalar += gi[i] * s.ric[i];
    for (std::size_t i = 0; i < 9; ++i) s.schouten[i] = s.ric[i] - 0.25 * (s.scalar * g[i]);
    return s;
}

int levi_civita(int n, int m, int l)
{
    if (n == m || m == l || n == l) return 0;
    // Even permutations of (0, 1, 2).
    if ((n == 0 && m == 1) || (n == 1 && m == 2) || (n == 2 && m == 0)) return 1;
    return -1;
}

}  // namespace

RicciData ricci_scalar_schouten(const Expr& f, Point2 p)
{
    const SchoutenJets s = schouten_jets(jet_eval(f, p, 2));
    RicciData out;
    for (int a = 0; a < kDim; ++a)
        for (int b = 0; b < kDim; ++b) {
            out.ric[a][b] = s.ric[static_cast<std::size_t>(3 * a + b)].value();
            out.schouten[a][b] = s.schouten[static_cast<std::size_t>(3 * a + b)].value();
        }
    out.scalar = s.scalar.value();
    return out;
}

CottonData cotton(const Expr& f, Point2 p, CottonConvention convention)
{
    if (convention.sign != 1 && convention.sign != -1) throw Error("Cotton sign must be +1 or -1");
    const Jet2 fj = jet_eval(f, p, 3);
    const SchoutenJets s = schouten_jets(fj);
    const JetTensor schouten{2, std::vector<Jet2>(s.schouten.begin(), s.schouten.end())};
    // ds(j, k, i) = (nabla_i S)_jk.
    const JetTensor ds = covariant_derivative(schouten, christoffel_jets(fj));
    const auto nabla_s = [&](int i, int j, int k) { return ds.c[static_cast<std::size_t>(9 * j + 3 * k + i)].value(); };

    CottonData out;
    out.convention = convention;
    for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < kDim; ++j)
            for (int k = 0; k < kDim; ++k) out.c3[i][j][k] = nabla_s(i, j, k) - nabla_s(j, i, k);

    const MetricAtPoint m = metric_at(f, p);
    const double factor = convention.sign / (4.0 * std::sqrt(std::abs(m.det)));
    for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < kDim; ++j) {
            double acc = 0.0;
            for (int n = 0; n < kDim; ++n)
                for (int mm = 0; mm < kDim; ++mm)
                    for (int l = 0; l < kDim; ++l) {
                        const int eps = levi_civita(n, mm, l);
                        if (eps != 0) acc += out.c3[n][mm][i] * eps * m.g[l][j];
                    }
            out.c2[i][j] = factor * acc;
        }
    return out;
}

RecurrenceResult recurrence_form(const Expr& f, Point2 p)
{
    const Jet2 fj = jet_eval(f, p, 3);
    const Jet2 fyy = fj.derivative(Coord::Y).derivative(Coord::Y);
    if (is_negligible(fyy.value(), fj.scale())) throw ZeroCurvatureError("f_yy vanishes; curvature is zero at the point");
    RecurrenceResult out;
    out.omega.w = {fyy.partial(1, 0) / fyy.value(), fyy.partial(0, 1) / fyy.value(), 0.0};

    const auto tower = curvature_tower(f, p, 1, 3);
    const auto r = tower[0].components();
    const auto dr = tower[1].components();
    for (std::size_t base = 0; base < r.size(); ++base)
        for (int e = 0; e < kDim; ++e)
            out.residual = std::max(out.residual, std::abs(dr[base * kDim + static_cast<std::size_t>(e)] -
                                                           out.omega.w[static_cast<std::size_t>(e)] * r[base]));
    return out;
}

}  // namespace walker
