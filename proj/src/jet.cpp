#include "walker/jet.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "walker/errors.hpp"

namespace walker {

namespace {

double factorial(int n)
{
    double r = 1.0;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

void check_finite(const Jet2& j, const char* what)
{
    for (double v : j.raw()) {
        if (!std::isfinite(v)) throw OverflowError(std::string("non-finite jet coefficient in ") + what);
    }
}

}  // namespace

Jet2::Jet2(int order) : order_(order), c_(static_cast<std::size_t>((order + 1) * (order + 2) / 2), 0.0)
{
    if (order < 0) throw OrderError("jet order must be nonnegative");
}

// Coefficients are grouped by total degree d = i + j; within a group by j.
std::size_t Jet2::index(int i, int j) noexcept
{
    const int d = i + j;
    return static_cast<std::size_t>(d * (d + 1) / 2 + j);
}

Jet2 Jet2::constant(int order, double value)
{
    Jet2 r(order);
    r.c_[0] = value;
    return r;
}

Jet2 Jet2::variable(int order, Coord c, double at)
{
    Jet2 r = constant(order, at);
    if (order >= 1) r.coeff(c == Coord::X ? 1 : 0, c == Coord::Y ? 1 : 0) = 1.0;
    return r;
}

double Jet2::coeff(int i, int j) const
{
    if (i < 0 || j < 0 || i + j > order_) throw OrderError("jet coefficient beyond truncation order");
    return c_[index(i, j)];
}

double& Jet2::coeff(int i, int j)
{
    if (i < 0 || j < 0 || i + j > order_) throw OrderError("jet coefficient beyond truncation order");
    return c_[index(i, j)];
}

double Jet2::partial(int i, int j) const { return coeff(i, j) * factorial(i) * factorial(j); }

double Jet2::scale() const noexcept
{
    double s = 0.0;
    for (double v : c_) s = std::max(s, std::abs(v));
    return s;
}

bool Jet2::is_zero() const noexcept
{
    return std::all_of(c_.begin(), c_.end(), [](double v) { return v == 0.0; });
}

Jet2 Jet2::truncated(int order) const
{
    if (order >= order_) return *this;
    Jet2 r(order);
    std::copy_n(c_.begin(), r.c_.size(), r.c_.begin());
    return r;
}

Jet2 Jet2::derivative(Coord c) const
{
    if (order_ == 0) throw OrderError("cannot differentiate an order-0 jet");
    Jet2 r(order_ - 1);
    for (int d = 0; d < order_; ++d) {
        for (int j = 0; j <= d; ++j) {
            const int i = d - j;
            if (c == Coord::X)
                r.c_[index(i, j)] = (i + 1) * c_[index(i + 1, j)];
            else
                r.c_[index(i, j)] = (j + 1) * c_[index(i, j + 1)];
        }
    }
    return r;
}

Jet2& Jet2::operator+=(const Jet2& o)
{
    if (o.order_ < order_) *this = truncated(o.order_);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
}

Jet2& Jet2::operator-=(const Jet2& o)
{
    if (o.order_ < order_) *this = truncated(o.order_);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
}

Jet2& Jet2::operator*=(double s)
{
    for (double& v : c_) v *= s;
    return *this;
}

Jet2 operator*(const Jet2& a, const Jet2& b)
{
    const int order = std::min(a.order_, b.order_);
    Jet2 r(order);
    for (int da = 0; da <= order; ++da) {
        for (int ja = 0; ja <= da; ++ja) {
            const double av = a.c_[Jet2::index(da - ja, ja)];
            if (av == 0.0) continue;
            for (int db = 0; db <= order - da; ++db) {
                const std::size_t base_b = Jet2::index(db, 0);
                const std::size_t base_r = Jet2::index(da + db, 0) + static_cast<std::size_t>(ja);
                for (int jb = 0; jb <= db; ++jb) r.c_[base_r + jb] += av * b.c_[base_b + jb];
            }
        }
    }
    return r;
}

Jet2 Jet2::compose(const Jet2& u, const std::vector<double>& taylor)
{
    // Horner evaluation in the nilpotent part t = u - u0; t^{order+1} = 0.
    Jet2 t = u;
    t.c_[0] = 0.0;
    Jet2 r = constant(u.order_, taylor.back());
    for (int n = static_cast<int>(taylor.size()) - 2; n >= 0; --n) {
        r = r * t;
        r.c_[0] += taylor[static_cast<std::size_t>(n)];
    }
    return r;
}

Jet2 exp(const Jet2& a)
{
    const double e0 = std::exp(a.value());
    std::vector<double> taylor(static_cast<std::size_t>(a.order()) + 1);
    for (int n = 0; n <= a.order(); ++n) taylor[static_cast<std::size_t>(n)] = e0 / factorial(n);
    Jet2 r = Jet2::compose(a, taylor);
    check_finite(r, "exp");
    return r;
}

Jet2 log(const Jet2& a)
{
    const double u0 = a.value();
    if (!(u0 > 0.0)) throw DomainError("log of nonpositive argument " + std::to_string(u0));
    std::vector<double> taylor(static_cast<std::size_t>(a.order()) + 1);
    taylor[0] = std::log(u0);
    double p = 1.0;
    for (int n = 1; n <= a.order(); ++n) {
        p /= u0;
        taylor[static_cast<std::size_t>(n)] = ((n % 2 == 1) ? 1.0 : -1.0) * p / n;
    }
    return Jet2::compose(a, taylor);
}

Jet2 sin(const Jet2& a)
{
    const double s = std::sin(a.value());
    const double c = std::cos(a.value());
    const double cycle[4] = {s, c, -s, -c};
    std::vector<double> taylor(static_cast<std::size_t>(a.order()) + 1);
    for (int n = 0; n <= a.order(); ++n) taylor[static_cast<std::size_t>(n)] = cycle[n % 4] / factorial(n);
    return Jet2::compose(a, taylor);
}

Jet2 cos(const Jet2& a)
{
    const double s = std::sin(a.value());
    const double c = std::cos(a.value());
    const double cycle[4] = {c, -s, -c, s};
    std::vector<double> taylor(static_cast<std::size_t>(a.order()) + 1);
    for (int n = 0; n <= a.order(); ++n) taylor[static_cast<std::size_t>(n)] = cycle[n % 4] / factorial(n);
    return Jet2::compose(a, taylor);
}

Jet2 pow(const Jet2& a, int exponent)
{
    const double u0 = a.value();
    if (exponent < 0 && u0 == 0.0) throw DomainError("negative power of zero");
    // Generalized binomial series: (u0 + t)^m = sum_n binom(m, n) u0^{m-n} t^n.
    std::vector<double> taylor(static_cast<std::size_t>(a.order()) + 1, 0.0);
    double binom = 1.0;
    for (int n = 0; n <= a.order(); ++n) {
        if (n > 0) binom *= static_cast<double>(exponent - n + 1) / n;
        if (binom == 0.0) break;
        taylor[static_cast<std::size_t>(n)] = binom * std::pow(u0, exponent - n);
    }
    Jet2 r = Jet2::compose(a, taylor);
    check_finite(r, "integer power");
    return r;
}

Jet2 reciprocal(const Jet2& a) { return pow(a, -1); }

namespace {

using Memo = std::unordered_map<const void*, Jet2>;

Jet2 eval_rec(const Expr& e, Point2 p, int order, Memo& memo)
{
    if (auto it = memo.find(e.id()); it != memo.end()) return it->second;
    Jet2 r;
    switch (e.kind()) {
    case ExprKind::Constant:
        r = Jet2::constant(order, e.value());
        break;
    case ExprKind::CoordX:
        r = Jet2::variable(order, Coord::X, p.x);
        break;
    case ExprKind::CoordY:
        r = Jet2::variable(order, Coord::Y, p.y);
        break;
    case ExprKind::Add:
        r = Jet2(order);
        for (const Expr& a : e.args()) r += eval_rec(a, p, order, memo);
        break;
    case ExprKind::Negate:
        r = -eval_rec(e.args()[0], p, order, memo);
        break;
    case ExprKind::Multiply:
        r = Jet2::constant(order, 1.0);
        for (const Expr& a : e.args()) r = r * eval_rec(a, p, order, memo);
        break;
    case ExprKind::IntPower:
        r = pow(eval_rec(e.args()[0], p, order, memo), e.exponent());
        break;
    case ExprKind::Exp:
        r = exp(eval_rec(e.args()[0], p, order, memo));
        break;
    case ExprKind::Log:
        r = log(eval_rec(e.args()[0], p, order, memo));
        break;
    case ExprKind::Sin:
        r = sin(eval_rec(e.args()[0], p, order, memo));
        break;
    case ExprKind::Cos:
        r = cos(eval_rec(e.args()[0], p, order, memo));
        break;
    }
    check_finite(r, "expression evaluation");
    memo.emplace(e.id(), r);
    return r;
}

}  // namespace

Jet2 jet_eval(const Expr& expr, Point2 point, int order)
{
    if (order < 0) throw OrderError("jet order must be nonnegative");
    Memo memo;
    return eval_rec(expr, point, order, memo);
}

double partial(const Expr& expr, Point2 point, int i, int j, int max_order)
{
    if (i < 0 || j < 0) throw OrderError("negative derivative order");
    if (i + j > max_order) throw OrderError("derivative order exceeds configured jet order");
    return jet_eval(expr, point, i + j).partial(i, j);
}

std::vector<double> x_derivatives(const Expr& expr, double x, int n)
{
    const Jet2 j = jet_eval(expr, {x, 0.0}, n);
    std::vector<double> out(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) out[static_cast<std::size_t>(k)] = j.partial(k, 0);
    return out;
}

}  // namespace walker
