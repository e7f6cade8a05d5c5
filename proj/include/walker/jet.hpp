#pragma once

#include <cstddef>
#include <vector>

#include "walker/expr.hpp"

namespace walker {

inline constexpr int kDefaultJetOrder = 10;

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Truncated bivariate Taylor expansion about a point.
///
/// coeff(i, j) is d^{i+j} f / dx^i dy^j divided by i! j!; all coefficients with
/// i + j <= order() are stored. Products and analytic compositions are exact up
/// to the truncation order.
class Jet2 {
public:
    Jet2() : Jet2(0) {}
    explicit Jet2(int order);

    static Jet2 constant(int order, double value);
    /// The coordinate function x (or y) expanded about `at`.
    static Jet2 variable(int order, Coord c, double at);

    int order() const noexcept { return order_; }
    double value() const noexcept { return c_[0]; }
    double coeff(int i, int j) const;
    double& coeff(int i, int j);
    /// d^{i+j} f / dx^i dy^j at the expansion point.
    double partial(int i, int j) const;
    /// Largest coefficient magnitude.
    double scale() const noexcept;
    bool is_zero() const noexcept;

    /// Drops all coefficients of total degree above `order`.
    Jet2 truncated(int order) const;
    /// Jet of the partial derivative, one order lower.
    Jet2 derivative(Coord c) const;

    Jet2& operator+=(const Jet2& o);
    Jet2& operator-=(const Jet2& o);
    Jet2& operator*=(double s);

    friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
    friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
    friend Jet2 operator-(Jet2 a) { return a *= -1.0; }
    friend Jet2 operator*(Jet2 a, double s) { return a *= s; }
    friend Jet2 operator*(double s, Jet2 a) { return a *= s; }
    /// Truncated Cauchy product at the smaller of the two orders.
    friend Jet2 operator*(const Jet2& a, const Jet2& b);

    friend Jet2 exp(const Jet2& a);
    /// Throws DomainError for a nonpositive constant term.
    friend Jet2 log(const Jet2& a);
    friend Jet2 sin(const Jet2& a);
    friend Jet2 cos(const Jet2& a);
    /// Throws DomainError for a negative exponent and a zero constant term.
    friend Jet2 pow(const Jet2& a, int exponent);
    friend Jet2 reciprocal(const Jet2& a);

    const std::vector<double>& raw() const noexcept { return c_; }

private:
    static std::size_t index(int i, int j) noexcept;
    /// sum_n a_n (u - u0)^n for the nilpotent part of u.
    static Jet2 compose(const Jet2& u, const std::vector<double>& taylor);

    int order_;
    std::vector<double> c_;
};

/// Jet of `expr` at `point`, truncated at total order `order`.
/// Throws DomainError where a primitive is undefined and OverflowError on a
/// non-finite coefficient.
Jet2 jet_eval(const Expr& expr, Point2 point, int order);

/// d^{i+j} expr / dx^i dy^j at `point`. Throws OrderError when i + j exceeds
/// `max_order`.
double partial(const Expr& expr, Point2 point, int i, int j, int max_order = kDefaultJetOrder);

/// Derivatives (value, d/dx, ..., d^n/dx^n) of an x-only expression at x.
std::vector<double> x_derivatives(const Expr& expr, double x, int n);

}  // namespace walker
