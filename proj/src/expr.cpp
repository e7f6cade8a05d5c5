#include "walker/expr.hpp"

#include <cmath>
#include <unordered_set>
#include <utility>

#include "walker/errors.hpp"
#include "walker/jet.hpp"

namespace walker {

struct Expr::Node {
    ExprKind kind = ExprKind::Constant;
    double value = 0.0;
    int exponent = 0;
    std::vector<Expr> args;
};

Expr::Expr() : Expr(0.0) {}

Expr::Expr(double constant) : node_(std::make_shared<const Node>(Node{ExprKind::Constant, constant, 0, {}})) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::make(ExprKind kind, std::vector<Expr> args, double value, int exponent)
{
    return Expr(std::make_shared<const Node>(Node{kind, value, exponent, std::move(args)}));
}

Expr Expr::constant(double value) { return Expr(value); }
Expr Expr::x() { return make(ExprKind::CoordX, {}); }
Expr Expr::y() { return make(ExprKind::CoordY, {}); }
Expr Expr::coord(Coord c) { return c == Coord::X ? x() : y(); }

ExprKind Expr::kind() const noexcept { return node_->kind; }
double Expr::value() const noexcept { return node_->value; }
int Expr::exponent() const noexcept { return node_->exponent; }
std::span<const Expr> Expr::args() const noexcept { return node_->args; }

bool Expr::independent_of(Coord c) const
{
    const ExprKind target = c == Coord::X ? ExprKind::CoordX : ExprKind::CoordY;
    std::unordered_set<const void*> seen;
    std::vector<const Expr*> stack{this};
    while (!stack.empty()) {
        const Expr* e = stack.back();
        stack.pop_back();
        if (!seen.insert(e->id()).second) continue;
        if (e->kind() == target) return false;
        for (const Expr& a : e->args()) stack.push_back(&a);
    }
    return true;
}

std::size_t Expr::node_count() const
{
    std::unordered_set<const void*> seen;
    std::vector<const Expr*> stack{this};
    while (!stack.empty()) {
        const Expr* e = stack.back();
        stack.pop_back();
        if (!seen.insert(e->id()).second) continue;
        for (const Expr& a : e->args()) stack.push_back(&a);
    }
    return seen.size();
}

double Expr::operator()(double x, double y) const { return jet_eval(*this, {x, y}, 0).value(); }

Expr operator+(const Expr& a, const Expr& b) { return Expr::make(ExprKind::Add, {a, b}); }
Expr operator-(const Expr& a) { return Expr::make(ExprKind::Negate, {a}); }
Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::make(ExprKind::Multiply, {a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return a * pow(b, -1); }
Expr pow(const Expr& base, int exponent) { return Expr::make(ExprKind::IntPower, {base}, 0.0, exponent); }
Expr exp(const Expr& a) { return Expr::make(ExprKind::Exp, {a}); }
Expr log(const Expr& a) { return Expr::make(ExprKind::Log, {a}); }
Expr sin(const Expr& a) { return Expr::make(ExprKind::Sin, {a}); }
Expr cos(const Expr& a) { return Expr::make(ExprKind::Cos, {a}); }

Expr Expr::sum(std::vector<Expr> terms)
{
    if (terms.empty()) return Expr(0.0);
    if (terms.size() == 1) return terms.front();
    return make(ExprKind::Add, std::move(terms));
}

Expr Expr::product(std::vector<Expr> factors)
{
    if (factors.empty()) return Expr(1.0);
    if (factors.size() == 1) return factors.front();
    return make(ExprKind::Multiply, std::move(factors));
}

namespace {

bool is_zero_constant(const Expr& e) { return e.is_constant() && e.value() == 0.0; }

}  // namespace

Expr differentiate(const Expr& e, Coord wrt)
{
    switch (e.kind()) {
    case ExprKind::Constant:
        return Expr(0.0);
    case ExprKind::CoordX:
        return Expr(wrt == Coord::X ? 1.0 : 0.0);
    case ExprKind::CoordY:
        return Expr(wrt == Coord::Y ? 1.0 : 0.0);
    case ExprKind::Add: {
        std::vector<Expr> terms;
        for (const Expr& a : e.args()) {
            Expr d = differentiate(a, wrt);
            if (!is_zero_constant(d)) terms.push_back(std::move(d));
        }
        return Expr::sum(std::move(terms));
    }
    case ExprKind::Negate: {
        Expr d = differentiate(e.args()[0], wrt);
        return is_zero_constant(d) ? d : -d;
    }
    case ExprKind::Multiply: {
        // Leibniz rule over an n-ary product.
        std::vector<Expr> terms;
        const auto args = e.args();
        for (std::size_t k = 0; k < args.size(); ++k) {
            Expr d = differentiate(args[k], wrt);
            if (is_zero_constant(d)) continue;
            std::vector<Expr> factors;
            for (std::size_t m = 0; m < args.size(); ++m) factors.push_back(m == k ? d : args[m]);
            terms.push_back(Expr::product(std::move(factors)));
        }
        return Expr::sum(std::move(terms));
    }
    case ExprKind::IntPower: {
        const Expr& u = e.args()[0];
        const int n = e.exponent();
        Expr du = differentiate(u, wrt);
        if (is_zero_constant(du) || n == 0) return Expr(0.0);
        if (n == 1) return du;
        return Expr(static_cast<double>(n)) * pow(u, n - 1) * du;
    }
    case ExprKind::Exp: {
        Expr du = differentiate(e.args()[0], wrt);
        return is_zero_constant(du) ? du : e * du;
    }
    case ExprKind::Log: {
        Expr du = differentiate(e.args()[0], wrt);
        return is_zero_constant(du) ? du : du / e.args()[0];
    }
    case ExprKind::Sin: {
        Expr du = differentiate(e.args()[0], wrt);
        return is_zero_constant(du) ? du : cos(e.args()[0]) * du;
    }
    case ExprKind::Cos: {
        Expr du = differentiate(e.args()[0], wrt);
        return is_zero_constant(du) ? du : -(sin(e.args()[0]) * du);
    }
    }
    throw Error("differentiate: unknown expression kind");
}

}  // namespace walker
