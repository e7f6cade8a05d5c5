#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace walker {

enum class ExprKind {
    Constant,
    CoordX,
    CoordY,
    Add,
    Negate,
    Multiply,
    IntPower,
    Exp,
    Log,
    Sin,
    Cos,
};

enum class Coord { X, Y };

/// Immutable expression tree over the coordinates x and y.
///
/// Nodes are shared, so copying an Expr is cheap and a tree may be reused as
/// a subexpression any number of times. There is no simplification: the tree
/// is evaluated exactly as built.
class Expr {
public:
    /// The constant zero.
    Expr();
    Expr(double constant);  // NOLINT(google-explicit-constructor)

    static Expr constant(double value);
    static Expr x();
    static Expr y();
    static Expr coord(Coord c);

    ExprKind kind() const noexcept;
    /// Constant value; meaningful only for ExprKind::Constant.
    double value() const noexcept;
    /// Exponent; meaningful only for ExprKind::IntPower.
    int exponent() const noexcept;
    std::span<const Expr> args() const noexcept;

    bool is_constant() const noexcept { return kind() == ExprKind::Constant; }
    /// True when the tree contains no occurrence of coordinate c.
    bool independent_of(Coord c) const;
    /// Number of distinct nodes reachable from this one.
    std::size_t node_count() const;

    /// Point evaluation through the jet machinery at order 0.
    double operator()(double x, double y) const;

    /// Identity of the underlying node, for memoization.
    const void* id() const noexcept { return node_.get(); }

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    friend Expr pow(const Expr& base, int exponent);
    friend Expr exp(const Expr& a);
    friend Expr log(const Expr& a);
    friend Expr sin(const Expr& a);
    friend Expr cos(const Expr& a);

    /// n-ary sum; the empty sum is the constant zero.
    static Expr sum(std::vector<Expr> terms);
    static Expr product(std::vector<Expr> factors);

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node);
    static Expr make(ExprKind kind, std::vector<Expr> args, double value = 0.0, int exponent = 0);

    std::shared_ptr<const Node> node_;
};

/// Symbolic partial derivative. Only zero constants are folded, so the result
/// grows with the input but stays exact.
Expr differentiate(const Expr& e, Coord wrt);

/// JSON document following the {"op", "args", "value"} schema.
std::string to_json(const Expr& e);
Expr expr_from_json(std::string_view text);

/// Infix mini-language, e.g. "exp(2*y)/4 + x*y^3". Identifiers other than x, y
/// and the builtin function names are looked up in `params`.
Expr parse_infix(std::string_view text, const std::map<std::string, double>& params = {});

/// Accepts either a JSON document (leading '{') or infix text.
Expr parse_expression(std::string_view text, const std::map<std::string, double>& params = {});

/// Human-readable infix rendering (round-trips through parse_infix).
std::string to_infix(const Expr& e);

}  // namespace walker
