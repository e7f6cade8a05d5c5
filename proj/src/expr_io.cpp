#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "walker/errors.hpp"
#include "walker/expr.hpp"
#include "walker/format.hpp"

namespace walker {

using nlohmann::json;

namespace {

const char* op_name(ExprKind k)
{
    switch (k) {
    case ExprKind::Constant: return "constant";
    case ExprKind::CoordX: return "x";
    case ExprKind::CoordY: return "y";
    case ExprKind::Add: return "add";
    case ExprKind::Negate: return "negate";
    case ExprKind::Multiply: return "multiply";
    case ExprKind::IntPower: return "integer-power";
    case ExprKind::Exp: return "exponential";
    case ExprKind::Log: return "natural-log";
    case ExprKind::Sin: return "sine";
    case ExprKind::Cos: return "cosine";
    }
    return "?";
}

json to_json_value(const Expr& e)
{
    json j;
    j["op"] = op_name(e.kind());
    if (e.kind() == ExprKind::Constant) j["value"] = e.value();
    if (e.kind() == ExprKind::IntPower) j["value"] = e.exponent();
    if (!e.args().empty()) {
        json args = json::array();
        for (const Expr& a : e.args()) args.push_back(to_json_value(a));
        j["args"] = std::move(args);
    }
    return j;
}

std::vector<Expr> parse_args(const json& j, std::size_t min_count, std::size_t max_count, const std::string& op);

Expr from_json_value(const json& j)
{
    if (j.is_number()) return Expr(j.get<double>());
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "x") return Expr::x();
        if (s == "y") return Expr::y();
        throw ParseError("unknown coordinate name '" + s + "'");
    }
    if (!j.is_object() || !j.contains("op") || !j["op"].is_string())
        throw ParseError("expression node must be an object with a string \"op\"");
    const auto op = j["op"].get<std::string>();
    if (op == "constant" || op == "const") {
        if (!j.contains("value") || !j["value"].is_number()) throw ParseError("constant node needs a numeric value");
        return Expr(j["value"].get<double>());
    }
    if (op == "x" || op == "coordinate-x") return Expr::x();
    if (op == "y" || op == "coordinate-y") return Expr::y();
    if (op == "add") return Expr::sum(parse_args(j, 1, SIZE_MAX, op));
    if (op == "multiply" || op == "mul") return Expr::product(parse_args(j, 1, SIZE_MAX, op));
    if (op == "negate" || op == "neg") return -parse_args(j, 1, 1, op)[0];
    if (op == "integer-power" || op == "pow") {
        if (!j.contains("value") || !j["value"].is_number()) throw ParseError("power node needs a numeric value");
        const double v = j["value"].get<double>();
        if (v != std::floor(v) || std::abs(v) > 1e6) throw ParseError("power exponent must be an integer");
        return pow(parse_args(j, 1, 1, op)[0], static_cast<int>(v));
    }
    if (op == "exponential" || op == "exp") return exp(parse_args(j, 1, 1, op)[0]);
    if (op == "natural-log" || op == "log" || op == "ln") return log(parse_args(j, 1, 1, op)[0]);
    if (op == "sine" || op == "sin") return sin(parse_args(j, 1, 1, op)[0]);
    if (op == "cosine" || op == "cos") return cos(parse_args(j, 1, 1, op)[0]);
    throw ParseError("unknown op '" + op + "'");
}

std::vector<Expr> parse_args(const json& j, std::size_t min_count, std::size_t max_count, const std::string& op)
{
    if (!j.contains("args") || !j["args"].is_array()) throw ParseError("'" + op + "' node needs an args array");
    const auto& a = j["args"];
    if (a.size() < min_count || a.size() > max_count)
        throw ParseError("'" + op + "' node has the wrong number of args");
    std::vector<Expr> out;
    out.reserve(a.size());
    for (const auto& item : a) out.push_back(from_json_value(item));
    return out;
}

// Recursive-descent parser for the infix language:
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | ident | ident '(' sum ')' | '(' sum ')'
class InfixParser {
public:
    InfixParser(std::string_view text, const std::map<std::string, double>& params) : s_(text), params_(params) {}

    Expr parse()
    {
        Expr e = parse_sum();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const
    {
        throw ParseError(msg + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
    }

    void skip_ws()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    Expr parse_sum()
    {
        Expr e = parse_product();
        for (;;) {
            if (accept('+'))
                e = e + parse_product();
            else if (accept('-'))
                e = e - parse_product();
            else
                return e;
        }
    }

    Expr parse_product()
    {
        Expr e = parse_unary();
        for (;;) {
            if (accept('*'))
                e = e * parse_unary();
            else if (accept('/'))
                e = e / parse_unary();
            else
                return e;
        }
    }

    Expr parse_unary()
    {
        if (accept('-')) return -parse_unary();
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    Expr parse_power()
    {
        Expr base = parse_primary();
        if (!accept('^')) return base;
        Expr ex = parse_unary();
        if (!ex.is_constant() && !(ex.kind() == ExprKind::Negate && ex.args()[0].is_constant()))
            fail("exponent must be a numeric constant");
        const double v = ex.is_constant() ? ex.value() : -ex.args()[0].value();
        if (v == std::floor(v) && std::abs(v) <= 1e6) return pow(base, static_cast<int>(v));
        // Non-integer exponents are sugar for exp(v * log(base)).
        return exp(Expr(v) * log(base));
    }

    Expr parse_primary()
    {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (accept('(')) {
            Expr e = parse_sum();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        fail(std::string("unexpected character '") + c + "'");
    }

    Expr parse_number()
    {
        const std::string rest(s_.substr(pos_));
        char* end = nullptr;
        const double v = std::strtod(rest.c_str(), &end);
        if (end == rest.c_str()) fail("malformed number");
        pos_ += static_cast<std::size_t>(end - rest.c_str());
        return Expr(v);
    }

    Expr parse_identifier()
    {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        const std::string name(s_.substr(start, pos_ - start));
        if (accept('(')) {
            Expr arg = parse_sum();
            expect(')');
            if (name == "exp") return exp(arg);
            if (name == "log" || name == "ln") return log(arg);
            if (name == "sin") return sin(arg);
            if (name == "cos") return cos(arg);
            if (name == "sqrt") return exp(Expr(0.5) * log(arg));
            fail("unknown function '" + name + "'");
        }
        if (name == "x") return Expr::x();
        if (name == "y") return Expr::y();
        if (name == "pi") return Expr(std::numbers::pi);
        if (auto it = params_.find(name); it != params_.end()) return Expr(it->second);
        fail("unbound identifier '" + name + "'");
    }

    std::string_view s_;
    const std::map<std::string, double>& params_;
    std::size_t pos_ = 0;
};

void render(const Expr& e, std::ostringstream& os)
{
    switch (e.kind()) {
    case ExprKind::Constant:
        if (e.value() < 0.0)
            os << '(' << format_double(e.value()) << ')';
        else
            os << format_double(e.value());
        return;
    case ExprKind::CoordX: os << 'x'; return;
    case ExprKind::CoordY: os << 'y'; return;
    case ExprKind::Add:
    case ExprKind::Multiply: {
        const char* sep = e.kind() == ExprKind::Add ? " + " : "*";
        os << '(';
        bool first = true;
        for (const Expr& a : e.args()) {
            if (!first) os << sep;
            first = false;
            render(a, os);
        }
        os << ')';
        return;
    }
    case ExprKind::Negate:
        os << "(-";
        render(e.args()[0], os);
        os << ')';
        return;
    case ExprKind::IntPower:
        os << '(';
        render(e.args()[0], os);
        os << ")^(" << e.exponent() << ')';
        return;
    case ExprKind::Exp: os << "exp("; break;
    case ExprKind::Log: os << "log("; break;
    case ExprKind::Sin: os << "sin("; break;
    case ExprKind::Cos: os << "cos("; break;
    }
    render(e.args()[0], os);
    os << ')';
}

}  // namespace

std::string to_json(const Expr& e) { return to_json_value(e).dump(); }

Expr expr_from_json(std::string_view text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& ex) {
        throw ParseError(std::string("invalid JSON expression: ") + ex.what());
    }
    return from_json_value(j);
}

Expr parse_infix(std::string_view text, const std::map<std::string, double>& params)
{
    return InfixParser(text, params).parse();
}

Expr parse_expression(std::string_view text, const std::map<std::string, double>& params)
{
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') return expr_from_json(text);
    return parse_infix(text, params);
}

std::string to_infix(const Expr& e)
{
    std::ostringstream os;
    render(e, os);
    return os.str();
}

}  // namespace walker
