#include "walker/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "walker/errors.hpp"

namespace walker {

namespace {

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(std::string_view s)
{
    s = trim(s);
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
        throw ParseError("not a number: '" + std::string(s) + "'");
    return v;
}

int to_int(std::string_view s)
{
    s = trim(s);
    int v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
        throw ParseError("not an integer: '" + std::string(s) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

void RunConfig::validate() const
{
    if (!(zero_tol > 0) || !(ode_tol > 0) || !(residual_tol > 0)) throw DomainError("tolerances must be positive");
    if (jet_order < 4) throw DomainError("jet order must be at least 4");
    if (cotton_sign != 1 && cotton_sign != -1) throw DomainError("cotton sign must be +1 or -1");
    if (grid.nx < 1 || grid.ny < 1) throw DomainError("grid needs at least one point per axis");
}

Grid parse_grid(std::string_view text)
{
    const auto parts = split(text, ',');
    if (parts.size() != 6) throw ParseError("grid wants NX,NY,X0,X1,Y0,Y1");
    Grid g;
    g.nx = to_int(parts[0]);
    g.ny = to_int(parts[1]);
    g.x0 = to_double(parts[2]);
    g.x1 = to_double(parts[3]);
    g.y0 = to_double(parts[4]);
    g.y1 = to_double(parts[5]);
    return g;
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value)
{
    key = trim(key);
    if (key == "zero_tol") cfg.zero_tol = to_double(value);
    else if (key == "ode_tol") cfg.ode_tol = to_double(value);
    else if (key == "residual_tol") cfg.residual_tol = to_double(value);
    else if (key == "jet_order") cfg.jet_order = to_int(value);
    else if (key == "grid") cfg.grid = parse_grid(value);
    else if (key == "cotton_sign") cfg.cotton_sign = to_int(value);
    else throw ParseError("unknown config key '" + std::string(key) + "'");
}

RunConfig parse_config(std::string_view text, RunConfig base)
{
    int line_no = 0;
    for (std::string_view line : split(text, '\n')) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParseError("line " + std::to_string(line_no) + ": expected key = value");
        apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
    }
    base.validate();
    return base;
}

RunConfig load_config(const std::string& path, RunConfig base)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), base);
}

}  // namespace walker
