#include "walker/io.hpp"

#include <cmath>
#include <ostream>

#include "walker/errors.hpp"
#include "walker/format.hpp"

namespace walker {

using nlohmann::json;

namespace {

json point_json(Point2 p) { return json::array({p.x, p.y}); }

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

json state_json(const GeodesicState& s)
{
    return {{"t", s.t}, {"position", vec_json(s.pos)}, {"velocity", vec_json(s.vel)}};
}

}  // namespace

json to_json(const CovTensor& t, double zero_tol)
{
    json slots = json::array({"a", "b", "c", "d"});
    for (int e = 1; e <= t.k(); ++e) slots.push_back("e" + std::to_string(e));
    json comps = json::array();
    const double thresh = zero_tol * std::max(1.0, t.scale());
    const auto c = t.components();
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (std::abs(c[i]) <= thresh) continue;
        json idx = json::array();
        for (int a : unflatten(i, t.rank())) idx.push_back(axis_label(a));
        comps.push_back({{"index", idx}, {"value", c[i]}});
    }
    return {{"k", t.k()}, {"point", point_json(t.point())}, {"slots", slots}, {"components", comps}};
}

json to_json(const ModelRecord& r)
{
    json j{{"k", r.k}, {"R(1,2,2,1)", r.r}};
    if (r.k >= 1) {
        j["dR(;1)"] = r.d1[0];
        j["dR(;2)"] = r.d1[1];
    }
    if (r.k >= 2) {
        j["d2R(;1,1)"] = r.d2[0][0];
        j["d2R(;1,2)"] = r.d2[0][1];
        j["d2R(;2,1)"] = r.d2[1][0];
        j["d2R(;2,2)"] = r.d2[1][1];
    }
    return j;
}

json to_json(const ModelTag& m) { return {{"model", m.name()}, {"kind", to_string(m.kind)}, {"parameter", m.parameter}}; }

json to_json(const Classification& c)
{
    json pts = json::array();
    for (const auto& p : c.points) pts.push_back(point_json(p));
    json ev = json::object();
    for (const auto& col : c.evidence) ev[col.name] = col.values;
    return {{"tag", to_string(c.tag)}, {"name", c.name()}, {"parameters", {{"value", c.parameter}}},
            {"evidence", {{"points", pts}, {"columns", ev}}}};
}

json to_json(const SolitonCertificate& s)
{
    json j{{"kind", s.kind == SolitonKind::Ricci ? "ricci" : "cotton"},
           {"lambda", s.lambda},
           {"label", s.label()},
           {"residual", s.residual},
           {"samples", s.samples}};
    if (s.kind == SolitonKind::Cotton) {
        j["cotton_sign"] = s.cotton_sign;
        j["residual_flipped_sign"] = s.residual_flipped;
    }
    return j;
}

json to_json(const CottonConsistency& c)
{
    return {{"derived_mu_y", c.derived_mu_y},
            {"printed_mu_y", c.printed_mu_y},
            {"printed_field_y", c.printed_field_y},
            {"printed_depends_on_y", c.printed_depends_on_y},
            {"hxx_discrepancy", c.hxx_discrepancy},
            {"derived_residual", c.derived_residual},
            {"printed_residual", c.printed_residual},
            {"derived_formula", c.derived_formula},
            {"printed_formula", c.printed_formula},
            {"notes", c.notes}};
}

json to_json(const HomothetySearchResult& h)
{
    json rows = json::array();
    for (const auto& r : h.rows) rows.push_back({{"a", r.a}, {"abar", r.abar}, {"mu", r.mu}, {"residual", r.residual}});
    return {{"best_killing", h.best_killing},
            {"best_nonkilling", h.best_nonkilling},
            {"best_nonkilling_mu", h.best_nonkilling_mu},
            {"rows", rows}};
}

json to_json(const Grid& g)
{
    return {{"nx", g.nx}, {"ny", g.ny}, {"x0", g.x0}, {"x1", g.x1}, {"y0", g.y0}, {"y1", g.y1}};
}

json to_json(const GeodesicTrajectory& tr, const Expr& f)
{
    json states = json::array();
    for (const auto& s : tr.states) {
        json js = state_json(s);
        js["energy"] = energy(f, s);
        states.push_back(js);
    }
    return {{"termination", to_string(tr.termination)}, {"steps", tr.steps}, {"states", states}};
}

json to_json(const BlowupReport& rep)
{
    json rows = json::array();
    for (const auto& r : rep.rows) {
        json j = state_json(r.state);
        j["Y"] = vec_json(r.Y);
        j["sectional"] = r.sectional;
        j["analytic"] = r.analytic;
        j["<v,v>"] = r.vv;
        j["<v,Y>"] = r.vY;
        j["<Y,Y>"] = r.YY;
        j["phi_closed"] = r.phi_closed;
        rows.push_back(j);
    }
    return {{"termination", to_string(rep.termination)},
            {"t_star", rep.t_star},
            {"a1", rep.a1},
            {"a2", rep.a2},
            {"psi_t0", rep.psi_t0},
            {"max_rel_curvature_error", rep.max_rel_curvature_error},
            {"max_frame_error", rep.max_frame_error},
            {"max_phi_error", rep.max_phi_error},
            {"rows", rows}};
}

void write_trajectory_csv(std::ostream& os, const GeodesicTrajectory& tr, const Expr& f)
{
    os << "t,x,y,xt,x',y',xt',energy\n";
    for (const auto& s : tr.states) {
        os << format_double(s.t);
        for (double v : s.pos) os << ',' << format_double(v);
        for (double v : s.vel) os << ',' << format_double(v);
        os << ',' << format_double(energy(f, s)) << '\n';
    }
}

void write_blowup_csv(std::ostream& os, const BlowupReport& rep)
{
    os << "t,x,y,xt,x',y',xt',energy,curvature,analytic,Yx,Yy,Yxt,<v,Y>,<Y,Y>\n";
    for (const auto& r : rep.rows) {
        os << format_double(r.t);
        for (double v : r.state.pos) os << ',' << format_double(v);
        for (double v : r.state.vel) os << ',' << format_double(v);
        os << ',' << format_double(r.vv) << ',' << format_double(r.sectional) << ',' << format_double(r.analytic);
        for (double v : r.Y) os << ',' << format_double(v);
        os << ',' << format_double(r.vY) << ',' << format_double(r.YY) << '\n';
    }
}

}  // namespace walker
