// Command-line front end: curvature tables, classification, model matching,
// geodesics, soliton construction and the P_c blowup run.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "walker/classify.hpp"
#include "walker/config.hpp"
#include "walker/errors.hpp"
#include "walker/format.hpp"
#include "walker/frames.hpp"
#include "walker/geodesics.hpp"
#include "walker/io.hpp"
#include "walker/solitons.hpp"

using nlohmann::json;
using namespace walker;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitDomain = 3;

struct Options {
    std::string f_file;
    std::string expr;
    std::vector<std::string> params;
    std::string point = "0,0";
    int order = 1;
    std::optional<double> tol;
    std::optional<std::string> grid;
    std::optional<int> cotton_sign;
    std::string out;
    std::string format = "json";
    std::string config;

    // geodesic
    std::string initial = "0,0,0,1,0,0";
    double tmax = 10.0;
    std::optional<double> nb_oracle;

    // soliton
    std::string build = "R1";
    double kappa = 1.0;
    std::string alpha = "1", alpha2 = "0", beta = "0", gamma = "0";
};

std::vector<double> parse_list(const std::string& text, std::size_t n, const char* what)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw walker::ParseError(std::string("bad number in ") + what + ": '" + item + "'");
        }
    }
    if (out.size() != n) throw walker::ParseError(std::string(what) + " wants " + std::to_string(n) + " values");
    return out;
}

std::map<std::string, double> param_map(const Options& o)
{
    std::map<std::string, double> m;
    for (const auto& p : o.params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos) throw walker::ParseError("--param wants name=value, got '" + p + "'");
        m[p.substr(0, eq)] = parse_list(p.substr(eq + 1), 1, "--param")[0];
    }
    return m;
}

Expr metric_function(const Options& o)
{
    std::string text = o.expr;
    if (!o.f_file.empty()) {
        std::ifstream in(o.f_file);
        if (!in) throw walker::ParseError("cannot open '" + o.f_file + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    if (text.empty()) throw walker::ParseError("no metric function given (use --f FILE or --expr TEXT)");
    return parse_expression(text, param_map(o));
}

Expr x_profile(const std::string& text, const Options& o)
{
    return parse_expression(text, param_map(o));
}

RunConfig run_config(const Options& o)
{
    RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (o.tol) cfg.ode_tol = *o.tol;
    if (o.grid) cfg.grid = parse_grid(*o.grid);
    if (o.cotton_sign) cfg.cotton_sign = *o.cotton_sign;
    cfg.validate();
    return cfg;
}

Point2 point_of(const Options& o)
{
    const auto v = parse_list(o.point, 2, "--point");
    return {v[0], v[1]};
}

class Output {
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw walker::ParseError("cannot write '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

void emit_json(const Options& o, const json& j)
{
    Output out(o.out);
    out.stream() << dump_json(j) << '\n';
}

void require_json(const Options& o)
{
    if (o.format != "json") throw walker::ParseError("this command only writes json");
}

int cmd_curvature(const Options& o)
{
    const RunConfig cfg = run_config(o);
    const Expr f = metric_function(o);
    const Point2 p = point_of(o);
    if (o.order < 0) throw walker::ParseError("--order must be >= 0");
    const auto tower = curvature_tower(f, p, o.order, std::max(cfg.jet_order, o.order + 2));
    if (o.format == "csv") {
        Output out(o.out);
        out.stream() << "k,index,value\n";
        for (const auto& t : tower) {
            const auto c = t.components();
            for (std::size_t i = 0; i < c.size(); ++i) {
                if (std::abs(c[i]) <= cfg.zero_tol * std::max(1.0, t.scale())) continue;
                std::string idx;
                for (int a : unflatten(i, t.rank())) idx += std::string(idx.empty() ? "" : " ") + axis_label(a);
                out.stream() << t.k() << ',' << idx << ',' << format_double(c[i]) << '\n';
            }
        }
    } else {
        json tensors = json::array();
        for (const auto& t : tower) tensors.push_back(to_json(t, cfg.zero_tol));
        emit_json(o, {{"f", to_infix(f)}, {"point", {p.x, p.y}}, {"tensors", tensors}});
    }
    std::cerr << "curvature: " << tower.size() << " tensors at (" << p.x << ", " << p.y << ")\n";
    return 0;
}

int cmd_classify(const Options& o)
{
    const RunConfig cfg = run_config(o);
    const Expr f = metric_function(o);
    const Classification c = classify_sampled(f, cfg.grid);
    if (o.format == "csv") {
        Output out(o.out);
        out.stream() << "x,y";
        for (const auto& col : c.evidence) out.stream() << ',' << col.name;
        out.stream() << '\n';
        for (std::size_t i = 0; i < c.points.size(); ++i) {
            out.stream() << format_double(c.points[i].x) << ',' << format_double(c.points[i].y);
            for (const auto& col : c.evidence)
                out.stream() << ',' << (i < col.values.size() ? format_double(col.values[i]) : "");
            out.stream() << '\n';
        }
    } else {
        json j = to_json(c);
        j["f"] = to_infix(f);
        j["grid"] = to_json(cfg.grid);
        emit_json(o, j);
    }
    std::cerr << "classify: " << c.name() << '\n';
    return 0;
}

int cmd_model_match(const Options& o)
{
    require_json(o);
    const RunConfig cfg = run_config(o);
    const Expr f = metric_function(o);
    const Point2 p = point_of(o);
    FrameCoeffs frame;
    std::string frame_name = "frame_1";
    try {
        frame = frame_1(f, p);
    } catch (const DivisionError&) {
        frame = frame_0(f, p);
        frame_name = "frame_0";
    }
    const ModelRecord rec = model_invariants(f, p, frame, 2);
    const ModelTag tag = match_model(rec, cfg.residual_tol);
    json j{{"f", to_infix(f)},
           {"point", {p.x, p.y}},
           {"frame", frame_name},
           {"frame_coefficients",
            {{"a11", frame.a11}, {"a12", frame.a12}, {"a13", frame.a13}, {"a23", frame.a23}, {"a33", frame.a33}}},
           {"record", to_json(rec)},
           {"match", to_json(tag)}};
    emit_json(o, j);
    std::cerr << "model-match: " << tag.name() << '\n';
    return 0;
}

int cmd_geodesic(const Options& o)
{
    const RunConfig cfg = run_config(o);
    const Expr f = metric_function(o);
    const auto v = parse_list(o.initial, 6, "--initial");
    const GeodesicState init{0.0, {v[0], v[1], v[2]}, {v[3], v[4], v[5]}};
    const GeodesicTrajectory tr = integrate_geodesic(f, init, o.tmax, cfg.ode_tol);

    json oracle;
    if (o.nb_oracle) {
        const double b = *o.nb_oracle;
        const NbConstants c = nb_fit_constants(b, v[3], v[1], v[4]);
        double worst = 0.0;
        for (const auto& s : tr.states) {
            const double yc = nb_closed_form(b, v[3], c.C1, c.C2, s.t);
            worst = std::max(worst, std::abs(s.pos[kY] - yc) / std::max(1.0, std::abs(yc)));
        }
        oracle = {{"b", b}, {"alpha", v[3]}, {"C1", c.C1}, {"C2", c.C2}, {"max_rel_error", worst}};
        std::cerr << "geodesic: closed-form max rel error " << worst << '\n';
    }
    if (o.format == "csv") {
        Output out(o.out);
        write_trajectory_csv(out.stream(), tr, f);
    } else {
        json j = to_json(tr, f);
        j["f"] = to_infix(f);
        if (!oracle.is_null()) j["closed_form"] = oracle;
        emit_json(o, j);
    }
    std::cerr << "geodesic: " << to_string(tr.termination) << " at t = " << tr.states.back().t << " after "
              << tr.steps << " steps\n";
    return 0;
}

std::vector<Vec3> box_samples(const Grid& g)
{
    std::vector<Vec3> out;
    for (const auto& p : g.points()) out.push_back({p.x, p.y, 0.3});
    return out;
}

int cmd_soliton(const Options& o)
{
    require_json(o);
    const RunConfig cfg = run_config(o);
    const auto samples = box_samples(cfg.grid);
    const CottonConvention conv{cfg.cotton_sign};
    json j;
    if (o.build == "R1" || o.build == "R2") {
        RicciCase rc;
        rc.kind = o.build == "R1" ? RicciCase::R1 : RicciCase::R2;
        rc.kappa = o.kappa;
        rc.alpha = x_profile(o.alpha, o);
        rc.beta = x_profile(o.beta, o);
        rc.gamma = x_profile(o.gamma, o);
        const BuiltSoliton s = build_ricci_soliton(rc, cfg.grid, cfg.residual_tol);
        const SolitonCertificate cert = verify_soliton(s.f, gradient_field(s.h), 0.0, SolitonKind::Ricci, samples);
        j = {{"case", o.build},
             {"f", to_infix(s.f)},
             {"potential", {{"mu_y", s.h.mu_y}, {"hhat", s.h.hhat.description()}}},
             {"residual", s.residual},
             {"certificate", to_json(cert)}};
        std::cerr << "soliton: " << o.build << ' ' << cert.label() << ", residual " << cert.residual << '\n';
    } else if (o.build == "C1" || o.build == "C2" || o.build == "C3") {
        CottonCase cc;
        cc.kind = o.build == "C1" ? CottonCase::C1 : o.build == "C2" ? CottonCase::C2 : CottonCase::C3;
        cc.kappa = o.kappa;
        cc.alpha1 = x_profile(o.alpha, o);
        cc.alpha2 = x_profile(o.alpha2, o);
        cc.beta = x_profile(o.beta, o);
        cc.gamma = x_profile(o.gamma, o);
        const BuiltCottonSoliton s = build_cotton_soliton(cc, cfg.grid, conv);
        const SolitonCertificate cert =
            verify_soliton(s.f, gradient_field(s.h), 0.0, SolitonKind::Cotton, samples, conv);
        j = {{"case", o.build},
             {"f", to_infix(s.f)},
             {"potential", {{"mu_y", s.h.mu_y}, {"hhat", s.h.hhat.description()}}},
             {"family_residual", s.family_residual},
             {"consistency", to_json(s.report)},
             {"certificate", to_json(cert)}};
        std::cerr << "soliton: " << o.build << ' ' << cert.label() << ", residual " << cert.residual
                  << " (sign " << cfg.cotton_sign << "), flipped sign residual " << cert.residual_flipped << '\n';
    } else {
        throw walker::ParseError("--build wants R1, R2, C1, C2 or C3");
    }
    emit_json(o, j);
    return 0;
}

int cmd_blowup(const Options& o)
{
    const RunConfig cfg = run_config(o);
    const double tol = o.tol ? *o.tol : 1e-12;
    const BlowupReport rep = blowup_experiment_pc(tol);
    if (o.format == "csv") {
        Output out(o.out);
        write_blowup_csv(out.stream(), rep);
    } else {
        emit_json(o, to_json(rep));
    }
    (void)cfg;
    std::cerr << "blowup-pc: " << to_string(rep.termination) << " at t* = " << format_double(rep.t_star)
              << "; curvature rel err " << rep.max_rel_curvature_error << ", frame err " << rep.max_frame_error
              << ", phi err " << rep.max_phi_error << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Curvature, classification, soliton and geodesic tools for 3D Walker metrics"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;

    app.add_option("--f", o.f_file, "File holding the metric function (infix or JSON)");
    app.add_option("--expr", o.expr, "Metric function given inline");
    app.add_option("--param", o.params, "Parameter binding name=value (repeatable)");
    app.add_option("--point", o.point, "Evaluation point X,Y");
    app.add_option("--order", o.order, "Highest covariant derivative order");
    app.add_option("--tol", o.tol, "ODE tolerance");
    app.add_option("--grid", o.grid, "Sample grid NX,NY,X0,X1,Y0,Y1");
    app.add_option("--cotton-sign", o.cotton_sign, "Cotton tensor sign convention (+1 or -1)");
    app.add_option("--out", o.out, "Output file (default stdout)");
    app.add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--config", o.config, "key=value configuration file; flags win");

    int rc = 0;
    auto* curv = app.add_subcommand("curvature", "R and its covariant derivatives at a point");
    curv->callback([&] { rc = cmd_curvature(o); });
    auto* cls = app.add_subcommand("classify", "Curvature homogeneity classification on a grid");
    cls->callback([&] { rc = cmd_classify(o); });
    auto* mm = app.add_subcommand("model-match", "Normalized-frame invariants and the matching model");
    mm->callback([&] { rc = cmd_model_match(o); });
    auto* geo = app.add_subcommand("geodesic", "Integrate a geodesic");
    geo->add_option("--initial", o.initial, "x,y,xt,x',y',xt' at t = 0");
    geo->add_option("--tmax", o.tmax, "Final time");
    geo->add_option("--nb-oracle", o.nb_oracle, "Compare y(t) with the closed form for f = b^-2 e^{by}");
    geo->callback([&] { rc = cmd_geodesic(o); });
    auto* sol = app.add_subcommand("soliton", "Build and certify a gradient Ricci or Cotton soliton");
    sol->add_option("--build", o.build, "R1, R2, C1, C2 or C3");
    sol->add_option("--kappa", o.kappa, "kappa for R1, C1, C2");
    sol->add_option("--alpha", o.alpha, "alpha(x) (alpha1 for Cotton cases)");
    sol->add_option("--alpha2", o.alpha2, "alpha2(x) (C3)");
    sol->add_option("--beta", o.beta, "beta(x)");
    sol->add_option("--gamma", o.gamma, "gamma(x)");
    sol->callback([&] { rc = cmd_soliton(o); });
    auto* bl = app.add_subcommand("blowup-pc", "Incomplete geodesic of f = (1-x)^-2 y^2 with curvature table");
    bl->callback([&] { rc = cmd_blowup(o); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitParse;
    } catch (const walker::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const walker::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return rc;
}
