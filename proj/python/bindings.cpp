#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "walker/classify.hpp"
#include "walker/errors.hpp"
#include "walker/format.hpp"
#include "walker/frames.hpp"
#include "walker/geodesics.hpp"
#include "walker/io.hpp"
#include "walker/solitons.hpp"

namespace py = pybind11;
using namespace walker;

namespace {

std::string dump(const nlohmann::json& j) { return dump_json(j, -1); }

GeodesicState state_from(const std::vector<double>& v)
{
    if (v.size() != 6) throw DomainError("initial state wants x, y, xt, x', y', xt'");
    return {0.0, {v[0], v[1], v[2]}, {v[3], v[4], v[5]}};
}

Grid grid_from(const std::vector<double>& g)
{
    if (g.empty()) return {};
    if (g.size() != 6) throw DomainError("grid wants nx, ny, x0, x1, y0, y1");
    return {static_cast<int>(g[0]), static_cast<int>(g[1]), g[2], g[3], g[4], g[5]};
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Curvature, classification, soliton and geodesic computations for 3D Walker metrics";

    auto base = py::register_exception<Error>(m, "WalkerError", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());

    py::class_<Expr>(m, "Expr")
        .def("__call__", &Expr::operator(), py::arg("x"), py::arg("y"))
        .def("__str__", [](const Expr& e) { return to_infix(e); })
        .def("__repr__", [](const Expr& e) { return "Expr('" + to_infix(e) + "')"; })
        .def("to_json", [](const Expr& e) { return to_json(e); })
        .def("diff", [](const Expr& e, const std::string& var) {
            if (var != "x" && var != "y") throw DomainError("differentiate by 'x' or 'y'");
            return differentiate(e, var == "x" ? Coord::X : Coord::Y);
        });

    m.def("parse", [](const std::string& text, const std::map<std::string, double>& params) {
        return parse_expression(text, params);
    }, py::arg("text"), py::arg("params") = std::map<std::string, double>{});

    m.def("partial", [](const Expr& f, double x, double y, int i, int j) { return partial(f, {x, y}, i, j); },
          py::arg("f"), py::arg("x"), py::arg("y"), py::arg("i"), py::arg("j"));

    m.def("curvature_json", [](const Expr& f, double x, double y, int order, double zero_tol) {
        nlohmann::json tensors = nlohmann::json::array();
        for (const auto& t : curvature_tower(f, {x, y}, order)) tensors.push_back(to_json(t, zero_tol));
        return dump(tensors);
    }, py::arg("f"), py::arg("x"), py::arg("y"), py::arg("order") = 1, py::arg("zero_tol") = 1e-12);

    m.def("classify_json", [](const Expr& f, const std::vector<double>& grid) {
        return dump(to_json(classify_sampled(f, grid_from(grid))));
    }, py::arg("f"), py::arg("grid") = std::vector<double>{});

    m.def("model_match_json", [](const Expr& f, double x, double y) {
        FrameCoeffs fr;
        try {
            fr = frame_1(f, {x, y});
        } catch (const DivisionError&) {
            fr = frame_0(f, {x, y});
        }
        const ModelRecord r = model_invariants(f, {x, y}, fr, 2);
        return dump({{"record", to_json(r)}, {"match", to_json(match_model(r))}});
    }, py::arg("f"), py::arg("x"), py::arg("y"));

    m.def("geodesic_json", [](const Expr& f, const std::vector<double>& initial, double tmax, double tol) {
        return dump(to_json(integrate_geodesic(f, state_from(initial), tmax, tol), f));
    }, py::arg("f"), py::arg("initial"), py::arg("tmax"), py::arg("tol") = 1e-10);

    m.def("nb_closed_form", &nb_closed_form, py::arg("b"), py::arg("alpha"), py::arg("C1"), py::arg("C2"),
          py::arg("t"));

    m.def("blowup_pc_json", [](double tol) { return dump(to_json(blowup_experiment_pc(tol))); },
          py::arg("tol") = 1e-12);

    m.def("ricci_soliton_json", [](const std::string& kind, double kappa, const Expr& alpha, const Expr& beta,
                                   const Expr& gamma, const std::vector<double>& grid) {
        if (kind != "R1" && kind != "R2") throw DomainError("kind is R1 or R2");
        const Grid box = grid_from(grid);
        const BuiltSoliton s =
            build_ricci_soliton({kind == "R1" ? RicciCase::R1 : RicciCase::R2, kappa, alpha, beta, gamma}, box);
        std::vector<Vec3> pts;
        for (const auto& p : box.points()) pts.push_back({p.x, p.y, 0.0});
        const auto cert = verify_soliton(s.f, gradient_field(s.h), 0.0, SolitonKind::Ricci, pts);
        return dump({{"f", to_infix(s.f)}, {"mu_y", s.h.mu_y}, {"certificate", to_json(cert)}});
    }, py::arg("kind"), py::arg("kappa"), py::arg("alpha"), py::arg("beta"), py::arg("gamma"),
       py::arg("grid") = std::vector<double>{});
}
