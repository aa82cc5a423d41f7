#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cmcforge/catalog.hpp"
#include "cmcforge/genus0.hpp"
#include "cmcforge/periodkill.hpp"
#include "cmcforge/surface.hpp"
#include "cmcforge/verify.hpp"

namespace py = pybind11;
using namespace cmcforge;

namespace {

using Mat = std::array<std::array<cplx, 2>, 2>;

Mat to_rows(const Mat2C& a) { return {{{a.a11, a.a12}, {a.a21, a.a22}}}; }

FamilySpec family_for(const std::string& surface) {
    return surface == "synthetic" ? synthetic_family() : rigid_family(surface);
}

SolveOptions forced(double tol) {
    SolveOptions o;
    o.ode_tol = tol;
    o.force = true;
    return o;
}

} // namespace

PYBIND11_MODULE(_cmcforge, m) {
    m.doc() = "CMC-1 surfaces in hyperbolic space from minimal surface data";

    py::register_exception<Inadmissible>(m, "Inadmissible", PyExc_ValueError);
    py::register_exception<UnknownSurface>(m, "UnknownSurface", PyExc_KeyError);

    m.def("lambda_of_c", &lambda_of_c, py::arg("c"));
    m.def("theta_of_c", &theta_of_c, py::arg("m"), py::arg("c"));
    m.def("alpha_of_c", &alpha_of_c, py::arg("m"), py::arg("n"), py::arg("c"));
    m.def("genus0_ends", &genus0_ends, py::arg("m"), py::arg("n"));
    m.def("total_abs_curvature", &total_abs_curvature, py::arg("ends"), py::arg("c"));
    m.def("c_range", [](int mm, int n) {
        CRange r = c_range(mm, n);
        auto iv = [](const Interval& i) { return std::pair{to_string(i.lo), to_string(i.hi)}; };
        return std::pair{iv(r.neg), iv(r.pos)};
    }, py::arg("m"), py::arg("n"), "Exact (negative, positive) intervals as rational strings.");
    m.def("exists_cmc", [](int mm, int n, double c) {
        ExistsResult r = exists_cmc(mm, n, c);
        py::dict d;
        d["exists"] = r.exists;
        d["minimal"] = r.minimal;
        d["beyond_theorem"] = r.beyond_theorem;
        d["undetermined"] = r.undetermined;
        return d;
    }, py::arg("m"), py::arg("n"), py::arg("c"));
    m.def("_table_json", [] { return table_json(platonic_table()).dump(); });

    m.def("catalog_names", &catalog_names);
    m.def("_catalog_json", [](const std::string& name) { return to_json(catalog(name)).dump(); }, py::arg("name"));

    m.def("monodromy", [](const std::string& surface, double c, const std::string& loop, double tol) {
        return to_rows(monodromy(catalog(surface), c, loop, tol).rho);
    }, py::arg("surface"), py::arg("c"), py::arg("loop") = "end", py::arg("tol") = kDefaultOdeTol,
       "Monodromy of the lift around a catalog loop, F(z0) = I.");

    m.def("_solve_json", [](const std::string& surface, double c, double tol) {
        py::gil_scoped_release nogil;
        FamilySpec fam = family_for(surface);
        return solve_json(solve_lambda(fam, c, forced(tol)), fam, c).dump();
    }, py::arg("surface"), py::arg("c"), py::arg("tol") = 1e-12);

    m.def("mesh", [](const std::string& surface, double c, int nu, int nv, int orbit_depth) {
        py::gil_scoped_release nogil;
        FamilySpec fam = family_for(surface);
        SolveReport rep = solve_lambda(fam, c, forced(1e-12));
        WeierstrassData d = fam.data(rep.lambda);
        MeshOptions mo;
        mo.nu = nu;
        mo.nv = nv;
        mo.gauge = rep.rep.gauge;
        SurfaceMesh mesh = reflect_orbit(build_fundamental_mesh(d, c, mo), d.reflections, orbit_depth);
        std::vector<Vec3> ball;
        ball.reserve(mesh.size());
        for (const auto& b : mesh.ball) ball.push_back(b.y);
        return std::pair{ball, mesh.faces};
    }, py::arg("surface"), py::arg("c"), py::arg("nu") = 16, py::arg("nv") = 16, py::arg("orbit_depth") = 0,
       "Poincare ball vertices and triangles of the normalized surface.");

    m.def("numeric_ta", [](const std::string& surface, double c) {
        py::gil_scoped_release nogil;
        WeierstrassData d = catalog(surface);
        TAOptions o;
        o.gauge = normalize_rep(d, c).gauge;
        TAResult t = numeric_ta(d, c, o);
        return std::pair{t.numeric, t.formula};
    }, py::arg("surface"), py::arg("c"), "(numeric, closed form) total absolute curvature.");

    m.def("_verify_json", [](const std::string& suite) {
        py::gil_scoped_release nogil;
        return results_json(run_suites(suite)).dump();
    }, py::arg("suite") = "all");
}
