#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ibcs/bench.hpp"
#include "ibcs/fast_poisson.hpp"
#include "ibcs/ns_ib.hpp"
#include "ibcs/ops.hpp"
#include "ibcs/poisson1d.hpp"
#include "ibcs/poisson_ib.hpp"

namespace py = pybind11;
using namespace ibcs;

namespace {

// fields cross the boundary as (ny, nx) float64 arrays
py::array_t<double> to_numpy(const Array2& a) {
    py::array_t<double> out({a.ny, a.nx});
    std::copy(a.v.begin(), a.v.end(), out.mutable_data());
    return out;
}

Array2 from_numpy(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw std::invalid_argument("expected a 2d array");
    Array2 a(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)));
    std::copy(arr.data(), arr.data() + a.v.size(), a.v.begin());
    return a;
}

CellField cell_from(const GridSpec& g, const py::array_t<double>& arr) {
    CellField f(g);
    Array2 a = from_numpy(arr);
    if (!a.same_shape(f.a)) throw std::invalid_argument("cell field shape mismatch");
    f.a = std::move(a);
    return f;
}

FaceField face_from(const GridSpec& g, const py::array_t<double>& x, const py::array_t<double>& y) {
    FaceField f(g);
    Array2 ax = from_numpy(x), ay = from_numpy(y);
    if (!ax.same_shape(f.x) || !ay.same_shape(f.y))
        throw std::invalid_argument("face field shape mismatch");
    f.x = std::move(ax);
    f.y = std::move(ay);
    return f;
}

py::dict run_record_dict(const bench::RunRecord& r) {
    py::dict d;
    d["problem"] = r.problem;
    d["formulation"] = r.formulation;
    d["dx"] = r.dx;
    d["ds_dx"] = r.ds_dx;
    d["n_markers"] = r.n_markers;
    d["err_inf_all"] = r.err_inf_all;
    d["err_inf_masked"] = r.err_inf_masked;
    d["err_l2_all"] = r.err_l2_all;
    d["err_l2_masked"] = r.err_l2_masked;
    d["forcing_err_inf"] = r.forcing_err_inf;
    d["cond_S"] = r.cond_S;
    d["steps"] = r.steps;
    d["runtime_s"] = r.runtime_s;
    return d;
}

py::dict report_dict(const bench::StudyReport& rep) {
    py::dict d;
    d["study"] = rep.study;
    py::list rows;
    for (const auto& r : rep.rows) rows.append(run_record_dict(r));
    d["rows"] = rows;
    d["slopes"] = rep.slopes;
    d["metrics"] = rep.metrics;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "staggered-grid immersed boundary solvers (composite and prototypical "
              "formulations)";

    py::class_<GridSpec>(m, "GridSpec")
        .def_readonly("nx", &GridSpec::nx)
        .def_readonly("ny", &GridSpec::ny)
        .def_readonly("dx", &GridSpec::dx)
        .def_readonly("dy", &GridSpec::dy)
        .def_readonly("origin", &GridSpec::origin)
        .def("cell_x", &GridSpec::cell_x)
        .def("cell_y", &GridSpec::cell_y);
    m.def("make_grid", &make_grid, py::arg("nx"), py::arg("ny"), py::arg("dx"), py::arg("dy"),
          py::arg("origin"));

    py::class_<Kernel>(m, "Kernel")
        .def_property_readonly("support_radius",
                               [](const Kernel& k) { return k.support_radius; })
        .def_property_readonly("name", [](const Kernel& k) { return k.name; })
        .def_static("smoothed_three_point", &Kernel::smoothed_three_point,
                    py::return_value_policy::reference)
        .def_static("three_point", &Kernel::three_point, py::return_value_policy::reference);
    m.def("eval_kernel", &eval_kernel);
    m.def("moment_residual", &moment_residual, py::arg("kernel"), py::arg("order"),
          py::arg("shift"));

    py::enum_<Orientation>(m, "Orientation")
        .value("outward", Orientation::Outward)
        .value("inward", Orientation::Inward);
    py::class_<Body>(m, "Body")
        .def_property_readonly("count", &Body::count)
        .def_property_readonly("x", [](const Body& b) { return b.position.x; })
        .def_property_readonly("y", [](const Body& b) { return b.position.y; })
        .def_property_readonly("nx", [](const Body& b) { return b.normal.x; })
        .def_property_readonly("ny", [](const Body& b) { return b.normal.y; })
        .def_property_readonly("area", [](const Body& b) { return b.area; })
        .def_property_readonly("curve", [](const Body& b) { return b.curve; });
    m.def("circle_body", &circle_body, py::arg("center"), py::arg("radius"),
          py::arg("n_markers"), py::arg("orientation") = Orientation::Outward);
    m.def("markers_for_spacing", &markers_for_spacing);
    m.def("merge_bodies", &merge);
    m.def("save_body", &save_body);
    m.def("load_body", &load_body);

    // grid operators on raw arrays
    m.def("gradient", [](const GridSpec& g, const py::array_t<double>& s) {
        const FaceField r = gradient(cell_from(g, s));
        return py::make_tuple(to_numpy(r.x), to_numpy(r.y));
    });
    m.def("divergence", [](const GridSpec& g, const py::array_t<double>& x,
                           const py::array_t<double>& y) {
        return to_numpy(divergence(face_from(g, x, y)).a);
    });
    m.def("laplacian_center", [](const GridSpec& g, const py::array_t<double>& s) {
        return to_numpy(laplacian_center(cell_from(g, s)).a);
    });

    m.def("identity_suite", [](int n, int fields, unsigned seed) {
        const bench::IdentityReport rep = bench::run_identity_suite(n, fields, seed);
        py::dict d;
        for (const auto& [name, r] : rep.residuals) d[py::str(name)] = r;
        return d;
    }, py::arg("n") = 32, py::arg("fields") = 50, py::arg("seed") = 1u);

    // 1d reference problem
    m.def("poisson1d_solve", [](int n, const std::string& formulation) {
        const oned::Problem1 p = oned::canonical_problem(n);
        oned::Solution1 sol;
        if (formulation == "composite")
            sol = oned::solve_composite(p);
        else if (formulation == "prototypical")
            sol = oned::solve_prototypical(p);
        else if (formulation == "prescribed")
            sol = oned::solve_prescribed(p, oned::exact_jump(p));
        else
            throw std::invalid_argument("unknown formulation: " + formulation);
        std::vector<double> exact(n), x(n);
        for (int i = 0; i < n; ++i) {
            x[i] = p.grid.cell(i);
            exact[i] = oned::exact_solution(p, x[i]);
        }
        py::dict d;
        d["x"] = x;
        d["u"] = sol.u;
        d["exact"] = exact;
        d["jump"] = sol.jump;
        d["exact_jump"] = oned::exact_jump(p);
        d["constraint_residual"] = sol.constraint_residual;
        return d;
    }, py::arg("n") = 64, py::arg("formulation") = "composite");

    // 2d circle problem
    py::enum_<Formulation>(m, "Formulation")
        .value("composite", Formulation::Composite)
        .value("prototypical", Formulation::Prototypical)
        .value("prescribed", Formulation::Prescribed);
    m.def("poisson2d_solve", [](int nx, double ds_dx, Formulation f) {
        PoissonProblem p = make_poisson2d_problem(nx, ds_dx);
        PoissonSolution sol;
        if (f == Formulation::Composite)
            sol = solve_poisson_composite(p);
        else if (f == Formulation::Prototypical)
            sol = solve_poisson_prototypical(p);
        else
            sol = solve_poisson_prescribed(p, poisson2d_exact_jump(p.body));
        CellField exact(p.grid);
        for (int j = 0; j < p.grid.ny; ++j)
            for (int i = 0; i < p.grid.nx; ++i)
                exact(i, j) = poisson2d_exact(p.grid.cell_x(i), p.grid.cell_y(j), 1.0);
        py::dict d;
        d["u"] = to_numpy(sol.u.a);
        d["exact"] = to_numpy(exact.a);
        d["jump"] = sol.jump;
        d["exact_jump"] = poisson2d_exact_jump(p.body);
        d["block_residual"] = sol.block_residual;
        d["constraint_residual"] = sol.constraint_residual;
        return d;
    }, py::arg("nx") = 40, py::arg("ds_dx") = 1.0, py::arg("formulation") = Formulation::Composite);

    // couette flow
    m.def("couette_run", [](int nx, double ds_dx, Formulation f, double re, long max_steps,
                            double steady_tol) {
        NsProblem p = make_couette(nx, ds_dx);
        NsConfig cfg;
        cfg.re = re;
        cfg.formulation = f;
        cfg.max_steps = max_steps;
        cfg.steady_tol = steady_tol;
        NsStepper stepper(p, cfg);
        const SteadyResult res = run_to_steady(stepper, stepper.rest_state());
        const FaceField exact = couette_exact_velocity(p.grid, 0.5);
        py::dict d;
        d["vx"] = to_numpy(res.state.v.x);
        d["vy"] = to_numpy(res.state.v.y);
        d["p"] = to_numpy(res.state.p.a);
        d["exact_vx"] = to_numpy(exact.x);
        d["exact_vy"] = to_numpy(exact.y);
        d["jump_vn_x"] = res.state.jump_vn.x;
        d["jump_vn_y"] = res.state.jump_vn.y;
        d["steps"] = res.steps;
        d["max_continuity"] = res.max_continuity;
        d["max_noslip"] = res.max_noslip;
        return d;
    }, py::arg("nx") = 32, py::arg("ds_dx") = 1.0, py::arg("formulation") = Formulation::Composite,
       py::arg("re") = 10.0, py::arg("max_steps") = 400000, py::arg("steady_tol") = 1e-8);

    m.def("couette_exact_vtheta", &couette_exact_vtheta, py::arg("r"), py::arg("kappa") = 0.5);
    m.def("couette_jumps", &couette_jumps, py::arg("kappa") = 0.5);

    // studies
    m.def("run_poisson1d_study", [](const std::vector<int>& n_list) {
        bench::Poisson1dOptions o;
        if (!n_list.empty()) o.n_list = n_list;
        return report_dict(bench::run_poisson1d_study(o));
    }, py::arg("n_list") = std::vector<int>{});
    m.def("run_poisson2d_study", [](const std::vector<int>& nx_list,
                                    const std::vector<double>& ds_list, bool with_cond) {
        bench::Poisson2dOptions o;
        if (!nx_list.empty()) o.nx_list = nx_list;
        if (!ds_list.empty()) o.ds_list = ds_list;
        o.with_cond = with_cond;
        return report_dict(bench::run_poisson2d_study(o));
    }, py::arg("nx_list") = std::vector<int>{}, py::arg("ds_list") = std::vector<double>{},
       py::arg("with_cond") = false);
    m.def("run_couette_study", [](const std::vector<int>& nx_list,
                                  const std::vector<double>& ds_list, double re) {
        bench::CouetteOptions o;
        if (!nx_list.empty()) o.nx_list = nx_list;
        if (!ds_list.empty()) o.ds_list = ds_list;
        o.re = re;
        return report_dict(bench::run_couette_study(o));
    }, py::arg("nx_list") = std::vector<int>{}, py::arg("ds_list") = std::vector<double>{},
       py::arg("re") = 10.0);
}
