#include "ibcs/indicator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "ibcs/fast_poisson.hpp"
#include "ibcs/ops.hpp"

namespace ibcs {

IndicatorSet build_indicator(const IbWorkspace& ws, OuterSolver solver, double boundary_value) {
    const GridSpec& g = ws.grid();
    const CellField rhs = divergence(regularize_face(ws, ws.body().normal));

    IndicatorSet set;
    if (solver == OuterSolver::Dst) {
        DirichletPoisson poisson(g);
        const double bv = boundary_value;
        const CellField b = dirichlet_rhs_term(g, [bv](double, double) { return bv; });
        set.hp = poisson.solve(add(rhs, b));
        set.solve_residual = max_abs(sub(laplacian_center_dirichlet(set.hp), add(rhs, b)));
    } else {
        if (boundary_value != 0.0 && boundary_value != 1.0)
            throw std::invalid_argument("build_indicator: Lgf path needs a far-field value of 0 or 1");
        LgfPoisson poisson(g);
        CellField compact;
        if (boundary_value == 1.0) {
            // H- is the compactly supported side: L H- = -D R_F n.
            compact = poisson.solve(scale(rhs, -1.0));
            set.hp = sub(CellField(g, 1.0), compact);
        } else {
            compact = poisson.solve(rhs);
            set.hp = compact;
        }
        // Lattice residual, meaningful away from the window edge only.
        const CellField res = sub(laplacian_center(compact),
                                  boundary_value == 1.0 ? scale(rhs, -1.0) : rhs);
        double worst = 0.0;
        for (int j = 1; j < g.ny - 1; ++j)
            for (int i = 1; i < g.nx - 1; ++i) worst = std::max(worst, std::abs(res(i, j)));
        set.solve_residual = worst;
    }

    // Orientation sanity: an indicator must stay near [0,1]; a contradictory
    // boundary value shifts one side to -1 or 2. The corner probe additionally
    // guards the unbounded path, where no value is pinned at the box edge.
    double lo = set.hp(0, 0), hi = lo;
    for (double v : set.hp.a.v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lo < -0.5 || hi > 1.5 || std::abs(set.hp(0, 0) - boundary_value) > 0.1)
        throw std::runtime_error("build_indicator: body orientation inconsistent with the requested boundary value");

    set.hm = sub(CellField(g, 1.0), set.hp);
    set.hp_f = interp_c2f(set.hp);
    set.hm_f = interp_c2f(set.hm);
    set.hp_d = interp_f2d(set.hp_f);
    set.hm_d = interp_f2d(set.hm_f);
    return set;
}

FaceField indicator_gradient_residual(const IndicatorSet& set, const IbWorkspace& ws) {
    return sub(gradient(set.hp), regularize_face(ws, ws.body().normal));
}

namespace {

void write_grid_csv(const Array2& a, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    f.precision(17);
    for (int j = 0; j < a.ny; ++j) {
        for (int i = 0; i < a.nx; ++i) f << a(i, j) << (i + 1 < a.nx ? ',' : '\n');
    }
}

}  // namespace

void save_indicator_csv(const IndicatorSet& set, const std::string& prefix) {
    write_grid_csv(set.hp.a, prefix + "_hp.csv");
    write_grid_csv(set.hm.a, prefix + "_hm.csv");
}

FaceField ddt_indicator(const IbWorkspace& ws) {
    const SurfaceScalar xdot_n = marker_normal_velocity(ws.body());
    SurfaceVector expanded(ws.count());
    expanded.x = xdot_n;
    expanded.y = xdot_n;
    return regularize_face(ws, expanded);
}

}  // namespace ibcs
