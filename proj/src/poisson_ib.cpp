#include "ibcs/poisson_ib.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "ibcs/fast_poisson.hpp"
#include "ibcs/ops.hpp"

namespace ibcs {

CellField forcing_apply_composite(const IbWorkspace& ws, const SurfaceScalar& jump,
                                  SpreadRoute route) {
    const Body& b = ws.body();
    if (jump.size() != ws.count())
        throw std::invalid_argument("forcing_apply_composite: marker count mismatch");

    CellField single_layer(ws.grid());
    if (route == SpreadRoute::FaceInterp) {
        SurfaceVector nn_jump(ws.count());
        for (std::size_t l = 0; l < ws.count(); ++l) {
            nn_jump.x[l] = b.normal.x[l] * b.normal.x[l] * jump[l];
            nn_jump.y[l] = b.normal.y[l] * b.normal.y[l] * jump[l];
        }
        single_layer = interp_f2c(regularize_face(ws, nn_jump));
    } else {
        single_layer = regularize_cell(ws, jump);
    }

    SurfaceVector n_jump(ws.count());
    for (std::size_t l = 0; l < ws.count(); ++l) {
        n_jump.x[l] = b.normal.x[l] * jump[l];
        n_jump.y[l] = b.normal.y[l] * jump[l];
    }
    return add(single_layer, divergence(regularize_face_1n(ws, n_jump)));
}

SurfaceScalar constraint_diagonal(const IbWorkspace& ws, const CellField& hplus) {
    return interpolate_cell_1n(ws, hplus);
}

namespace {

struct Assembled {
    std::shared_ptr<DirichletPoisson> dst;
    std::shared_ptr<LgfPoisson> lgf;
    CellField rhs1;  // q + composite boundary term
    IbWorkspace ws;
    std::optional<IndicatorSet> indicator;
    SurfaceScalar diag;  // E_{C,1n} H+ (composite only)

    Assembled(const PoissonProblem& p, Formulation f)
        : ws(p.kernel, p.grid, p.body) {
        rhs1 = p.source.size() ? p.source : CellField(p.grid);
        if (!(rhs1.grid == p.grid)) throw std::invalid_argument("poisson: source grid mismatch");
        if (p.outer == OuterSolver::Dst) {
            dst = std::make_shared<DirichletPoisson>(p.grid);
            if (p.box_bc) rhs1 = add(rhs1, dirichlet_rhs_term(p.grid, p.box_bc));
        } else {
            lgf = std::make_shared<LgfPoisson>(p.grid);
        }
        if (f == Formulation::Composite) {
            indicator = build_indicator(ws, p.outer, p.indicator_boundary_value);
            diag = constraint_diagonal(ws, indicator->hp);
        }
        if (p.interface_value.size() != ws.count())
            throw std::invalid_argument("poisson: interface data size mismatch");
    }

    CellField solve_laplacian(const CellField& f) const {
        return dst ? dst->solve(f) : lgf->solve(f);
    }

    CellField apply_laplacian(const CellField& u) const {
        return dst ? laplacian_center_dirichlet(u) : laplacian_center(u);
    }
};

// Relative residual of the saddle rows; for the unbounded path the field row
// is only meaningful away from the window edge, where the lattice stencil
// reads truncated data.
double saddle_residual(const Assembled& a, const PoissonProblem& p, Formulation f,
                       const CellField& u, const SurfaceScalar& jump,
                       const SurfaceScalar& row2_residual) {
    CellField row1 = sub(a.apply_laplacian(u), a.rhs1);
    if (f == Formulation::Composite)
        row1 = sub(row1, forcing_apply_composite(a.ws, jump, p.route));
    else
        row1 = sub(row1, regularize_cell(a.ws, jump));
    const int margin = a.lgf ? 1 : 0;
    double num = 0.0;
    for (int j = margin; j < p.grid.ny - margin; ++j)
        for (int i = margin; i < p.grid.nx - margin; ++i) num += row1(i, j) * row1(i, j);
    for (double r : row2_residual) num += r * r;
    double den = 0.0;
    for (double v : a.rhs1.a.v) den += v * v;
    for (double v : p.interface_value) den += v * v;
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

PoissonSolution solve_common(const PoissonProblem& p, Formulation f) {
    Assembled a(p, f);
    const std::size_t n = a.ws.count();

    const CellField ustar = a.solve_laplacian(a.rhs1);
    const SurfaceScalar e_ustar = interpolate_cell(a.ws, ustar);
    Eigen::VectorXd rhs(n);
    for (std::size_t l = 0; l < n; ++l) rhs[l] = p.interface_value[l] - e_ustar[l];

    // S y = -diag(E_{C,1n} H+) y + E_C L^{-1} forcing(y)   (composite)
    //     =                        E_C L^{-1} R_C y        (prototypical)
    auto apply_schur = [&](const Eigen::VectorXd& y) -> Eigen::VectorXd {
        SurfaceScalar jump(n);
        for (std::size_t l = 0; l < n; ++l) jump[l] = y[l];
        const CellField forced = f == Formulation::Composite
                                     ? forcing_apply_composite(a.ws, jump, p.route)
                                     : regularize_cell(a.ws, jump);
        const SurfaceScalar e = interpolate_cell(a.ws, a.solve_laplacian(forced));
        Eigen::VectorXd out(n);
        for (std::size_t l = 0; l < n; ++l)
            out[l] = e[l] - (f == Formulation::Composite ? a.diag[l] * y[l] : 0.0);
        return out;
    };
    const LinearOperator S{static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n), apply_schur};

    PoissonSolution sol;
    sol.formulation = f;
    Eigen::VectorXd y;
    if (p.schur == SchurMethod::DenseLU || p.want_condition_number) {
        const Eigen::MatrixXd Sd = assemble_dense(S);
        if (p.want_condition_number) sol.cond_schur = condition_number(Sd);
        if (p.schur == SchurMethod::DenseLU) {
            const Eigen::PartialPivLU<Eigen::MatrixXd> lu(Sd);
            y = lu.solve(rhs);
            // two sweeps of iterative refinement; keeps the saddle residual
            // near roundoff whenever the Schur matrix is numerically regular
            for (int sweep = 0; sweep < 2; ++sweep) y += lu.solve(rhs - Sd * y);
        } else {
            BicgstabResult r = bicgstab(LinearOperator::from_dense(Sd), rhs);
            y = r.x;
            sol.schur_iterations = r.iterations;
        }
    } else {
        BicgstabResult r = bicgstab(S, rhs);
        y = r.x;
        sol.schur_iterations = r.iterations;
    }

    sol.jump.resize(n);
    for (std::size_t l = 0; l < n; ++l) sol.jump[l] = y[l];

    const CellField forced = f == Formulation::Composite
                                 ? forcing_apply_composite(a.ws, sol.jump, p.route)
                                 : regularize_cell(a.ws, sol.jump);
    sol.u = add(ustar, a.solve_laplacian(forced));

    const SurfaceScalar e_u = interpolate_cell(a.ws, sol.u);
    SurfaceScalar row2(n);
    double worst = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        row2[l] = e_u[l] - p.interface_value[l];
        if (f == Formulation::Composite) row2[l] -= sol.jump[l] * a.diag[l];
        worst = std::max(worst, std::abs(row2[l]));
    }
    sol.constraint_residual = worst;
    sol.block_residual = saddle_residual(a, p, f, sol.u, sol.jump, row2);
    return sol;
}

}  // namespace

PoissonSolution solve_poisson_composite(const PoissonProblem& p) {
    return solve_common(p, Formulation::Composite);
}

PoissonSolution solve_poisson_prototypical(const PoissonProblem& p) {
    return solve_common(p, Formulation::Prototypical);
}

PoissonSolution solve_poisson_prescribed(const PoissonProblem& p, const SurfaceScalar& jump) {
    Assembled a(p, Formulation::Prescribed);
    if (jump.size() != a.ws.count())
        throw std::invalid_argument("solve_poisson_prescribed: jump size mismatch");
    PoissonSolution sol;
    sol.formulation = Formulation::Prescribed;
    sol.jump = jump;
    sol.u = a.solve_laplacian(add(a.rhs1, regularize_cell(a.ws, jump)));
    const SurfaceScalar e_u = interpolate_cell(a.ws, sol.u);
    SurfaceScalar row2(a.ws.count());
    double worst = 0.0;
    for (std::size_t l = 0; l < a.ws.count(); ++l) {
        row2[l] = e_u[l] - p.interface_value[l];
        worst = std::max(worst, std::abs(row2[l]));
    }
    // The interface row is not enforced here; keep its misfit as a diagnostic
    // but measure the block residual on the field row alone.
    sol.constraint_residual = worst;
    sol.block_residual = saddle_residual(a, p, Formulation::Prototypical, sol.u, sol.jump,
                                         SurfaceScalar(a.ws.count(), 0.0));
    return sol;
}

BlockSystem poisson_block_system(const PoissonProblem& p, Formulation f,
                                 const IbWorkspace& ws, const IndicatorSet* indicator) {
    const Eigen::Index nc = static_cast<Eigen::Index>(static_cast<std::size_t>(p.grid.nx) * p.grid.ny);
    const Eigen::Index nm = static_cast<Eigen::Index>(ws.count());
    auto grid = p.grid;
    const bool dirichlet = p.outer == OuterSolver::Dst;
    auto solver_dst = dirichlet ? std::make_shared<DirichletPoisson>(grid) : nullptr;
    auto solver_lgf = dirichlet ? nullptr : std::make_shared<LgfPoisson>(grid);

    BlockSystem sys;
    sys.A = {nc, nc, [grid, dirichlet](const Eigen::VectorXd& x) {
                 CellField u(grid);
                 unpack(x, u);
                 return pack(dirichlet ? laplacian_center_dirichlet(u) : laplacian_center(u));
             }};
    sys.solve_A = [grid, solver_dst, solver_lgf](const Eigen::VectorXd& x) {
        CellField u(grid);
        unpack(x, u);
        return pack(solver_dst ? solver_dst->solve(u) : solver_lgf->solve(u));
    };
    auto wsp = std::make_shared<IbWorkspace>(ws);
    const SpreadRoute route = p.route;
    sys.B1t = {nc, nm, [wsp, f, route, grid](const Eigen::VectorXd& y) {
                   SurfaceScalar jump(y.data(), y.data() + y.size());
                   const CellField forced = f == Formulation::Composite
                                                ? forcing_apply_composite(*wsp, jump, route)
                                                : regularize_cell(*wsp, jump);
                   return pack(scale(forced, -1.0));
               }};
    sys.B2 = {nm, nc, [wsp, grid](const Eigen::VectorXd& x) {
                  CellField u(grid);
                  unpack(x, u);
                  return pack(interpolate_cell(*wsp, u));
              }};
    if (f == Formulation::Composite) {
        if (!indicator) throw std::invalid_argument("poisson_block_system: indicator required");
        const SurfaceScalar diag = constraint_diagonal(ws, indicator->hp);
        sys.C = {nm, nm, [diag](const Eigen::VectorXd& y) {
                     Eigen::VectorXd out(y.size());
                     for (Eigen::Index l = 0; l < y.size(); ++l) out[l] = diag[l] * y[l];
                     return out;
                 }};
    }
    return sys;
}

CellField offsupport_cell_mask(const IbWorkspace& ws) {
    CellField cover(ws.grid());
    for (std::size_t l = 0; l < ws.count(); ++l) {
        const DdfSample& s = ws.cell(l);
        for (int wj = 0; wj < s.ny(); ++wj)
            for (int wi = 0; wi < s.nx(); ++wi)
                cover(s.i0 + wi, s.j0 + wj) += std::abs(s.weight(wi, wj));
    }
    CellField mask(ws.grid());
    for (std::size_t k = 0; k < cover.a.v.size(); ++k) mask.a.v[k] = cover.a.v[k] > 0.0 ? 0.0 : 1.0;
    return mask;
}

double poisson2d_exact(double x, double y, double R) {
    const double r2 = x * x + y * y;
    if (r2 <= R * R) return x;
    return R * R * x / r2;
}

SurfaceScalar poisson2d_exact_jump(const Body& circle) {
    SurfaceScalar j(circle.count());
    for (std::size_t l = 0; l < circle.count(); ++l) {
        const double theta = std::atan2(circle.position.y[l], circle.position.x[l]);
        j[l] = -2.0 * std::cos(theta);
    }
    return j;
}

PoissonProblem make_poisson2d_problem(int nx, double ds_over_dx, const Kernel& kernel) {
    PoissonProblem p;
    const double R = 1.0;
    const double dx = 4.0 * R / nx;
    p.grid = make_grid(nx, nx, dx, dx, {-2.0 * R + 0.5 * dx, -2.0 * R + 0.5 * dx});
    const int n = markers_for_spacing(R, ds_over_dx, dx);
    p.body = circle_body({0.0, 0.0}, R, n, Orientation::Outward);
    p.kernel = kernel;
    p.source = CellField(p.grid);
    p.interface_value = p.body.position.x;  // u_Gamma = X
    p.outer = OuterSolver::Lgf;
    // box-Dirichlet alternative carries the exact exterior trace so both
    // outer solvers target the same analytic solution
    p.box_bc = [R](double x, double y) { return poisson2d_exact(x, y, R); };
    p.indicator_boundary_value = 1.0;
    return p;
}

}  // namespace ibcs
