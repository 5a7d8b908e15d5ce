#include "ibcs/poisson1d.hpp"

#include <cmath>
#include <stdexcept>

namespace ibcs::oned {

namespace {

using Vec = std::vector<double>;

double at0(const Vec& v, int i) { return (i < 0 || i >= static_cast<int>(v.size())) ? 0.0 : v[i]; }

// Dirichlet-closed second difference (ghost = -adjacent).
Vec laplacian_dirichlet(const Grid1& g, const Vec& u) {
    const double c = 1.0 / (g.dx() * g.dx());
    Vec r(g.n);
    for (int i = 0; i < g.n; ++i) r[i] = c * (at0(u, i - 1) - 2.0 * u[i] + at0(u, i + 1));
    r[0] -= c * u[0];
    r[g.n - 1] -= c * u[g.n - 1];
    return r;
}

// Thomas solve of the Dirichlet-closed system  lap u = f.
Vec solve_dirichlet(const Grid1& g, Vec f) {
    const double c = 1.0 / (g.dx() * g.dx());
    const int n = g.n;
    Vec diag(n, -2.0 * c), upper(n, c), rhs = std::move(f);
    diag[0] = diag[n - 1] = -3.0 * c;
    for (int i = 1; i < n; ++i) {
        const double w = c / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    Vec u(n);
    u[n - 1] = rhs[n - 1] / diag[n - 1];
    for (int i = n - 2; i >= 0; --i) u[i] = (rhs[i] - upper[i] * u[i + 1]) / diag[i];
    return u;
}

Vec rhs_term(const Grid1& g, double ul, double ur) {
    const double c = 2.0 / (g.dx() * g.dx());
    Vec b(g.n, 0.0);
    b[0] -= c * ul;
    b[g.n - 1] -= c * ur;
    return b;
}

// Delta samples on cells and interior faces; throws on clipped support.
struct Sample1 {
    int i0 = 0;
    Vec w;
};

Sample1 sample(const Kernel& k, double first, double h, int count, double X) {
    const int lo = static_cast<int>(std::ceil((X - k.support_radius * h - first) / h));
    const int hi = static_cast<int>(std::floor((X + k.support_radius * h - first) / h));
    Sample1 s;
    s.i0 = lo;
    for (int i = lo; i <= hi; ++i) {
        const double val = eval_kernel(k, (first + i * h - X) / h) / h;
        if (val != 0.0 && (i < 0 || i >= count))
            throw std::runtime_error("1d sample: kernel support clipped by the domain boundary");
        s.w.push_back(val);
    }
    while (!s.w.empty() && s.i0 < 0) { s.w.erase(s.w.begin()); ++s.i0; }
    while (!s.w.empty() && s.i0 + static_cast<int>(s.w.size()) > count) s.w.pop_back();
    return s;
}

struct Ops1 {
    Grid1 g;
    Kernel kernel;
    double X;
    Sample1 dc, df;  // delta at cells / interior faces

    Ops1(const Problem1& p) : g(p.grid), kernel(p.kernel), X(p.x_gamma) {
        dc = sample(kernel, g.cell(0), g.dx(), g.n, X);
        df = sample(kernel, g.face(0), g.dx(), g.n - 1, X);
    }

    Vec regularize_cell(double s) const {
        Vec f(g.n, 0.0);
        for (std::size_t k = 0; k < dc.w.size(); ++k) f[dc.i0 + k] = dc.w[k] * s;
        return f;
    }

    // single-layer + distance-weighted dipole parts of the composite forcing
    Vec forcing(double jump) const {
        Vec face(g.n - 1, 0.0), face1n(g.n - 1, 0.0);
        for (std::size_t k = 0; k < df.w.size(); ++k) {
            const int i = df.i0 + static_cast<int>(k);
            face[i] = df.w[k] * jump;
            face1n[i] = df.w[k] * (g.face(i) - X) * jump;
        }
        Vec f(g.n, 0.0);
        const double inv_dx = 1.0 / g.dx();
        for (int i = 0; i < g.n; ++i)
            f[i] = 0.5 * (at0(face, i - 1) + at0(face, i)) +
                   (at0(face1n, i) - at0(face1n, i - 1)) * inv_dx;
        return f;
    }

    double interp_cell(const Vec& u) const {
        double acc = 0.0;
        for (std::size_t k = 0; k < dc.w.size(); ++k) acc += dc.w[k] * u[dc.i0 + k];
        return acc * g.dx();
    }

    double interp_cell_1n(const Vec& u) const {
        double acc = 0.0;
        for (std::size_t k = 0; k < dc.w.size(); ++k) {
            const int i = dc.i0 + static_cast<int>(k);
            acc += dc.w[k] * (g.cell(i) - X) * u[i];
        }
        return acc * g.dx();
    }

    // L H+ = D (R_F n) + b_H with H+ = 0 left, 1 right of the interface.
    Vec indicator() const {
        Vec rhs(g.n, 0.0);
        const double inv_dx = 1.0 / g.dx();
        for (std::size_t k = 0; k < df.w.size(); ++k) {
            const int i = df.i0 + static_cast<int>(k);
            rhs[i] += df.w[k] * inv_dx;
            if (i + 1 < g.n) rhs[i + 1] -= df.w[k] * inv_dx;
        }
        Vec b = rhs_term(g, 0.0, 1.0);
        for (int i = 0; i < g.n; ++i) rhs[i] += b[i];
        return solve_dirichlet(g, std::move(rhs));
    }
};

Vec base_rhs(const Problem1& p) {
    Vec f(p.grid.n, p.q);
    const Vec b = rhs_term(p.grid, p.ul, p.ur);
    for (int i = 0; i < p.grid.n; ++i) f[i] += b[i];
    return f;
}

double field_norm(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

Solution1 solve_composite(const Problem1& p) {
    Ops1 ops(p);
    Solution1 sol;
    sol.hplus = ops.indicator();

    const Vec rhs1 = base_rhs(p);
    const Vec ustar = solve_dirichlet(p.grid, rhs1);
    const double diag = ops.interp_cell_1n(sol.hplus);

    // 1x1 Schur complement: s = -diag + E_C L^{-1} forcing(1).
    const double s = -diag + ops.interp_cell(solve_dirichlet(p.grid, ops.forcing(1.0)));
    sol.jump = (p.u_gamma - ops.interp_cell(ustar)) / s;

    const Vec correction = solve_dirichlet(p.grid, ops.forcing(sol.jump));
    sol.u.resize(p.grid.n);
    for (int i = 0; i < p.grid.n; ++i) sol.u[i] = ustar[i] + correction[i];

    sol.constraint_residual =
        std::abs(ops.interp_cell(sol.u) - sol.jump * diag - p.u_gamma);
    Vec row1 = laplacian_dirichlet(p.grid, sol.u);
    const Vec forced = ops.forcing(sol.jump);
    double num = 0.0;
    for (int i = 0; i < p.grid.n; ++i) {
        const double r = row1[i] - forced[i] - rhs1[i];
        num += r * r;
    }
    num += sol.constraint_residual * sol.constraint_residual;
    sol.block_residual = std::sqrt(num) / (field_norm(rhs1) + std::abs(p.u_gamma) + 1e-300);
    return sol;
}

Solution1 solve_prototypical(const Problem1& p) {
    Ops1 ops(p);
    Solution1 sol;
    const Vec rhs1 = base_rhs(p);
    const Vec ustar = solve_dirichlet(p.grid, rhs1);
    const double s = ops.interp_cell(solve_dirichlet(p.grid, ops.regularize_cell(1.0)));
    sol.jump = (p.u_gamma - ops.interp_cell(ustar)) / s;
    const Vec correction = solve_dirichlet(p.grid, ops.regularize_cell(sol.jump));
    sol.u.resize(p.grid.n);
    for (int i = 0; i < p.grid.n; ++i) sol.u[i] = ustar[i] + correction[i];
    sol.constraint_residual = std::abs(ops.interp_cell(sol.u) - p.u_gamma);
    Vec row1 = laplacian_dirichlet(p.grid, sol.u);
    const Vec forced = ops.regularize_cell(sol.jump);
    double num = 0.0;
    for (int i = 0; i < p.grid.n; ++i) {
        const double r = row1[i] - forced[i] - rhs1[i];
        num += r * r;
    }
    num += sol.constraint_residual * sol.constraint_residual;
    sol.block_residual = std::sqrt(num) / (field_norm(rhs1) + std::abs(p.u_gamma) + 1e-300);
    return sol;
}

Solution1 solve_prescribed(const Problem1& p, double jump) {
    Ops1 ops(p);
    Solution1 sol;
    sol.jump = jump;
    Vec rhs1 = base_rhs(p);
    const Vec forced = ops.regularize_cell(jump);
    for (int i = 0; i < p.grid.n; ++i) rhs1[i] += forced[i];
    sol.u = solve_dirichlet(p.grid, rhs1);
    sol.constraint_residual = std::abs(ops.interp_cell(sol.u) - p.u_gamma);
    sol.block_residual = 0.0;
    return sol;
}

double exact_solution(const Problem1& p, double x) {
    if (x <= p.x_gamma) return 0.5 * p.q * (x - p.grid.xl) * (x - p.x_gamma);
    return 0.5 * p.q * (x - p.x_gamma) * (x - p.grid.xr);
}

double exact_jump(const Problem1& p) { return -0.5 * (p.grid.xr - p.grid.xl) * p.q; }

std::vector<double> offsupport_mask(const Problem1& p) {
    std::vector<double> mask(p.grid.n, 1.0);
    const Sample1 s = sample(p.kernel, p.grid.cell(0), p.grid.dx(), p.grid.n, p.x_gamma);
    for (std::size_t k = 0; k < s.w.size(); ++k)
        if (s.w[k] != 0.0) mask[s.i0 + k] = 0.0;
    return mask;
}

Problem1 canonical_problem(int n_cells, const Kernel& kernel) {
    Problem1 p;
    p.grid = {n_cells, 0.0, 2.0};
    p.kernel = kernel;
    return p;
}

}  // namespace ibcs::oned
