#pragma once

#include <vector>

#include "ibcs/ddf.hpp"

namespace ibcs::oned {

/// Cell-centered 1D grid on [xl, xr], mirroring the 2D staggering: centers at
/// xl + (i+1/2) dx, interior faces at xl + (i+1) dx.
struct Grid1 {
    int n = 0;
    double xl = 0.0, xr = 0.0;

    double dx() const { return (xr - xl) / n; }
    double cell(int i) const { return xl + (i + 0.5) * dx(); }
    double face(int i) const { return xl + (i + 1.0) * dx(); }
};

/// Dirichlet Poisson problem with a single interface point: u'' = q on
/// [xl, x_gamma] and [x_gamma, xr], u(xl) = ul, u(xr) = ur, u(x_gamma) = u_gamma.
/// The interface normal points in +x, so [xl, x_gamma] is the interior region.
struct Problem1 {
    Grid1 grid;
    double x_gamma = 1.0;
    double q = -4.0;
    double ul = 0.0, ur = 0.0;
    double u_gamma = 0.0;
    Kernel kernel = Kernel::smoothed_three_point();
};

struct Solution1 {
    std::vector<double> u;
    double jump = 0.0;  // [du/dx] at the interface
    double constraint_residual = 0.0;
    double block_residual = 0.0;
    std::vector<double> hplus;  // composite only
};

Solution1 solve_composite(const Problem1& p);
Solution1 solve_prototypical(const Problem1& p);
Solution1 solve_prescribed(const Problem1& p, double jump);

/// Piecewise-parabola exact solution; its gradient jump is -(xr - xl) q / 2.
double exact_solution(const Problem1& p, double x);
double exact_jump(const Problem1& p);

/// 1 = cell outside the delta support around the interface point.
std::vector<double> offsupport_mask(const Problem1& p);

/// Canonical setup: xl = 0, xr = 2, q = -4, homogeneous data, jump 4.
Problem1 canonical_problem(int n_cells, const Kernel& kernel = Kernel::smoothed_three_point());

}  // namespace ibcs::oned
