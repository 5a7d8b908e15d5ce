#pragma once

#include <functional>
#include <optional>

#include "ibcs/grid.hpp"
#include "ibcs/immersed.hpp"
#include "ibcs/indicator.hpp"
#include "ibcs/linop.hpp"

namespace ibcs {

enum class Formulation { Composite, Prototypical, Prescribed };

/// Route for spreading the single-layer part of the composite forcing:
/// FaceInterp is I_{F->C} R_F (default); Cell uses R_C, which empirically
/// limits the global accuracy to first order and is exposed so that claim
/// stays testable.
enum class SpreadRoute { FaceInterp, Cell };

struct PoissonProblem {
    GridSpec grid;
    Body body;
    Kernel kernel = Kernel::smoothed_three_point();
    CellField source;               // q; empty means zero
    SurfaceScalar interface_value;  // u_Gamma per marker
    OuterSolver outer = OuterSolver::Lgf;
    // Composite boundary data for the Dst path, evaluated at wall faces.
    std::function<double(double, double)> box_bc;
    double indicator_boundary_value = 1.0;  // H+ on the box boundary
    SchurMethod schur = SchurMethod::DenseLU;
    SpreadRoute route = SpreadRoute::FaceInterp;
    bool want_condition_number = false;
};

struct PoissonSolution {
    CellField u;
    SurfaceScalar jump;  // solved (or prescribed) [u^n]
    Formulation formulation = Formulation::Composite;
    double block_residual = 0.0;       // relative residual of the saddle system
    double constraint_residual = 0.0;  // max over markers of the interface row
    int schur_iterations = 0;
    std::optional<double> cond_schur;
};

/// Grid field carried by the composite forcing for a given gradient jump:
/// I_{F->C} R_F(n o n o I_{S->V} jump) + D R_{F,1n}(n o I_{S->V} jump)
/// (first term R_C jump under the Cell route).
CellField forcing_apply_composite(const IbWorkspace& ws, const SurfaceScalar& jump,
                                  SpreadRoute route = SpreadRoute::FaceInterp);

/// Diagonal of the corrected interface interpolation, E_{C,1n} H+.
SurfaceScalar constraint_diagonal(const IbWorkspace& ws, const CellField& hplus);

PoissonSolution solve_poisson_composite(const PoissonProblem& p);
PoissonSolution solve_poisson_prototypical(const PoissonProblem& p);
PoissonSolution solve_poisson_prescribed(const PoissonProblem& p, const SurfaceScalar& jump);

/// Saddle system of the requested formulation, for conditioning studies and
/// dense verification. x packs the cell field, y the jump unknowns.
BlockSystem poisson_block_system(const PoissonProblem& p, Formulation f,
                                 const IbWorkspace& ws, const IndicatorSet* indicator);

/// Cells outside the support of every marker's cell-sampled delta (1 = keep).
CellField offsupport_cell_mask(const IbWorkspace& ws);

// Analytic test problems.

/// u = x inside the circle of radius R, R^2 x / r^2 outside; interface data
/// u_Gamma = X, normal-derivative jump -2 cos(theta).
double poisson2d_exact(double x, double y, double R);
SurfaceScalar poisson2d_exact_jump(const Body& circle);

/// Circle of radius R = 1 centered in [-2,2]^2 with outward normals and
/// u_Gamma = X, discretized with nx = 4/dx cells per direction.
PoissonProblem make_poisson2d_problem(int nx, double ds_over_dx,
                                      const Kernel& kernel = Kernel::smoothed_three_point());

}  // namespace ibcs
