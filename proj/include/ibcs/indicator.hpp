#pragma once

#include "ibcs/grid.hpp"
#include "ibcs/immersed.hpp"

namespace ibcs {

enum class OuterSolver { Dst, Lgf };

/// Discrete indicator (Heaviside) fields obtained from a Poisson solve of
/// grad H+ = R_F n. H- is derived as 1 - H+, never solved, and the face and
/// tensor interpolants are defined through the space transforms.
struct IndicatorSet {
    CellField hp, hm;      // H+ and H- on cell centers
    FaceField hp_f, hm_f;  // I_{C->F} of the above
    TensorField hp_d, hm_d;
    double solve_residual = 0.0;  // residual of the indicator Poisson solve
};

/// Build the indicator fields for a closed body.
///
/// boundary_value is H+ on the outer box boundary (1 when the box boundary
/// lies in the exterior region). The Dst path solves the box-Dirichlet
/// problem with that value; the Lgf path solves for the compactly supported
/// side on the unbounded lattice (boundary_value must then be 0 or 1).
/// Throws when the solved field contradicts the requested boundary value,
/// which indicates inconsistent body orientation.
IndicatorSet build_indicator(const IbWorkspace& ws, OuterSolver solver, double boundary_value);

/// Diagnostic: G H+ - R_F n, the curl-null-space component left out of the
/// solution path. Vanishes for straight interfaces aligned with the grid.
FaceField indicator_gradient_residual(const IndicatorSet& set, const IbWorkspace& ws);

/// Diagnostic discretization of dH+/dt: the normal marker speed regularized
/// to the faces (both components).
FaceField ddt_indicator(const IbWorkspace& ws);

/// Dump H+ and H- as CSV grids (<prefix>_hp.csv, <prefix>_hm.csv), one row
/// per j index.
void save_indicator_csv(const IndicatorSet& set, const std::string& prefix);

}  // namespace ibcs
