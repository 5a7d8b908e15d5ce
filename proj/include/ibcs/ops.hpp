#pragma once

#include <functional>

#include "ibcs/grid.hpp"

namespace ibcs {

// Second-order mimetic staggered operators. All stencils are pure interior
// differences/averages that read zero outside the stored index range; any
// boundary-condition content enters through the explicit right-hand-side
// builders further down. The compositions satisfy, exactly in floating point,
//
//   divergence(gradient(s))          == laplacian_center(s)
//   tensor_divergence(face_gradient) == laplacian_face(v)
//   divergence(curl(w))              == 0
//   cocurl(gradient(s))              == 0
//
// at every point whose full stencil footprint stays inside the stored arrays
// (everywhere, for fields vanishing near the outer boundary).

FaceField gradient(const CellField& s);             // G : C -> F
CellField divergence(const FaceField& v);           // D : F -> C
TensorField face_gradient(const FaceField& v);      // G_F : F -> D
FaceField tensor_divergence(const TensorField& t);  // D_D : D -> F
FaceField curl(const NodeField& w);                 // C : N -> F   (dw/dy, -dw/dx)
NodeField cocurl(const FaceField& v);               // C^t : F -> N (dvy/dx - dvx/dy)
CellField laplacian_center(const CellField& s);     // L : C -> C
FaceField laplacian_face(const FaceField& v);       // L_F : F -> F
NodeField laplacian_node(const NodeField& w);       // L_E : N -> N

// Space transforms: two-point averages placed midway, contractions sum the
// interpolated components. interp_f2c is the adjoint of interp_c2f and
// interp_d2f the adjoint of interp_f2d under the plain Euclidean pairings.
FaceField interp_c2f(const CellField& s);    // I_{C->F}
CellField interp_f2c(const FaceField& v);    // I_{F->C}
TensorField interp_f2d(const FaceField& v);  // I_{F->D}
FaceField interp_d2f(const TensorField& t);  // I_{D->F}

/// Dirichlet-closed cell Laplacian: ghost cells mirrored oddly about the wall
/// faces (ghost = -adjacent), which imposes value 0 at the wall. Used with
/// dirichlet_rhs_term for inhomogeneous data.
CellField laplacian_center_dirichlet(const CellField& s);

/// Additive right-hand-side term for the Dirichlet-closed cell Laplacian:
/// the discretized problem  "Laplacian u = f with u = g on the walls"  reads
/// laplacian_center_dirichlet(u) == f + dirichlet_rhs_term(grid, g).
/// `g` is evaluated at wall-face coordinates.
CellField dirichlet_rhs_term(const GridSpec& g,
                             const std::function<double(double, double)>& bc);

/// Dirichlet-closed face Laplacian for a velocity field with prescribed wall
/// values: normal components on the walls are data (zero in the closed
/// operator), tangential ghosts are odd-reflected.
FaceField laplacian_face_dirichlet(const FaceField& v);

/// Additive term carrying prescribed wall velocities into the face Laplacian:
/// physical viscous stencil = laplacian_face_dirichlet(v) + face_wall_term(g, bc).
FaceField face_wall_term(const GridSpec& g,
                         const std::function<double(double, double)>& bcx,
                         const std::function<double(double, double)>& bcy);

}  // namespace ibcs
