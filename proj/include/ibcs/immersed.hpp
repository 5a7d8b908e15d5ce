#pragma once

#include "ibcs/body.hpp"
#include "ibcs/ddf.hpp"
#include "ibcs/grid.hpp"

namespace ibcs {

/// Cached per-marker delta samples on every grid space a regularization or
/// interpolation can target. Building one of these once per (kernel, grid,
/// body) makes repeated operator applications cheap; the free functions below
/// accept either the workspace or the raw triple.
class IbWorkspace {
  public:
    IbWorkspace(const Kernel& kernel, const GridSpec& grid, const Body& body);

    const GridSpec& grid() const { return grid_; }
    const Body& body() const { return body_; }
    const Kernel& kernel() const { return kernel_; }
    std::size_t count() const { return body_.count(); }

    const DdfSample& cell(std::size_t l) const { return cell_[l]; }
    const DdfSample& face_x(std::size_t l) const { return face_x_[l]; }
    const DdfSample& face_y(std::size_t l) const { return face_y_[l]; }
    // Face samples interpolated onto the tensor-component locations.
    const DdfSample& tensor_xx(std::size_t l) const { return txx_[l]; }  // d_Fx averaged in x
    const DdfSample& tensor_xy(std::size_t l) const { return txy_[l]; }  // d_Fy averaged in x
    const DdfSample& tensor_yx(std::size_t l) const { return tyx_[l]; }  // d_Fx averaged in y
    const DdfSample& tensor_yy(std::size_t l) const { return tyy_[l]; }  // d_Fy averaged in y

    /// n_l . (x - X_l) at a point of the sample's space.
    double distance_weight(std::size_t l, const DdfSample& s, int wi, int wj) const;

  private:
    Kernel kernel_;
    GridSpec grid_;
    Body body_;
    std::vector<DdfSample> cell_, face_x_, face_y_, txx_, txy_, tyx_, tyy_;
};

// Regularization: Riemann sums  sum_l d * (weight) * data_l * dS_l.
CellField regularize_cell(const IbWorkspace& w, const SurfaceScalar& s);          // R_C
FaceField regularize_face(const IbWorkspace& w, const SurfaceVector& u);          // R_F
FaceField regularize_face_1n(const IbWorkspace& w, const SurfaceVector& u);       // R_F1n
TensorField regularize_tensor(const IbWorkspace& w, const SurfaceTensor& t);      // R_IFT
TensorField regularize_tensor_1n(const IbWorkspace& w, const SurfaceTensor& t);   // R_IFT1n

// Interpolation: dx*dy * sum_{ij} d * (weight) * field.
SurfaceScalar interpolate_cell(const IbWorkspace& w, const CellField& f);         // E_C
SurfaceVector interpolate_face(const IbWorkspace& w, const FaceField& f);         // E_F
SurfaceScalar interpolate_cell_1n(const IbWorkspace& w, const CellField& f);      // E_C1n
SurfaceVector interpolate_face_1n(const IbWorkspace& w, const FaceField& f);      // E_F1n
/// Zero-mean variant: subtracts the marker average of the E_C1n result.
SurfaceScalar interpolate_cell_1n_zeromean(const IbWorkspace& w, const CellField& f);

enum class IbPair { CellCell, FaceFace, Face1nFace1n };

/// Max residual of < R data, field > dx dy  -  < data, E field >_dS over a few
/// random inputs; the regularization/interpolation pairs share one delta
/// sample, so this vanishes to roundoff.
double adjoint_residual(const IbWorkspace& w, IbPair pair, unsigned seed = 7u);

}  // namespace ibcs
