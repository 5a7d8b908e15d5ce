#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ibcs/grid.hpp"

namespace ibcs {

/// Regularized 1D delta kernel phi: even, compactly supported, normalized so
/// that  sum_i phi(r+i) = 1  for every shift r (zeroth discrete moment). The
/// kernels provided here also satisfy the first moment  sum_i (r+i) phi(r+i) = 0
/// for every r, which the distance-weighted operators rely on.
struct Kernel {
    enum class Smoothness { C0, C1 };

    double support_radius = 0.0;  // in units of the grid spacing
    Smoothness smoothness = Smoothness::C0;
    std::string name;
    std::function<double(double)> phi;

    /// Three-point kernel (support 1.5, C1), the classic staggered-grid choice.
    static const Kernel& three_point();

    /// Cell-averaged (smoothed) three-point kernel: support 2, one smoothness
    /// class higher, moments 0 and 1 preserved exactly. Default everywhere.
    static const Kernel& smoothed_three_point();
};

/// phi evaluated at r; exactly zero outside the support.
double eval_kernel(const Kernel& k, double r);

/// | sum_i (r+i)^m phi(r+i) - [m==0] |  over the support window.
double moment_residual(const Kernel& k, int order, double shift);

enum class SpaceTag { Cell, FaceX, FaceY, Node };

/// Tensor-product sample of the regularized delta centered at one IB point,
/// evaluated on one grid space. Stored as separable 1D factors over the index
/// window [i0, i0+nx()) x [j0, j0+ny()); factor k includes the 1/h scaling, so
/// weight(i,j) = fx[i-i0]*fy[j-j0] equals the two-dimensional regularized
/// delta at that grid point.
struct DdfSample {
    SpaceTag space = SpaceTag::Cell;
    int i0 = 0, j0 = 0;
    std::vector<double> fx, fy;
    double X = 0.0, Y = 0.0;

    int nx() const { return static_cast<int>(fx.size()); }
    int ny() const { return static_cast<int>(fy.size()); }
    double weight(int wi, int wj) const { return fx[wi] * fy[wj]; }
};

/// Sample the kernel's tensor product at the points of one grid space.
/// Throws if any nonzero weight would fall outside the stored index range
/// (clipped support).
DdfSample sample_ddf(const Kernel& k, const GridSpec& g, SpaceTag space, double X, double Y);

/// Coordinates of a grid-space point, shared by the sampling and the
/// distance-weighted operators.
double space_x(const GridSpec& g, SpaceTag space, int i);
double space_y(const GridSpec& g, SpaceTag space, int j);

}  // namespace ibcs
