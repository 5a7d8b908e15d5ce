#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace ibcs {

/// Uniform staggered Cartesian grid of nx-by-ny cells.
///
/// `origin` is the coordinate of cell center (0,0). A cell, its right x-face,
/// its top y-face and its top-right node share the same index pair (i,j):
///
///   cell   (i,j) : origin + (i*dx,        j*dy)
///   x-face (i,j) : origin + (i*dx + dx/2, j*dy)
///   y-face (i,j) : origin + (i*dx,        j*dy + dy/2)
///   node   (i,j) : origin + (i*dx + dx/2, j*dy + dy/2)
///
/// Only interior faces and nodes are stored; stencils read zero outside the
/// stored index range, and boundary-condition data enter through explicit
/// right-hand-side terms built next to the solvers.
struct GridSpec {
    int nx = 0;
    int ny = 0;
    double dx = 0.0;
    double dy = 0.0;
    std::array<double, 2> origin{0.0, 0.0};

    double cell_x(int i) const { return origin[0] + i * dx; }
    double cell_y(int j) const { return origin[1] + j * dy; }
    double face_x_x(int i) const { return origin[0] + i * dx + 0.5 * dx; }
    double face_x_y(int j) const { return origin[1] + j * dy; }
    double face_y_x(int i) const { return origin[0] + i * dx; }
    double face_y_y(int j) const { return origin[1] + j * dy + 0.5 * dy; }
    double node_x(int i) const { return origin[0] + i * dx + 0.5 * dx; }
    double node_y(int j) const { return origin[1] + j * dy + 0.5 * dy; }

    bool operator==(const GridSpec&) const = default;
};

/// Validated constructor: counts >= 4, spacings > 0.
GridSpec make_grid(int nx, int ny, double dx, double dy, std::array<double, 2> origin);

/// Dense 2D array, row-major with i fastest (index = j*nx + i).
struct Array2 {
    int nx = 0;
    int ny = 0;
    std::vector<double> v;

    Array2() = default;
    Array2(int nx_, int ny_, double init = 0.0)
        : nx(nx_), ny(ny_), v(static_cast<std::size_t>(nx_) * ny_, init) {}

    double& operator()(int i, int j) { return v[static_cast<std::size_t>(j) * nx + i]; }
    double operator()(int i, int j) const { return v[static_cast<std::size_t>(j) * nx + i]; }

    /// Read with zero extension outside the stored range.
    double at0(int i, int j) const {
        if (i < 0 || j < 0 || i >= nx || j >= ny) return 0.0;
        return v[static_cast<std::size_t>(j) * nx + i];
    }

    std::size_t size() const { return v.size(); }
    bool same_shape(const Array2& o) const { return nx == o.nx && ny == o.ny; }
};

/// Scalar field on cell centers (nx-by-ny).
struct CellField {
    GridSpec grid;
    Array2 a;

    CellField() = default;
    explicit CellField(const GridSpec& g, double init = 0.0) : grid(g), a(g.nx, g.ny, init) {}
    CellField(const GridSpec& g, Array2 values) : grid(g), a(std::move(values)) {}
    double& operator()(int i, int j) { return a(i, j); }
    double operator()(int i, int j) const { return a(i, j); }
    std::size_t size() const { return a.size(); }
};

/// Vector field on interior cell faces; x-component (nx-1)-by-ny, y-component nx-by-(ny-1).
struct FaceField {
    GridSpec grid;
    Array2 x, y;

    FaceField() = default;
    explicit FaceField(const GridSpec& g, double init = 0.0)
        : grid(g), x(g.nx - 1, g.ny, init), y(g.nx, g.ny - 1, init) {}
    FaceField(const GridSpec& g, Array2 xc, Array2 yc)
        : grid(g), x(std::move(xc)), y(std::move(yc)) {}
    std::size_t size() const { return x.size() + y.size(); }
};

/// Scalar field on interior nodes ((nx-1)-by-(ny-1)); holds curls in 2D.
struct NodeField {
    GridSpec grid;
    Array2 a;

    NodeField() = default;
    explicit NodeField(const GridSpec& g, double init = 0.0)
        : grid(g), a(g.nx - 1, g.ny - 1, init) {}
    NodeField(const GridSpec& g, Array2 values) : grid(g), a(std::move(values)) {}
    double& operator()(int i, int j) { return a(i, j); }
    double operator()(int i, int j) const { return a(i, j); }
    std::size_t size() const { return a.size(); }
};

/// Second-order tensor field: diagonal components on cell centers,
/// off-diagonal components on nodes.
struct TensorField {
    GridSpec grid;
    Array2 xx, xy, yx, yy;

    TensorField() = default;
    explicit TensorField(const GridSpec& g, double init = 0.0)
        : grid(g),
          xx(g.nx, g.ny, init),
          xy(g.nx - 1, g.ny - 1, init),
          yx(g.nx - 1, g.ny - 1, init),
          yy(g.nx, g.ny, init) {}
    TensorField(const GridSpec& g, Array2 pxx, Array2 pxy, Array2 pyx, Array2 pyy)
        : grid(g), xx(std::move(pxx)), xy(std::move(pxy)), yx(std::move(pyx)), yy(std::move(pyy)) {}
    std::size_t size() const { return xx.size() + xy.size() + yx.size() + yy.size(); }
};

namespace detail {
void check_same_shape(const Array2& a, const Array2& b, const char* what);
}

// Element-wise field arithmetic. mul implements the Hadamard product.
CellField add(const CellField& a, const CellField& b);
CellField sub(const CellField& a, const CellField& b);
CellField mul(const CellField& a, const CellField& b);
CellField scale(const CellField& a, double s);
FaceField add(const FaceField& a, const FaceField& b);
FaceField sub(const FaceField& a, const FaceField& b);
FaceField mul(const FaceField& a, const FaceField& b);
FaceField scale(const FaceField& a, double s);
NodeField add(const NodeField& a, const NodeField& b);
NodeField sub(const NodeField& a, const NodeField& b);
NodeField mul(const NodeField& a, const NodeField& b);
NodeField scale(const NodeField& a, double s);
TensorField add(const TensorField& a, const TensorField& b);
TensorField sub(const TensorField& a, const TensorField& b);
TensorField mul(const TensorField& a, const TensorField& b);
TensorField scale(const TensorField& a, double s);

/// (T^t)_{mn} = T_{nm}; swaps the off-diagonal components.
TensorField transpose(const TensorField& t);

double max_abs(const CellField& f);
double max_abs(const FaceField& f);
double max_abs(const NodeField& f);
double max_abs(const TensorField& f);

}  // namespace ibcs
