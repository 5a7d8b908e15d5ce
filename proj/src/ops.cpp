#include "ibcs/ops.hpp"

namespace ibcs {

FaceField gradient(const CellField& s) {
    const GridSpec& g = s.grid;
    FaceField r(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx - 1; ++i)
            r.x(i, j) = (s(i + 1, j) - s(i, j)) / g.dx;
    for (int j = 0; j < g.ny - 1; ++j)
        for (int i = 0; i < g.nx; ++i)
            r.y(i, j) = (s(i, j + 1) - s(i, j)) / g.dy;
    return r;
}

CellField divergence(const FaceField& v) {
    const GridSpec& g = v.grid;
    CellField r(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            r(i, j) = (v.x.at0(i, j) - v.x.at0(i - 1, j)) / g.dx +
                      (v.y.at0(i, j) - v.y.at0(i, j - 1)) / g.dy;
    return r;
}

TensorField face_gradient(const FaceField& v) {
    const GridSpec& g = v.grid;
    TensorField t(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            t.xx(i, j) = (v.x.at0(i, j) - v.x.at0(i - 1, j)) / g.dx;
            t.yy(i, j) = (v.y.at0(i, j) - v.y.at0(i, j - 1)) / g.dy;
        }
    for (int j = 0; j < g.ny - 1; ++j)
        for (int i = 0; i < g.nx - 1; ++i) {
            t.xy(i, j) = (v.x(i, j + 1) - v.x(i, j)) / g.dy;
            t.yx(i, j) = (v.y(i + 1, j) - v.y(i, j)) / g.dx;
        }
    return t;
}

FaceField tensor_divergence(const TensorField& t) {
    const GridSpec& g = t.grid;
    FaceField r(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx - 1; ++i)
            r.x(i, j) = (t.xx(i + 1, j) - t.xx(i, j)) / g.dx +
                        (t.xy.at0(i, j) - t.xy.at0(i, j - 1)) / g.dy;
    for (int j = 0; j < g.ny - 1; ++j)
        for (int i = 0; i < g.nx; ++i)
            r.y(i, j) = (t.yx.at0(i, j) - t.yx.at0(i - 1, j)) / g.dx +
                        (t.yy(i, j + 1) - t.yy(i, j)) / g.dy;
    return r;
}

FaceField curl(const NodeField& w) {
    const GridSpec& g = w.grid;
    FaceField r(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx - 1; ++i)
            r.x(i, j) = (w.a.at0(i, j) - w.a.at0(i, j - 1)) / g.dy;
    for (int j = 0; j < g.ny - 1; ++j)
        for (int i = 0; i < g.nx; ++i)
            r.y(i, j) = -(w.a.at0(i, j) - w.a.at0(i - 1, j)) / g.dx;
    return r;
}

NodeField cocurl(const FaceField& v) {
    const GridSpec& g = v.grid;
    NodeField r(g);
    for (int j = 0; j < g.ny - 1; ++j)
        for (int i = 0; i < g.nx - 1; ++i)
            r(i, j) = (v.y(i + 1, j) - v.y(i, j)) / g.dx - (v.x(i, j + 1) - v.x(i, j)) / g.dy;
    return r;
}

namespace {

Array2 five_point(const Array2& a, double dx, double dy) {
    Array2 r(a.nx, a.ny);
    const double cx = 1.0 / (dx * dx), cy = 1.0 / (dy * dy);
    for (int j = 0; j < a.ny; ++j)
        for (int i = 0; i < a.nx; ++i)
            r(i, j) = cx * (a.at0(i + 1, j) - 2.0 * a(i, j) + a.at0(i - 1, j)) +
                      cy * (a.at0(i, j + 1) - 2.0 * a(i, j) + a.at0(i, j - 1));
    return r;
}

}  // namespace

CellField laplacian_center(const CellField& s) { return {s.grid, five_point(s.a, s.grid.dx, s.grid.dy)}; }

FaceField laplacian_face(const FaceField& v) {
    return {v.grid, five_point(v.x, v.grid.dx, v.grid.dy), five_point(v.y, v.grid.dx, v.grid.dy)};
}

NodeField laplacian_node(const NodeField& w) { return {w.grid, five_point(w.a, w.grid.dx, w.grid.dy)}; }

FaceField interp_c2f(const CellField& s) {
    const GridSpec& g = s.grid;
    FaceField r(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx - 1; ++i)
            r.x(i, j) = 0.5 * (s(i, j) + s(i + 1, j));
    for (int j = 0; j < g.ny - 1; ++j)
        for (int i = 0; i < g.nx; ++i)
            r.y(i, j) = 0.5 * (s(i, j) + s(i, j + 1));
    return r;
}

CellField interp_f2c(const FaceField& v) {
    const GridSpec& g = v.grid;
    CellField r(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            r(i, j) = 0.5 * (v.x.at0(i - 1, j) + v.x.at0(i, j)) +
                      0.5 * (v.y.at0(i, j - 1) + v.y.at0(i, j));
    return r;
}

TensorField interp_f2d(const FaceField& v) {
    const GridSpec& g = v.grid;
    TensorField t(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            t.xx(i, j) = 0.5 * (v.x.at0(i - 1, j) + v.x.at0(i, j));
            t.yy(i, j) = 0.5 * (v.y.at0(i, j - 1) + v.y.at0(i, j));
        }
    for (int j = 0; j < g.ny - 1; ++j)
        for (int i = 0; i < g.nx - 1; ++i) {
            t.xy(i, j) = 0.5 * (v.x(i, j) + v.x(i, j + 1));
            t.yx(i, j) = 0.5 * (v.y(i, j) + v.y(i + 1, j));
        }
    return t;
}

FaceField interp_d2f(const TensorField& t) {
    const GridSpec& g = t.grid;
    FaceField r(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx - 1; ++i)
            r.x(i, j) = 0.5 * (t.xx(i, j) + t.xx(i + 1, j)) +
                        0.5 * (t.xy.at0(i, j - 1) + t.xy.at0(i, j));
    for (int j = 0; j < g.ny - 1; ++j)
        for (int i = 0; i < g.nx; ++i)
            r.y(i, j) = 0.5 * (t.yx.at0(i - 1, j) + t.yx.at0(i, j)) +
                        0.5 * (t.yy(i, j) + t.yy(i, j + 1));
    return r;
}

CellField laplacian_center_dirichlet(const CellField& s) {
    const GridSpec& g = s.grid;
    CellField r = laplacian_center(s);
    const double cx = 1.0 / (g.dx * g.dx), cy = 1.0 / (g.dy * g.dy);
    // Ghost = -adjacent instead of 0: subtract one extra copy of the wall cell.
    for (int j = 0; j < g.ny; ++j) {
        r(0, j) -= cx * s(0, j);
        r(g.nx - 1, j) -= cx * s(g.nx - 1, j);
    }
    for (int i = 0; i < g.nx; ++i) {
        r(i, 0) -= cy * s(i, 0);
        r(i, g.ny - 1) -= cy * s(i, g.ny - 1);
    }
    return r;
}

CellField dirichlet_rhs_term(const GridSpec& g,
                             const std::function<double(double, double)>& bc) {
    CellField b(g);
    const double cx = 2.0 / (g.dx * g.dx), cy = 2.0 / (g.dy * g.dy);
    const double xl = g.origin[0] - 0.5 * g.dx, xr = g.origin[0] + (g.nx - 0.5) * g.dx;
    const double yb = g.origin[1] - 0.5 * g.dy, yt = g.origin[1] + (g.ny - 0.5) * g.dy;
    for (int j = 0; j < g.ny; ++j) {
        b(0, j) -= cx * bc(xl, g.cell_y(j));
        b(g.nx - 1, j) -= cx * bc(xr, g.cell_y(j));
    }
    for (int i = 0; i < g.nx; ++i) {
        b(i, 0) -= cy * bc(g.cell_x(i), yb);
        b(i, g.ny - 1) -= cy * bc(g.cell_x(i), yt);
    }
    return b;
}

FaceField laplacian_face_dirichlet(const FaceField& v) {
    const GridSpec& g = v.grid;
    FaceField r = laplacian_face(v);
    const double cx = 1.0 / (g.dx * g.dx), cy = 1.0 / (g.dy * g.dy);
    // Tangential ghosts odd-reflected about the walls; normal neighbors on the
    // walls are prescribed data and already read as zero in laplacian_face.
    for (int i = 0; i < g.nx - 1; ++i) {
        r.x(i, 0) -= cy * v.x(i, 0);
        r.x(i, g.ny - 1) -= cy * v.x(i, g.ny - 1);
    }
    for (int j = 0; j < g.ny - 1; ++j) {
        r.y(0, j) -= cx * v.y(0, j);
        r.y(g.nx - 1, j) -= cx * v.y(g.nx - 1, j);
    }
    return r;
}

FaceField face_wall_term(const GridSpec& g,
                         const std::function<double(double, double)>& bcx,
                         const std::function<double(double, double)>& bcy) {
    FaceField w(g);
    const double cx = 1.0 / (g.dx * g.dx), cy = 1.0 / (g.dy * g.dy);
    const double xl = g.origin[0] - 0.5 * g.dx, xr = g.origin[0] + (g.nx - 0.5) * g.dx;
    const double yb = g.origin[1] - 0.5 * g.dy, yt = g.origin[1] + (g.ny - 0.5) * g.dy;
    // x-component: prescribed wall faces along x, tangential ghosts along y.
    for (int j = 0; j < g.ny; ++j) {
        w.x(0, j) += cx * bcx(xl, g.face_x_y(j));
        w.x(g.nx - 2, j) += cx * bcx(xr, g.face_x_y(j));
    }
    for (int i = 0; i < g.nx - 1; ++i) {
        w.x(i, 0) += 2.0 * cy * bcx(g.face_x_x(i), yb);
        w.x(i, g.ny - 1) += 2.0 * cy * bcx(g.face_x_x(i), yt);
    }
    // y-component: prescribed wall faces along y, tangential ghosts along x.
    for (int i = 0; i < g.nx; ++i) {
        w.y(i, 0) += cy * bcy(g.face_y_x(i), yb);
        w.y(i, g.ny - 2) += cy * bcy(g.face_y_x(i), yt);
    }
    for (int j = 0; j < g.ny - 1; ++j) {
        w.y(0, j) += 2.0 * cx * bcy(xl, g.face_y_y(j));
        w.y(g.nx - 1, j) += 2.0 * cx * bcy(xr, g.face_y_y(j));
    }
    return w;
}

}  // namespace ibcs
