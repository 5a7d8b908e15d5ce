#include "ibcs/immersed.hpp"

#include <random>
#include <stdexcept>

namespace ibcs {

namespace {

// Two-point average of a separable factor; the window widens by one entry.
std::vector<double> averaged(const std::vector<double>& w) {
    std::vector<double> r(w.size() + 1);
    r[0] = 0.5 * w[0];
    for (std::size_t k = 1; k < w.size(); ++k) r[k] = 0.5 * (w[k - 1] + w[k]);
    r[w.size()] = 0.5 * w.back();
    return r;
}

void check_window(const DdfSample& s, int count_x, int count_y) {
    if (s.i0 < 0 || s.j0 < 0 || s.i0 + s.nx() > count_x || s.j0 + s.ny() > count_y)
        throw std::runtime_error("IbWorkspace: interpolated kernel support clipped by the grid boundary");
}

}  // namespace

IbWorkspace::IbWorkspace(const Kernel& kernel, const GridSpec& grid, const Body& body)
    : kernel_(kernel), grid_(grid), body_(body) {
    body_.validate();
    const std::size_t n = body_.count();
    cell_.reserve(n);
    face_x_.reserve(n);
    face_y_.reserve(n);
    txx_.reserve(n);
    txy_.reserve(n);
    tyx_.reserve(n);
    tyy_.reserve(n);
    for (std::size_t l = 0; l < n; ++l) {
        const double X = body_.position.x[l], Y = body_.position.y[l];
        cell_.push_back(sample_ddf(kernel_, grid_, SpaceTag::Cell, X, Y));
        face_x_.push_back(sample_ddf(kernel_, grid_, SpaceTag::FaceX, X, Y));
        face_y_.push_back(sample_ddf(kernel_, grid_, SpaceTag::FaceY, X, Y));

        // d_Fx averaged in x lands on cell centers.
        DdfSample txx = face_x_.back();
        txx.space = SpaceTag::Cell;
        txx.fx = averaged(txx.fx);
        check_window(txx, grid_.nx, grid_.ny);
        txx_.push_back(std::move(txx));

        // d_Fy averaged in x lands on nodes.
        DdfSample txy = face_y_.back();
        txy.space = SpaceTag::Node;
        txy.fx = averaged(txy.fx);
        txy.i0 -= 1;
        check_window(txy, grid_.nx - 1, grid_.ny - 1);
        txy_.push_back(std::move(txy));

        // d_Fx averaged in y lands on nodes.
        DdfSample tyx = face_x_.back();
        tyx.space = SpaceTag::Node;
        tyx.fy = averaged(tyx.fy);
        tyx.j0 -= 1;
        check_window(tyx, grid_.nx - 1, grid_.ny - 1);
        tyx_.push_back(std::move(tyx));

        // d_Fy averaged in y lands on cell centers.
        DdfSample tyy = face_y_.back();
        tyy.space = SpaceTag::Cell;
        tyy.fy = averaged(tyy.fy);
        check_window(tyy, grid_.nx, grid_.ny);
        tyy_.push_back(std::move(tyy));
    }
}

double IbWorkspace::distance_weight(std::size_t l, const DdfSample& s, int wi, int wj) const {
    const double dx = space_x(grid_, s.space, s.i0 + wi) - body_.position.x[l];
    const double dy = space_y(grid_, s.space, s.j0 + wj) - body_.position.y[l];
    return body_.normal.x[l] * dx + body_.normal.y[l] * dy;
}

namespace {

void check_count(std::size_t got, std::size_t want, const char* what) {
    if (got != want) throw std::invalid_argument(std::string(what) + ": marker count mismatch");
}

// Accumulate coef * d into a component array, optionally distance-weighted.
template <bool Weighted>
void spread(const IbWorkspace& w, std::size_t l, const DdfSample& s, double coef, Array2& out) {
    for (int wj = 0; wj < s.ny(); ++wj)
        for (int wi = 0; wi < s.nx(); ++wi) {
            double v = s.weight(wi, wj) * coef;
            if constexpr (Weighted) v *= w.distance_weight(l, s, wi, wj);
            out(s.i0 + wi, s.j0 + wj) += v;
        }
}

// dx dy * sum d * field over the window, optionally distance-weighted.
template <bool Weighted>
double gather(const IbWorkspace& w, std::size_t l, const DdfSample& s, const Array2& in) {
    double acc = 0.0;
    for (int wj = 0; wj < s.ny(); ++wj)
        for (int wi = 0; wi < s.nx(); ++wi) {
            double v = s.weight(wi, wj) * in(s.i0 + wi, s.j0 + wj);
            if constexpr (Weighted) v *= w.distance_weight(l, s, wi, wj);
            acc += v;
        }
    return acc * w.grid().dx * w.grid().dy;
}

}  // namespace

CellField regularize_cell(const IbWorkspace& w, const SurfaceScalar& s) {
    check_count(s.size(), w.count(), "regularize_cell");
    CellField f(w.grid());
    for (std::size_t l = 0; l < w.count(); ++l)
        spread<false>(w, l, w.cell(l), s[l] * w.body().area[l], f.a);
    return f;
}

FaceField regularize_face(const IbWorkspace& w, const SurfaceVector& u) {
    check_count(u.size(), w.count(), "regularize_face");
    FaceField f(w.grid());
    for (std::size_t l = 0; l < w.count(); ++l) {
        spread<false>(w, l, w.face_x(l), u.x[l] * w.body().area[l], f.x);
        spread<false>(w, l, w.face_y(l), u.y[l] * w.body().area[l], f.y);
    }
    return f;
}

FaceField regularize_face_1n(const IbWorkspace& w, const SurfaceVector& u) {
    check_count(u.size(), w.count(), "regularize_face_1n");
    FaceField f(w.grid());
    for (std::size_t l = 0; l < w.count(); ++l) {
        spread<true>(w, l, w.face_x(l), u.x[l] * w.body().area[l], f.x);
        spread<true>(w, l, w.face_y(l), u.y[l] * w.body().area[l], f.y);
    }
    return f;
}

TensorField regularize_tensor(const IbWorkspace& w, const SurfaceTensor& t) {
    check_count(t.size(), w.count(), "regularize_tensor");
    TensorField f(w.grid());
    for (std::size_t l = 0; l < w.count(); ++l) {
        const double dS = w.body().area[l];
        spread<false>(w, l, w.tensor_xx(l), t.xx[l] * dS, f.xx);
        spread<false>(w, l, w.tensor_xy(l), t.xy[l] * dS, f.xy);
        spread<false>(w, l, w.tensor_yx(l), t.yx[l] * dS, f.yx);
        spread<false>(w, l, w.tensor_yy(l), t.yy[l] * dS, f.yy);
    }
    return f;
}

TensorField regularize_tensor_1n(const IbWorkspace& w, const SurfaceTensor& t) {
    check_count(t.size(), w.count(), "regularize_tensor_1n");
    TensorField f(w.grid());
    for (std::size_t l = 0; l < w.count(); ++l) {
        const double dS = w.body().area[l];
        spread<true>(w, l, w.tensor_xx(l), t.xx[l] * dS, f.xx);
        spread<true>(w, l, w.tensor_xy(l), t.xy[l] * dS, f.xy);
        spread<true>(w, l, w.tensor_yx(l), t.yx[l] * dS, f.yx);
        spread<true>(w, l, w.tensor_yy(l), t.yy[l] * dS, f.yy);
    }
    return f;
}

SurfaceScalar interpolate_cell(const IbWorkspace& w, const CellField& f) {
    SurfaceScalar s(w.count());
    for (std::size_t l = 0; l < w.count(); ++l) s[l] = gather<false>(w, l, w.cell(l), f.a);
    return s;
}

SurfaceVector interpolate_face(const IbWorkspace& w, const FaceField& f) {
    SurfaceVector u(w.count());
    for (std::size_t l = 0; l < w.count(); ++l) {
        u.x[l] = gather<false>(w, l, w.face_x(l), f.x);
        u.y[l] = gather<false>(w, l, w.face_y(l), f.y);
    }
    return u;
}

SurfaceScalar interpolate_cell_1n(const IbWorkspace& w, const CellField& f) {
    SurfaceScalar s(w.count());
    for (std::size_t l = 0; l < w.count(); ++l) s[l] = gather<true>(w, l, w.cell(l), f.a);
    return s;
}

SurfaceVector interpolate_face_1n(const IbWorkspace& w, const FaceField& f) {
    SurfaceVector u(w.count());
    for (std::size_t l = 0; l < w.count(); ++l) {
        u.x[l] = gather<true>(w, l, w.face_x(l), f.x);
        u.y[l] = gather<true>(w, l, w.face_y(l), f.y);
    }
    return u;
}

SurfaceScalar interpolate_cell_1n_zeromean(const IbWorkspace& w, const CellField& f) {
    SurfaceScalar s = interpolate_cell_1n(w, f);
    double mean = 0.0;
    for (double v : s) mean += v;
    mean /= static_cast<double>(s.size());
    for (double& v : s) v -= mean;
    return s;
}

double adjoint_residual(const IbWorkspace& w, IbPair pair, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const GridSpec& g = w.grid();
    const double cellw = g.dx * g.dy;
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        if (pair == IbPair::CellCell) {
            SurfaceScalar data(w.count());
            for (double& v : data) v = dist(rng);
            CellField field(g);
            for (double& v : field.a.v) v = dist(rng);
            const CellField r = regularize_cell(w, data);
            const SurfaceScalar e = interpolate_cell(w, field);
            double lhs = 0.0, rhs = 0.0;
            for (std::size_t k = 0; k < r.a.v.size(); ++k) lhs += r.a.v[k] * field.a.v[k];
            lhs *= cellw;
            for (std::size_t l = 0; l < w.count(); ++l) rhs += data[l] * e[l] * w.body().area[l];
            worst = std::max(worst, std::abs(lhs - rhs));
        } else {
            SurfaceVector data(w.count());
            for (double& v : data.x) v = dist(rng);
            for (double& v : data.y) v = dist(rng);
            FaceField field(g);
            for (double& v : field.x.v) v = dist(rng);
            for (double& v : field.y.v) v = dist(rng);
            const bool weighted = pair == IbPair::Face1nFace1n;
            const FaceField r = weighted ? regularize_face_1n(w, data) : regularize_face(w, data);
            const SurfaceVector e = weighted ? interpolate_face_1n(w, field) : interpolate_face(w, field);
            double lhs = 0.0, rhs = 0.0;
            for (std::size_t k = 0; k < r.x.v.size(); ++k) lhs += r.x.v[k] * field.x.v[k];
            for (std::size_t k = 0; k < r.y.v.size(); ++k) lhs += r.y.v[k] * field.y.v[k];
            lhs *= cellw;
            for (std::size_t l = 0; l < w.count(); ++l)
                rhs += (data.x[l] * e.x[l] + data.y[l] * e.y[l]) * w.body().area[l];
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
}

}  // namespace ibcs
