#include "ibcs/ddf.hpp"

#include <cmath>
#include <stdexcept>

namespace ibcs {

namespace {

// Classic three-point kernel.
double phi3(double r) {
    r = std::abs(r);
    if (r >= 1.5) return 0.0;
    if (r <= 0.5) return (1.0 + std::sqrt(std::max(0.0, 1.0 - 3.0 * r * r))) / 3.0;
    return (5.0 - 3.0 * r - std::sqrt(std::max(0.0, 1.0 - 3.0 * (1.0 - r) * (1.0 - r)))) / 6.0;
}

// antiderivative of sqrt(1 - 3 t^2), odd
double sqrt_part(double t) {
    const double s = std::sqrt(3.0) * t;
    return 0.5 * t * std::sqrt(std::max(0.0, 1.0 - 3.0 * t * t)) +
           std::asin(std::clamp(s, -1.0, 1.0)) / (2.0 * std::sqrt(3.0));
}

// Cumulative integral of phi3 from -inf to t, in closed form.
double phi3_cumulative(double t) {
    if (t <= -1.5) return 0.0;
    if (t >= 1.5) return 1.0;
    if (t < 0.0) return 1.0 - phi3_cumulative(-t);
    if (t <= 0.5) return 0.5 + t / 3.0 + sqrt_part(t) / 3.0;
    // constant fixed by continuity at t = 1/2
    const double c1 = 0.5 + 1.0 / 6.0 - 2.125 / 6.0 + sqrt_part(0.5) / 6.0;
    return c1 + (5.0 * t - 1.5 * t * t) / 6.0 - sqrt_part(t - 1.0) / 6.0;
}

// Moving average of phi3 over one grid cell; support widens to 2 and the
// moment conditions survive the averaging exactly.
double phi3_smoothed(double r) {
    if (std::abs(r) >= 2.0) return 0.0;
    return phi3_cumulative(r + 0.5) - phi3_cumulative(r - 0.5);
}

}  // namespace

const Kernel& Kernel::three_point() {
    static const Kernel k{1.5, Smoothness::C1, "three_point", phi3};
    return k;
}

const Kernel& Kernel::smoothed_three_point() {
    static const Kernel k{2.0, Smoothness::C1, "smoothed_three_point", phi3_smoothed};
    return k;
}

double eval_kernel(const Kernel& k, double r) {
    if (std::abs(r) >= k.support_radius) return 0.0;
    return k.phi(r);
}

double moment_residual(const Kernel& k, int order, double shift) {
    if (order < 0 || order > 2) throw std::invalid_argument("moment_residual: order must be 0..2");
    const int lo = static_cast<int>(std::floor(-shift - k.support_radius));
    const int hi = static_cast<int>(std::ceil(-shift + k.support_radius));
    double sum = 0.0;
    for (int i = lo; i <= hi; ++i) {
        const double z = shift + i;
        sum += std::pow(z, order) * eval_kernel(k, z);
    }
    return std::abs(sum - (order == 0 ? 1.0 : 0.0));
}

double space_x(const GridSpec& g, SpaceTag space, int i) {
    switch (space) {
        case SpaceTag::Cell:
        case SpaceTag::FaceY: return g.cell_x(i);
        default: return g.face_x_x(i);
    }
}

double space_y(const GridSpec& g, SpaceTag space, int j) {
    switch (space) {
        case SpaceTag::Cell:
        case SpaceTag::FaceX: return g.cell_y(j);
        default: return g.face_y_y(j);
    }
}

namespace {

struct Extent {
    int count;
    double first;  // coordinate of index 0
};

Extent extent_x(const GridSpec& g, SpaceTag space) {
    switch (space) {
        case SpaceTag::Cell: return {g.nx, g.cell_x(0)};
        case SpaceTag::FaceX: return {g.nx - 1, g.face_x_x(0)};
        case SpaceTag::FaceY: return {g.nx, g.cell_x(0)};
        default: return {g.nx - 1, g.face_x_x(0)};
    }
}

Extent extent_y(const GridSpec& g, SpaceTag space) {
    switch (space) {
        case SpaceTag::Cell: return {g.ny, g.cell_y(0)};
        case SpaceTag::FaceX: return {g.ny, g.cell_y(0)};
        case SpaceTag::FaceY: return {g.ny - 1, g.face_y_y(0)};
        default: return {g.ny - 1, g.face_y_y(0)};
    }
}

// 1D factor over the open support window; throws when a nonzero weight would
// land outside the stored range. Includes the 1/h scaling.
std::vector<double> factor_1d(const Kernel& k, const Extent& e, double h, double coord, int& i0) {
    const int lo = static_cast<int>(std::ceil((coord - k.support_radius * h - e.first) / h));
    const int hi = static_cast<int>(std::floor((coord + k.support_radius * h - e.first) / h));
    std::vector<double> w;
    w.reserve(hi - lo + 1);
    for (int i = lo; i <= hi; ++i) {
        const double val = eval_kernel(k, (e.first + i * h - coord) / h) / h;
        if (val != 0.0 && (i < 0 || i >= e.count))
            throw std::runtime_error("sample_ddf: kernel support clipped by the grid boundary");
        w.push_back(val);
    }
    // trim out-of-range entries (necessarily zero-weight, or we already threw)
    int a = lo, b = hi;
    while (a <= b && a < 0) { w.erase(w.begin()); ++a; }
    while (b >= a && b >= e.count) { w.pop_back(); --b; }
    if (w.empty()) throw std::runtime_error("sample_ddf: empty kernel window");
    i0 = a;
    return w;
}

}  // namespace

DdfSample sample_ddf(const Kernel& k, const GridSpec& g, SpaceTag space, double X, double Y) {
    DdfSample s;
    s.space = space;
    s.X = X;
    s.Y = Y;
    s.fx = factor_1d(k, extent_x(g, space), g.dx, X, s.i0);
    s.fy = factor_1d(k, extent_y(g, space), g.dy, Y, s.j0);
    return s;
}

}  // namespace ibcs
