#include "ibcs/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ibcs {

GridSpec make_grid(int nx, int ny, double dx, double dy, std::array<double, 2> origin) {
    if (nx < 4 || ny < 4)
        throw std::invalid_argument("make_grid: need at least 4 cells per direction, got " +
                                    std::to_string(nx) + "x" + std::to_string(ny));
    if (!(dx > 0.0) || !(dy > 0.0))
        throw std::invalid_argument("make_grid: cell dimensions must be positive");
    return GridSpec{nx, ny, dx, dy, origin};
}

namespace detail {
void check_same_shape(const Array2& a, const Array2& b, const char* what) {
    if (!a.same_shape(b))
        throw std::invalid_argument(std::string(what) + ": field shape mismatch");
}
}  // namespace detail

namespace {

template <typename Op>
Array2 zip(const Array2& a, const Array2& b, const char* what, Op op) {
    detail::check_same_shape(a, b, what);
    Array2 r(a.nx, a.ny);
    for (std::size_t k = 0; k < a.v.size(); ++k) r.v[k] = op(a.v[k], b.v[k]);
    return r;
}

Array2 scaled(const Array2& a, double s) {
    Array2 r(a.nx, a.ny);
    for (std::size_t k = 0; k < a.v.size(); ++k) r.v[k] = s * a.v[k];
    return r;
}

double max_abs(const Array2& a) {
    double m = 0.0;
    for (double x : a.v) {
        if (std::isnan(x)) return x;  // propagate, never mask
        m = std::max(m, std::abs(x));
    }
    return m;
}

constexpr auto plus = [](double x, double y) { return x + y; };
constexpr auto minus = [](double x, double y) { return x - y; };
constexpr auto times = [](double x, double y) { return x * y; };

}  // namespace

CellField add(const CellField& a, const CellField& b) {
    return {a.grid, zip(a.a, b.a, "add", plus)};
}
CellField sub(const CellField& a, const CellField& b) {
    return {a.grid, zip(a.a, b.a, "sub", minus)};
}
CellField mul(const CellField& a, const CellField& b) {
    return {a.grid, zip(a.a, b.a, "mul", times)};
}
CellField scale(const CellField& a, double s) { return {a.grid, scaled(a.a, s)}; }

FaceField add(const FaceField& a, const FaceField& b) {
    return {a.grid, zip(a.x, b.x, "add", plus), zip(a.y, b.y, "add", plus)};
}
FaceField sub(const FaceField& a, const FaceField& b) {
    return {a.grid, zip(a.x, b.x, "sub", minus), zip(a.y, b.y, "sub", minus)};
}
FaceField mul(const FaceField& a, const FaceField& b) {
    return {a.grid, zip(a.x, b.x, "mul", times), zip(a.y, b.y, "mul", times)};
}
FaceField scale(const FaceField& a, double s) {
    return {a.grid, scaled(a.x, s), scaled(a.y, s)};
}

NodeField add(const NodeField& a, const NodeField& b) {
    return {a.grid, zip(a.a, b.a, "add", plus)};
}
NodeField sub(const NodeField& a, const NodeField& b) {
    return {a.grid, zip(a.a, b.a, "sub", minus)};
}
NodeField mul(const NodeField& a, const NodeField& b) {
    return {a.grid, zip(a.a, b.a, "mul", times)};
}
NodeField scale(const NodeField& a, double s) { return {a.grid, scaled(a.a, s)}; }

TensorField add(const TensorField& a, const TensorField& b) {
    return {a.grid, zip(a.xx, b.xx, "add", plus), zip(a.xy, b.xy, "add", plus),
            zip(a.yx, b.yx, "add", plus), zip(a.yy, b.yy, "add", plus)};
}
TensorField sub(const TensorField& a, const TensorField& b) {
    return {a.grid, zip(a.xx, b.xx, "sub", minus), zip(a.xy, b.xy, "sub", minus),
            zip(a.yx, b.yx, "sub", minus), zip(a.yy, b.yy, "sub", minus)};
}
TensorField mul(const TensorField& a, const TensorField& b) {
    return {a.grid, zip(a.xx, b.xx, "mul", times), zip(a.xy, b.xy, "mul", times),
            zip(a.yx, b.yx, "mul", times), zip(a.yy, b.yy, "mul", times)};
}
TensorField scale(const TensorField& a, double s) {
    return {a.grid, scaled(a.xx, s), scaled(a.xy, s), scaled(a.yx, s), scaled(a.yy, s)};
}

TensorField transpose(const TensorField& t) { return {t.grid, t.xx, t.yx, t.xy, t.yy}; }

double max_abs(const CellField& f) { return max_abs(f.a); }
double max_abs(const FaceField& f) { return std::max(max_abs(f.x), max_abs(f.y)); }
double max_abs(const NodeField& f) { return max_abs(f.a); }
double max_abs(const TensorField& f) {
    return std::max(std::max(max_abs(f.xx), max_abs(f.xy)),
                    std::max(max_abs(f.yx), max_abs(f.yy)));
}

}  // namespace ibcs
