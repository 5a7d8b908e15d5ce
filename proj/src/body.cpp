#include "ibcs/body.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ibcs {

int Body::curve_count() const {
    int m = -1;
    for (int c : curve) m = std::max(m, c);
    return m + 1;
}

void Body::validate() const {
    const std::size_t n = count();
    if (normal.size() != n || tangent.size() != n || area.size() != n ||
        velocity.size() != n || curve.size() != n)
        throw std::invalid_argument("Body: inconsistent array lengths");
    for (std::size_t l = 0; l < n; ++l) {
        const double nn = std::hypot(normal.x[l], normal.y[l]);
        const double tt = std::hypot(tangent.x[l], tangent.y[l]);
        const double dot = normal.x[l] * tangent.x[l] + normal.y[l] * tangent.y[l];
        if (std::abs(nn - 1.0) > 1e-12 || std::abs(tt - 1.0) > 1e-12 || std::abs(dot) > 1e-12)
            throw std::invalid_argument("Body: normals/tangents must be unit and orthogonal");
        if (!(area[l] > 0.0)) throw std::invalid_argument("Body: marker areas must be positive");
    }
}

Body circle_body(std::array<double, 2> center, double radius, int n_markers,
                 Orientation orientation) {
    if (n_markers < 8) throw std::invalid_argument("circle_body: need at least 8 markers");
    if (!(radius > 0.0)) throw std::invalid_argument("circle_body: radius must be positive");
    Body b;
    const std::size_t n = static_cast<std::size_t>(n_markers);
    b.position = SurfaceVector(n);
    b.normal = SurfaceVector(n);
    b.tangent = SurfaceVector(n);
    b.velocity = SurfaceVector(n);
    b.area.assign(n, 2.0 * std::numbers::pi * radius / n_markers);
    b.curve.assign(n, 0);
    const double sgn = orientation == Orientation::Outward ? 1.0 : -1.0;
    for (std::size_t l = 0; l < n; ++l) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(l) / n_markers;
        const double cx = std::cos(th), sx = std::sin(th);
        b.position.x[l] = center[0] + radius * cx;
        b.position.y[l] = center[1] + radius * sx;
        b.normal.x[l] = sgn * cx;
        b.normal.y[l] = sgn * sx;
        b.tangent.x[l] = -b.normal.y[l];
        b.tangent.y[l] = b.normal.x[l];
    }
    return b;
}

int markers_for_spacing(double radius, double target_ds_dx, double dx) {
    if (!(target_ds_dx > 0.0) || !(dx > 0.0) || !(radius > 0.0))
        throw std::invalid_argument("markers_for_spacing: arguments must be positive");
    const int n = static_cast<int>(std::lround(2.0 * std::numbers::pi * radius / (target_ds_dx * dx)));
    return std::max(n, 8);
}

Body merge(const Body& a, const Body& b) {
    Body r = a;
    const int shift = a.curve_count();
    auto append = [](std::vector<double>& dst, const std::vector<double>& src) {
        dst.insert(dst.end(), src.begin(), src.end());
    };
    append(r.position.x, b.position.x);
    append(r.position.y, b.position.y);
    append(r.normal.x, b.normal.x);
    append(r.normal.y, b.normal.y);
    append(r.tangent.x, b.tangent.x);
    append(r.tangent.y, b.tangent.y);
    append(r.velocity.x, b.velocity.x);
    append(r.velocity.y, b.velocity.y);
    append(r.area, b.area);
    for (int c : b.curve) r.curve.push_back(c + shift);
    return r;
}

void save_body(const Body& b, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("save_body: cannot open " + path);
    f << "# X Y nx ny tx ty dS vx vy\n";
    f.precision(17);
    for (std::size_t l = 0; l < b.count(); ++l)
        f << b.position.x[l] << ' ' << b.position.y[l] << ' ' << b.normal.x[l] << ' '
          << b.normal.y[l] << ' ' << b.tangent.x[l] << ' ' << b.tangent.y[l] << ' '
          << b.area[l] << ' ' << b.velocity.x[l] << ' ' << b.velocity.y[l] << '\n';
}

Body load_body(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_body: cannot open " + path);
    Body b;
    std::string line;
    while (std::getline(f, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        double X, Y, nx, ny, tx, ty, dS, vx, vy;
        if (!(ss >> X >> Y >> nx >> ny >> tx >> ty >> dS >> vx >> vy)) continue;
        b.position.x.push_back(X);
        b.position.y.push_back(Y);
        b.normal.x.push_back(nx);
        b.normal.y.push_back(ny);
        b.tangent.x.push_back(tx);
        b.tangent.y.push_back(ty);
        b.area.push_back(dS);
        b.velocity.x.push_back(vx);
        b.velocity.y.push_back(vy);
        b.curve.push_back(0);
    }
    b.validate();
    return b;
}

SurfaceTensor surface_outer(const SurfaceVector& w, const SurfaceVector& u) {
    if (w.size() != u.size()) throw std::invalid_argument("surface_outer: size mismatch");
    SurfaceTensor t(w.size());
    for (std::size_t l = 0; l < w.size(); ++l) {
        t.xx[l] = w.x[l] * u.x[l];
        t.xy[l] = w.x[l] * u.y[l];
        t.yx[l] = w.y[l] * u.x[l];
        t.yy[l] = w.y[l] * u.y[l];
    }
    return t;
}

SurfaceScalar marker_normal_velocity(const Body& b) {
    SurfaceScalar s(b.count());
    for (std::size_t l = 0; l < b.count(); ++l)
        s[l] = b.normal.x[l] * b.velocity.x[l] + b.normal.y[l] * b.velocity.y[l];
    return s;
}

}  // namespace ibcs
