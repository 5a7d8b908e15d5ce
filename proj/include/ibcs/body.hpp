#pragma once

#include <array>
#include <string>
#include <vector>

namespace ibcs {

using SurfaceScalar = std::vector<double>;

/// Vector-valued data on IB points, stored as component arrays.
struct SurfaceVector {
    std::vector<double> x, y;

    SurfaceVector() = default;
    explicit SurfaceVector(std::size_t n, double init = 0.0) : x(n, init), y(n, init) {}
    std::size_t size() const { return x.size(); }
};

/// Second-order tensor data on IB points; row-major component naming.
struct SurfaceTensor {
    std::vector<double> xx, xy, yx, yy;

    SurfaceTensor() = default;
    explicit SurfaceTensor(std::size_t n, double init = 0.0)
        : xx(n, init), xy(n, init), yx(n, init), yy(n, init) {}
    std::size_t size() const { return xx.size(); }
};

/// Immersed-boundary geometry: marker positions, unit normals and tangents,
/// per-marker arc length, and prescribed marker velocity. `curve` labels the
/// closed curve each marker belongs to (0-based), which the pressure-jump
/// gauge needs when several closed curves are present.
struct Body {
    SurfaceVector position;
    SurfaceVector normal;   // unit, points into the exterior region
    SurfaceVector tangent;  // unit, orthogonal to the normal
    SurfaceScalar area;     // positive arc length per marker
    SurfaceVector velocity; // marker velocity
    std::vector<int> curve;

    std::size_t count() const { return position.size(); }
    int curve_count() const;
    void validate() const;
};

enum class Orientation { Outward, Inward };

/// Equispaced markers on a circle; marker 0 sits at angle 0. Tangents are the
/// normals rotated by +90 degrees.
Body circle_body(std::array<double, 2> center, double radius, int n_markers,
                 Orientation orientation);

/// Marker count hitting a target spacing ratio ds/dx on a circle.
int markers_for_spacing(double radius, double target_ds_dx, double dx);

/// Concatenate two bodies; curve labels of `b` are shifted past those of `a`.
Body merge(const Body& a, const Body& b);

// Plain-text table, one marker per line:
//   X Y nx ny tx ty dS vx vy
// '#' starts a comment. Curve labels are not stored; imported markers form a
// single curve.
void save_body(const Body& b, const std::string& path);
Body load_body(const std::string& path);

/// O_w(u): per-marker outer product w u^t; row m of the result scales with w_m.
SurfaceTensor surface_outer(const SurfaceVector& w, const SurfaceVector& u);

/// Per-marker normal velocity n . velocity.
SurfaceScalar marker_normal_velocity(const Body& b);

}  // namespace ibcs
