#include "ibcs/fast_poisson.hpp"

#include <fftw3.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace ibcs {

namespace {

// fftw plan creation is not thread-safe; execution on distinct buffers is.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

struct R2rPlan {
    fftw_plan fwd = nullptr, bwd = nullptr;
    std::vector<double> buf;
    int nx = 0, ny = 0;

    R2rPlan(int nx_, int ny_, fftw_r2r_kind fkind, fftw_r2r_kind bkind) : nx(nx_), ny(ny_) {
        buf.resize(static_cast<std::size_t>(nx) * ny);
        std::lock_guard<std::mutex> lock(fftw_mutex());
        // row-major with i fastest: j is the slow (first) fftw dimension
        fwd = fftw_plan_r2r_2d(ny, nx, buf.data(), buf.data(), fkind, fkind, FFTW_ESTIMATE);
        bwd = fftw_plan_r2r_2d(ny, nx, buf.data(), buf.data(), bkind, bkind, FFTW_ESTIMATE);
        if (!fwd || !bwd) throw std::runtime_error("fftw plan creation failed");
    }
    ~R2rPlan() {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
    }
};

double sin_half(int mode, int n) {
    const double s = std::sin(0.5 * std::numbers::pi * mode / n);
    return s * s;
}

}  // namespace

// ---------------------------------------------------------------------------
// DirichletPoisson: DST-II forward, DST-III backward.

struct DirichletPoisson::Impl {
    GridSpec g;
    mutable R2rPlan plan;
    std::vector<double> inv_eig;
    mutable std::mutex run;

    explicit Impl(const GridSpec& g_)
        : g(g_), plan(g_.nx, g_.ny, FFTW_RODFT10, FFTW_RODFT01), inv_eig(plan.buf.size()) {
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double lam = -4.0 / (g.dx * g.dx) * sin_half(i + 1, g.nx) -
                                   4.0 / (g.dy * g.dy) * sin_half(j + 1, g.ny);
                inv_eig[static_cast<std::size_t>(j) * g.nx + i] =
                    1.0 / (lam * 4.0 * g.nx * g.ny);  // includes transform normalization
            }
    }
};

DirichletPoisson::DirichletPoisson(const GridSpec& g) : impl_(std::make_unique<Impl>(g)) {}
DirichletPoisson::~DirichletPoisson() = default;
const GridSpec& DirichletPoisson::grid() const { return impl_->g; }

CellField DirichletPoisson::solve(const CellField& rhs) const {
    if (!(rhs.grid == impl_->g)) throw std::invalid_argument("DirichletPoisson: grid mismatch");
    std::lock_guard<std::mutex> lock(impl_->run);
    auto& buf = impl_->plan.buf;
    std::memcpy(buf.data(), rhs.a.v.data(), buf.size() * sizeof(double));
    fftw_execute(impl_->plan.fwd);
    for (std::size_t k = 0; k < buf.size(); ++k) buf[k] *= impl_->inv_eig[k];
    fftw_execute(impl_->plan.bwd);
    CellField u(impl_->g);
    std::memcpy(u.a.v.data(), buf.data(), buf.size() * sizeof(double));
    return u;
}

// ---------------------------------------------------------------------------
// NeumannPoisson: DCT-II forward, DCT-III backward, zero mode dropped.

struct NeumannPoisson::Impl {
    GridSpec g;
    mutable R2rPlan plan;
    std::vector<double> inv_eig;
    mutable std::mutex run;

    explicit Impl(const GridSpec& g_)
        : g(g_), plan(g_.nx, g_.ny, FFTW_REDFT10, FFTW_REDFT01), inv_eig(plan.buf.size()) {
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double lam = -4.0 / (g.dx * g.dx) * sin_half(i, g.nx) -
                                   4.0 / (g.dy * g.dy) * sin_half(j, g.ny);
                inv_eig[static_cast<std::size_t>(j) * g.nx + i] =
                    (i == 0 && j == 0) ? 0.0 : 1.0 / (lam * 4.0 * g.nx * g.ny);
            }
    }
};

NeumannPoisson::NeumannPoisson(const GridSpec& g) : impl_(std::make_unique<Impl>(g)) {}
NeumannPoisson::~NeumannPoisson() = default;
const GridSpec& NeumannPoisson::grid() const { return impl_->g; }

CellField NeumannPoisson::solve(const CellField& rhs) const {
    if (!(rhs.grid == impl_->g)) throw std::invalid_argument("NeumannPoisson: grid mismatch");
    std::lock_guard<std::mutex> lock(impl_->run);
    auto& buf = impl_->plan.buf;
    std::memcpy(buf.data(), rhs.a.v.data(), buf.size() * sizeof(double));
    fftw_execute(impl_->plan.fwd);
    for (std::size_t k = 0; k < buf.size(); ++k) buf[k] *= impl_->inv_eig[k];
    fftw_execute(impl_->plan.bwd);
    CellField u(impl_->g);
    std::memcpy(u.a.v.data(), buf.data(), buf.size() * sizeof(double));
    return u;
}

// ---------------------------------------------------------------------------
// Lattice Green's function table.

namespace {

struct LgfIntegrandParams {
    int a;  // larger index: decay exponent
    int b;  // smaller index: oscillation count
};

// [cos(b t) e^{-a xi(t)} - 1] / (2 sinh xi(t)),  cosh xi = 2 - cos t,
// arranged for full accuracy near t = 0.
double lgf_integrand(double t, void* raw) {
    const auto* p = static_cast<const LgfIntegrandParams*>(raw);
    const double sh = std::sin(0.5 * t);
    const double u = 2.0 * sh * sh;  // 1 - cos t
    const double xi = std::log1p(u + std::sqrt(u * (2.0 + u)));
    const double sb = std::sin(0.5 * p->b * t);
    const double num = -2.0 * sb * sb * std::exp(-p->a * xi) + std::expm1(-p->a * xi);
    return num / (2.0 * std::sinh(xi));
}

class LgfTable {
  public:
    explicit LgfTable(int radius) : radius_(radius), v_((radius + 1) * (radius + 1)) {
        gsl_integration_workspace* ws = gsl_integration_workspace_alloc(512);
        if (!ws) throw std::bad_alloc();
        gsl_error_handler_t* old = gsl_set_error_handler_off();
        for (int m = 0; m <= radius; ++m)
            for (int n = 0; n <= m; ++n) {
                const double val = (m == 0 && n == 0) ? 0.0 : integrate(m, n, ws);
                v_[idx(m, n)] = val;
                v_[idx(n, m)] = val;
            }
        gsl_set_error_handler(old);
        gsl_integration_workspace_free(ws);
    }

    double get(int m, int n) const {
        m = std::abs(m);
        n = std::abs(n);
        if (m > radius_ || n > radius_) throw std::out_of_range("LgfTable: index beyond radius");
        return v_[idx(m, n)];
    }

    int radius() const { return radius_; }

  private:
    std::size_t idx(int m, int n) const {
        return static_cast<std::size_t>(m) * (radius_ + 1) + n;
    }

    static double integrate(int m, int n, gsl_integration_workspace* ws) {
        LgfIntegrandParams p{std::max(m, n), std::min(m, n)};
        gsl_function f{&lgf_integrand, &p};
        double result = 0.0, abserr = 0.0;
        const int status = gsl_integration_qag(&f, 0.0, std::numbers::pi, 1e-13, 0.0, 512,
                                               GSL_INTEG_GAUSS61, ws, &result, &abserr);
        if (status != 0 && abserr > 1e-11)
            throw std::runtime_error("lattice Green's function quadrature failed");
        return -result / std::numbers::pi;
    }

    int radius_;
    std::vector<double> v_;
};

const LgfTable& lgf_table(int radius) {
    static std::mutex mtx;
    static std::map<int, std::unique_ptr<LgfTable>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.lower_bound(radius);
    if (it != cache.end()) return *it->second;
    auto table = std::make_unique<LgfTable>(radius);
    return *cache.emplace(radius, std::move(table)).first->second;
}

}  // namespace

// ---------------------------------------------------------------------------
// LgfPoisson: padded FFT convolution with the tabulated kernel.

struct LgfPoisson::Impl {
    GridSpec g;
    int px, py;  // padded sizes (2nx, 2ny)
    std::vector<double> kernel_hat;
    mutable std::vector<double> work;
    mutable std::vector<double> spec;  // interleaved re/im pairs
    fftw_plan fwd = nullptr, bwd = nullptr;
    mutable std::mutex run;

    explicit Impl(const GridSpec& g_) : g(g_), px(2 * g_.nx), py(2 * g_.ny) {
        if (std::abs(g.dx - g.dy) > 1e-12 * std::max(g.dx, g.dy))
            throw std::invalid_argument("LgfPoisson: requires dx == dy");
        const std::size_t real_n = static_cast<std::size_t>(px) * py;
        const std::size_t spec_n = static_cast<std::size_t>(py) * (px / 2 + 1);
        work.assign(real_n, 0.0);
        spec.assign(2 * spec_n, 0.0);
        {
            std::lock_guard<std::mutex> lock(fftw_mutex());
            auto* cspec = reinterpret_cast<fftw_complex*>(spec.data());
            fwd = fftw_plan_dft_r2c_2d(py, px, work.data(), cspec, FFTW_ESTIMATE);
            bwd = fftw_plan_dft_c2r_2d(py, px, cspec, work.data(), FFTW_ESTIMATE);
            if (!fwd || !bwd) throw std::runtime_error("fftw plan creation failed");
        }

        // kernel in circulant layout: entry (p,q) is G_L at offset
        // (p > nx ? p - px : p, q > ny ? q - py : q); the aliased column/row
        // p = nx, q = ny is never referenced by the linear convolution.
        const LgfTable& tab = lgf_table(std::max(g.nx, g.ny));
        std::vector<double> ker(real_n, 0.0);
        for (int q = 0; q < py; ++q)
            for (int p = 0; p < px; ++p) {
                const int m = p <= g.nx ? p : p - px;
                const int n = q <= g.ny ? q : q - py;
                if (std::abs(m) >= g.nx || std::abs(n) >= g.ny) continue;
                ker[static_cast<std::size_t>(q) * px + p] = tab.get(m, n);
            }
        std::memcpy(work.data(), ker.data(), real_n * sizeof(double));
        fftw_execute(fwd);
        kernel_hat = spec;
    }

    ~Impl() {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
    }
};

LgfPoisson::LgfPoisson(const GridSpec& g) : impl_(std::make_unique<Impl>(g)) {}
LgfPoisson::~LgfPoisson() = default;
const GridSpec& LgfPoisson::grid() const { return impl_->g; }

double LgfPoisson::lgf_value(int m, int n) {
    const int r = std::max(std::abs(m), std::abs(n));
    return lgf_table(std::max(r, 8)).get(m, n);
}

CellField LgfPoisson::solve(const CellField& rhs) const {
    auto& im = *impl_;
    if (!(rhs.grid == im.g)) throw std::invalid_argument("LgfPoisson: grid mismatch");
    std::lock_guard<std::mutex> lock(im.run);
    const std::size_t real_n = static_cast<std::size_t>(im.px) * im.py;
    std::fill(im.work.begin(), im.work.end(), 0.0);
    for (int j = 0; j < im.g.ny; ++j)
        std::memcpy(&im.work[static_cast<std::size_t>(j) * im.px], &rhs.a.v[static_cast<std::size_t>(j) * im.g.nx],
                    im.g.nx * sizeof(double));
    fftw_execute(im.fwd);
    const std::size_t spec_n = im.spec.size() / 2;
    for (std::size_t k = 0; k < spec_n; ++k) {
        const double ar = im.spec[2 * k], ai = im.spec[2 * k + 1];
        const double br = im.kernel_hat[2 * k], bi = im.kernel_hat[2 * k + 1];
        im.spec[2 * k] = ar * br - ai * bi;
        im.spec[2 * k + 1] = ar * bi + ai * br;
    }
    fftw_execute(im.bwd);
    const double scale = im.g.dx * im.g.dy / static_cast<double>(real_n);
    CellField u(im.g);
    for (int j = 0; j < im.g.ny; ++j)
        for (int i = 0; i < im.g.nx; ++i)
            u(i, j) = im.work[static_cast<std::size_t>(j) * im.px + i] * scale;
    return u;
}

}  // namespace ibcs
