#include "ibcs/ns_ib.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ibcs/fast_poisson.hpp"
#include "ibcs/ops.hpp"

namespace ibcs {

FaceField convective(const FaceField& v) {
    const TensorField t = interp_f2d(v);
    return tensor_divergence(mul(transpose(t), t));
}

FaceField momentum_rhs(const FaceField& v, const NsConfig& cfg, double dt, const FaceField* b1) {
    FaceField accel = sub(scale(laplacian_face_dirichlet(v), 1.0 / cfg.re), convective(v));
    if (b1 && b1->size()) accel = add(accel, *b1);
    return add(v, scale(accel, cfg.K * dt));
}

namespace {

SurfaceVector hadamard(const SurfaceScalar& s, const SurfaceVector& u) {
    SurfaceVector r(u.size());
    for (std::size_t l = 0; l < u.size(); ++l) {
        r.x[l] = s[l] * u.x[l];
        r.y[l] = s[l] * u.y[l];
    }
    return r;
}

SurfaceVector component_scale(const SurfaceVector& a, const SurfaceVector& u) {
    SurfaceVector r(u.size());
    for (std::size_t l = 0; l < u.size(); ++l) {
        r.x[l] = a.x[l] * u.x[l];
        r.y[l] = a.y[l] * u.y[l];
    }
    return r;
}

}  // namespace

NsStepper::NsStepper(NsProblem problem, NsConfig config)
    : prob_(std::move(problem)), cfg_(config), ws_(prob_.kernel, prob_.grid, prob_.body) {
    const GridSpec& g = prob_.grid;
    const double h = std::min(g.dx, g.dy);
    dt_ = cfg_.dt > 0.0 ? cfg_.dt
                        : std::min(0.25 * h * h * cfg_.re, 0.5 * h / std::max(cfg_.cfl_vmax_hint, 1e-12));
    if (!(dt_ > 0.0)) throw std::invalid_argument("NsStepper: time step must be positive");
    if (prob_.v_gamma.size() != ws_.count())
        throw std::invalid_argument("NsStepper: v_gamma size mismatch");
    pressure_ = std::make_unique<NeumannPoisson>(g);

    const std::size_t n = ws_.count();
    const bool composite = cfg_.formulation == Formulation::Composite;
    if (composite && n > 0) {
        ind_ = build_indicator(ws_, OuterSolver::Dst, prob_.indicator_boundary_value);
        diag_v_ = interpolate_face_1n(ws_, ind_->hp_f);
        diag_c_ = interpolate_cell_1n(ws_, ind_->hp);
        xdot_n_ = marker_normal_velocity(prob_.body);
        for (double x : xdot_n_) moving_ = moving_ || std::abs(x) > 0.0;
    }

    const Eigen::Index m = composite ? static_cast<Eigen::Index>(3 * n)
                                     : static_cast<Eigen::Index>(2 * n);
    if (m > 0) {
        const LinearOperator S{m, m, [this](const Eigen::VectorXd& y) { return apply_S(y); }};
        Eigen::MatrixXd S_raw = assemble_dense(S);
        if (composite) {
            // The pressure jump carries one gauge freedom per closed curve
            // (a per-curve constant is nearly invisible to the system), so
            // the solve is gauged by bordering: per-curve zero-mean rows and
            // matching multiplier columns keep every physical equation while
            // pinning the constants.
            std::vector<std::vector<Eigen::Index>> members(
                static_cast<std::size_t>(prob_.body.curve_count()));
            for (std::size_t l = 0; l < n; ++l)
                members[static_cast<std::size_t>(prob_.body.curve[l])].push_back(
                    static_cast<Eigen::Index>(l));
            Eigen::Index ncurves = 0;
            for (const auto& c : members)
                if (!c.empty()) ++ncurves;
            S_ = Eigen::MatrixXd::Zero(m + ncurves, m + ncurves);
            S_.topLeftCorner(m, m) = S_raw;
            Eigen::Index at = 0;
            for (const auto& c : members) {
                if (c.empty()) continue;
                for (Eigen::Index l : c) {
                    S_(m + at, 2 * static_cast<Eigen::Index>(n) + l) =
                        1.0 / static_cast<double>(c.size());
                    S_(2 * static_cast<Eigen::Index>(n) + l, m + at) =
                        1.0 / static_cast<double>(c.size());
                }
                ++at;
            }
            n_gauge_ = ncurves;
        } else {
            S_ = std::move(S_raw);
            n_gauge_ = 0;
        }
        if (cfg_.schur == SchurMethod::DenseLU) lu_.compute(S_);
    }
}

NsStepper::~NsStepper() = default;

const Eigen::MatrixXd& NsStepper::schur_matrix() const { return S_; }

NsState NsStepper::rest_state() const {
    NsState s;
    s.v = FaceField(prob_.grid);
    s.p = CellField(prob_.grid);
    s.jump_vn = SurfaceVector(ws_.count());
    if (cfg_.formulation == Formulation::Composite) s.jump_p.assign(ws_.count(), 0.0);
    return s;
}

FaceField NsStepper::apply_B1t(const SurfaceVector& dvn, const SurfaceScalar& dp) const {
    const Body& b = prob_.body;
    if (cfg_.formulation == Formulation::Prototypical)
        return scale(regularize_face(ws_, dvn), dt_);

    SurfaceVector nn(ws_.count()), n = b.normal;
    for (std::size_t l = 0; l < ws_.count(); ++l) {
        nn.x[l] = n.x[l] * n.x[l];
        nn.y[l] = n.y[l] * n.y[l];
    }
    // viscous jump blocks: I_{D->F} R_IFT O_jump(n o n) + D_D R_IFT1n O_jump(n)
    FaceField out = interp_d2f(regularize_tensor(ws_, surface_outer(dvn, nn)));
    out = add(out, tensor_divergence(regularize_tensor_1n(ws_, surface_outer(dvn, n))));
    out = scale(out, dt_ / cfg_.re);
    if (moving_) out = add(out, scale(regularize_face_1n(ws_, hadamard(xdot_n_, dvn)), dt_));
    // pressure-jump block: -dt R_F (n o I_{S->V} dp)
    out = sub(out, scale(regularize_face(ws_, hadamard(dp, n)), dt_));
    return out;
}

CellField NsStepper::apply_B12t(const SurfaceVector& dvn) const {
    if (cfg_.formulation == Formulation::Prototypical) return CellField(prob_.grid);
    return scale(interp_f2c(regularize_face_1n(ws_, component_scale(prob_.body.normal, dvn))), -1.0);
}

Eigen::VectorXd NsStepper::apply_S(const Eigen::VectorXd& y) const {
    const std::size_t n = ws_.count();
    const bool composite = cfg_.formulation == Formulation::Composite;
    SurfaceVector dvn(n);
    SurfaceScalar dp(composite ? n : 0);
    for (std::size_t l = 0; l < n; ++l) {
        dvn.x[l] = y[static_cast<Eigen::Index>(l)];
        dvn.y[l] = y[static_cast<Eigen::Index>(n + l)];
        if (composite) dp[l] = y[static_cast<Eigen::Index>(2 * n + l)];
    }
    const FaceField b1 = apply_B1t(dvn, dp);
    CellField cell = divergence(b1);
    if (composite) cell = sub(cell, apply_B12t(dvn));
    const CellField phi = pressure_->solve(cell);

    SurfaceVector row_v = interpolate_face(ws_, sub(gradient(phi), b1));
    Eigen::VectorXd out(y.size());
    for (std::size_t l = 0; l < n; ++l) {
        double rx = row_v.x[l], ry = row_v.y[l];
        if (composite) {
            rx -= diag_v_.x[l] * dvn.x[l];
            ry -= diag_v_.y[l] * dvn.y[l];
        }
        out[static_cast<Eigen::Index>(l)] = rx;
        out[static_cast<Eigen::Index>(n + l)] = ry;
    }
    if (composite) {
        const SurfaceScalar row_p = interpolate_cell_1n_zeromean(ws_, phi);
        for (std::size_t l = 0; l < n; ++l)
            out[static_cast<Eigen::Index>(2 * n + l)] = -row_p[l] / dt_ - diag_c_[l] * dp[l];
    }
    return out;
}

NsState NsStepper::step(const NsState& s) {
    const GridSpec& g = prob_.grid;
    const std::size_t n = ws_.count();
    const bool composite = cfg_.formulation == Formulation::Composite;

    const double vmax = max_abs(s.v);
    if (!std::isfinite(vmax)) throw std::runtime_error("NsStepper: velocity field diverged (NaN)");
    if (vmax * dt_ / std::min(g.dx, g.dy) > 0.5 && !cfl_exceeded_) {
        cfl_exceeded_ = true;
        std::fprintf(stderr, "NsStepper: advisory: convective CFL exceeds 0.5 (%.3g)\n",
                     vmax * dt_ / std::min(g.dx, g.dy));
    }

    const FaceField r = momentum_rhs(s.v, cfg_, dt_, prob_.b1.size() ? &prob_.b1 : nullptr);

    CellField div_r = divergence(r);
    if (prob_.b2.size()) div_r = sub(div_r, prob_.b2);
    const CellField pstar = scale(pressure_->solve(div_r), 1.0 / dt_);
    const FaceField vstar = sub(r, scale(gradient(pstar), dt_));

    NsState out;
    out.t = s.t + dt_;
    out.jump_vn = SurfaceVector(n);
    if (composite) out.jump_p.assign(n, 0.0);

    if (n == 0) {
        out.v = vstar;
        out.p = pstar;
    } else {
        const SurfaceVector ev = interpolate_face(ws_, vstar);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(S_.rows());
        for (std::size_t l = 0; l < n; ++l) {
            rhs[static_cast<Eigen::Index>(l)] = prob_.v_gamma.x[l] - ev.x[l];
            rhs[static_cast<Eigen::Index>(n + l)] = prob_.v_gamma.y[l] - ev.y[l];
        }
        if (composite) {
            const SurfaceScalar ep = interpolate_cell_1n_zeromean(ws_, pstar);
            for (std::size_t l = 0; l < n; ++l)
                rhs[static_cast<Eigen::Index>(2 * n + l)] = -ep[l];
        }
        Eigen::VectorXd y;
        if (cfg_.schur == SchurMethod::DenseLU) {
            y = lu_.solve(rhs);
        } else {
            y = bicgstab(LinearOperator::from_dense(S_), rhs, {1e-11, -1}).x;
        }
        SurfaceScalar dp(composite ? n : 0);
        for (std::size_t l = 0; l < n; ++l) {
            out.jump_vn.x[l] = y[static_cast<Eigen::Index>(l)];
            out.jump_vn.y[l] = y[static_cast<Eigen::Index>(n + l)];
            if (composite) dp[l] = y[static_cast<Eigen::Index>(2 * n + l)];
        }
        if (composite) out.jump_p = dp;

        const FaceField b1y = apply_B1t(out.jump_vn, dp);
        CellField cell = divergence(b1y);
        if (composite) cell = sub(cell, apply_B12t(out.jump_vn));
        const CellField phi = pressure_->solve(cell);
        out.p = sub(pstar, scale(phi, 1.0 / dt_));
        out.v = sub(sub(r, b1y), scale(gradient(out.p), dt_));
    }

    // zero-mean pressure gauge
    double mean = 0.0;
    for (double v : out.p.a.v) mean += v;
    mean /= static_cast<double>(out.p.a.v.size());
    for (double& v : out.p.a.v) v -= mean;

    // post-step residuals
    CellField cont = divergence(out.v);
    if (composite && n > 0)
        cont = sub(cont, interp_f2c(regularize_face_1n(
                       ws_, component_scale(prob_.body.normal, out.jump_vn))));
    if (prob_.b2.size()) cont = sub(cont, prob_.b2);
    diag_.continuity = max_abs(cont);

    diag_.noslip = 0.0;
    diag_.pjump = 0.0;
    double sq = 0.0;
    if (n > 0) {
        const SurfaceVector ev = interpolate_face(ws_, out.v);
        for (std::size_t l = 0; l < n; ++l) {
            double rx = ev.x[l] - prob_.v_gamma.x[l];
            double ry = ev.y[l] - prob_.v_gamma.y[l];
            if (composite) {
                rx -= diag_v_.x[l] * out.jump_vn.x[l];
                ry -= diag_v_.y[l] * out.jump_vn.y[l];
            }
            diag_.noslip = std::max({diag_.noslip, std::abs(rx), std::abs(ry)});
            sq += rx * rx + ry * ry;
        }
        if (composite) {
            // pressure-jump rows hold up to the gauge multipliers, which
            // spread the per-curve inconsistency evenly; measure both the
            // row residuals modulo that per-curve constant and the gauge
            // means themselves.
            const SurfaceScalar ep = interpolate_cell_1n_zeromean(ws_, out.p);
            std::vector<double> curve_mean(static_cast<std::size_t>(prob_.body.curve_count()), 0.0);
            std::vector<double> row_mean(curve_mean.size(), 0.0);
            std::vector<int> curve_n(curve_mean.size(), 0);
            for (std::size_t l = 0; l < n; ++l) {
                const auto c = static_cast<std::size_t>(prob_.body.curve[l]);
                curve_mean[c] += out.jump_p[l];
                row_mean[c] += ep[l] - diag_c_[l] * out.jump_p[l];
                curve_n[c] += 1;
            }
            for (std::size_t c = 0; c < curve_mean.size(); ++c)
                if (curve_n[c] > 0) {
                    curve_mean[c] /= curve_n[c];
                    row_mean[c] /= curve_n[c];
                }
            for (std::size_t l = 0; l < n; ++l) {
                const auto c = static_cast<std::size_t>(prob_.body.curve[l]);
                const double res = ep[l] - diag_c_[l] * out.jump_p[l] - row_mean[c];
                diag_.pjump = std::max(diag_.pjump, std::abs(res));
                sq += res * res;
            }
            for (std::size_t c = 0; c < curve_mean.size(); ++c)
                if (curve_n[c] > 0) diag_.pjump = std::max(diag_.pjump, std::abs(curve_mean[c]));
        }
    }
    for (double v : cont.a.v) sq += v * v;
    double den = 0.0;
    for (double v : pack(r)) den += v * v;
    for (std::size_t l = 0; l < n; ++l)
        den += prob_.v_gamma.x[l] * prob_.v_gamma.x[l] + prob_.v_gamma.y[l] * prob_.v_gamma.y[l];
    diag_.saddle = std::sqrt(sq) / std::sqrt(std::max(den, 1e-300));
    return out;
}

SteadyResult run_to_steady(NsStepper& stepper, NsState state) {
    SteadyResult out;
    const double eps = 1e-14;
    for (long k = 0; k < stepper.config().max_steps; ++k) {
        NsState next = stepper.step(state);
        ++out.steps;
        const StepDiag& d = stepper.last_diag();
        out.max_continuity = std::max(out.max_continuity, d.continuity);
        out.max_noslip = std::max(out.max_noslip, d.noslip);
        out.max_pjump = std::max(out.max_pjump, d.pjump);
        out.max_saddle = std::max(out.max_saddle, d.saddle);
        const double rate =
            max_abs(sub(next.v, state.v)) / (stepper.dt() * max_abs(state.v) + eps);
        state = std::move(next);
        if (!std::isfinite(rate)) throw std::runtime_error("run_to_steady: diverged");
        if (rate < stepper.config().steady_tol) {
            out.state = std::move(state);
            out.final_rate = rate;
            return out;
        }
        out.final_rate = rate;
    }
    throw std::runtime_error("run_to_steady: max_steps exhausted before steady state");
}

double couette_exact_vtheta(double r, double kappa) {
    if (r <= 1.0) return r;
    if (r <= 1.0 / kappa) {
        const double k2 = kappa * kappa;
        return k2 / (1.0 - k2) * (1.0 / (k2 * r) - r);
    }
    return 0.0;
}

std::pair<double, double> couette_jumps(double kappa) {
    const double k2 = kappa * kappa;
    return {-2.0 / (1.0 - k2), 2.0 * k2 / (1.0 - k2)};
}

namespace {

// v_theta(r)/r, finite at the origin.
double couette_omega(double r, double kappa) {
    if (r <= 1.0) return 1.0;
    if (r > 1.0 / kappa) return 0.0;
    return couette_exact_vtheta(r, kappa) / r;
}

}  // namespace

FaceField couette_exact_velocity(const GridSpec& g, double kappa) {
    FaceField v(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx - 1; ++i) {
            const double x = g.face_x_x(i), y = g.face_x_y(j);
            v.x(i, j) = -y * couette_omega(std::hypot(x, y), kappa);
        }
    for (int j = 0; j < g.ny - 1; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double x = g.face_y_x(i), y = g.face_y_y(j);
            v.y(i, j) = x * couette_omega(std::hypot(x, y), kappa);
        }
    return v;
}

SurfaceVector couette_exact_jump_vn(const Body& body, double kappa) {
    const auto [inner, outer] = couette_jumps(kappa);
    SurfaceVector j(body.count());
    for (std::size_t l = 0; l < body.count(); ++l) {
        const double r = std::hypot(body.position.x[l], body.position.y[l]);
        const double jump = r < 0.5 * (1.0 + 1.0 / kappa) ? inner : outer;
        const double theta = std::atan2(body.position.y[l], body.position.x[l]);
        j.x[l] = -std::sin(theta) * jump;
        j.y[l] = std::cos(theta) * jump;
    }
    return j;
}

NsProblem make_couette(int nx, double ds_over_dx, double kappa, double half_width,
                       const Kernel& kernel) {
    NsProblem p;
    const double dx = 2.0 * half_width / nx;
    p.grid = make_grid(nx, nx, dx, dx, {-half_width + 0.5 * dx, -half_width + 0.5 * dx});
    p.kernel = kernel;

    Body inner = circle_body({0.0, 0.0}, 1.0, markers_for_spacing(1.0, ds_over_dx, dx),
                             Orientation::Inward);
    for (std::size_t l = 0; l < inner.count(); ++l) {
        // rim speed 1, counterclockwise
        inner.velocity.x[l] = -inner.position.y[l];
        inner.velocity.y[l] = inner.position.x[l];
    }
    Body outer = circle_body({0.0, 0.0}, 1.0 / kappa,
                             markers_for_spacing(1.0 / kappa, ds_over_dx, dx),
                             Orientation::Outward);
    p.body = merge(inner, outer);
    p.v_gamma = p.body.velocity;
    p.indicator_boundary_value = 1.0;
    return p;
}

FaceField offsupport_face_mask(const IbWorkspace& ws) {
    FaceField cover(ws.grid());
    for (std::size_t l = 0; l < ws.count(); ++l) {
        const DdfSample& sx = ws.face_x(l);
        for (int wj = 0; wj < sx.ny(); ++wj)
            for (int wi = 0; wi < sx.nx(); ++wi)
                cover.x(sx.i0 + wi, sx.j0 + wj) += std::abs(sx.weight(wi, wj));
        const DdfSample& sy = ws.face_y(l);
        for (int wj = 0; wj < sy.ny(); ++wj)
            for (int wi = 0; wi < sy.nx(); ++wi)
                cover.y(sy.i0 + wi, sy.j0 + wj) += std::abs(sy.weight(wi, wj));
    }
    const FaceField spread = interp_c2f(interp_f2c(cover));
    FaceField mask(ws.grid());
    for (std::size_t k = 0; k < mask.x.v.size(); ++k)
        mask.x.v[k] = (spread.x.v[k] > 0.0 || cover.x.v[k] > 0.0) ? 0.0 : 1.0;
    for (std::size_t k = 0; k < mask.y.v.size(); ++k)
        mask.y.v[k] = (spread.y.v[k] > 0.0 || cover.y.v[k] > 0.0) ? 0.0 : 1.0;
    return mask;
}

}  // namespace ibcs

namespace ibcs {

namespace {

void write_block(std::ofstream& f, const char* name, const Array2& a) {
    f << "# " << name << ' ' << a.nx << ' ' << a.ny << '\n';
    for (int j = 0; j < a.ny; ++j)
        for (int i = 0; i < a.nx; ++i) f << a(i, j) << (i + 1 < a.nx ? ',' : '\n');
}

void write_row(std::ofstream& f, const char* name, const std::vector<double>& v) {
    f << "# " << name << ' ' << v.size() << '\n';
    for (std::size_t k = 0; k < v.size(); ++k) f << v[k] << (k + 1 < v.size() ? ',' : '\n');
    if (v.empty()) f << '\n';
}

std::vector<double> read_values(std::istream& in, std::size_t count) {
    std::vector<double> v;
    v.reserve(count);
    std::string tok;
    while (v.size() < count && in) {
        int c = in.get();
        if (c == ',' || c == '\n' || c == EOF) {
            if (!tok.empty()) {
                v.push_back(std::strtod(tok.c_str(), nullptr));
                tok.clear();
            }
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    if (v.size() != count) throw std::runtime_error("state checkpoint: truncated data block");
    return v;
}

void expect_header(std::istream& in, const std::string& name, std::size_t& n0, std::size_t& n1) {
    std::string line;
    do {
        if (!std::getline(in, line)) throw std::runtime_error("state checkpoint: missing block " + name);
    } while (line.empty());
    std::istringstream ss(line);
    std::string hash_mark, got;
    ss >> hash_mark >> got >> n0;
    if (!(ss >> n1)) n1 = 1;
    if (hash_mark != "#" || got != name)
        throw std::runtime_error("state checkpoint: expected block " + name + ", got " + line);
}

}  // namespace

std::uint64_t config_hash(const NsConfig& cfg) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "re=%.17g dt=%.17g K=%.17g tol=%.17g form=%d schur=%d",
                  cfg.re, cfg.dt, cfg.K, cfg.steady_tol, static_cast<int>(cfg.formulation),
                  static_cast<int>(cfg.schur));
    // FNV-1a
    std::uint64_t h = 1469598103934665603ull;
    for (const char* p = buf; *p; ++p) h = (h ^ static_cast<unsigned char>(*p)) * 1099511628211ull;
    return h;
}

void save_state(const NsState& s, const NsConfig& cfg, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("save_state: cannot open " + path);
    f.precision(17);
    const GridSpec& g = s.v.grid;
    f << "# ibcs-state nx " << g.nx << " ny " << g.ny << " dx " << g.dx << " dy " << g.dy
      << " ox " << g.origin[0] << " oy " << g.origin[1] << " t " << s.t << " config "
      << config_hash(cfg) << '\n';
    write_block(f, "vx", s.v.x);
    write_block(f, "vy", s.v.y);
    write_block(f, "p", s.p.a);
    write_row(f, "jump_vn_x", s.jump_vn.x);
    write_row(f, "jump_vn_y", s.jump_vn.y);
    write_row(f, "jump_p", s.jump_p);
}

NsState load_state(const GridSpec& g, const std::string& path, std::uint64_t* stored_hash) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_state: cannot open " + path);
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("load_state: empty file");
    std::istringstream hs(line);
    std::string tag, word;
    int nx = 0, ny = 0;
    double dx = 0, dy = 0, ox = 0, oy = 0, t = 0;
    std::uint64_t hash = 0;
    hs >> tag >> word;
    if (tag != "#" || word != "ibcs-state") throw std::runtime_error("load_state: bad header");
    while (hs >> word) {
        if (word == "nx") hs >> nx;
        else if (word == "ny") hs >> ny;
        else if (word == "dx") hs >> dx;
        else if (word == "dy") hs >> dy;
        else if (word == "ox") hs >> ox;
        else if (word == "oy") hs >> oy;
        else if (word == "t") hs >> t;
        else if (word == "config") hs >> hash;
    }
    if (nx != g.nx || ny != g.ny || std::abs(dx - g.dx) > 1e-14 || std::abs(dy - g.dy) > 1e-14)
        throw std::runtime_error("load_state: grid mismatch");
    if (stored_hash) *stored_hash = hash;

    NsState s;
    s.v = FaceField(g);
    s.p = CellField(g);
    s.t = t;
    std::size_t n0 = 0, n1 = 0;
    expect_header(f, "vx", n0, n1);
    s.v.x.v = read_values(f, s.v.x.size());
    expect_header(f, "vy", n0, n1);
    s.v.y.v = read_values(f, s.v.y.size());
    expect_header(f, "p", n0, n1);
    s.p.a.v = read_values(f, s.p.a.size());
    expect_header(f, "jump_vn_x", n0, n1);
    s.jump_vn.x = read_values(f, n0);
    expect_header(f, "jump_vn_y", n0, n1);
    s.jump_vn.y = read_values(f, n0);
    expect_header(f, "jump_p", n0, n1);
    s.jump_p = read_values(f, n0);
    return s;
}

}  // namespace ibcs
