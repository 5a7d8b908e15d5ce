#include "ibcs/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <future>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "ibcs/ops.hpp"
#include "json.hpp"

namespace ibcs::bench {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string ds_key(double ds) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", ds);
    return buf;
}

// Run row tasks, optionally across a thread pool, keeping row order fixed.
void run_tasks(std::vector<std::function<void()>>& tasks, int jobs) {
    if (jobs <= 1) {
        for (auto& t : tasks) t();
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> workers;
    const int nworkers = std::min<int>(jobs, static_cast<int>(tasks.size()));
    for (int w = 0; w < nworkers; ++w)
        workers.push_back(std::async(std::launch::async, [&] {
            for (;;) {
                const std::size_t k = next.fetch_add(1);
                if (k >= tasks.size()) return;
                tasks[k]();
            }
        }));
    for (auto& w : workers) w.get();
}

}  // namespace

std::string formulation_name(Formulation f) {
    switch (f) {
        case Formulation::Composite: return "composite";
        case Formulation::Prototypical: return "prototypical";
        default: return "prescribed";
    }
}

double fit_slope(const std::vector<double>& dx, const std::vector<double>& err) {
    std::vector<double> x, y;
    for (std::size_t k = 0; k < dx.size(); ++k)
        if (err[k] > 0.0 && std::isfinite(err[k])) {
            x.push_back(std::log(dx[k]));
            y.push_back(std::log(err[k]));
        }
    if (x.size() < 2) return kNan;
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= x.size();
    my /= y.size();
    double sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
    }
    return sxy / sxx;
}

ErrorNorms relative_error(const std::vector<double>& numeric, const std::vector<double>& exact,
                          const std::vector<double>* mask) {
    if (numeric.size() != exact.size() || (mask && mask->size() != exact.size()))
        throw std::invalid_argument("relative_error: size mismatch");
    double ref_inf = 0.0, ref_l2 = 0.0;
    for (double e : exact) {
        ref_inf = std::max(ref_inf, std::abs(e));
        ref_l2 += e * e;
    }
    ref_l2 = std::sqrt(ref_l2);
    double num_inf = 0.0, num_l2 = 0.0;
    for (std::size_t k = 0; k < exact.size(); ++k) {
        if (mask && (*mask)[k] == 0.0) continue;
        const double e = numeric[k] - exact[k];
        num_inf = std::max(num_inf, std::abs(e));
        num_l2 += e * e;
    }
    num_l2 = std::sqrt(num_l2);
    return {ref_inf > 0 ? num_inf / ref_inf : num_inf, ref_l2 > 0 ? num_l2 / ref_l2 : num_l2};
}

namespace {
std::vector<double> to_vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }
}  // namespace

ErrorNorms relative_error(const CellField& numeric, const CellField& exact, const CellField* mask) {
    std::vector<double> m;
    if (mask) m = mask->a.v;
    return relative_error(numeric.a.v, exact.a.v, mask ? &m : nullptr);
}

ErrorNorms relative_error(const FaceField& numeric, const FaceField& exact, const FaceField* mask) {
    const std::vector<double> n = to_vec(pack(numeric)), e = to_vec(pack(exact));
    std::vector<double> m;
    if (mask) m = to_vec(pack(*mask));
    return relative_error(n, e, mask ? &m : nullptr);
}

// ---------------------------------------------------------------------------
// Emission.

namespace {
const char* kCsvHeader =
    "problem,formulation,dx,ds_dx,n_markers,err_inf_all,err_inf_masked,err_l2_all,"
    "err_l2_masked,forcing_err_inf,cond_S,steps,runtime_s";
}

void emit(const StudyReport& report, EmitFormat format, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("emit: cannot open " + path);
    if (format == EmitFormat::Csv) {
        f << kCsvHeader << '\n';
        for (const RunRecord& r : report.rows)
            f << r.problem << ',' << r.formulation << ',' << fmt(r.dx) << ',' << fmt(r.ds_dx)
              << ',' << r.n_markers << ',' << fmt(r.err_inf_all) << ',' << fmt(r.err_inf_masked)
              << ',' << fmt(r.err_l2_all) << ',' << fmt(r.err_l2_masked) << ','
              << fmt(r.forcing_err_inf) << ',' << fmt(r.cond_S) << ',' << r.steps << ','
              << fmt(r.runtime_s) << '\n';
        return;
    }
    nlohmann::json j;
    j["study"] = report.study;
    j["rows"] = nlohmann::json::array();
    for (const RunRecord& r : report.rows) {
        nlohmann::json row;
        row["problem"] = r.problem;
        row["formulation"] = r.formulation;
        row["dx"] = r.dx;
        row["ds_dx"] = r.ds_dx;
        row["n_markers"] = r.n_markers;
        row["err_inf_all"] = r.err_inf_all;
        row["err_inf_masked"] = r.err_inf_masked;
        row["err_l2_all"] = r.err_l2_all;
        row["err_l2_masked"] = r.err_l2_masked;
        row["forcing_err_inf"] = r.forcing_err_inf;
        row["cond_S"] = r.cond_S;
        row["steps"] = r.steps;
        row["runtime_s"] = r.runtime_s;
        j["rows"].push_back(row);
    }
    j["slopes"] = report.slopes;
    j["metrics"] = report.metrics;
    f << j.dump(2) << '\n';
}

void emit(const StudyReport& report, const std::string& format, const std::string& path) {
    if (format == "csv") return emit(report, EmitFormat::Csv, path);
    if (format == "json") return emit(report, EmitFormat::Json, path);
    throw std::invalid_argument("emit: unknown format '" + format + "'");
}

StudyReport parse_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("parse_csv: cannot open " + path);
    std::string line;
    if (!std::getline(f, line) || line != kCsvHeader)
        throw std::runtime_error("parse_csv: unexpected header");
    StudyReport rep;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tok;
        std::vector<std::string> toks;
        while (std::getline(ss, tok, ',')) toks.push_back(tok);
        if (toks.size() != 13) throw std::runtime_error("parse_csv: malformed row");
        RunRecord r;
        r.problem = toks[0];
        r.formulation = toks[1];
        r.dx = std::strtod(toks[2].c_str(), nullptr);
        r.ds_dx = std::strtod(toks[3].c_str(), nullptr);
        r.n_markers = std::atoi(toks[4].c_str());
        r.err_inf_all = std::strtod(toks[5].c_str(), nullptr);
        r.err_inf_masked = std::strtod(toks[6].c_str(), nullptr);
        r.err_l2_all = std::strtod(toks[7].c_str(), nullptr);
        r.err_l2_masked = std::strtod(toks[8].c_str(), nullptr);
        r.forcing_err_inf = std::strtod(toks[9].c_str(), nullptr);
        r.cond_S = std::strtod(toks[10].c_str(), nullptr);
        r.steps = std::atol(toks[11].c_str());
        r.runtime_s = std::strtod(toks[12].c_str(), nullptr);
        rep.rows.push_back(r);
    }
    if (!rep.rows.empty()) rep.study = rep.rows.front().problem;
    return rep;
}

// ---------------------------------------------------------------------------
// 1D study.

StudyReport run_poisson1d_study(const Poisson1dOptions& opts) {
    if (opts.n_list.empty()) throw std::invalid_argument("poisson1d study: empty grid list");
    StudyReport rep;
    rep.study = "poisson1d";
    struct Variant {
        std::string name;
        std::function<oned::Solution1(const oned::Problem1&)> solve;
    };
    const std::vector<Variant> variants = {
        {"composite", [](const oned::Problem1& p) { return oned::solve_composite(p); }},
        {"prototypical", [](const oned::Problem1& p) { return oned::solve_prototypical(p); }},
        {"prescribed",
         [](const oned::Problem1& p) { return oned::solve_prescribed(p, oned::exact_jump(p)); }},
    };
    for (const Variant& variant : variants) {
        std::vector<double> dxs, einf_all, einf_m, el2_all, el2_m;
        for (int n : opts.n_list) {
            oned::Problem1 p = oned::canonical_problem(n, opts.kernel);
            p.x_gamma = opts.x_gamma;
            const double t0 = now_seconds();
            const oned::Solution1 sol = variant.solve(p);
            std::vector<double> exact(n);
            for (int i = 0; i < n; ++i) exact[i] = oned::exact_solution(p, p.grid.cell(i));
            const std::vector<double> mask = oned::offsupport_mask(p);
            const ErrorNorms all = relative_error(sol.u, exact, nullptr);
            const ErrorNorms masked = relative_error(sol.u, exact, &mask);
            RunRecord r;
            r.problem = "poisson1d";
            r.formulation = variant.name;
            r.dx = p.grid.dx();
            r.ds_dx = kNan;
            r.n_markers = 1;
            r.err_inf_all = all.inf;
            r.err_inf_masked = masked.inf;
            r.err_l2_all = all.l2;
            r.err_l2_masked = masked.l2;
            r.forcing_err_inf = std::abs(sol.jump - oned::exact_jump(p));
            r.cond_S = kNan;
            r.runtime_s = now_seconds() - t0;
            rep.rows.push_back(r);
            rep.metrics[variant.name + "|n=" + std::to_string(n) + "|interface_error"] =
                sol.constraint_residual;
            rep.metrics[variant.name + "|n=" + std::to_string(n) + "|block_residual"] =
                sol.block_residual;
            dxs.push_back(r.dx);
            einf_all.push_back(r.err_inf_all);
            einf_m.push_back(r.err_inf_masked);
            el2_all.push_back(r.err_l2_all);
            el2_m.push_back(r.err_l2_masked);
        }
        rep.slopes[variant.name + "|err_inf_all"] = fit_slope(dxs, einf_all);
        rep.slopes[variant.name + "|err_inf_masked"] = fit_slope(dxs, einf_m);
        rep.slopes[variant.name + "|err_l2_all"] = fit_slope(dxs, el2_all);
        rep.slopes[variant.name + "|err_l2_masked"] = fit_slope(dxs, el2_m);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// 2D Poisson study.

namespace {

int count_sign_flips(const SurfaceScalar& jump) {
    double amax = 0.0;
    for (double v : jump) amax = std::max(amax, std::abs(v));
    if (amax == 0.0) return 0;
    const double floor_v = 0.05 * amax;
    int flips = 0;
    double prev = 0.0;
    // cyclic sweep, skipping near-zero entries
    std::vector<double> sig;
    for (double v : jump)
        if (std::abs(v) > floor_v) sig.push_back(v);
    for (std::size_t k = 0; k < sig.size(); ++k) {
        const double cur = sig[k];
        if (k > 0 && cur * prev < 0.0) ++flips;
        prev = cur;
    }
    if (sig.size() > 1 && sig.front() * sig.back() < 0.0) ++flips;
    return flips;
}

}  // namespace

StudyReport run_poisson2d_study(const Poisson2dOptions& opts) {
    if (opts.nx_list.empty()) throw std::invalid_argument("poisson2d study: empty grid list");
    StudyReport rep;
    rep.study = "poisson2d";
    struct Task {
        Formulation f;
        double ds;
        int nx;
    };
    std::vector<Task> order;
    for (Formulation f : opts.formulations)
        for (double ds : opts.ds_list)
            for (int nx : opts.nx_list) order.push_back({f, ds, nx});
    rep.rows.resize(order.size());
    std::mutex metrics_mtx;

    std::vector<std::function<void()>> tasks;
    for (std::size_t k = 0; k < order.size(); ++k)
        tasks.push_back([&, k] {
            const Task& t = order[k];
            RunRecord& r = rep.rows[k];
            r.problem = "poisson2d";
            r.formulation = formulation_name(t.f);
            r.cond_S = kNan;
            const double t0 = now_seconds();
            try {
                PoissonProblem p = make_poisson2d_problem(t.nx, t.ds, opts.kernel);
                p.outer = opts.outer;
                p.schur = opts.schur;
                p.want_condition_number =
                    opts.with_cond && static_cast<int>(p.body.count()) <= opts.cond_max_markers;
                r.dx = p.grid.dx;
                r.ds_dx = 2.0 * std::numbers::pi / (p.body.count() * p.grid.dx);
                r.n_markers = static_cast<int>(p.body.count());
                PoissonSolution sol;
                if (t.f == Formulation::Composite)
                    sol = solve_poisson_composite(p);
                else if (t.f == Formulation::Prototypical)
                    sol = solve_poisson_prototypical(p);
                else
                    sol = solve_poisson_prescribed(p, poisson2d_exact_jump(p.body));

                CellField exact(p.grid);
                for (int j = 0; j < p.grid.ny; ++j)
                    for (int i = 0; i < p.grid.nx; ++i)
                        exact(i, j) = poisson2d_exact(p.grid.cell_x(i), p.grid.cell_y(j), 1.0);
                const IbWorkspace ws(p.kernel, p.grid, p.body);
                const CellField mask = offsupport_cell_mask(ws);
                const ErrorNorms all = relative_error(sol.u, exact, nullptr);
                const ErrorNorms masked = relative_error(sol.u, exact, &mask);
                r.err_inf_all = all.inf;
                r.err_inf_masked = masked.inf;
                r.err_l2_all = all.l2;
                r.err_l2_masked = masked.l2;
                const SurfaceScalar exact_jump = poisson2d_exact_jump(p.body);
                double ferr = 0.0;
                for (std::size_t l = 0; l < exact_jump.size(); ++l)
                    ferr = std::max(ferr, std::abs(sol.jump[l] - exact_jump[l]));
                r.forcing_err_inf = ferr;
                if (sol.cond_schur) r.cond_S = *sol.cond_schur;
                const std::string key = r.formulation + "|ds=" + ds_key(t.ds) +
                                        "|nx=" + std::to_string(t.nx);
                std::lock_guard<std::mutex> lock(metrics_mtx);
                rep.metrics[key + "|block_residual"] = sol.block_residual;
                rep.metrics[key + "|constraint_residual"] = sol.constraint_residual;
                rep.metrics[key + "|forcing_sign_flips"] =
                    static_cast<double>(count_sign_flips(sol.jump));
            } catch (const std::exception&) {
                r.err_inf_all = r.err_inf_masked = r.err_l2_all = r.err_l2_masked = kNan;
                r.forcing_err_inf = kNan;
                std::lock_guard<std::mutex> lock(metrics_mtx);
                rep.metrics[r.formulation + "|ds=" + ds_key(t.ds) + "|nx=" +
                            std::to_string(t.nx) + "|failed"] = 1.0;
            }
            r.runtime_s = now_seconds() - t0;
        });
    run_tasks(tasks, opts.jobs);

    for (Formulation f : opts.formulations)
        for (double ds : opts.ds_list) {
            std::vector<double> dxs, e0, e1, e2, e3;
            for (std::size_t k = 0; k < order.size(); ++k) {
                if (order[k].f != f || order[k].ds != ds) continue;
                dxs.push_back(rep.rows[k].dx);
                e0.push_back(rep.rows[k].err_inf_all);
                e1.push_back(rep.rows[k].err_inf_masked);
                e2.push_back(rep.rows[k].err_l2_all);
                e3.push_back(rep.rows[k].err_l2_masked);
            }
            const std::string base = formulation_name(f) + "|ds=" + ds_key(ds) + "|";
            rep.slopes[base + "err_inf_all"] = fit_slope(dxs, e0);
            rep.slopes[base + "err_inf_masked"] = fit_slope(dxs, e1);
            rep.slopes[base + "err_l2_all"] = fit_slope(dxs, e2);
            rep.slopes[base + "err_l2_masked"] = fit_slope(dxs, e3);
        }
    return rep;
}

// ---------------------------------------------------------------------------
// Couette study.

StudyReport run_couette_study(const CouetteOptions& opts) {
    if (opts.nx_list.empty()) throw std::invalid_argument("couette study: empty grid list");
    StudyReport rep;
    rep.study = "couette";
    struct Task {
        Formulation f;
        double ds;
        int nx;
    };
    std::vector<Task> order;
    for (Formulation f : opts.formulations)
        for (double ds : opts.ds_list)
            for (int nx : opts.nx_list) order.push_back({f, ds, nx});
    rep.rows.resize(order.size());
    std::mutex metrics_mtx;

    std::vector<std::function<void()>> tasks;
    for (std::size_t k = 0; k < order.size(); ++k)
        tasks.push_back([&, k] {
            const Task& t = order[k];
            RunRecord& r = rep.rows[k];
            r.problem = "couette";
            r.formulation = formulation_name(t.f);
            r.cond_S = kNan;
            const double t0 = now_seconds();
            const std::string key =
                r.formulation + "|ds=" + ds_key(t.ds) + "|nx=" + std::to_string(t.nx);
            try {
                NsProblem p = make_couette(t.nx, t.ds, opts.kappa, 2.67, opts.kernel);
                NsConfig cfg;
                cfg.re = opts.re;
                cfg.dt = opts.dt;
                cfg.steady_tol = opts.steady_tol;
                cfg.formulation = t.f;
                cfg.schur = opts.schur;
                r.dx = p.grid.dx;
                r.ds_dx = t.ds;
                r.n_markers = static_cast<int>(p.body.count());
                NsStepper stepper(p, cfg);
                if (opts.with_cond) r.cond_S = condition_number(stepper.schur_matrix());
                SteadyResult res = run_to_steady(stepper, stepper.rest_state());
                r.steps = res.steps;

                const FaceField exact = couette_exact_velocity(p.grid, opts.kappa);
                const FaceField mask = offsupport_face_mask(stepper.workspace());
                const ErrorNorms all = relative_error(res.state.v, exact, nullptr);
                const ErrorNorms masked = relative_error(res.state.v, exact, &mask);
                r.err_inf_all = all.inf;
                r.err_inf_masked = masked.inf;
                r.err_l2_all = all.l2;
                r.err_l2_masked = masked.l2;

                // forcing error on the inner cylinder; the prototypical
                // strength is scaled by Re for direct comparison (its
                // pressure jump vanishes in this flow).
                const SurfaceVector exact_j = couette_exact_jump_vn(p.body, opts.kappa);
                const double scale_f = t.f == Formulation::Prototypical ? cfg.re : 1.0;
                double ferr = 0.0;
                for (std::size_t l = 0; l < p.body.count(); ++l) {
                    if (p.body.curve[l] != 0) continue;
                    ferr = std::max(ferr,
                                    std::abs(scale_f * res.state.jump_vn.x[l] - exact_j.x[l]));
                    ferr = std::max(ferr,
                                    std::abs(scale_f * res.state.jump_vn.y[l] - exact_j.y[l]));
                }
                r.forcing_err_inf = ferr;

                std::lock_guard<std::mutex> lock(metrics_mtx);
                rep.metrics[key + "|max_continuity"] = res.max_continuity;
                rep.metrics[key + "|max_noslip"] = res.max_noslip;
                rep.metrics[key + "|max_pjump"] = res.max_pjump;
                rep.metrics[key + "|max_saddle"] = res.max_saddle;
                rep.metrics[key + "|final_rate"] = res.final_rate;
                rep.metrics[key + "|cfl_exceeded"] = stepper.cfl_exceeded() ? 1.0 : 0.0;
            } catch (const std::exception&) {
                r.err_inf_all = r.err_inf_masked = r.err_l2_all = r.err_l2_masked = kNan;
                r.forcing_err_inf = kNan;
                std::lock_guard<std::mutex> lock(metrics_mtx);
                rep.metrics[key + "|failed"] = 1.0;
            }
            r.runtime_s = now_seconds() - t0;
        });
    run_tasks(tasks, opts.jobs);

    for (Formulation f : opts.formulations)
        for (double ds : opts.ds_list) {
            std::vector<double> dxs, e0, e1, e2, e3;
            for (std::size_t k = 0; k < order.size(); ++k) {
                if (order[k].f != f || order[k].ds != ds) continue;
                dxs.push_back(rep.rows[k].dx);
                e0.push_back(rep.rows[k].err_inf_all);
                e1.push_back(rep.rows[k].err_inf_masked);
                e2.push_back(rep.rows[k].err_l2_all);
                e3.push_back(rep.rows[k].err_l2_masked);
            }
            const std::string base = formulation_name(f) + "|ds=" + ds_key(ds) + "|";
            rep.slopes[base + "err_inf_all"] = fit_slope(dxs, e0);
            rep.slopes[base + "err_inf_masked"] = fit_slope(dxs, e1);
            rep.slopes[base + "err_l2_all"] = fit_slope(dxs, e2);
            rep.slopes[base + "err_l2_masked"] = fit_slope(dxs, e3);
            if (dxs.size() >= 2) {
                rep.slopes[base + "err_inf_masked_coarse"] =
                    fit_slope({dxs[0], dxs[1]}, {e1[0], e1[1]});
                rep.slopes[base + "err_inf_masked_fine"] =
                    fit_slope({dxs[dxs.size() - 2], dxs.back()}, {e1[e1.size() - 2], e1.back()});
            }
        }
    return rep;
}

// ---------------------------------------------------------------------------
// Conditioning study.

StudyReport run_conditioning_study(const ConditioningOptions& opts) {
    StudyReport rep;
    rep.study = "conditioning-" + opts.problem;
    for (int nx : opts.nx_list)
        for (double ds : opts.ds_list)
            for (Formulation f : {Formulation::Composite, Formulation::Prototypical}) {
                RunRecord r;
                r.problem = rep.study;
                r.formulation = formulation_name(f);
                r.ds_dx = ds;
                r.err_inf_all = r.err_inf_masked = r.err_l2_all = r.err_l2_masked = kNan;
                r.forcing_err_inf = kNan;
                const double t0 = now_seconds();
                if (opts.problem == "poisson2d") {
                    PoissonProblem p = make_poisson2d_problem(nx, ds, opts.kernel);
                    r.dx = p.grid.dx;
                    r.n_markers = static_cast<int>(p.body.count());
                    const IbWorkspace ws(p.kernel, p.grid, p.body);
                    std::optional<IndicatorSet> ind;
                    if (f == Formulation::Composite)
                        ind = build_indicator(ws, p.outer, p.indicator_boundary_value);
                    const BlockSystem sys =
                        poisson_block_system(p, f, ws, ind ? &*ind : nullptr);
                    r.cond_S = condition_number(assemble_dense(sys.schur()));
                } else if (opts.problem == "couette") {
                    NsProblem p = make_couette(nx, ds, opts.kappa, 2.67, opts.kernel);
                    NsConfig cfg;
                    cfg.re = opts.re;
                    cfg.dt = opts.dt;
                    cfg.formulation = f;
                    r.dx = p.grid.dx;
                    r.n_markers = static_cast<int>(p.body.count());
                    NsStepper stepper(p, cfg);
                    r.cond_S = condition_number(stepper.schur_matrix());
                } else {
                    throw std::invalid_argument("conditioning study: unknown problem '" +
                                                opts.problem + "'");
                }
                r.runtime_s = now_seconds() - t0;
                rep.rows.push_back(r);
            }
    return rep;
}

// ---------------------------------------------------------------------------
// Operator identity battery.

namespace {

std::function<double()> uniform(std::mt19937& rng, double lo, double hi) {
    return [&rng, lo, hi] {
        std::uniform_real_distribution<double> d(lo, hi);
        return d(rng);
    };
}

void fill_margin(Array2& a, int margin, std::function<double()>& gen) {
    for (int j = 0; j < a.ny; ++j)
        for (int i = 0; i < a.nx; ++i)
            a(i, j) = (i < margin || j < margin || i >= a.nx - margin || j >= a.ny - margin)
                          ? 0.0
                          : gen();
}

CellField rand_cell(const GridSpec& g, std::mt19937& rng, int margin, double lo = -1, double hi = 1) {
    CellField f(g);
    auto gen = uniform(rng, lo, hi);
    fill_margin(f.a, margin, gen);
    return f;
}

FaceField rand_face(const GridSpec& g, std::mt19937& rng, int margin) {
    FaceField f(g);
    auto gen = uniform(rng, -1, 1);
    fill_margin(f.x, margin, gen);
    fill_margin(f.y, margin, gen);
    return f;
}

NodeField rand_node(const GridSpec& g, std::mt19937& rng, int margin) {
    NodeField f(g);
    auto gen = uniform(rng, -1, 1);
    fill_margin(f.a, margin, gen);
    return f;
}

TensorField rand_tensor(const GridSpec& g, std::mt19937& rng, int margin) {
    TensorField f(g);
    auto gen = uniform(rng, -1, 1);
    fill_margin(f.xx, margin, gen);
    fill_margin(f.xy, margin, gen);
    fill_margin(f.yx, margin, gen);
    fill_margin(f.yy, margin, gen);
    return f;
}

// (dX^2/4) tensor: per component, the squared spacing of the differencing
// direction (the column index) over 4.
TensorField quarter_spacing_sq(const GridSpec& g) {
    TensorField t(g);
    const double cx = g.dx * g.dx / 4.0, cy = g.dy * g.dy / 4.0;
    for (double& v : t.xx.v) v = cx;
    for (double& v : t.xy.v) v = cy;
    for (double& v : t.yx.v) v = cx;
    for (double& v : t.yy.v) v = cy;
    return t;
}

TensorField outer_ff(const FaceField& a, const FaceField& b) {
    return mul(transpose(interp_f2d(a)), interp_f2d(b));
}

}  // namespace

double IdentityReport::max_residual() const {
    double m = 0.0;
    for (const auto& [name, r] : residuals) m = std::max(m, r);
    return m;
}

IdentityReport run_identity_suite(int n, int n_fields, unsigned seed) {
    // Unit spacing: the identities are exact for any h, and h = 1 keeps the
    // stencil scale at O(1) so roundoff stays near machine epsilon.
    const GridSpec g = make_grid(n, n, 1.0, 1.0, {0.5, 0.5});
    std::mt19937 rng(seed);
    const int margin = 3;

    IdentityReport rep;
    auto track = [&rep](const std::string& name, double r) {
        for (auto& [k, v] : rep.residuals)
            if (k == name) {
                v = std::max(v, r);
                return;
            }
        rep.residuals.emplace_back(name, r);
    };

    for (int trial = 0; trial < n_fields; ++trial) {
        const CellField s = rand_cell(g, rng, margin);
        const CellField s2 = rand_cell(g, rng, margin);
        const FaceField v = rand_face(g, rng, margin);
        const NodeField w = rand_node(g, rng, margin);
        const TensorField T = rand_tensor(g, rng, margin);

        track("D(G s) == L s", max_abs(sub(divergence(gradient(s)), laplacian_center(s))));
        track("DD(GF v) == LF v",
              max_abs(sub(tensor_divergence(face_gradient(v)), laplacian_face(v))));
        track("D(C w) == 0", max_abs(divergence(curl(w))));
        track("Ct(G s) == 0", max_abs(cocurl(gradient(s))));

        // transform adjointness
        const double lhs = pack(interp_c2f(s)).dot(pack(v));
        const double rhs = pack(s).dot(pack(interp_f2c(v)));
        track("<I_C2F s, v> == <s, I_F2C v>", std::abs(lhs - rhs));

        // product rules
        {
            const FaceField a = interp_c2f(mul(s, s2));
            FaceField b = mul(interp_c2f(s), interp_c2f(s2));
            FaceField gg = mul(gradient(s), gradient(s2));
            gg.x = scale(gg, g.dx * g.dx / 4.0).x;
            gg.y = scale(gg, g.dy * g.dy / 4.0).y;
            b = add(b, gg);
            track("I(s1 s2) product expansion", max_abs(sub(a, b)));
        }
        track("G(s1 s2) product rule",
              max_abs(sub(gradient(mul(s, s2)),
                          add(mul(interp_c2f(s), gradient(s2)), mul(interp_c2f(s2), gradient(s))))));
        track("D(Is v) product rule",
              max_abs(sub(divergence(mul(interp_c2f(s), v)),
                          add(interp_f2c(mul(v, gradient(s))), mul(s, divergence(v))))));
        track("DD(s T) product rule",
              max_abs(sub(tensor_divergence(mul(interp_f2d(interp_c2f(s)), T)),
                          add(interp_d2f(mul(T, face_gradient(interp_c2f(s)))),
                              mul(interp_c2f(s), tensor_divergence(T))))));

        // composite-field identities with H in [0,1]
        const CellField hp = rand_cell(g, rng, 0, 0.0, 1.0);
        const CellField hm = sub(CellField(g, 1.0), hp);
        const FaceField hfp = interp_c2f(hp), hfm = interp_c2f(hm);
        const CellField sp = rand_cell(g, rng, margin), sm = rand_cell(g, rng, margin);
        const FaceField vp = rand_face(g, rng, margin), vm = rand_face(g, rng, margin);

        {
            const CellField sbar = add(mul(hp, sp), mul(hm, sm));
            const FaceField lhs_g = gradient(sbar);
            const FaceField rhs_g =
                add(add(mul(hfp, gradient(sp)), mul(hfm, gradient(sm))),
                    mul(gradient(hp), interp_c2f(sub(sp, sm))));
            track("composite scalar gradient", max_abs(sub(lhs_g, rhs_g)));

            const CellField lhs_l = laplacian_center(sbar);
            const CellField rhs_l = add(
                add(mul(hp, laplacian_center(sp)), mul(hm, laplacian_center(sm))),
                add(interp_f2c(mul(gradient(hp), sub(gradient(sp), gradient(sm)))),
                    divergence(mul(gradient(hp), interp_c2f(sub(sp, sm))))));
            track("composite scalar laplacian", max_abs(sub(lhs_l, rhs_l)));
        }
        {
            const FaceField vbar = add(mul(hfp, vp), mul(hfm, vm));
            const CellField lhs_d = divergence(vbar);
            const CellField rhs_d =
                add(add(mul(hp, divergence(vp)), mul(hm, divergence(vm))),
                    interp_f2c(mul(gradient(hp), sub(vp, vm))));
            track("composite vector divergence", max_abs(sub(lhs_d, rhs_d)));

            const TensorField ghp_d = interp_f2d(gradient(hp));  // (I_F2D G hp)
            const FaceField lhs_lf = laplacian_face(vbar);
            const FaceField rhs_lf = add(
                add(mul(hfp, laplacian_face(vp)), mul(hfm, laplacian_face(vm))),
                add(interp_d2f(mul(transpose(ghp_d), sub(face_gradient(vp), face_gradient(vm)))),
                    tensor_divergence(mul(transpose(ghp_d), interp_f2d(sub(vp, vm))))));
            track("composite vector laplacian", max_abs(sub(lhs_lf, rhs_lf)));

            // divergence-form convection of a composite field
            const TensorField ivbar = interp_f2d(vbar);
            const FaceField lhs_c = tensor_divergence(mul(transpose(ivbar), ivbar));
            const TensorField corr =
                mul(quarter_spacing_sq(g),
                    mul(face_gradient(hfp), sub(face_gradient(vp), face_gradient(vm))));
            const FaceField dv = sub(vp, vm);
            FaceField rhs_c = add(mul(hfp, tensor_divergence(outer_ff(vp, vp))),
                                  mul(hfm, tensor_divergence(outer_ff(vm, vm))));
            rhs_c = add(rhs_c, interp_d2f(mul(face_gradient(hfp),
                                              sub(outer_ff(vp, vp), outer_ff(vm, vm)))));
            rhs_c = sub(rhs_c, tensor_divergence(mul(mul(interp_f2d(hfp), interp_f2d(hfm)),
                                                     outer_ff(dv, dv))));
            rhs_c = add(rhs_c, tensor_divergence(mul(transpose(ivbar), corr)));
            rhs_c = add(rhs_c, tensor_divergence(mul(ivbar, transpose(corr))));
            rhs_c = sub(rhs_c, tensor_divergence(mul(transpose(corr), corr)));
            track("composite convection (divergence form)", max_abs(sub(lhs_c, rhs_c)));
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Checks.

namespace {

CheckResult make_check(const std::string& name, bool pass, const std::string& detail) {
    return {name, pass, detail};
}

double slope_at(const StudyReport& r, const std::string& key) {
    auto it = r.slopes.find(key);
    return it == r.slopes.end() ? std::numeric_limits<double>::quiet_NaN() : it->second;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

const RunRecord* find_row(const StudyReport& r, const std::string& formulation, double ds,
                          double dx_approx) {
    for (const RunRecord& row : r.rows)
        if (row.formulation == formulation && std::abs(row.ds_dx - ds) < 0.15 &&
            std::abs(row.dx - dx_approx) < 0.25 * dx_approx)
            return &row;
    return nullptr;
}

}  // namespace

std::vector<CheckResult> check_poisson1d(const StudyReport& r) {
    std::vector<CheckResult> out;
    const double s_comp = slope_at(r, "composite|err_inf_masked");
    out.push_back(make_check("poisson1d composite off-support slope >= 1.9", s_comp >= 1.9,
                             "slope=" + num(s_comp)));
    const double s_prot = slope_at(r, "prototypical|err_inf_all");
    out.push_back(make_check("poisson1d prototypical global slope in [0.8,1.2]",
                             s_prot >= 0.8 && s_prot <= 1.2, "slope=" + num(s_prot)));
    const double s_pre = slope_at(r, "prescribed|err_inf_masked");
    out.push_back(make_check("poisson1d prescribed off-support slope >= 1.9", s_pre >= 1.9,
                             "slope=" + num(s_pre)));
    double min_interface_error = std::numeric_limits<double>::infinity();
    for (const auto& [k, v] : r.metrics)
        if (k.rfind("prescribed|", 0) == 0 && k.find("interface_error") != std::string::npos)
            min_interface_error = std::min(min_interface_error, v);
    out.push_back(make_check("poisson1d prescribed interface value error nonzero",
                             min_interface_error > 1e-6, "min=" + num(min_interface_error)));
    std::vector<double> ferr;
    for (const RunRecord& row : r.rows)
        if (row.formulation == "composite") ferr.push_back(row.forcing_err_inf);
    bool monotone = ferr.size() >= 3;
    for (std::size_t k = ferr.size() >= 3 ? ferr.size() - 3 : 0; k + 1 < ferr.size(); ++k)
        monotone = monotone && ferr[k + 1] <= ferr[k] * (1.0 + 1e-9);
    out.push_back(make_check("poisson1d composite forcing error monotone on last 3 grids",
                             monotone,
                             ferr.empty() ? "no rows" : "last=" + num(ferr.back())));
    return out;
}

std::vector<CheckResult> check_poisson2d(const StudyReport& r) {
    std::vector<CheckResult> out;
    for (double ds : {1.3, 0.7}) {
        const std::string key = "composite|ds=" + ds_key(ds) + "|err_inf_masked";
        const double s = slope_at(r, key);
        out.push_back(make_check("poisson2d composite off-support slope >= 1.8 at ds/dx=" +
                                     ds_key(ds),
                                 s >= 1.8, "slope=" + num(s)));
        const double sg = slope_at(r, "composite|ds=" + ds_key(ds) + "|err_inf_all");
        out.push_back(make_check("poisson2d composite global inf slope >= 0.9 at ds/dx=" +
                                     ds_key(ds),
                                 sg >= 0.9, "slope=" + num(sg)));
    }
    for (const char* norm : {"err_inf_all", "err_l2_all"}) {
        const double s = slope_at(r, std::string("prototypical|ds=1.3|") + norm);
        out.push_back(make_check(std::string("poisson2d prototypical ") + norm +
                                     " slope in [0.8,1.2] at ds/dx=1.3",
                                 s >= 0.8 && s <= 1.2, "slope=" + num(s)));
    }
    // forcing accuracy at the finest grid, smallest marker spacing
    if (const RunRecord* row = find_row(r, "composite", 0.1, 0.05)) {
        out.push_back(make_check("poisson2d composite forcing error <= 0.15 at dx/R=0.05, ds/dx=0.1",
                                 row->forcing_err_inf <= 0.15, "err=" + num(row->forcing_err_inf)));
        const auto it = r.metrics.find("composite|ds=0.1|nx=80|forcing_sign_flips");
        const double flips = it == r.metrics.end() ? kNan : it->second;
        out.push_back(make_check("poisson2d composite forcing has no adjacent sign oscillation",
                                 flips <= 4.0, "sign flips=" + num(flips)));
    }
    if (const RunRecord* row = find_row(r, "prototypical", 0.1, 0.05))
        out.push_back(make_check("poisson2d prototypical forcing error > 10 at ds/dx=0.1",
                                 row->forcing_err_inf > 10.0, "err=" + num(row->forcing_err_inf)));
    return out;
}

std::vector<CheckResult> check_couette(const StudyReport& r) {
    std::vector<CheckResult> out;
    const double s_coarse = slope_at(r, "composite|ds=1|err_inf_masked_coarse");
    if (!std::isnan(s_coarse))
        out.push_back(make_check("couette composite masked slope >= 1.5 on coarser grids",
                                 s_coarse >= 1.5, "slope=" + num(s_coarse)));
    for (const char* norm : {"err_inf_all", "err_l2_all"}) {
        const double s = slope_at(r, std::string("prototypical|ds=1|") + norm);
        if (!std::isnan(s))
            out.push_back(make_check(std::string("couette prototypical ") + norm +
                                         " slope in [0.8,1.2]",
                                     s >= 0.8 && s <= 1.2, "slope=" + num(s)));
    }
    double worst_cont = 0.0, worst_slip = 0.0;
    bool any = false;
    for (const auto& [k, v] : r.metrics) {
        if (k.find("max_continuity") != std::string::npos) {
            worst_cont = std::max(worst_cont, v);
            any = true;
        }
        if (k.find("max_noslip") != std::string::npos) worst_slip = std::max(worst_slip, v);
    }
    if (any) {
        out.push_back(make_check("couette post-step continuity <= 1e-8", worst_cont <= 1e-8,
                                 "max=" + num(worst_cont)));
        out.push_back(make_check("couette post-step no-slip <= 1e-8", worst_slip <= 1e-8,
                                 "max=" + num(worst_slip)));
    }
    // forcing rows (present when the study sweeps ds at dx ~ 0.0834)
    for (double ds : {0.7, 1.0, 1.3})
        if (const RunRecord* row = find_row(r, "composite", ds, 0.0834))
            out.push_back(make_check("couette composite forcing error <= 0.2 at ds/dx=" +
                                         ds_key(ds),
                                     row->forcing_err_inf <= 0.2,
                                     "err=" + num(row->forcing_err_inf)));
    if (const RunRecord* row = find_row(r, "prototypical", 0.7, 0.0834))
        out.push_back(make_check("couette prototypical forcing error > 10 at ds/dx=0.7",
                                 row->forcing_err_inf > 10.0,
                                 "err=" + num(row->forcing_err_inf)));
    return out;
}

std::vector<CheckResult> check_conditioning(const StudyReport& r) {
    std::vector<CheckResult> out;
    std::map<double, std::map<double, double>> comp, prot;  // dx -> ds -> cond
    for (const RunRecord& row : r.rows) {
        if (row.formulation == "composite") comp[row.dx][row.ds_dx] = row.cond_S;
        if (row.formulation == "prototypical") prot[row.dx][row.ds_dx] = row.cond_S;
    }
    for (const auto& [dx, by_ds] : comp) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (const auto& [ds, c] : by_ds) {
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        out.push_back(make_check(
            "cond(S) spans < 1 decade across ds/dx at dx=" + num(dx),
            hi / lo < 10.0, "span=" + num(hi / lo)));
    }
    for (const auto& [dx, by_ds] : prot) {
        const double small = by_ds.begin()->first;   // smallest ds
        const double large = by_ds.rbegin()->first;  // largest ds
        const double ratio = by_ds.at(small) / by_ds.at(large);
        const double decades_needed = r.study.find("couette") != std::string::npos ? 1e2 : 1e3;
        out.push_back(make_check("cond(S~) grows >= " +
                                     std::string(decades_needed == 1e2 ? "2" : "3") +
                                     " decades toward small ds/dx at dx=" + num(dx),
                                 ratio >= decades_needed, "ratio=" + num(ratio)));
    }
    return out;
}

std::vector<CheckResult> check_identities(const IdentityReport& r) {
    std::vector<CheckResult> out;
    for (const auto& [name, res] : r.residuals)
        out.push_back(make_check("identity: " + name, res <= 1e-12, "residual=" + num(res)));
    return out;
}

}  // namespace ibcs::bench
