#pragma once

#include <map>
#include <string>
#include <vector>

#include "ibcs/ns_ib.hpp"
#include "ibcs/poisson1d.hpp"
#include "ibcs/poisson_ib.hpp"

namespace ibcs::bench {

struct RunRecord {
    std::string problem;
    std::string formulation;
    double dx = 0.0;
    double ds_dx = 0.0;
    int n_markers = 0;
    double err_inf_all = 0.0;
    double err_inf_masked = 0.0;
    double err_l2_all = 0.0;
    double err_l2_masked = 0.0;
    double forcing_err_inf = 0.0;
    double cond_S = 0.0;  // NaN when not computed
    long steps = 0;
    double runtime_s = 0.0;
};

struct StudyReport {
    std::string study;
    std::vector<RunRecord> rows;
    // least-squares log-log slopes, keyed "formulation|ds=<r>|<column>" (the
    // ds part is omitted for the 1D study); "_coarse"/"_fine" suffixes carry
    // the first/last pairwise slopes of the sweep.
    std::map<std::string, double> slopes;
    // per-run scalars that fall outside the CSV schema (JSON output only):
    // constraint residuals, forcing sign flips, failure flags.
    std::map<std::string, double> metrics;
};

enum class EmitFormat { Csv, Json };

/// Fixed CSV schema:
/// problem,formulation,dx,ds_dx,n_markers,err_inf_all,err_inf_masked,
/// err_l2_all,err_l2_masked,forcing_err_inf,cond_S,steps,runtime_s
void emit(const StudyReport& report, EmitFormat format, const std::string& path);
/// String-keyed variant ("csv" or "json"); throws on an unknown format.
void emit(const StudyReport& report, const std::string& format, const std::string& path);
StudyReport parse_csv(const std::string& path);

/// Slope of log(err) against log(dx) by least squares.
double fit_slope(const std::vector<double>& dx, const std::vector<double>& err);

struct ErrorNorms {
    double inf = 0.0;
    double l2 = 0.0;
};
/// Pointwise relative error norms (normalized by the exact field), optionally
/// restricted to mask == 1 entries (the denominator always spans all points).
ErrorNorms relative_error(const std::vector<double>& numeric, const std::vector<double>& exact,
                          const std::vector<double>* mask);
ErrorNorms relative_error(const CellField& numeric, const CellField& exact, const CellField* mask);
ErrorNorms relative_error(const FaceField& numeric, const FaceField& exact, const FaceField* mask);

// ---------------------------------------------------------------------------
// Studies. Option defaults reproduce the reference sweeps.

struct Poisson1dOptions {
    std::vector<int> n_list{16, 32, 64, 128, 256};
    double x_gamma = 1.0;
    Kernel kernel = Kernel::smoothed_three_point();
};
StudyReport run_poisson1d_study(const Poisson1dOptions& opts = {});

struct Poisson2dOptions {
    std::vector<int> nx_list{20, 40, 80};
    std::vector<double> ds_list{1.3, 0.7, 0.1};
    std::vector<Formulation> formulations{Formulation::Composite, Formulation::Prototypical};
    OuterSolver outer = OuterSolver::Lgf;
    SchurMethod schur = SchurMethod::DenseLU;
    bool with_cond = false;
    int cond_max_markers = 2000;
    int jobs = 1;
    Kernel kernel = Kernel::smoothed_three_point();
};
StudyReport run_poisson2d_study(const Poisson2dOptions& opts = {});

struct CouetteOptions {
    std::vector<int> nx_list{32, 64, 128};
    std::vector<double> ds_list{1.0};
    std::vector<Formulation> formulations{Formulation::Composite, Formulation::Prototypical};
    double re = 10.0;
    double dt = 0.0;
    double steady_tol = 1e-8;
    double kappa = 0.5;
    SchurMethod schur = SchurMethod::DenseLU;
    bool with_cond = false;
    int jobs = 1;
    Kernel kernel = Kernel::smoothed_three_point();
};
StudyReport run_couette_study(const CouetteOptions& opts = {});

struct ConditioningOptions {
    std::string problem = "poisson2d";  // or "couette"
    std::vector<int> nx_list{40};
    std::vector<double> ds_list{1.3, 0.7, 0.1};
    double re = 10.0;
    double dt = 0.0;
    double kappa = 0.5;
    Kernel kernel = Kernel::smoothed_three_point();
};
StudyReport run_conditioning_study(const ConditioningOptions& opts = {});

// ---------------------------------------------------------------------------
// Operator identity battery (exact discrete identities on random fields that
// vanish near the outer boundary).

struct IdentityReport {
    std::vector<std::pair<std::string, double>> residuals;
    double max_residual() const;
};
IdentityReport run_identity_suite(int n = 32, int n_fields = 50, unsigned seed = 1u);

// ---------------------------------------------------------------------------
// Assertions for --check mode; each entry is one named pass/fail.

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};
std::vector<CheckResult> check_poisson1d(const StudyReport& r);
std::vector<CheckResult> check_poisson2d(const StudyReport& r);
std::vector<CheckResult> check_couette(const StudyReport& r);
std::vector<CheckResult> check_conditioning(const StudyReport& r);
std::vector<CheckResult> check_identities(const IdentityReport& r);

std::string formulation_name(Formulation f);

}  // namespace ibcs::bench
