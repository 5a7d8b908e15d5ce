#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "ibcs/grid.hpp"
#include "ibcs/immersed.hpp"
#include "ibcs/indicator.hpp"
#include "ibcs/linop.hpp"
#include "ibcs/poisson_ib.hpp"

namespace ibcs {

class NeumannPoisson;

/// Incompressible flow problem on a box with homogeneous far-field velocity
/// and an immersed boundary carrying a no-slip target. Optional b1/b2 carry
/// inhomogeneous wall data or body forces; empty fields mean zero.
struct NsProblem {
    GridSpec grid;
    Body body;
    Kernel kernel = Kernel::smoothed_three_point();
    SurfaceVector v_gamma;  // no-slip velocity per marker
    FaceField b1;           // momentum boundary/body-force term
    CellField b2;           // continuity boundary term
    double indicator_boundary_value = 1.0;
};

struct NsConfig {
    double re = 10.0;
    double dt = 0.0;  // <= 0 selects min(0.25 h^2 Re, 0.5 h / vmax_hint)
    double K = 1.0;   // time-scheme coefficient of the explicit stage
    double steady_tol = 1e-8;
    long max_steps = 400000;
    double cfl_vmax_hint = 1.0;
    Formulation formulation = Formulation::Composite;
    SchurMethod schur = SchurMethod::DenseLU;
};

struct NsState {
    FaceField v;
    CellField p;
    double t = 0.0;
    SurfaceVector jump_vn;  // composite: [v^n]; prototypical: forcing strength
    SurfaceScalar jump_p;   // composite only
};

struct StepDiag {
    double continuity = 0.0;  // max |D v - face-source - b2|
    double noslip = 0.0;      // max interface-row residual
    double pjump = 0.0;       // max pressure-jump-row residual (composite)
    double saddle = 0.0;      // relative residual of the gauged saddle system
};

/// Divergence-form convection D_D((I_{F->D} v)^t o I_{F->D} v).
FaceField convective(const FaceField& v);

/// Explicit-stage right-hand side r = v + K dt (-N(v) + (1/Re) L_F v + b1).
FaceField momentum_rhs(const FaceField& v, const NsConfig& cfg, double dt,
                       const FaceField* b1 = nullptr);

/// One-stage projection stepper. Builds the indicator set, the interface
/// coupling blocks and a dense factorization of the Schur complement once;
/// each step costs two fast Poisson solves plus interface transfers.
class NsStepper {
  public:
    NsStepper(NsProblem problem, NsConfig config);
    ~NsStepper();

    const NsProblem& problem() const { return prob_; }
    const NsConfig& config() const { return cfg_; }
    double dt() const { return dt_; }

    NsState rest_state() const;
    NsState step(const NsState& s);

    const StepDiag& last_diag() const { return diag_; }
    bool cfl_exceeded() const { return cfl_exceeded_; }
    const Eigen::MatrixXd& schur_matrix() const;
    const IndicatorSet* indicator() const { return ind_ ? &*ind_ : nullptr; }
    const IbWorkspace& workspace() const { return ws_; }

  private:
    FaceField apply_B1t(const SurfaceVector& dvn, const SurfaceScalar& dp) const;
    CellField apply_B12t(const SurfaceVector& dvn) const;
    Eigen::VectorXd apply_S(const Eigen::VectorXd& y) const;

    NsProblem prob_;
    NsConfig cfg_;
    double dt_ = 0.0;
    IbWorkspace ws_;
    std::optional<IndicatorSet> ind_;
    SurfaceVector diag_v_;
    SurfaceScalar diag_c_;
    SurfaceScalar xdot_n_;
    bool moving_ = false;
    std::unique_ptr<NeumannPoisson> pressure_;
    Eigen::MatrixXd S_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    Eigen::Index n_gauge_ = 0;
    StepDiag diag_;
    bool cfl_exceeded_ = false;
};

struct SteadyResult {
    NsState state;
    long steps = 0;
    double final_rate = 0.0;
    double max_continuity = 0.0;
    double max_noslip = 0.0;
    double max_pjump = 0.0;
    double max_saddle = 0.0;
};

/// Advance until  max|v^{n+1}-v^n| / (dt max|v^n| + eps) < steady_tol.
/// Throws on NaN or when max_steps is exhausted.
SteadyResult run_to_steady(NsStepper& stepper, NsState state);

// Circular Couette flow between concentric cylinders, radius ratio kappa,
// nondimensionalized by the inner radius and rim speed.
double couette_exact_vtheta(double r, double kappa);
/// Normal-derivative jumps of the azimuthal velocity at the inner and outer
/// cylinders: (-2/(1-k^2), 2 k^2 / (1 - k^2)).
std::pair<double, double> couette_jumps(double kappa);

/// Exact steady velocity sampled on the faces.
FaceField couette_exact_velocity(const GridSpec& g, double kappa);

/// Exact vector-valued [v^n] on the markers of a Couette body.
SurfaceVector couette_exact_jump_vn(const Body& body, double kappa);

/// Couette setup on [-half, half]^2: inner rotating cylinder (radius 1,
/// inward normals, curve 0), outer static cylinder (radius 1/kappa, outward
/// normals, curve 1), marker spacing ds = ds_over_dx * dx on each.
NsProblem make_couette(int nx, double ds_over_dx, double kappa = 0.5, double half_width = 2.67,
                       const Kernel& kernel = Kernel::smoothed_three_point());

/// Faces outside the support of I_{C->F} I_{F->C} R_F for the given body
/// (1 = keep); the error mask of the flow studies.
FaceField offsupport_face_mask(const IbWorkspace& ws);

/// Hash of the configuration fields that define a run (stored in checkpoints
/// so a restore can be matched against its producing configuration).
std::uint64_t config_hash(const NsConfig& cfg);

// State checkpoints: a metadata header (grid, time, config hash) followed by
// CSV grids for the velocity components and the pressure, plus the last
// solved interface jumps.
void save_state(const NsState& s, const NsConfig& cfg, const std::string& path);
NsState load_state(const GridSpec& g, const std::string& path,
                   std::uint64_t* stored_hash = nullptr);

}  // namespace ibcs
