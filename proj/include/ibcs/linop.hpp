#pragma once

#include <Eigen/Dense>
#include <functional>

#include "ibcs/body.hpp"
#include "ibcs/grid.hpp"

namespace ibcs {

/// Matrix-free linear map between packed vectors.
struct LinearOperator {
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply;

    Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;
    bool empty() const { return rows == 0 && cols == 0; }

    static LinearOperator identity(Eigen::Index n);
    static LinearOperator from_dense(const Eigen::MatrixXd& m);
};

/// Assemble by probing unit vectors. Column order follows the packing
/// conventions below, so oracle matrices are reproducible.
Eigen::MatrixXd assemble_dense(const LinearOperator& op);

/// sigma_max / sigma_min via SVD; +infinity when sigma_min underflows to zero.
double condition_number(const Eigen::MatrixXd& m);

struct BicgstabOptions {
    double tol = 1e-10;  // relative residual target
    int max_iterations = -1;  // default 10*n
};

struct BicgstabResult {
    Eigen::VectorXd x;
    int iterations = 0;
    double rel_residual = 0.0;
};

/// Unpreconditioned BiCGSTAB; throws on breakdown or iteration exhaustion.
BicgstabResult bicgstab(const LinearOperator& op, const Eigen::VectorXd& rhs,
                        const BicgstabOptions& opts = {});

/// Saddle block system  [A B1t; B2 -C] (x y)^t = (r1 r2)^t  with invertible A.
/// An empty C stands for the zero block.
struct BlockSystem {
    LinearOperator A, B1t, B2, C;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> solve_A;

    /// S = -C - B2 A^{-1} B1t.
    LinearOperator schur() const;

    /// Relative residual of a candidate solution against (r1, r2).
    double block_residual(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& r1, const Eigen::VectorXd& r2) const;
};

enum class SchurMethod { DenseLU, Bicgstab };

struct SchurSolveResult {
    Eigen::VectorXd x, y;
    double block_residual = 0.0;
    int schur_iterations = 0;
};

/// Block-LU reduction: A x* = r1;  S y = r2 - B2 x*;  x = x* - A^{-1} B1t y.
SchurSolveResult schur_solve(const BlockSystem& sys, SchurMethod method,
                             const Eigen::VectorXd& r1, const Eigen::VectorXd& r2,
                             const BicgstabOptions& krylov = {});

// Packing conventions (fixed for dense assembly reproducibility):
//   CellField   -> row-major, i fastest
//   FaceField   -> [x-component; y-component], each row-major
//   NodeField   -> row-major
//   TensorField -> [xx; xy; yx; yy]
//   SurfaceVector -> [x; y]
Eigen::VectorXd pack(const CellField& f);
Eigen::VectorXd pack(const FaceField& f);
Eigen::VectorXd pack(const NodeField& f);
Eigen::VectorXd pack(const TensorField& f);
Eigen::VectorXd pack(const SurfaceVector& u);
Eigen::VectorXd pack(const SurfaceScalar& s);
void unpack(const Eigen::VectorXd& v, CellField& f);
void unpack(const Eigen::VectorXd& v, FaceField& f);
void unpack(const Eigen::VectorXd& v, NodeField& f);
void unpack(const Eigen::VectorXd& v, TensorField& f);
void unpack(const Eigen::VectorXd& v, SurfaceVector& u);
void unpack(const Eigen::VectorXd& v, SurfaceScalar& s);

}  // namespace ibcs
