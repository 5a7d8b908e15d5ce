#include "ibcs/linop.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ibcs {

Eigen::VectorXd LinearOperator::operator()(const Eigen::VectorXd& x) const {
    if (x.size() != cols) throw std::invalid_argument("LinearOperator: size mismatch");
    Eigen::VectorXd y = apply(x);
    if (y.size() != rows) throw std::logic_error("LinearOperator: apply returned wrong size");
    return y;
}

LinearOperator LinearOperator::identity(Eigen::Index n) {
    return {n, n, [](const Eigen::VectorXd& x) { return x; }};
}

LinearOperator LinearOperator::from_dense(const Eigen::MatrixXd& m) {
    return {m.rows(), m.cols(), [m](const Eigen::VectorXd& x) -> Eigen::VectorXd { return m * x; }};
}

Eigen::MatrixXd assemble_dense(const LinearOperator& op) {
    Eigen::MatrixXd m(op.rows, op.cols);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(op.cols);
    for (Eigen::Index c = 0; c < op.cols; ++c) {
        e[c] = 1.0;
        m.col(c) = op(e);
        e[c] = 0.0;
    }
    return m;
}

double condition_number(const Eigen::MatrixXd& m) {
    const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXd>(m).singularValues();
    const double smin = sv[sv.size() - 1];
    if (smin <= 0.0) return std::numeric_limits<double>::infinity();
    return sv[0] / smin;
}

BicgstabResult bicgstab(const LinearOperator& op, const Eigen::VectorXd& rhs,
                        const BicgstabOptions& opts) {
    if (op.rows != op.cols) throw std::invalid_argument("bicgstab: operator must be square");
    const Eigen::Index n = op.rows;
    const int maxiter = opts.max_iterations > 0 ? opts.max_iterations : static_cast<int>(10 * n);
    const double bnorm = rhs.norm();
    BicgstabResult res;
    res.x = Eigen::VectorXd::Zero(n);
    if (bnorm == 0.0) return res;

    Eigen::VectorXd r = rhs;  // x0 = 0
    const Eigen::VectorXd rhat = r;
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n), p = Eigen::VectorXd::Zero(n);
    const double breakdown = 1e-300;

    for (int it = 1; it <= maxiter; ++it) {
        const double rho1 = rhat.dot(r);
        if (std::abs(rho1) < breakdown) throw std::runtime_error("bicgstab: breakdown (rho)");
        const double beta = (rho1 / rho) * (alpha / omega);
        p = r + beta * (p - omega * v);
        v = op(p);
        const double rhv = rhat.dot(v);
        if (std::abs(rhv) < breakdown) throw std::runtime_error("bicgstab: breakdown (rhat.v)");
        alpha = rho1 / rhv;
        const Eigen::VectorXd s = r - alpha * v;
        if (s.norm() <= opts.tol * bnorm) {
            res.x += alpha * p;
            res.iterations = it;
            res.rel_residual = s.norm() / bnorm;
            return res;
        }
        const Eigen::VectorXd t = op(s);
        const double tt = t.dot(t);
        if (tt < breakdown) throw std::runtime_error("bicgstab: breakdown (t)");
        omega = t.dot(s) / tt;
        res.x += alpha * p + omega * s;
        r = s - omega * t;
        rho = rho1;
        if (r.norm() <= opts.tol * bnorm) {
            res.iterations = it;
            res.rel_residual = r.norm() / bnorm;
            return res;
        }
        if (std::abs(omega) < breakdown) throw std::runtime_error("bicgstab: breakdown (omega)");
    }
    throw std::runtime_error("bicgstab: no convergence within max iterations");
}

LinearOperator BlockSystem::schur() const {
    const Eigen::Index m = B2.rows;
    const Eigen::Index k = B1t.cols;
    auto self = *this;
    return {m, k, [self](const Eigen::VectorXd& y) -> Eigen::VectorXd {
                Eigen::VectorXd s = -self.B2(self.solve_A(self.B1t(y)));
                if (!self.C.empty()) s -= self.C(y);
                return s;
            }};
}

double BlockSystem::block_residual(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                   const Eigen::VectorXd& r1, const Eigen::VectorXd& r2) const {
    const Eigen::VectorXd res1 = A(x) + B1t(y) - r1;
    Eigen::VectorXd res2 = B2(x) - r2;
    if (!C.empty()) res2 -= C(y);
    const double num = std::sqrt(res1.squaredNorm() + res2.squaredNorm());
    const double den = std::sqrt(r1.squaredNorm() + r2.squaredNorm());
    return den > 0.0 ? num / den : num;
}

SchurSolveResult schur_solve(const BlockSystem& sys, SchurMethod method,
                             const Eigen::VectorXd& r1, const Eigen::VectorXd& r2,
                             const BicgstabOptions& krylov) {
    SchurSolveResult out;
    const Eigen::VectorXd xstar = sys.solve_A(r1);
    const Eigen::VectorXd rhs = r2 - sys.B2(xstar);
    const LinearOperator S = sys.schur();
    if (method == SchurMethod::DenseLU) {
        const Eigen::MatrixXd Sd = assemble_dense(S);
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(Sd);
        out.y = lu.solve(rhs);
        for (int sweep = 0; sweep < 2; ++sweep) out.y += lu.solve(rhs - Sd * out.y);
    } else {
        BicgstabResult kr = bicgstab(S, rhs, krylov);
        out.y = kr.x;
        out.schur_iterations = kr.iterations;
    }
    out.x = xstar - sys.solve_A(sys.B1t(out.y));
    out.block_residual = sys.block_residual(out.x, out.y, r1, r2);
    return out;
}

namespace {

Eigen::VectorXd pack_arrays(std::initializer_list<const std::vector<double>*> arrays) {
    Eigen::Index n = 0;
    for (auto* a : arrays) n += static_cast<Eigen::Index>(a->size());
    Eigen::VectorXd v(n);
    Eigen::Index at = 0;
    for (auto* a : arrays) {
        for (double x : *a) v[at++] = x;
    }
    return v;
}

void unpack_arrays(const Eigen::VectorXd& v, std::initializer_list<std::vector<double>*> arrays) {
    Eigen::Index n = 0;
    for (auto* a : arrays) n += static_cast<Eigen::Index>(a->size());
    if (v.size() != n) throw std::invalid_argument("unpack: size mismatch");
    Eigen::Index at = 0;
    for (auto* a : arrays)
        for (double& x : *a) x = v[at++];
}

}  // namespace

Eigen::VectorXd pack(const CellField& f) { return pack_arrays({&f.a.v}); }
Eigen::VectorXd pack(const FaceField& f) { return pack_arrays({&f.x.v, &f.y.v}); }
Eigen::VectorXd pack(const NodeField& f) { return pack_arrays({&f.a.v}); }
Eigen::VectorXd pack(const TensorField& f) {
    return pack_arrays({&f.xx.v, &f.xy.v, &f.yx.v, &f.yy.v});
}
Eigen::VectorXd pack(const SurfaceVector& u) { return pack_arrays({&u.x, &u.y}); }
Eigen::VectorXd pack(const SurfaceScalar& s) { return pack_arrays({&s}); }

void unpack(const Eigen::VectorXd& v, CellField& f) { unpack_arrays(v, {&f.a.v}); }
void unpack(const Eigen::VectorXd& v, FaceField& f) { unpack_arrays(v, {&f.x.v, &f.y.v}); }
void unpack(const Eigen::VectorXd& v, NodeField& f) { unpack_arrays(v, {&f.a.v}); }
void unpack(const Eigen::VectorXd& v, TensorField& f) {
    unpack_arrays(v, {&f.xx.v, &f.xy.v, &f.yx.v, &f.yy.v});
}
void unpack(const Eigen::VectorXd& v, SurfaceVector& u) { unpack_arrays(v, {&u.x, &u.y}); }
void unpack(const Eigen::VectorXd& v, SurfaceScalar& s) { unpack_arrays(v, {&s}); }

}  // namespace ibcs
