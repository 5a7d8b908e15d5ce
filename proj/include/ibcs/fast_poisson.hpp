#pragma once

#include <memory>

#include "ibcs/grid.hpp"

namespace ibcs {

/// Fast solver for the Dirichlet-closed cell Laplacian (ghost cells odd-
/// reflected about the wall faces), diagonalized by a half-sample sine
/// transform per direction. Solves laplacian_center_dirichlet(u) == rhs;
/// inhomogeneous wall data enter via dirichlet_rhs_term.
class DirichletPoisson {
  public:
    explicit DirichletPoisson(const GridSpec& g);
    ~DirichletPoisson();
    DirichletPoisson(const DirichletPoisson&) = delete;
    DirichletPoisson& operator=(const DirichletPoisson&) = delete;

    CellField solve(const CellField& rhs) const;
    const GridSpec& grid() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Fast solver for the Neumann-closed cell Laplacian, which coincides exactly
/// with divergence(gradient(.)). Singular: the constant mode of the input is
/// discarded ("zero mode set to zero") and the output has zero mean.
class NeumannPoisson {
  public:
    explicit NeumannPoisson(const GridSpec& g);
    ~NeumannPoisson();
    NeumannPoisson(const NeumannPoisson&) = delete;
    NeumannPoisson& operator=(const NeumannPoisson&) = delete;

    CellField solve(const CellField& rhs) const;
    const GridSpec& grid() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Unbounded-domain Poisson solve by convolution with the lattice Green's
/// function of the five-point Laplacian:  u = dx*dy * (G_L * rhs), so that
/// laplacian_center(u) reproduces rhs away from the window edge and u matches
/// the decaying free-space solution. Requires dx == dy and an interior-
/// supported right-hand side (a two-cell margin).
class LgfPoisson {
  public:
    explicit LgfPoisson(const GridSpec& g);
    ~LgfPoisson();
    LgfPoisson(const LgfPoisson&) = delete;
    LgfPoisson& operator=(const LgfPoisson&) = delete;

    CellField solve(const CellField& rhs) const;
    const GridSpec& grid() const;

    /// G_L(m,n) for the unit-spacing lattice, normalized by G_L(0,0) = 0.
    static double lgf_value(int m, int n);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace ibcs
