"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import ibcs


def test_grid_and_operators():
    g = ibcs.make_grid(16, 16, 1.0 / 16, 1.0 / 16, [0.5 / 16, 0.5 / 16])
    assert g.nx == 16 and g.dx == pytest.approx(1.0 / 16)
    rng = np.random.default_rng(3)
    s = rng.standard_normal((16, 16))
    gx, gy = ibcs.gradient(g, s)
    assert gx.shape == (16, 15) and gy.shape == (15, 16)
    # D(G s) == L s away from the boundary
    lap_dg = ibcs.divergence(g, gx, gy)
    lap = ibcs.laplacian_center(g, s)
    assert np.max(np.abs(lap_dg[1:-1, 1:-1] - lap[1:-1, 1:-1])) < 1e-10


def test_kernel_moments():
    k = ibcs.Kernel.smoothed_three_point()
    assert k.support_radius == 2.0
    for shift in (0.0, 0.25, 0.77):
        assert ibcs.moment_residual(k, 0, shift) <= 1e-12
        assert ibcs.moment_residual(k, 1, shift) <= 1e-12


def test_identity_suite():
    res = ibcs.identity_suite(n=16, fields=3, seed=5)
    assert len(res) >= 12
    assert max(res.values()) <= 1e-12


def test_poisson1d_orders():
    coarse = ibcs.poisson1d_solve(n=32, formulation="composite")
    fine = ibcs.poisson1d_solve(n=64, formulation="composite")
    assert coarse["constraint_residual"] < 1e-9
    # forcing approaches the exact gradient jump of 4
    assert abs(fine["jump"] - 4.0) < abs(coarse["jump"] - 4.0)
    assert abs(fine["jump"] - fine["exact_jump"]) < 1e-2


def test_poisson2d_composite():
    out = ibcs.poisson2d_solve(nx=20, ds_dx=1.0, formulation=ibcs.Formulation.composite)
    assert out["block_residual"] < 1e-9
    err = np.max(np.abs(out["u"] - out["exact"]))
    assert err < 0.1
    jump_err = np.max(np.abs(np.array(out["jump"]) - np.array(out["exact_jump"])))
    assert jump_err < 0.2


def test_couette_short_run():
    out = ibcs.couette_run(nx=24, ds_dx=1.0, steady_tol=1e-4)
    assert out["max_noslip"] < 1e-8
    assert out["max_continuity"] < 1e-8
    # rim speed magnitude appears near the inner cylinder
    assert np.max(np.abs(out["vy"])) > 0.5
    assert ibcs.couette_exact_vtheta(1.0) == pytest.approx(1.0)
    inner, outer = ibcs.couette_jumps()
    assert inner == pytest.approx(-8.0 / 3.0)
    assert outer == pytest.approx(2.0 / 3.0)


def test_body_roundtrip(tmp_path):
    b = ibcs.circle_body([0.0, 0.0], 1.0, 16, ibcs.Orientation.outward)
    path = str(tmp_path / "body.txt")
    ibcs.save_body(b, path)
    r = ibcs.load_body(path)
    assert r.count == b.count
    assert r.x[0] == pytest.approx(1.0)


def test_study_report_shape():
    rep = ibcs.run_poisson1d_study([16, 32, 64])
    assert rep["study"] == "poisson1d"
    assert len(rep["rows"]) == 9
    assert rep["slopes"]["composite|err_inf_masked"] > 1.5
