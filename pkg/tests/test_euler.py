"""Gas-dynamics algebra tests: state conversions, eigenstructure, splittings."""

import numpy as np
import pytest

from wenokit import euler, kernel
from wenokit.euler import GasModel, NonphysicalState
from wenokit.kernel import SchemeConfig

RNG = np.random.default_rng(1234)
GAS = GasModel(1.4)


def random_prim_states(n, dim=1):
    ncomp = dim + 2
    P = np.empty((n, ncomp))
    P[:, 0] = RNG.uniform(0.1, 5.0, n)
    for c in range(1, ncomp - 1):
        P[:, c] = RNG.normal(0.0, 2.0, n)
    P[:, -1] = RNG.uniform(0.05, 10.0, n)
    return P


# ---------------------------------------------------------------------------
# conversions


def test_cons_to_prim_basic():
    P = euler.cons_to_prim(np.array([1.0, 0.0, 2.5]), GAS)
    np.testing.assert_allclose(P, [1.0, 0.0, 1.0], rtol=1e-14)


def test_prim_cons_round_trip():
    P = random_prim_states(500)
    np.testing.assert_allclose(
        euler.cons_to_prim(euler.prim_to_cons(P, GAS), GAS), P, rtol=1e-13, atol=1e-14
    )
    P2 = random_prim_states(500, dim=2)
    np.testing.assert_allclose(
        euler.cons_to_prim(euler.prim_to_cons(P2, GAS), GAS), P2, rtol=1e-13, atol=1e-14
    )


def test_shock_tube_left_state_round_trip():
    prim = np.array([3.857143, 2.629369, 31.0 / 3.0])
    U = euler.prim_to_cons(prim, GAS)
    np.testing.assert_allclose(euler.cons_to_prim(U, GAS), prim, rtol=1e-14)


def test_cons_to_prim_raises_on_nonphysical():
    with pytest.raises(NonphysicalState):
        euler.cons_to_prim(np.array([-1.0, 0.0, 2.5]), GAS)
    with pytest.raises(NonphysicalState):
        euler.cons_to_prim(np.array([1.0, 10.0, 2.5]), GAS)  # kinetic > total


def test_sound_speed_values():
    assert euler.sound_speed(1.0, 1.0, GAS) == pytest.approx(np.sqrt(1.4), rel=1e-15)
    assert euler.sound_speed(1.4, 1.0, GAS) == pytest.approx(1.0, rel=1e-15)
    assert euler.sound_speed(2.0, 1.0, GasModel(5.0 / 3.0)) == pytest.approx(
        np.sqrt(5.0 / 6.0), rel=1e-15
    )
    with pytest.raises(NonphysicalState):
        euler.sound_speed(1.0, -1.0, GAS)


# ---------------------------------------------------------------------------
# characteristic basis


def flux_jacobian_fd(U, h=1e-7):
    """Finite-difference Jacobian of the 1D flux, the independent reference."""
    J = np.empty((3, 3))
    for c in range(3):
        d = np.zeros(3)
        d[c] = h * max(1.0, abs(U[c]))
        J[:, c] = (euler.flux(U + d, GAS) - euler.flux(U - d, GAS)) / (2 * d[c])
    return J


def test_roe_basis_inverse_pair():
    P = random_prim_states(1000)
    U = euler.prim_to_cons(P, GAS)
    L, R = euler.roe_basis(U[:-1], U[1:], GAS)
    prod = np.einsum("imc,icn->imn", L, R)
    assert np.max(np.abs(prod - np.eye(3))) <= 1e-11


def test_roe_basis_diagonalizes_jacobian_at_identical_states():
    for _ in range(25):
        P = random_prim_states(1)[0]
        U = euler.prim_to_cons(P, GAS)
        L, R = euler.roe_basis(U, U, GAS)
        lam = euler.roe_eigenvalues(U, U, GAS)
        A = R @ np.diag(lam) @ L
        scale = np.max(np.abs(flux_jacobian_fd(U)))
        np.testing.assert_allclose(A, flux_jacobian_fd(U), atol=1e-5 * scale)


def test_roe_eigenvalues_analytic():
    P = random_prim_states(200)
    U = euler.prim_to_cons(P, GAS)
    lam = euler.roe_eigenvalues(U, U, GAS)
    c = np.sqrt(1.4 * P[:, 2] / P[:, 0])
    np.testing.assert_allclose(lam[:, 0], P[:, 1] - c, rtol=1e-10)
    np.testing.assert_allclose(lam[:, 1], P[:, 1], rtol=1e-10, atol=1e-12)
    np.testing.assert_allclose(lam[:, 2], P[:, 1] + c, rtol=1e-10)


def test_characteristic_round_trip():
    P = random_prim_states(300)
    U = euler.prim_to_cons(P, GAS)
    L, R = euler.roe_basis(U[:-1], U[1:], GAS)
    x = RNG.normal(size=(299, 3))
    back = np.einsum("icm,im->ic", R, np.einsum("imc,ic->im", L, x))
    np.testing.assert_allclose(back, x, atol=1e-11 * np.max(np.abs(x)))


# ---------------------------------------------------------------------------
# LF characteristic splitting


def test_lf_split_uniform_stream_recovers_exact_flux():
    prim = np.array([1.3, 0.7, 2.0])
    U = np.tile(euler.prim_to_cons(prim, GAS), (6, 1))
    F = euler.flux(U, GAS)
    L, R = euler.roe_basis(U[2], U[3], GAS)
    alpha = euler.max_wave_speed(U, GAS)
    plus, minus = euler.lf_split_char(U, F, L, alpha)
    cfg = SchemeConfig.make("zn")
    qp = kernel.reconstruct(np.swapaxes(plus, 0, 1), cfg)
    qm = kernel.reconstruct_mirrored(np.swapaxes(minus, 0, 1), cfg)
    fhat = R @ (qp + qm)
    np.testing.assert_allclose(fhat, euler.flux(U[0], GAS), rtol=1e-12)


def test_lf_split_degenerate_upwind():
    # single characteristic field with flux exactly alpha * state: the
    # negative split must vanish identically
    U = RNG.normal(size=(6, 3))
    alpha = 3.0
    F = alpha * U
    L = np.eye(3)
    plus, minus = euler.lf_split_char(U, F, L, alpha)
    np.testing.assert_allclose(minus, 0.0, atol=1e-14)
    np.testing.assert_allclose(plus, np.swapaxes(F[:5], 0, 0), rtol=1e-14)


def test_lf_split_matches_scalar_mode_oracle():
    # brute-force oracle: do the whole split/reconstruct componentwise in
    # characteristic space with plain loops
    P = np.array(
        [
            [1.0, 0.0, 1.0],
            [1.0, 0.0, 1.0],
            [1.0, 0.0, 1.0],
            [0.125, 0.0, 0.1],
            [0.125, 0.0, 0.1],
            [0.125, 0.0, 0.1],
        ]
    )
    U = euler.prim_to_cons(P, GAS)
    F = euler.flux(U, GAS)
    L, R = euler.roe_basis(U[2], U[3], GAS)
    alpha = euler.max_wave_speed(U, GAS)
    cfg = SchemeConfig.make("z")

    plus, minus = euler.lf_split_char(U, F, L, alpha)
    qp = kernel.reconstruct(np.swapaxes(plus, 0, 1), cfg)
    qm = kernel.reconstruct_mirrored(np.swapaxes(minus, 0, 1), cfg)
    fhat = R @ (qp + qm)

    fhat_oracle = np.zeros(3)
    for m in range(3):
        w = np.array([L[m] @ U[p] for p in range(6)])
        gch = np.array([L[m] @ F[p] for p in range(6)])
        gp = 0.5 * (gch + alpha * w)
        gm = 0.5 * (gch - alpha * w)
        val = kernel.reconstruct(gp[:5], cfg) + kernel.reconstruct(gm[1:6][::-1], cfg)
        fhat_oracle += R[:, m] * val
    np.testing.assert_allclose(fhat, fhat_oracle, rtol=1e-13)


def test_lf_split_sums_exactly_to_characteristic_flux():
    P = random_prim_states(8)[:6]
    U = euler.prim_to_cons(P, GAS)
    F = euler.flux(U, GAS)
    L, _ = euler.roe_basis(U[2], U[3], GAS)
    alpha = euler.max_wave_speed(U, GAS)
    plus, minus = euler.lf_split_char(U, F, L, alpha)
    gch = np.einsum("mc,pc->pm", L, F)
    # windows overlap on points 1..4; their sum telescopes back (to rounding)
    scale = np.max(np.abs(gch))
    np.testing.assert_allclose(plus[1:5] + minus[0:4], gch[1:5], atol=2e-16 * scale)


def test_lf_split_monotone_in_characteristic_state():
    # with alpha above the spectral radius, each split characteristic flux is
    # monotone in its own characteristic variable (finite-difference check on
    # interface-neighbour states, where the frozen basis tracks the Jacobian)
    for _ in range(50):
        P0 = random_prim_states(1)[0]
        P1 = P0 * (1.0 + 0.05 * RNG.uniform(-1, 1, 3))
        U = euler.prim_to_cons(np.stack([P0, P1]), GAS)
        L, R = euler.roe_basis(U[0], U[1], GAS)
        lam = euler.roe_eigenvalues(U[0], U[1], GAS)
        alpha = 1.5 * np.max(np.abs(lam))
        for m in range(3):
            # perturb along the m-th right eigenvector
            h = 1e-6
            Up = U[0] + h * R[:, m]
            Um = U[0] - h * R[:, m]
            gp_p = L[m] @ (euler.flux(Up, GAS) + alpha * Up)
            gp_m = L[m] @ (euler.flux(Um, GAS) + alpha * Um)
            gm_p = L[m] @ (euler.flux(Up, GAS) - alpha * Up)
            gm_m = L[m] @ (euler.flux(Um, GAS) - alpha * Um)
            assert gp_p - gp_m >= -1e-9 * abs(gp_p)
            assert gm_p - gm_m <= 1e-9 * abs(gm_p)


# ---------------------------------------------------------------------------
# Steger-Warming splitting


def test_sw_consistency_random_states():
    for dim in (1, 2):
        P = random_prim_states(1000, dim=dim)
        U = euler.prim_to_cons(P, GAS)
        for axis in range(dim):
            Fp, Fm = euler.steger_warming_split(U, GAS, axis=axis)
            F = euler.flux(U, GAS, axis=axis)
            np.testing.assert_allclose(Fp + Fm, F, rtol=1e-12, atol=1e-12)


def test_sw_supersonic_full_upwinding():
    prim = np.array([1.0, 4.0, 0.0, 1.0])  # u = 4 > c = 1.18
    U = euler.prim_to_cons(prim, GAS)
    Fp, Fm = euler.steger_warming_split(U, GAS, axis=0, delta=1e-6)
    F = euler.flux(U, GAS, axis=0)
    assert np.max(np.abs(Fm)) <= 1e-6 * np.max(np.abs(F))
    np.testing.assert_allclose(Fp, F, rtol=1e-6)


def test_sw_stagnant_mirror_symmetry():
    prim = np.array([2.0, 0.0, 0.0, 3.0])
    U = euler.prim_to_cons(prim, GAS)
    Fp, Fm = euler.steger_warming_split(U, GAS, axis=0)
    # normal-momentum components equal, the others mirror with a sign flip
    assert Fp[1] == pytest.approx(Fm[1], rel=1e-9)
    assert Fp[0] == pytest.approx(-Fm[0], rel=1e-9)
    assert Fp[3] == pytest.approx(-Fm[3], rel=1e-9)
    assert Fp[1] + Fm[1] == pytest.approx(3.0, rel=1e-12)  # sums to the pressure


def test_sw_strict_raises_on_nonphysical():
    U = np.array([1.0, 0.0, 0.0, -1.0])
    with pytest.raises(NonphysicalState):
        euler.steger_warming_split(U, GAS, axis=0)
