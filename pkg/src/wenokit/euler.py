"""Gas-dynamics algebra for the 1D/2D compressible Euler systems.

Conserved layouts: (rho, rho*u, E) in 1D and (rho, rho*u, rho*v, E) in 2D,
with E = p/(gamma-1) + rho*|u|^2/2.  All routines broadcast over leading
axes and are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class NonphysicalState(Exception):
    """Density or pressure lost positivity; carries a location diagnostic."""

    def __init__(self, message, where=None, step=None, time=None):
        self.where = where
        self.step = step
        self.time = time
        extra = ""
        if step is not None:
            extra += f" at step {step}"
        if time is not None:
            extra += f", t={time:.6g}"
        if where is not None:
            extra += f", location {where}"
        super().__init__(message + extra)


@dataclass(frozen=True)
class GasModel:
    gamma: float = 1.4

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError("gamma must exceed 1")


def _check_positive(rho, p, context):
    bad = ~((rho > 0.0) & (p > 0.0) & np.isfinite(rho) & np.isfinite(p))
    if np.any(bad):
        where = np.argwhere(np.atleast_1d(bad))[0]
        raise NonphysicalState(f"nonphysical state in {context}", where=tuple(int(i) for i in where))


def _prim_raw(U, g: GasModel) -> np.ndarray:
    """Primitive extraction without positivity checks.

    Internal quadrature states of a Runge-Kutta step may transiently lose
    pressure positivity near colliding shocks; the algebraic flux is still
    well defined there and the convex stage recombination absorbs the
    excursion.  Committed solution states are always validated.
    """
    U = np.asarray(U, dtype=np.float64)
    rho = U[..., 0]
    kinetic = np.zeros_like(rho)
    P = np.empty_like(U)
    P[..., 0] = rho
    with np.errstate(divide="ignore", invalid="ignore"):
        for c in range(1, U.shape[-1] - 1):
            vel = U[..., c] / rho
            P[..., c] = vel
            kinetic += 0.5 * rho * vel * vel
    P[..., -1] = (g.gamma - 1.0) * (U[..., -1] - kinetic)
    return P


def _safe_sound_speed(P, g: GasModel) -> np.ndarray:
    rho = np.maximum(P[..., 0], 1e-300)
    p = np.maximum(P[..., -1], 0.0)
    return np.sqrt(g.gamma * p / rho)


def cons_to_prim(U, g: GasModel) -> np.ndarray:
    """(rho, rho*u[, rho*v], E) -> (rho, u[, v], p).  Raises on rho<=0 or p<=0."""
    P = _prim_raw(U, g)
    _check_positive(P[..., 0], P[..., -1], "cons_to_prim")
    return P


def prim_to_cons(P, g: GasModel) -> np.ndarray:
    P = np.asarray(P, dtype=np.float64)
    rho = P[..., 0]
    U = np.empty_like(P)
    U[..., 0] = rho
    kinetic = np.zeros_like(rho)
    for c in range(1, P.shape[-1] - 1):
        U[..., c] = rho * P[..., c]
        kinetic += 0.5 * rho * P[..., c] ** 2
    U[..., -1] = P[..., -1] / (g.gamma - 1.0) + kinetic
    return U


def sound_speed(rho, p, g: GasModel) -> np.ndarray:
    rho = np.asarray(rho, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    _check_positive(rho, p, "sound_speed")
    return np.sqrt(g.gamma * p / rho)


def flux(U, g: GasModel, axis: int = 0) -> np.ndarray:
    """Physical flux along ``axis`` (0 -> x, 1 -> y) for 1D or 2D layouts."""
    U = np.asarray(U, dtype=np.float64)
    P = _prim_raw(U, g)
    ncomp = U.shape[-1]
    vn = P[..., 1 + axis]
    p = P[..., -1]
    F = np.empty_like(U)
    F[..., 0] = U[..., 0] * vn
    for c in range(1, ncomp - 1):
        F[..., c] = U[..., c] * vn
    F[..., 1 + axis] += p
    F[..., -1] = (U[..., -1] + p) * vn
    return F


def max_wave_speed(U, g: GasModel, axis: int = 0) -> float:
    P = _prim_raw(U, g)
    c = _safe_sound_speed(P, g)
    return float(np.max(np.abs(P[..., 1 + axis]) + c))


# ---------------------------------------------------------------------------
# characteristic decomposition (1D)


def _roe_average_raw(UL, UR, g: GasModel):
    PL = _prim_raw(UL, g)
    PR = _prim_raw(UR, g)
    rl = np.sqrt(np.maximum(PL[..., 0], 1e-300))
    rr = np.sqrt(np.maximum(PR[..., 0], 1e-300))
    w = 1.0 / (rl + rr)
    u = (rl * PL[..., 1] + rr * PR[..., 1]) * w
    HL = (UL[..., 2] + PL[..., 2]) / PL[..., 0]
    HR = (UR[..., 2] + PR[..., 2]) / PR[..., 0]
    H = (rl * HL + rr * HR) * w
    c2 = (g.gamma - 1.0) * (H - 0.5 * u * u)
    # floor engages only for nonphysical stage transients (see _fused notes)
    c2min = 1e-3 * (0.5 * u * u + (g.gamma - 1.0) * np.abs(H)) + 1e-300
    return u, H, np.sqrt(np.maximum(c2, c2min))


def roe_average(UL, UR, g: GasModel):
    """Roe-averaged (u, H, c) between two conserved 1D states."""
    cons_to_prim(UL, g)
    cons_to_prim(UR, g)
    u, H, c = _roe_average_raw(np.asarray(UL, dtype=np.float64),
                               np.asarray(UR, dtype=np.float64), g)
    if np.any((g.gamma - 1.0) * (H - 0.5 * u * u) <= 0.0):
        raise NonphysicalState("Roe-averaged sound speed lost positivity")
    return u, H, c


def _basis_from_average(u, H, c, g: GasModel):
    u = np.asarray(u)
    shape = u.shape
    gm1 = g.gamma - 1.0
    b2 = gm1 / (c * c)
    b1 = 0.5 * b2 * u * u

    R = np.empty(shape + (3, 3))
    R[..., 0, 0] = 1.0
    R[..., 0, 1] = 1.0
    R[..., 0, 2] = 1.0
    R[..., 1, 0] = u - c
    R[..., 1, 1] = u
    R[..., 1, 2] = u + c
    R[..., 2, 0] = H - u * c
    R[..., 2, 1] = 0.5 * u * u
    R[..., 2, 2] = H + u * c

    L = np.empty(shape + (3, 3))
    L[..., 0, 0] = 0.5 * (b1 + u / c)
    L[..., 0, 1] = -0.5 * (b2 * u + 1.0 / c)
    L[..., 0, 2] = 0.5 * b2
    L[..., 1, 0] = 1.0 - b1
    L[..., 1, 1] = b2 * u
    L[..., 1, 2] = -b2
    L[..., 2, 0] = 0.5 * (b1 - u / c)
    L[..., 2, 1] = -0.5 * (b2 * u - 1.0 / c)
    L[..., 2, 2] = 0.5 * b2
    return L, R


def roe_basis(UL, UR, g: GasModel):
    """Left/right eigenvector matrices of the flux Jacobian at the Roe state.

    Returns (L, R) with trailing shape (3, 3); rows of L and columns of R are
    ordered by the eigenvalues (u-c, u, u+c), and L @ R = I.
    """
    UL = np.asarray(UL, dtype=np.float64)
    UR = np.asarray(UR, dtype=np.float64)
    u, H, c = roe_average(UL, UR, g)
    return _basis_from_average(u, H, c, g)


def _roe_basis_raw(UL, UR, g: GasModel):
    u, H, c = _roe_average_raw(np.asarray(UL, dtype=np.float64),
                               np.asarray(UR, dtype=np.float64), g)
    return _basis_from_average(u, H, c, g)


def roe_eigenvalues(UL, UR, g: GasModel):
    u, _, c = roe_average(UL, UR, g)
    return np.stack([u - c, u, u + c], axis=-1)


def lf_split_char(stencil_states, stencil_fluxes, basis, alpha: float):
    """Global Lax-Friedrichs split in the local characteristic fields.

    ``stencil_states``/``stencil_fluxes`` hold the six-point neighbourhood of
    one interface (leading axes allowed, then (6, 3)); ``basis`` is the left
    eigenvector matrix there.  Returns (plus_window, minus_window), each
    (..., 5, 3): the plus window feeds ``reconstruct``, the minus window feeds
    ``reconstruct_mirrored``, and the recombination is R @ (sum of the two
    reconstructed characteristic values).
    """
    U = np.asarray(stencil_states, dtype=np.float64)
    F = np.asarray(stencil_fluxes, dtype=np.float64)
    L = np.asarray(basis, dtype=np.float64)
    w = np.einsum("...mc,...pc->...pm", L, U)
    gch = np.einsum("...mc,...pc->...pm", L, F)
    plus = 0.5 * (gch + alpha * w)
    minus = 0.5 * (gch - alpha * w)
    return plus[..., :5, :], minus[..., 1:6, :]


# ---------------------------------------------------------------------------
# Steger-Warming flux vector splitting


def steger_warming_split(U, g: GasModel, axis: int = 0, delta: float = 1e-6,
                         strict: bool = True):
    """Split the physical flux along ``axis`` into F+ and F- by eigenvalue sign.

    Eigenvalues are smoothed as (lam +- sqrt(lam^2 + delta^2))/2, which keeps
    F+ + F- = F exact and removes the derivative kink at sonic points.
    Handles the 1D (3-component) and 2D (4-component) layouts.  With
    ``strict=False`` (internal stage evaluations) positivity is not asserted
    and the sound speed is floored instead.
    """
    U = np.asarray(U, dtype=np.float64)
    ncomp = U.shape[-1]
    P = cons_to_prim(U, g) if strict else _prim_raw(U, g)
    rho = P[..., 0]
    c = _safe_sound_speed(P, g)
    vn = P[..., 1 + axis]

    lam1 = vn - c
    lam2 = vn
    lam4 = vn + c

    def split(lam):
        root = np.sqrt(lam * lam + delta * delta)
        return 0.5 * (lam + root), 0.5 * (lam - root)

    l1p, l1m = split(lam1)
    l2p, l2m = split(lam2)
    l4p, l4m = split(lam4)

    gm1 = g.gamma - 1.0
    pref = rho / (2.0 * g.gamma)
    q2 = np.zeros_like(rho)
    for cidx in range(1, ncomp - 1):
        q2 += P[..., cidx] ** 2

    def assemble(l1, l2, l4):
        F = np.empty_like(U)
        F[..., 0] = pref * (2.0 * gm1 * l2 + l1 + l4)
        for cidx in range(1, ncomp - 1):
            vel = P[..., cidx]
            F[..., cidx] = pref * (2.0 * gm1 * l2 * vel + l1 * vel + l4 * vel)
        F[..., 1 + axis] += pref * c * (l4 - l1)
        w_term = (3.0 - g.gamma) / (2.0 * gm1) * (l1 + l4) * c * c
        F[..., -1] = pref * (
            gm1 * l2 * q2
            + 0.5 * l1 * (q2 - 2.0 * vn * c + c * c)
            + 0.5 * l4 * (q2 + 2.0 * vn * c + c * c)
            + w_term
        )
        return F

    return assemble(l1p, l2p, l4p), assemble(l1m, l2m, l4m)
