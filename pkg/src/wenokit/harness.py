"""Verification machinery: error norms, observed orders, the critical-point
convergence study, unit-jump/global-indicator diagnostics and the
amplitude-similarity checker.

The critical-point study runs in exact rational arithmetic.  Its finest-level
errors sit many orders of magnitude below float64 resolution relative to the
O(1) derivative being approximated, so the whole reconstruction is evaluated
over ``fractions.Fraction`` with exp(x) replaced by a degree-30 rational
Taylor polynomial (remainder ~1e-69 on the widest window used).  The float
kernel is pinned against this evaluator at coarse spacings by the test suite.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from wenokit import kernel, problems, solver
from wenokit.euler import GasModel
from wenokit.kernel import SchemeConfig
from wenokit.solver import GHOST


class GridMismatch(Exception):
    """Fields cannot be compared by index mapping."""


# ---------------------------------------------------------------------------
# norms and orders


def error_norms(numerical, reference):
    """(L1, L2, Linf) of the pointwise difference over interior nodes.

    The reference may live on a finer grid whose points contain the coarse
    points under index mapping (same cell-offset layout: the refinement
    factor must be a whole odd number); otherwise GridMismatch is raised.
    """
    a = np.asarray(numerical, dtype=np.float64)
    b = np.asarray(reference, dtype=np.float64)
    if a.shape != b.shape:
        if a.ndim != 1 or b.ndim != 1 or b.size < a.size:
            raise GridMismatch(f"cannot map shapes {b.shape} onto {a.shape}")
        m, rem = divmod(b.size, a.size)
        if rem != 0 or m % 2 == 0:
            raise GridMismatch(
                f"reference size {b.size} is not an odd whole multiple of {a.size}"
            )
        b = b[(m - 1) // 2 :: m]
    d = np.abs(a - b)
    return (
        float(d.mean()),
        float(np.sqrt(np.mean(d * d))),
        float(d.max()),
    )


def observed_orders(errors: Sequence[float]) -> list:
    """log2 ratios of consecutive errors; first entry is None."""
    out = [None]
    for prev, cur in zip(errors, errors[1:]):
        out.append(math.log2(prev / cur) if prev > 0 and cur > 0 else float("nan"))
    return out


@dataclass(frozen=True)
class ConvergenceRecord:
    dx: float
    error: float
    observed_order: Optional[float]


# ---------------------------------------------------------------------------
# exact rational kernel evaluation


_R13_12 = Fraction(13, 12)
_R1_4 = Fraction(1, 4)
_C_OPT = (Fraction(1, 10), Fraction(3, 5), Fraction(3, 10))


def rational_exp(x: Fraction, terms: int = 30) -> Fraction:
    acc = Fraction(1)
    term = Fraction(1)
    for n in range(1, terms + 1):
        term *= x / n
        acc += term
    return acc


def _rational_sqrt(x: Fraction, digits: int = 60) -> Fraction:
    if x < 0:
        raise ValueError("negative operand")
    if x == 0:
        return Fraction(0)
    scale = 10**digits
    return Fraction(math.isqrt((x.numerator * scale * scale) // x.denominator), scale)


def exact_smoothness(w):
    f0, f1, f2, f3, f4 = w
    is0 = _R13_12 * (f0 - 2 * f1 + f2) ** 2 + _R1_4 * (f0 - 4 * f1 + 3 * f2) ** 2
    is1 = _R13_12 * (f1 - 2 * f2 + f3) ** 2 + _R1_4 * (f1 - f3) ** 2
    is2 = _R13_12 * (f2 - 2 * f3 + f4) ** 2 + _R1_4 * (3 * f2 - 4 * f3 + f4) ** 2
    return is0, is1, is2


def exact_weights(w, cfg: SchemeConfig):
    """Scheme weights over exact rationals; mirrors the float kernel."""
    f0, f1, f2, f3, f4 = w
    is0, is1, is2 = exact_smoothness(w)
    eps = Fraction(cfg.epsilon)
    iss = (is0, is1, is2)

    if cfg.kind == "js":
        al = [c / (s + eps) ** 2 for c, s in zip(_C_OPT, iss)]
    elif cfg.kind == "z":
        t5 = abs(is0 - is2)
        q = cfg.q_power
        al = [c * (1 + (t5 / (s + eps)) ** q) for c, s in zip(_C_OPT, iss)]
    elif cfg.kind == "za":
        g1 = Fraction(cfg.gamma1)
        g2 = Fraction(cfg.gamma2)
        d1l = Fraction(1, 2) * (f0 - 4 * f1 + 3 * f2)
        d1r = Fraction(1, 2) * (-3 * f2 + 4 * f3 - f4)
        d2l = f0 - 2 * f1 + f2
        d2r = f2 - 2 * f3 + f4
        gsi = g1 * (abs(d1l) - abs(d1r)) ** 2 + g2 * (abs(d2l) - abs(d2r)) ** 2
        amp = gsi / (is0 + is2 - gsi + eps)
        al = [c * (1 + amp * gsi / (s + eps)) for c, s in zip(_C_OPT, iss)]
    elif cfg.kind == "zn":
        t5 = abs(is0 - is2)
        big_c = Fraction(cfg.a_const) * ((is0 + is2 - t5 + eps) / (t5 + eps)) ** 2
        t8 = (f0 - 4 * f1 + 6 * f2 - 4 * f3 + f4) ** 2
        al = [c * (big_c + t8 / (s + eps)) for c, s in zip(_C_OPT, iss)]
    else:
        t5 = abs(is0 - is2)
        q = cfg.q_power
        phi = min(Fraction(1), _rational_sqrt(abs(is0 - 2 * is1 + is2)))
        if cfg.kind == "d":
            al = [c * (1 + phi * (t5 / (s + eps)) ** q) for c, s in zip(_C_OPT, iss)]
        else:
            al = [c * max(Fraction(1), phi * (t5 / (s + eps)) ** q) for c, s in zip(_C_OPT, iss)]

    total = sum(al)
    return tuple(a / total for a in al)


def exact_reconstruct(w, cfg: SchemeConfig) -> Fraction:
    f0, f1, f2, f3, f4 = w
    om = exact_weights(w, cfg)
    q0 = Fraction(1, 3) * f0 - Fraction(7, 6) * f1 + Fraction(11, 6) * f2
    q1 = -Fraction(1, 6) * f1 + Fraction(5, 6) * f2 + Fraction(1, 3) * f3
    q2 = Fraction(1, 3) * f2 + Fraction(5, 6) * f3 - Fraction(1, 6) * f4
    return om[0] * q0 + om[1] * q1 + om[2] * q2


# ---------------------------------------------------------------------------
# critical-point convergence study


def monomial_exp_samples(k: int, dx: Fraction, offsets: Iterable[int]):
    """Exact samples of x^k * exp(x) (rational Taylor exp) at offsets*dx."""
    return [(i * dx) ** k * rational_exp(i * dx) for i in offsets]


def critical_point_study(k: int, scheme: SchemeConfig, levels: int = 8,
                         dx0: Fraction = Fraction(1, 40)) -> list:
    """Refinement of the flux-difference derivative error at the origin node.

    The test function is x^k * exp(x); for k=2 the origin is a first-order
    critical point, for k=3 a second-order one.  The error is
    |(fhat_{+1/2} - fhat_{-1/2})/dx - f'(0)| with both interface values
    reconstructed by the configured scheme.
    """
    if k not in (1, 2, 3):
        raise ValueError("k must be 1, 2 or 3")
    if levels < 3:
        raise ValueError("need at least 3 levels")
    fprime0 = Fraction(1) if k == 1 else Fraction(0)
    records = []
    prev_err = None
    for lev in range(levels):
        dx = dx0 / 2**lev
        w_plus = monomial_exp_samples(k, dx, range(-2, 3))
        w_minus = monomial_exp_samples(k, dx, range(-3, 2))
        deriv = (exact_reconstruct(w_plus, scheme) - exact_reconstruct(w_minus, scheme)) / dx
        err = abs(deriv - fprime0)
        order = None
        if prev_err is not None and err > 0 and prev_err > 0:
            order = float(math.log2(float(prev_err / err)))
        records.append(ConvergenceRecord(float(dx), float(err), order))
        prev_err = err
    return records


# ---------------------------------------------------------------------------
# published-table diagnostics


def _u0_left_branch(x):
    """Jump-sine profile taking the lower branch at the jump node itself."""
    x = np.asarray(x, dtype=np.float64)
    base = -np.sin(np.pi * x) - 0.5 * x**3
    return np.where(x > 0.0, base + 1.0, base)


@dataclass(frozen=True)
class IndicatorRow:
    x: float
    u0: float
    tau5: float
    tau8: float
    ratio_z: float
    ratio_zn: float


def table2_diagnostics(dx: float = 0.02, epsilon: float = 1e-40,
                       a_const: float = 10.0, x_window=(-0.08, 0.1)) -> list:
    """Per-node global-indicator and contribution-ratio diagnostics for the
    jump-sine profile on [-1, 1].

    Nodes are x_i = i*dx; rows are emitted for nodes inside ``x_window``.
    """
    z = SchemeConfig.make("z", epsilon=epsilon)
    zn = SchemeConfig.make("zn", epsilon=epsilon, a_const=a_const)
    n_half = int(round(1.0 / dx))
    idx = np.arange(-n_half, n_half + 1)
    x = idx * dx
    u = _u0_left_branch(x)
    rows = []
    for j in range(2, len(x) - 2):
        if not (x_window[0] - 1e-12 <= x[j] <= x_window[1] + 1e-12):
            continue
        w = u[j - 2 : j + 3]
        s = kernel.local_smoothness(w)
        rows.append(
            IndicatorRow(
                x=float(x[j]),
                u0=float(u[j]),
                tau5=float(kernel.tau5(s)),
                tau8=float(kernel.tau8(w)),
                ratio_z=float(kernel.contribution_ratio(w, z)),
                ratio_zn=float(kernel.contribution_ratio(w, zn)),
            )
        )
    return rows


def tau_coefficient_check():
    """Unit-jump coefficients of the two global indicators, with the exact
    expected tuples; returns (tau5_coeffs, tau8_coeffs, ok)."""
    t5 = []
    t8 = []
    for cut in range(1, 5):
        w = (np.arange(5) >= cut).astype(float)
        t5.append(float(kernel.tau5(kernel.local_smoothness(w))))
        t8.append(float(kernel.tau8(w)))
    expect5 = (4.0 / 3.0, 10.0 / 3.0, 10.0 / 3.0, 4.0 / 3.0)
    expect8 = (1.0, 9.0, 9.0, 1.0)
    ok = all(abs(a - b) <= 1e-14 for a, b in zip(t5, expect5)) and all(
        abs(a - b) <= 1e-14 for a, b in zip(t8, expect8)
    )
    return tuple(t5), tuple(t8), ok


# ---------------------------------------------------------------------------
# solver-level studies


def advect_case1(scheme: SchemeConfig, amplitude: float, n: int = 200,
                 t_end: float = 6.0, cfl: float = 0.5):
    """Run the composite-profile advection case; returns interior values."""
    spec = problems.get("advect1", amplitude=amplitude)
    grid = spec.grid(n)
    u = spec.initial_field(grid)
    phys = solver.LinearAdvection(1.0)
    u, _ = solver.advance_1d(
        u, grid, t_end, scheme, phys, spec.bc["left"], spec.bc["right"], cfl=cfl
    )
    return u[GHOST : GHOST + n]


@dataclass(frozen=True)
class SimilarityReport:
    amplitudes: tuple
    deviations: dict  # scheme label -> max relative deviation


def similarity_study(schemes: dict, amplitudes=(0.01, 1.0, 100.0), n: int = 200,
                     t_end: float = 6.0) -> SimilarityReport:
    """Amplitude-similarity check on the composite advection profile.

    ``schemes`` maps labels to SchemeConfig.  For each scheme the solutions at
    all amplitudes are rescaled onto the unit-amplitude run and the maximum
    relative deviation is reported.
    """
    deviations = {}
    for label, cfg in schemes.items():
        base = advect_case1(cfg, 1.0, n=n, t_end=t_end)
        norm = float(np.max(np.abs(base)))
        worst = 0.0
        for amp in amplitudes:
            if amp == 1.0:
                continue
            ua = advect_case1(cfg, amp, n=n, t_end=t_end)
            worst = max(worst, float(np.max(np.abs(amp * ua - base))) / norm)
        deviations[label] = worst
    return SimilarityReport(tuple(amplitudes), deviations)


def advection_convergence(scheme: SchemeConfig, ns=(40, 80, 160, 320),
                          t_end: float = 1.0, dt_coeff: float = 0.5,
                          dt_power: float = 5.0 / 3.0) -> list:
    """Linf refinement for smooth sine advection on [-1, 1].

    The step size follows dt = dt_coeff * dx**dt_power so the third-order
    time error stays subdominant to the fifth-order spatial error.
    """
    phys = solver.LinearAdvection(1.0)
    errors = []
    dxs = []
    for n in ns:
        grid = solver.Grid1D(-1.0, 1.0, n)
        x = grid.points()
        u = np.zeros(n + 2 * GHOST)
        u[GHOST : GHOST + n] = np.sin(np.pi * x)
        u, _ = solver.advance_1d(
            u, grid, t_end, scheme, phys, solver.Periodic(), solver.Periodic(),
            fixed_dt=dt_coeff * grid.dx**dt_power,
        )
        exact = np.sin(np.pi * (x - t_end))
        errors.append(float(np.max(np.abs(u[GHOST : GHOST + n] - exact))))
        dxs.append(grid.dx)
    orders = observed_orders(errors)
    return [ConvergenceRecord(d, e, o) for d, e, o in zip(dxs, errors, orders)]


# ---------------------------------------------------------------------------
# reference solutions


def cache_dir() -> Path:
    root = os.environ.get("WENOKIT_CACHE", os.path.join("~", ".cache", "wenokit"))
    path = Path(root).expanduser()
    path.mkdir(parents=True, exist_ok=True)
    return path


def reference_solution(problem: str, n: int = 2000, cfl: float = 0.5):
    """Density profile of the cached z-scheme reference run; (x, rho)."""
    spec = problems.get(problem)
    if spec.dim != 1 or spec.kind != "euler":
        raise ValueError("references are kept for 1D gas-dynamics problems")
    key = f"ref_{problem}_z_n{n}_cfl{cfl:g}.npz"
    path = cache_dir() / key
    if path.exists():
        data = np.load(path)
        return data["x"], data["rho"]
    grid = spec.grid(n)
    u = spec.initial_field(grid)
    phys = solver.EulerPhysics(GasModel(spec.gamma))
    u, _ = solver.advance_1d(
        u, grid, spec.t_end, SchemeConfig.make("z"), phys,
        spec.bc["left"], spec.bc["right"], cfl=cfl,
    )
    x = grid.points()
    rho = u[GHOST : GHOST + n, 0]
    np.savez(path, x=x, rho=rho)
    return x, rho


def l1_distance_to_reference(x, rho, problem: str, n_ref: int = 2000) -> float:
    """Mean absolute density distance to the reference, interpolated onto the
    coarse points (the grids are generally incommensurate)."""
    xr, rr = reference_solution(problem, n=n_ref)
    return float(np.mean(np.abs(rho - np.interp(x, xr, rr))))
