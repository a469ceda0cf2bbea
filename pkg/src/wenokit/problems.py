"""Benchmark catalog: every initial/boundary configuration used by the suite,
as constructible problem descriptions keyed by stable CLI identifiers.

Initial conditions are vectorized pointwise samplers; Euler states are given
in primitive variables (rho, u[, v], p).  Profiles with jumps take the
right-branch value at a point landing exactly on the jump.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from wenokit.euler import GasModel, prim_to_cons
from wenokit.solver import (
    Fixed,
    Grid1D,
    Grid2D,
    GHOST,
    MovingShockTop,
    Periodic,
    PostShockWall,
    Reflective,
    StepRegion,
    Transmissive,
)

SQRT3 = np.sqrt(3.0)


@dataclass(frozen=True)
class ProblemSpec:
    name: str
    dim: int
    bounds: tuple
    t_end: float
    default_grid: tuple
    kind: str  # "advection" | "euler"
    ic: Callable
    bc: dict
    gamma: Optional[float] = None
    source: str = "none"
    step: Optional[StepRegion] = None
    amplitude: float = 1.0
    sw_delta: float = 1e-6

    def grid(self, *override):
        given = tuple(o for o in override if o)
        if given and len(given) != self.dim:
            raise ValueError(
                f"{self.name} is {self.dim}D; grid override needs "
                f"{'nx' if self.dim == 1 else 'both nx and ny'}"
            )
        shape = given if given else self.default_grid
        if self.dim == 1:
            return Grid1D(self.bounds[0], self.bounds[1], shape[0])
        return Grid2D(*self.bounds, shape[0], shape[1])

    def initial_field(self, grid):
        """Conserved field including ghost slots (ghosts zero-filled)."""
        if self.dim == 1:
            x = grid.points()
            vals = self.ic(x)
            if self.kind == "advection":
                u = np.zeros(grid.n + 2 * GHOST)
                u[GHOST : GHOST + grid.n] = vals
                return u
            U = np.zeros((grid.n + 2 * GHOST, 3))
            U[GHOST : GHOST + grid.n] = prim_to_cons(vals, GasModel(self.gamma))
            return U
        X, Y = np.meshgrid(grid.xpoints(), grid.ypoints(), indexing="ij")
        vals = self.ic(X, Y)
        U = np.zeros((grid.nx + 2 * GHOST, grid.ny + 2 * GHOST, 4))
        U[GHOST : GHOST + grid.nx, GHOST : GHOST + grid.ny] = prim_to_cons(
            vals, GasModel(self.gamma)
        )
        return U


# ---------------------------------------------------------------------------
# linear advection profiles


def _gauss(x, beta, z):
    return np.exp(-beta * (x - z) ** 2)


def _ellipse(x, alpha, a):
    return np.sqrt(np.maximum(1.0 - alpha**2 * (x - a) ** 2, 0.0))


def composite_profile(x, amplitude=1.0):
    """Gaussians, square wave, sharp triangle and half ellipse on [-1, 1]."""
    x = np.asarray(x, dtype=np.float64)
    a = 0.5
    z = -0.7
    delta = 0.005
    alpha = 10.0
    beta = np.log(2.0) / (36.0 * delta**2)
    u = np.zeros_like(x)
    m = (x >= -0.8) & (x <= -0.6)
    u = np.where(
        m,
        (_gauss(x, beta, z - delta) + _gauss(x, beta, z + delta) + 4.0 * _gauss(x, beta, z)) / 6.0,
        u,
    )
    u = np.where((x >= -0.4) & (x <= -0.2), 1.0, u)
    m = (x >= 0.0) & (x <= 0.2)
    u = np.where(m, 1.0 - np.abs(10.0 * (x - 0.1)), u)
    m = (x >= 0.4) & (x <= 0.6)
    u = np.where(
        m,
        (_ellipse(x, alpha, a - delta) + _ellipse(x, alpha, a + delta) + 4.0 * _ellipse(x, alpha, a)) / 6.0,
        u,
    )
    return u / amplitude


def jump_sine_profile(x):
    """-sin(pi x) - x^3/2, raised by 1 on x >= 0."""
    x = np.asarray(x, dtype=np.float64)
    base = -np.sin(np.pi * x) - 0.5 * x**3
    return np.where(x >= 0.0, base + 1.0, base)


def piecewise_wave_profile(x):
    x = np.asarray(x, dtype=np.float64)
    u = 2.0 * x - 1.0 - np.sin(3.0 * np.pi * x) / 6.0
    u = np.where((x >= -1.0) & (x < -1.0 / 3.0), -x * np.sin(1.5 * np.pi * x**2), u)
    u = np.where((x >= -1.0 / 3.0) & (x <= 1.0 / 3.0), np.abs(np.sin(2.0 * np.pi * x)), u)
    return u


def linear_case1(amplitude: float = 1.0) -> ProblemSpec:
    if not amplitude > 0.0:
        raise ValueError("amplitude must be positive")
    return ProblemSpec(
        name="advect1",
        dim=1,
        bounds=(-1.0, 1.0),
        t_end=6.0,
        default_grid=(200,),
        kind="advection",
        ic=lambda x: composite_profile(x, amplitude),
        bc={"left": Periodic(), "right": Periodic()},
        amplitude=amplitude,
    )


def linear_case2() -> ProblemSpec:
    return ProblemSpec(
        name="advect2",
        dim=1,
        bounds=(-1.0, 1.0),
        t_end=6.0,
        default_grid=(200,),
        kind="advection",
        ic=jump_sine_profile,
        bc={"left": Periodic(), "right": Periodic()},
    )


def linear_case3() -> ProblemSpec:
    return ProblemSpec(
        name="advect3",
        dim=1,
        bounds=(-1.0, 1.0),
        t_end=6.0,
        default_grid=(200,),
        kind="advection",
        ic=piecewise_wave_profile,
        bc={"left": Periodic(), "right": Periodic()},
    )


# ---------------------------------------------------------------------------
# 1D Euler


def shu_osher() -> ProblemSpec:
    def ic(x):
        x = np.asarray(x, dtype=np.float64)
        out = np.empty(x.shape + (3,))
        left = x < -4.0
        out[..., 0] = np.where(left, 3.857143, 1.0 + 0.2 * np.sin(5.0 * x))
        out[..., 1] = np.where(left, 2.629369, 0.0)
        out[..., 2] = np.where(left, 31.0 / 3.0, 1.0)
        return out

    return ProblemSpec(
        name="shu-osher",
        dim=1,
        bounds=(-5.0, 5.0),
        t_end=1.8,
        default_grid=(300,),
        kind="euler",
        gamma=1.4,
        ic=ic,
        bc={"left": Transmissive(), "right": Transmissive()},
    )


def blast_waves() -> ProblemSpec:
    def ic(x):
        x = np.asarray(x, dtype=np.float64)
        out = np.empty(x.shape + (3,))
        out[..., 0] = 1.0
        out[..., 1] = 0.0
        out[..., 2] = np.where(x < 0.1, 1000.0, np.where(x < 0.9, 0.01, 100.0))
        return out

    return ProblemSpec(
        name="blast",
        dim=1,
        bounds=(0.0, 1.0),
        t_end=0.038,
        default_grid=(400,),
        kind="euler",
        gamma=1.4,
        ic=ic,
        bc={"left": Reflective(), "right": Reflective()},
    )


# ---------------------------------------------------------------------------
# 2D Euler


def _quadrant_ic(states, xc, yc, split_inclusive_right=False):
    """states: ((ll, lr), (ul, ur)) primitive 4-tuples.

    ``split_inclusive_right`` controls which quadrant owns a point landing
    exactly on the split lines, matching each case's published inequalities.
    """

    def ic(X, Y):
        out = np.empty(X.shape + (4,))
        if split_inclusive_right:
            right = X >= xc
            upper = Y >= yc
        else:
            right = X > xc
            upper = Y > yc
        for c in range(4):
            out[..., c] = np.where(
                upper,
                np.where(right, states[1][1][c], states[1][0][c]),
                np.where(right, states[0][1][c], states[0][0][c]),
            )
        return out

    return ic


def riemann2d_case1() -> ProblemSpec:
    states = (
        ((0.138, 1.206, 1.206, 0.029), (0.5323, 0.0, 1.206, 0.3)),  # lower left/right
        ((0.5323, 1.206, 0.0, 0.3), (1.5, 0.0, 0.0, 1.5)),  # upper left/right
    )
    return ProblemSpec(
        name="riemann2d-1",
        dim=2,
        bounds=(0.0, 1.0, 0.0, 1.0),
        t_end=0.8,
        default_grid=(400, 400),
        kind="euler",
        gamma=1.4,
        ic=_quadrant_ic(states, 0.8, 0.8, split_inclusive_right=True),
        bc={
            "left": Transmissive(),
            "right": Transmissive(),
            "bottom": Transmissive(),
            "top": Transmissive(),
        },
    )


def riemann2d_case2() -> ProblemSpec:
    states = (
        ((0.8, 0.0, 0.0, 1.0), (1.0, 0.0, 0.7276, 1.0)),
        ((1.0, 0.7276, 0.0, 1.0), (0.5313, 0.0, 0.0, 0.4)),
    )
    return ProblemSpec(
        name="riemann2d-2",
        dim=2,
        bounds=(0.0, 1.0, 0.0, 1.0),
        t_end=0.25,
        default_grid=(1200, 1200),
        kind="euler",
        gamma=1.4,
        ic=_quadrant_ic(states, 0.5, 0.5),
        bc={
            "left": Transmissive(),
            "right": Transmissive(),
            "bottom": Transmissive(),
            "top": Transmissive(),
        },
    )


def rayleigh_taylor() -> ProblemSpec:
    gamma = 5.0 / 3.0

    def ic(X, Y):
        out = np.empty(X.shape + (4,))
        lower = Y < 0.5
        rho = np.where(lower, 2.0, 1.0)
        p = np.where(lower, 2.0 * Y + 1.0, Y + 1.5)
        c = np.sqrt(gamma * p / rho)
        out[..., 0] = rho
        out[..., 1] = 0.0
        out[..., 2] = -0.025 * c * np.cos(8.0 * np.pi * X)
        out[..., 3] = p
        return out

    return ProblemSpec(
        name="rt",
        dim=2,
        bounds=(0.0, 0.25, 0.0, 1.0),
        t_end=1.95,
        default_grid=(120, 480),
        kind="euler",
        gamma=gamma,
        ic=ic,
        bc={
            "left": Reflective(),
            "right": Reflective(),
            "bottom": Fixed((2.0, 0.0, 0.0, 1.0)),
            "top": Fixed((1.0, 0.0, 0.0, 2.5)),
        },
        source="rt-gravity",
    )


DMR_POST = (8.0, 8.25 * np.cos(np.pi / 6.0), -8.25 * np.sin(np.pi / 6.0), 116.5)
DMR_PRE = (1.4, 0.0, 0.0, 1.0)


def double_mach() -> ProblemSpec:
    def ic(X, Y):
        out = np.empty(X.shape + (4,))
        post = X < 1.0 / 6.0 + Y / SQRT3
        for c in range(4):
            out[..., c] = np.where(post, DMR_POST[c], DMR_PRE[c])
        return out

    return ProblemSpec(
        name="dmr",
        dim=2,
        bounds=(0.0, 4.0, 0.0, 1.0),
        t_end=0.2,
        default_grid=(960, 240),
        kind="euler",
        gamma=1.4,
        ic=ic,
        bc={
            "left": Fixed(DMR_POST),
            "right": Transmissive(),
            "bottom": PostShockWall(DMR_POST, 1.0 / 6.0),
            "top": MovingShockTop(DMR_POST, DMR_PRE, 1.0 / 6.0),
        },
    )


def forward_step() -> ProblemSpec:
    inflow = (1.4, 3.0, 0.0, 1.0)

    def ic(X, Y):
        out = np.empty(X.shape + (4,))
        for c in range(4):
            out[..., c] = inflow[c]
        return out

    return ProblemSpec(
        name="ffs",
        dim=2,
        bounds=(0.0, 3.0, 0.0, 1.0),
        t_end=4.0,
        default_grid=(300, 100),
        kind="euler",
        gamma=1.4,
        ic=ic,
        bc={
            "left": Fixed(inflow),
            "right": Transmissive(),
            "bottom": Reflective(),
            "top": Reflective(),
        },
        step=StepRegion(0.6, 0.2),
    )


CATALOG: dict[str, Callable[..., ProblemSpec]] = {
    "advect1": linear_case1,
    "advect2": linear_case2,
    "advect3": linear_case3,
    "shu-osher": shu_osher,
    "blast": blast_waves,
    "riemann2d-1": riemann2d_case1,
    "riemann2d-2": riemann2d_case2,
    "rt": rayleigh_taylor,
    "dmr": double_mach,
    "ffs": forward_step,
}


def get(name: str, amplitude: Optional[float] = None) -> ProblemSpec:
    try:
        factory = CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown problem {name!r}; known: {sorted(CATALOG)}") from None
    if name == "advect1":
        return factory(amplitude if amplitude is not None else 1.0)
    if amplitude is not None:
        raise ValueError("amplitude only applies to advect1")
    return factory()
