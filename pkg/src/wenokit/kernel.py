"""Five-point WENO reconstruction kernel.

Everything here is pure stencil algebra: smoothness indicators, global
indicators, the six weighting strategies, third-order candidate fluxes and
the assembled fifth-order interface value.  Inputs are windows of five flux
samples ordered (f_{i-2}, f_{i-1}, f_i, f_{i+1}, f_{i+2}); the reconstruction
target is the interface x_{i+1/2}.  All functions broadcast over leading
axes, so a window argument may be shaped (..., 5).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Optimal weights of the fifth-order upstream scheme.
C_OPT = (0.1, 0.6, 0.3)

KINDS = ("js", "z", "za", "zn", "d", "a")


@dataclass(frozen=True)
class SchemeConfig:
    """A scheme kind plus its free parameters.

    epsilon   zero-guard in the weight denominators
    q_power   dissipation exponent (z, d, a kinds)
    a_const   scale constant of the adaptive prefactor (zn kind)
    gamma1/2  coefficients of the derivative-based global indicator (za kind)
    """

    kind: str
    epsilon: float
    q_power: int = 1
    a_const: float = 10.0
    gamma1: float = 1.0
    gamma2: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown scheme kind {self.kind!r}, expected one of {KINDS}")
        if not self.epsilon > 0.0:
            raise ValueError("epsilon must be positive")
        if self.q_power < 1:
            raise ValueError("q_power must be >= 1")
        if not self.a_const > 0.0:
            raise ValueError("a_const must be positive")
        if not (self.gamma1 > 0.0 and self.gamma2 > 0.0):
            raise ValueError("gamma coefficients must be positive")

    @classmethod
    def make(cls, kind: str, **overrides) -> "SchemeConfig":
        """Build a config with the conventional defaults for ``kind``."""
        kind = kind.lower()
        params = {"epsilon": 1e-6 if kind == "js" else 1e-40, "q_power": 1}
        params.update({k: v for k, v in overrides.items() if v is not None})
        return cls(kind=kind, **params)


def _as_window(w):
    w = np.asarray(w, dtype=np.float64)
    if w.shape[-1] != 5:
        raise ValueError("stencil window must have five samples on the last axis")
    return w


def local_smoothness(w) -> np.ndarray:
    """Jiang-Shu smoothness indicators (IS0, IS1, IS2), stacked on the last axis."""
    w = _as_window(w)
    f0, f1, f2, f3, f4 = (w[..., k] for k in range(5))
    is0 = 13.0 / 12.0 * (f0 - 2.0 * f1 + f2) ** 2 + 0.25 * (f0 - 4.0 * f1 + 3.0 * f2) ** 2
    is1 = 13.0 / 12.0 * (f1 - 2.0 * f2 + f3) ** 2 + 0.25 * (f1 - f3) ** 2
    is2 = 13.0 / 12.0 * (f2 - 2.0 * f3 + f4) ** 2 + 0.25 * (3.0 * f2 - 4.0 * f3 + f4) ** 2
    return np.stack([is0, is1, is2], axis=-1)


def tau5(s) -> np.ndarray:
    """Global indicator |IS0 - IS2| from a smoothness triple."""
    s = np.asarray(s)
    return np.abs(s[..., 0] - s[..., 2])


def tau8(w) -> np.ndarray:
    """Squared undivided fourth difference over the full five-point stencil."""
    w = _as_window(w)
    d4 = w[..., 0] - 4.0 * w[..., 1] + 6.0 * w[..., 2] - 4.0 * w[..., 3] + w[..., 4]
    return d4 * d4


def c_function(s, t5, cfg: SchemeConfig) -> np.ndarray:
    """Adaptive prefactor replacing the constant 1 in the z-type weight formula.

    Large (>> 1) on smooth stencils, << 1 when the stencil straddles a
    discontinuity.  Always positive: IS0 + IS2 - |IS0 - IS2| = 2 min(IS0, IS2).
    """
    s = np.asarray(s)
    eps = cfg.epsilon
    r = (s[..., 0] + s[..., 2] - t5 + eps) / (t5 + eps)
    return cfg.a_const * r * r


def za_gsi(w, cfg: SchemeConfig) -> np.ndarray:
    """Derivative-asymmetry global indicator of the za weighting.

    Uses undivided one-sided second-order approximations of f' and f'' at x_i
    on the outer sub-stencils.
    """
    w = _as_window(w)
    f0, f1, f2, f3, f4 = (w[..., k] for k in range(5))
    d1_left = 0.5 * (f0 - 4.0 * f1 + 3.0 * f2)
    d1_right = 0.5 * (-3.0 * f2 + 4.0 * f3 - f4)
    d2_left = f0 - 2.0 * f1 + f2
    d2_right = f2 - 2.0 * f3 + f4
    return (
        cfg.gamma1 * (np.abs(d1_left) - np.abs(d1_right)) ** 2
        + cfg.gamma2 * (np.abs(d2_left) - np.abs(d2_right)) ** 2
    )


def candidate_fluxes(w) -> np.ndarray:
    """Third-order interface values on the three sub-stencils, stacked last."""
    w = _as_window(w)
    f0, f1, f2, f3, f4 = (w[..., k] for k in range(5))
    q0 = f0 / 3.0 - 7.0 * f1 / 6.0 + 11.0 * f2 / 6.0
    q1 = -f1 / 6.0 + 5.0 * f2 / 6.0 + f3 / 3.0
    q2 = f2 / 3.0 + 5.0 * f3 / 6.0 - f4 / 6.0
    return np.stack([q0, q1, q2], axis=-1)


def _unnormalized(w, cfg: SchemeConfig):
    s = local_smoothness(w)
    is0, is1, is2 = s[..., 0], s[..., 1], s[..., 2]
    eps = cfg.epsilon
    c0, c1, c2 = C_OPT

    if cfg.kind == "js":
        return (
            c0 / (is0 + eps) ** 2,
            c1 / (is1 + eps) ** 2,
            c2 / (is2 + eps) ** 2,
        )

    if cfg.kind == "z":
        t = tau5(s)
        q = cfg.q_power
        return (
            c0 * (1.0 + (t / (is0 + eps)) ** q),
            c1 * (1.0 + (t / (is1 + eps)) ** q),
            c2 * (1.0 + (t / (is2 + eps)) ** q),
        )

    if cfg.kind == "za":
        t = za_gsi(w, cfg)
        amp = t / (is0 + is2 - t + eps)
        return (
            c0 * (1.0 + amp * t / (is0 + eps)),
            c1 * (1.0 + amp * t / (is1 + eps)),
            c2 * (1.0 + amp * t / (is2 + eps)),
        )

    if cfg.kind == "zn":
        t = tau5(s)
        big_c = c_function(s, t, cfg)
        t8 = tau8(w)
        return (
            c0 * (big_c + t8 / (is0 + eps)),
            c1 * (big_c + t8 / (is1 + eps)),
            c2 * (big_c + t8 / (is2 + eps)),
        )

    # d and a share the smoothness-modulated nonlinear term.
    t = tau5(s)
    q = cfg.q_power
    phi = np.minimum(1.0, np.sqrt(np.abs(is0 - 2.0 * is1 + is2)))
    if cfg.kind == "d":
        return (
            c0 * (1.0 + phi * (t / (is0 + eps)) ** q),
            c1 * (1.0 + phi * (t / (is1 + eps)) ** q),
            c2 * (1.0 + phi * (t / (is2 + eps)) ** q),
        )
    return (
        c0 * np.maximum(1.0, phi * (t / (is0 + eps)) ** q),
        c1 * np.maximum(1.0, phi * (t / (is1 + eps)) ** q),
        c2 * np.maximum(1.0, phi * (t / (is2 + eps)) ** q),
    )


def weights(w, cfg: SchemeConfig) -> np.ndarray:
    """Normalized weights (w0, w1, w2) for the configured scheme, stacked last."""
    a0, a1, a2 = _unnormalized(w, cfg)
    inv = 1.0 / (a0 + a1 + a2)
    return np.stack([a0 * inv, a1 * inv, a2 * inv], axis=-1)


def reconstruct(w, cfg: SchemeConfig) -> np.ndarray:
    """Fifth-order interface value at x_{i+1/2} from an upwind window."""
    om = weights(w, cfg)
    q = candidate_fluxes(w)
    return om[..., 0] * q[..., 0] + om[..., 1] * q[..., 1] + om[..., 2] * q[..., 2]


def reconstruct_mirrored(w, cfg: SchemeConfig) -> np.ndarray:
    """Interface value for the downwind split flux.

    The window holds (f_{i-1}, f_i, f_{i+1}, f_{i+2}, f_{i+3}); by the
    symmetric rule about x_{i+1/2} this equals ``reconstruct`` applied to the
    reversed window.
    """
    w = _as_window(w)
    return reconstruct(w[..., ::-1], cfg)


def upstream_value(w) -> np.ndarray:
    """The linear fifth-order upstream interface value (optimal-weight limit)."""
    w = _as_window(w)
    return (
        2.0 * w[..., 0]
        - 13.0 * w[..., 1]
        + 47.0 * w[..., 2]
        + 27.0 * w[..., 3]
        - 3.0 * w[..., 4]
    ) / 60.0


def contribution_ratio(w, cfg: SchemeConfig) -> np.ndarray:
    """Signed ratio measuring how much the rougher outer sub-stencil contributes.

    For IS0 >= IS2 the value is the un-normalized-weight ratio of S0 over S2
    (divided by the optimal weights); for IS2 > IS0 the reciprocal form is
    returned with a negative sign.  Defined for the z and zn weightings.
    """
    if cfg.kind not in ("z", "zn"):
        raise ValueError("contribution ratio is defined for the z and zn kinds")
    w = _as_window(w)
    s = local_smoothness(w)
    is0, is2 = s[..., 0], s[..., 2]
    eps = cfg.epsilon
    hi = np.maximum(is0, is2)
    lo = np.minimum(is0, is2)
    if cfg.kind == "z":
        base = 1.0
        glob = tau5(s)
    else:
        glob = tau8(w)
        base = c_function(s, tau5(s), cfg)
    value = (base + glob / (hi + eps)) / (base + glob / (lo + eps))
    return np.where(is0 >= is2, value, -value)
