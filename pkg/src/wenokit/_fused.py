"""Jitted inner loops for the production solver paths.

The public kernel/euler modules stay the reference implementation; these
routines fuse the per-interface work (scheme weights, candidate combination,
characteristic projection) into tight loops, and tests pin them against the
reference path.  Compiled with fastmath off so results stay bit-reproducible
and mirror-symmetric.  Without numba the same bodies run as plain Python;
the solver only uses them for small problems in that case.
"""

from __future__ import annotations

import math

import numpy as np

try:
    import warnings

    import numba

    # the TBB-version advisory is immaterial here; numba falls back cleanly
    warnings.filterwarnings("ignore", message=".*TBB.*", category=numba.NumbaWarning)

    HAVE_NUMBA = True
    prange = numba.prange
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False
    prange = range

KIND_ID = {"js": 0, "z": 1, "za": 2, "zn": 3, "d": 4, "a": 5}


def scheme_params(cfg):
    """Flatten a SchemeConfig into the jit-friendly argument tuple."""
    return (
        KIND_ID[cfg.kind],
        float(cfg.epsilon),
        int(cfg.q_power),
        float(cfg.a_const),
        float(cfg.gamma1),
        float(cfg.gamma2),
    )


def _recon_impl(a, b, c, d, e, kind, eps, q, acst, g1, g2):
    is0 = 13.0 / 12.0 * (a - 2.0 * b + c) ** 2 + 0.25 * (a - 4.0 * b + 3.0 * c) ** 2
    is1 = 13.0 / 12.0 * (b - 2.0 * c + d) ** 2 + 0.25 * (b - d) ** 2
    is2 = 13.0 / 12.0 * (c - 2.0 * d + e) ** 2 + 0.25 * (3.0 * c - 4.0 * d + e) ** 2

    if kind == 0:  # js
        a0 = 0.1 / (is0 + eps) ** 2
        a1 = 0.6 / (is1 + eps) ** 2
        a2 = 0.3 / (is2 + eps) ** 2
    elif kind == 1:  # z
        t5 = abs(is0 - is2)
        a0 = 0.1 * (1.0 + (t5 / (is0 + eps)) ** q)
        a1 = 0.6 * (1.0 + (t5 / (is1 + eps)) ** q)
        a2 = 0.3 * (1.0 + (t5 / (is2 + eps)) ** q)
    elif kind == 2:  # za
        d1l = 0.5 * (a - 4.0 * b + 3.0 * c)
        d1r = 0.5 * (-3.0 * c + 4.0 * d - e)
        d2l = a - 2.0 * b + c
        d2r = c - 2.0 * d + e
        gsi = g1 * (abs(d1l) - abs(d1r)) ** 2 + g2 * (abs(d2l) - abs(d2r)) ** 2
        amp = gsi / (is0 + is2 - gsi + eps)
        a0 = 0.1 * (1.0 + amp * gsi / (is0 + eps))
        a1 = 0.6 * (1.0 + amp * gsi / (is1 + eps))
        a2 = 0.3 * (1.0 + amp * gsi / (is2 + eps))
    elif kind == 3:  # zn
        t5 = abs(is0 - is2)
        r = (is0 + is2 - t5 + eps) / (t5 + eps)
        big_c = acst * r * r
        t8 = (a - 4.0 * b + 6.0 * c - 4.0 * d + e) ** 2
        a0 = 0.1 * (big_c + t8 / (is0 + eps))
        a1 = 0.6 * (big_c + t8 / (is1 + eps))
        a2 = 0.3 * (big_c + t8 / (is2 + eps))
    else:  # d and a
        t5 = abs(is0 - is2)
        phi = math.sqrt(abs(is0 - 2.0 * is1 + is2))
        if phi > 1.0:
            phi = 1.0
        if kind == 4:
            a0 = 0.1 * (1.0 + phi * (t5 / (is0 + eps)) ** q)
            a1 = 0.6 * (1.0 + phi * (t5 / (is1 + eps)) ** q)
            a2 = 0.3 * (1.0 + phi * (t5 / (is2 + eps)) ** q)
        else:
            a0 = 0.1 * max(1.0, phi * (t5 / (is0 + eps)) ** q)
            a1 = 0.6 * max(1.0, phi * (t5 / (is1 + eps)) ** q)
            a2 = 0.3 * max(1.0, phi * (t5 / (is2 + eps)) ** q)

    inv = 1.0 / (a0 + a1 + a2)
    q0 = a / 3.0 - 7.0 * b / 6.0 + 11.0 * c / 6.0
    q1 = -b / 6.0 + 5.0 * c / 6.0 + d / 3.0
    q2 = c / 3.0 + 5.0 * d / 6.0 - e / 6.0
    return (a0 * q0 + a1 * q1 + a2 * q2) * inv


_recon = numba.njit(cache=True, inline="always")(_recon_impl) if HAVE_NUMBA else _recon_impl


def _sweep_impl(fp, fm, kind, eps, q, acst, g1, g2, out):
    # fp/fm: (rows, n_tot) split fluxes along the last axis; out: (rows, n_tot-5)
    # with out[r, i] the interface flux between points i+2 and i+3.
    m, n = fp.shape
    for r in prange(m):
        for i in range(n - 5):
            rp = _recon(
                fp[r, i], fp[r, i + 1], fp[r, i + 2], fp[r, i + 3], fp[r, i + 4],
                kind, eps, q, acst, g1, g2,
            )
            rm = _recon(
                fm[r, i + 5], fm[r, i + 4], fm[r, i + 3], fm[r, i + 2], fm[r, i + 1],
                kind, eps, q, acst, g1, g2,
            )
            out[r, i] = rp + rm


def _char_lf_impl(U, F, gamma, alpha, kind, eps, q, acst, g1, g2, out):
    # U/F: (n_tot, 3); out: (n_tot-5, 3) interface fluxes, characteristic-wise.
    n = U.shape[0]
    gm1 = gamma - 1.0
    gp = np.empty(6)
    gm = np.empty(6)
    ghat = np.empty(3)
    for j in range(n - 5):
        il = j + 2
        ir = j + 3
        rl = math.sqrt(U[il, 0])
        rr = math.sqrt(U[ir, 0])
        w = 1.0 / (rl + rr)
        ul = U[il, 1] / U[il, 0]
        ur = U[ir, 1] / U[ir, 0]
        pl = gm1 * (U[il, 2] - 0.5 * U[il, 1] * ul)
        pr = gm1 * (U[ir, 2] - 0.5 * U[ir, 1] * ur)
        u = (rl * ul + rr * ur) * w
        H = (rl * (U[il, 2] + pl) / U[il, 0] + rr * (U[ir, 2] + pr) / U[ir, 0]) * w
        c2 = gm1 * (H - 0.5 * u * u)
        # Physical neighbour states always give c2 > 0 (Roe).  Transient
        # Runge-Kutta stage excursions may not; floor the basis relative to
        # the local velocity/enthalpy scale so its 1/c^2 entries stay bounded
        # (the floor cannot engage below ~Mach 38, far beyond any benchmark).
        c2min = 1e-3 * (0.5 * u * u + gm1 * abs(H)) + 1e-300
        if c2 < c2min:
            c2 = c2min
        c = math.sqrt(c2)

        b2 = gm1 / (c * c)
        b1 = 0.5 * b2 * u * u
        for mfield in range(3):
            if mfield == 0:
                lm0 = 0.5 * (b1 + u / c)
                lm1 = -0.5 * (b2 * u + 1.0 / c)
                lm2 = 0.5 * b2
            elif mfield == 1:
                lm0 = 1.0 - b1
                lm1 = b2 * u
                lm2 = -b2
            else:
                lm0 = 0.5 * (b1 - u / c)
                lm1 = -0.5 * (b2 * u - 1.0 / c)
                lm2 = 0.5 * b2
            for pnt in range(6):
                k = j + pnt
                wch = lm0 * U[k, 0] + lm1 * U[k, 1] + lm2 * U[k, 2]
                gch = lm0 * F[k, 0] + lm1 * F[k, 1] + lm2 * F[k, 2]
                gp[pnt] = 0.5 * (gch + alpha * wch)
                gm[pnt] = 0.5 * (gch - alpha * wch)
            qp = _recon(gp[0], gp[1], gp[2], gp[3], gp[4], kind, eps, q, acst, g1, g2)
            qm = _recon(gm[5], gm[4], gm[3], gm[2], gm[1], kind, eps, q, acst, g1, g2)
            ghat[mfield] = qp + qm

        # columns of the right eigenvector matrix recombine the fields
        out[j, 0] = ghat[0] + ghat[1] + ghat[2]
        out[j, 1] = ghat[0] * (u - c) + ghat[1] * u + ghat[2] * (u + c)
        out[j, 2] = ghat[0] * (H - u * c) + ghat[1] * (0.5 * u * u) + ghat[2] * (H + u * c)


if HAVE_NUMBA:
    _sweep = numba.njit(cache=True, parallel=True)(_sweep_impl)
    _char_lf = numba.njit(cache=True)(_char_lf_impl)
else:  # pragma: no cover
    _sweep = _sweep_impl
    _char_lf = _char_lf_impl


def interface_flux_sweep(fp, fm, params, out):
    _sweep(fp, fm, *params, out)


def char_lf_flux(U, F, gamma, alpha, params, out):
    _char_lf(U, F, gamma, alpha, *params, out)
