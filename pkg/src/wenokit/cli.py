"""Command-line entry points.

Commands: run, converge, table2, tau-coeffs, similarity.  A key=value config
file can seed any run flag; explicit flags take precedence.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click
import numpy as np

from wenokit import harness, output, problems, solver
from wenokit.euler import GasModel, NonphysicalState, cons_to_prim
from wenokit.kernel import KINDS, SchemeConfig
from wenokit.solver import GHOST

BLOWUP_EXIT = 1


def _read_config(path):
    params = {}
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition("=")
        params[key.strip().replace("-", "_")] = value.strip()
    return params


def _scheme_from_options(scheme, epsilon, q, a_const, gamma1, gamma2):
    return SchemeConfig.make(
        scheme, epsilon=epsilon, q_power=q, a_const=a_const, gamma1=gamma1, gamma2=gamma2
    )


@click.group()
def main():
    """Fifth-order WENO solvers and their verification studies."""


def _apply_config(ctx, param, value):
    # config entries become defaults, so explicit flags always win
    if value:
        ctx.default_map = dict(ctx.default_map or {})
        for key, raw in _read_config(value).items():
            ctx.default_map.setdefault(key, raw)
    return value


run_options = [
    click.option("--config", type=click.Path(exists=True), callback=_apply_config,
                 is_eager=True, expose_value=False,
                 help="key=value file supplying defaults for any flag"),
    click.option("--problem", required=True, type=click.Choice(sorted(problems.CATALOG))),
    click.option("--scheme", default="zn", type=click.Choice(list(KINDS)), show_default=True),
    click.option("--nx", type=int, default=None, help="grid override (1D count or 2D x-count)"),
    click.option("--ny", type=int, default=None, help="2D y-count override"),
    click.option("--cfl", type=float, default=0.5, show_default=True),
    click.option("--tend", type=float, default=None, help="end-time override"),
    click.option("--epsilon", type=float, default=None),
    click.option("--q", type=int, default=None),
    click.option("--a-const", type=float, default=None),
    click.option("--gamma1", type=float, default=None),
    click.option("--gamma2", type=float, default=None),
    click.option("--amplitude", type=float, default=None, help="advect1 amplitude"),
    click.option("--out", type=click.Path(), default=None, help="output path (default: <problem>_<scheme>.csv)"),
    click.option("--format", "fmt", default=None,
                 type=click.Choice(["csv", "grid-text", "grid-bin"])),
    click.option("--snapshots", type=int, default=0, show_default=True,
                 help="also write N evenly spaced intermediate frames"),
    click.option("--no-positivity-guard", is_flag=True, default=False,
                 help="disable the near-vacuum flux guard (blow-up studies)"),
]


def _with_options(opts):
    def deco(fn):
        for opt in reversed(opts):
            fn = opt(fn)
        return fn

    return deco


def _frame_1d(spec, grid, u, t):
    x = grid.points()
    if spec.kind == "advection":
        return output.OutputFrame(t, (x,), ("u",), (u[GHOST : GHOST + grid.n].copy(),))
    P = cons_to_prim(u[GHOST : GHOST + grid.n], GasModel(spec.gamma))
    return output.OutputFrame(t, (x,), ("rho", "u", "p"), (P[:, 0], P[:, 1], P[:, 2]))


def _frame_2d(spec, grid, U, t):
    P = cons_to_prim(U[GHOST : GHOST + grid.nx, GHOST : GHOST + grid.ny], GasModel(spec.gamma))
    return output.OutputFrame(
        t,
        (grid.xpoints(), grid.ypoints()),
        ("rho", "u", "v", "p"),
        tuple(P[..., c] for c in range(4)),
    )


@main.command("run")
@_with_options(run_options)
def cmd_run(problem, scheme, nx, ny, cfl, tend, epsilon, q, a_const, gamma1, gamma2,
            amplitude, out, fmt, snapshots, no_positivity_guard):
    """Run one benchmark problem and write the final frame (plus snapshots)."""
    if not 0.0 < cfl <= 1.0:
        raise click.UsageError("cfl must lie in (0, 1]")
    spec = problems.get(problem, amplitude=amplitude)
    cfg = _scheme_from_options(scheme, epsilon, q, a_const, gamma1, gamma2)
    try:
        grid = spec.grid(nx, ny) if spec.dim == 2 else spec.grid(nx)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    t_end = tend if tend is not None else spec.t_end
    fmt = fmt or ("csv" if spec.dim == 1 else "grid-text")
    out = Path(out) if out else Path(f"{problem}_{scheme}.{'csv' if fmt == 'csv' else 'dat'}")

    u = spec.initial_field(grid)
    times = [t_end] if snapshots <= 0 else list(np.linspace(0.0, t_end, snapshots + 1)[1:])

    t = 0.0
    try:
        for k, t_next in enumerate(times):
            if spec.dim == 1:
                phys = (
                    solver.LinearAdvection(1.0)
                    if spec.kind == "advection"
                    else solver.EulerPhysics(
                        GasModel(spec.gamma), positivity_guard=not no_positivity_guard
                    )
                )
                u, diag = solver.advance_1d(
                    u, grid, t_next, cfg, phys, spec.bc["left"], spec.bc["right"],
                    cfl=cfl, t0=t,
                )
                frame = _frame_1d(spec, grid, u, t_next)
                frame_path = out if t_next == times[-1] else out.with_name(f"{out.stem}_{k:03d}{out.suffix}")
                output.write_frame_1d(frame, frame_path)
            else:
                phys = solver.EulerPhysics(
                    GasModel(spec.gamma),
                    splitting="steger-warming",
                    sw_delta=spec.sw_delta,
                    positivity_guard=not no_positivity_guard,
                )
                u, diag = solver.advance_2d(
                    u, grid, t_next, cfg, phys, spec.bc, cfl=cfl, t0=t,
                    source=spec.source, step=spec.step,
                )
                frame = _frame_2d(spec, grid, u, t_next)
                frame_path = out if t_next == times[-1] else out.with_name(f"{out.stem}_{k:03d}{out.suffix}")
                output.write_frame_2d(frame, frame_path, fmt=fmt)
            t = t_next
    except NonphysicalState as exc:
        click.echo(f"nonphysical state: {exc}", err=True)
        sys.exit(BLOWUP_EXIT)
    click.echo(
        f"{problem} [{scheme}] done: t={diag.time:g} steps={diag.steps} "
        f"min_rho={diag.min_density:g} min_p={diag.min_pressure:g} "
        f"wall={diag.wall_seconds:.2f}s -> {out}"
    )


@main.command("converge")
@click.option("--k", "kcrit", type=click.Choice(["1", "2", "3"]), required=True)
@click.option("--schemes", default="z,za,zn", show_default=True,
              help="comma-separated scheme ids")
@click.option("--levels", type=int, default=8, show_default=True)
@click.option("--out", type=click.Path(), default=None)
def cmd_converge(kcrit, schemes, levels, out):
    """Critical-point refinement table (error and observed order per scheme)."""
    labels = [s.strip() for s in schemes.split(",") if s.strip()]
    if not labels:
        raise click.UsageError("need at least one scheme id")
    for s in labels:
        if s not in KINDS:
            raise click.UsageError(f"unknown scheme {s!r}")
    results = {s: harness.critical_point_study(int(kcrit), SchemeConfig.make(s), levels)
               for s in labels}
    header = "dx," + ",".join(f"{s}_error,{s}_order" for s in labels)
    lines = [header]
    for lev in range(levels):
        row = [f"{results[labels[0]][lev].dx:.6e}"]
        for s in labels:
            rec = results[s][lev]
            row.append(f"{rec.error:.6e}")
            row.append("---" if rec.observed_order is None else f"{rec.observed_order:.3f}")
        lines.append(",".join(row))
    text = "\n".join(lines) + "\n"
    if out:
        Path(out).write_text(text)
        click.echo(f"wrote {out}")
    else:
        click.echo(text, nl=False)


@main.command("table2")
@click.option("--dx", type=float, default=0.02, show_default=True)
@click.option("--out", type=click.Path(), default=None)
def cmd_table2(dx, out):
    """Global-indicator diagnostics near the jump of the jump-sine profile."""
    rows = harness.table2_diagnostics(dx=dx)
    lines = ["x,u0,tau5,tau8,R,Rprime"]
    for r in rows:
        lines.append(
            f"{r.x:.4f},{r.u0:.6e},{r.tau5:.6e},{r.tau8:.6e},"
            f"{r.ratio_z:.6e},{r.ratio_zn:.6e}"
        )
    text = "\n".join(lines) + "\n"
    if out:
        Path(out).write_text(text)
        click.echo(f"wrote {out}")
    else:
        click.echo(text, nl=False)


@main.command("tau-coeffs")
def cmd_tau_coeffs():
    """Unit-jump coefficients of the two global smoothness indicators."""
    t5, t8, ok = harness.tau_coefficient_check()
    click.echo("gap, tau5, tau8")
    gaps = ["(i-2,i-1)", "(i-1,i)", "(i,i+1)", "(i+1,i+2)"]
    for gap, a, b in zip(gaps, t5, t8):
        click.echo(f"{gap}, {a:.15g}, {b:.15g}")
    click.echo(f"expected tau5 (4/3, 10/3, 10/3, 4/3), tau8 (1, 9, 9, 1): {'ok' if ok else 'MISMATCH'}")
    sys.exit(0 if ok else 1)


@main.command("similarity")
@click.option("--schemes", default="zn,z,za,d", show_default=True)
@click.option("--n", type=int, default=200, show_default=True)
@click.option("--tend", type=float, default=6.0, show_default=True)
def cmd_similarity(schemes, n, tend):
    """Amplitude-similarity deviations on the composite advection profile."""
    labels = [s.strip() for s in schemes.split(",") if s.strip()]
    table = {}
    for s in labels:
        if s == "d":
            for qp in (1, 2, 3):
                table[f"d(q={qp})"] = SchemeConfig.make("d", epsilon=1e-20, q_power=qp)
        elif s in KINDS:
            table[s] = SchemeConfig.make(s)
        else:
            raise click.UsageError(f"unknown scheme {s!r}")
    report = harness.similarity_study(table, n=n, t_end=tend)
    click.echo(f"amplitudes: {report.amplitudes}")
    for label, dev in report.deviations.items():
        click.echo(f"{label}: max relative deviation {dev:.3e}")


if __name__ == "__main__":
    main()
