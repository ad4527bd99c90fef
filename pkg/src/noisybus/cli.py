"""Command-line front end: simulate | sweep | shorttime | validate.

Exit codes: 0 ok, 2 configuration error, 3 integrator state corruption,
4 short-time relative-error bound violated, 5 validation failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import config as cfgmod
from .analysis import (
    argmax_axis,
    evaluate_series,
    perturbative_series,
    shorttime_concurrence_cd,
    sweep,
)
from .dynamics import IntegratorConfig, evolve, rhs, steady_state_longtime
from .entanglement import concurrence, concurrence_ab
from .errors import ConfigError, NoisyBusError, StateCorrupted
from .linalg import CPLX, id2, kron, sigma_m, sigma_p
from .model import (
    LindbladTerm,
    ModelSpec,
    ReducedSpec,
    SqueezedWhite,
    White,
    build_hamiltonian_full,
    build_hamiltonian_reduced,
    build_liouvillian_full,
    build_liouvillian_reduced,
    collective_jump_ops,
    collective_transform,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INTEGRATOR = 3
EXIT_SHORTTIME = 4
EXIT_VALIDATE = 5

UNITS_COMMENT = "# units: rates and couplings in g0 = g_AD; time in 1/g0"


def fmt(x: float) -> str:
    """Fixed 12-significant-digit float formatting for deterministic CSV."""
    return f"{x:.12g}"


def _config_comment(cfg) -> str:
    return "# config: " + " ".join(f"{k}={v}" for k, v in cfg.echo_items())


def _write_csv(path: str, header: str, rows, cfg) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(UNITS_COMMENT + "\n")
        fh.write(_config_comment(cfg) + "\n")
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _ground_state(dim: int) -> np.ndarray:
    rho = np.zeros((dim, dim), dtype=CPLX)
    rho[0, 0] = 1.0
    return rho


def cmd_simulate(cfg) -> int:
    """Evolve the full three-atom model and write the trajectory CSV."""
    spec = cfgmod.model_spec(cfg)
    run = cfgmod.integrator(cfg)
    h = build_hamiltonian_full(spec)
    terms = build_liouvillian_full(spec)
    traj = evolve(h, terms, _ground_state(8), run)
    traj.concurrence = np.array([concurrence_ab(s).value for s in traj.states])

    os.makedirs(cfg.out, exist_ok=True)
    rows = (
        [fmt(t), fmt(c), fmt(p[0]), fmt(p[1]), fmt(p[2]), fmt(e)]
        for t, c, p, e in zip(traj.times, traj.concurrence,
                              traj.populations, traj.trace_err)
    )
    _write_csv(os.path.join(cfg.out, "simulate.csv"),
               "t,concurrence_AB,pop_A,pop_B,pop_D,trace_err", rows, cfg)

    from .plotting import save_trajectory_png
    save_trajectory_png(traj.times, traj.concurrence, traj.populations,
                        ("A", "B", "D"), os.path.join(cfg.out, "simulate.png"))
    print(f"wrote {cfg.out}/simulate.csv and {cfg.out}/simulate.png "
          f"({len(traj.times)} rows)")
    return EXIT_OK


def cmd_sweep(cfg) -> int:
    """Sweep a 2-d parameter grid; write CSV, SVG/PNG heatmaps and a summary."""
    spec = cfgmod.model_spec(cfg)
    name1, vals1 = cfgmod.parse_axis(cfg.axis1)
    name2, vals2 = cfgmod.parse_axis(cfg.axis2)
    t_fixed = None if "t" in (name1, name2) else cfgmod.resolve_t_fixed(cfg)
    grid = sweep(spec, (name1, vals1), (name2, vals2), t_fixed=t_fixed,
                 cfg=cfgmod.integrator(cfg), workers=cfg.workers)

    os.makedirs(cfg.out, exist_ok=True)
    rows = (
        [fmt(v1), fmt(v2), fmt(grid.values[i, j])]
        for i, v1 in enumerate(grid.axis1)
        for j, v2 in enumerate(grid.axis2)
    )
    _write_csv(os.path.join(cfg.out, "sweep.csv"),
               f"{grid.axis1_name},{grid.axis2_name},concurrence", rows, cfg)

    from .plotting import save_heatmap_png, write_svg_heatmap
    write_svg_heatmap(grid, os.path.join(cfg.out, "sweep.svg"))
    save_heatmap_png(grid, os.path.join(cfg.out, "sweep.png"))

    lines = [f"sweep of {grid.axis1_name} x {grid.axis2_name}; "
             f"fixed: " + " ".join(f"{k}={v}" for k, v in sorted(grid.fixed.items(),
                                                                 key=lambda kv: kv[0]))]
    for j, v2 in enumerate(grid.axis2):
        r = argmax_axis(grid, grid.axis1_name, v2)
        lines.append(
            f"{grid.axis2_name}={fmt(v2)}: argmax {grid.axis1_name}={fmt(r.location)} "
            f"value={fmt(r.value)} interior={str(r.is_interior).lower()}"
        )
    summary = "\n".join(lines) + "\n"
    with open(os.path.join(cfg.out, "sweep_summary.txt"), "w", encoding="utf-8") as fh:
        fh.write(summary)
    sys.stdout.write(summary)
    print(f"wrote {cfg.out}/sweep.csv, sweep.svg, sweep.png, sweep_summary.txt")
    return EXIT_OK


def cmd_shorttime(cfg) -> int:
    """Compare integrated C-D concurrence against the quadratic law.

    Writes one row per recorded time; rows with t inside the comparison
    window carry window=true and participate in the bound check.  Exit code
    4 signals a relative error above shorttime_rtol somewhere in the window.
    """
    spec = cfgmod.model_spec(cfg)
    reduced, _ = collective_transform(spec)
    window = cfgmod.shorttime_window(cfg)
    h = build_hamiltonian_reduced(reduced)
    terms = build_liouvillian_reduced(reduced)
    run = IntegratorConfig(step=cfg.step, t_end=2.0 * window,
                           record_every=cfg.record_every)
    traj = evolve(h, terms, _ground_state(4), run)

    os.makedirs(cfg.out, exist_ok=True)
    rows, violated = [], False
    t_arr, c_num_arr, c_ana_arr, in_window = [], [], [], []
    for t, state in zip(traj.times, traj.states):
        c_num = concurrence(state).value
        c_ana = shorttime_concurrence_cd(reduced, t)
        if c_ana == 0.0:
            rel = 0.0 if c_num == 0.0 else math.inf
        else:
            rel = abs(c_num - c_ana) / c_ana
        inside = 0.0 < t <= window
        if inside and rel > cfg.shorttime_rtol:
            violated = True
        rows.append([fmt(t), fmt(c_num), fmt(c_ana), fmt(rel),
                     "true" if inside else "false"])
        t_arr.append(t); c_num_arr.append(c_num); c_ana_arr.append(c_ana)
        in_window.append(inside)
    _write_csv(os.path.join(cfg.out, "shorttime.csv"),
               "t,c_numeric,c_analytic,rel_err,window", rows, cfg)

    from .plotting import save_shorttime_png
    save_shorttime_png(t_arr, c_num_arr, c_ana_arr, in_window,
                       os.path.join(cfg.out, "shorttime.png"))
    print(f"wrote {cfg.out}/shorttime.csv and {cfg.out}/shorttime.png")
    if violated:
        print(f"shorttime: relative error exceeded {cfg.shorttime_rtol} "
              f"inside the window (t <= {fmt(window)})", file=sys.stderr)
        return EXIT_SHORTTIME
    return EXIT_OK


# ---------------------------------------------------------------------------
# validation suite
# ---------------------------------------------------------------------------

def _check_physicality(cfg):
    spec = cfgmod.model_spec(cfg)
    run = IntegratorConfig(step=cfg.step, t_end=2.0, record_every=cfg.record_every)
    traj = evolve(build_hamiltonian_full(spec), build_liouvillian_full(spec),
                  _ground_state(8), run)
    worst = float(traj.trace_err.max())
    return worst <= 1e-8, f"max trace error {worst:.2e}"


def _check_physicality_squeezed(cfg):
    spec = cfgmod.model_spec(cfg)
    spec = ModelSpec(g_ad=spec.g_ad, g_bd=spec.g_bd, gamma=spec.gamma,
                     gamma_d=spec.gamma_d, noise=SqueezedWhite.perfect(max(spec.noise.n_t, 1.0)),
                     omega=spec.omega)
    run = IntegratorConfig(step=cfg.step, t_end=2.0, record_every=cfg.record_every)
    traj = evolve(build_hamiltonian_full(spec), build_liouvillian_full(spec),
                  _ground_state(8), run)
    worst = float(traj.trace_err.max())
    return worst <= 1e-8, f"max trace error {worst:.2e} (boundary squeezing)"


def _check_concurrence_goldens(cfg):
    bell = np.zeros((4, 4), dtype=CPLX)
    for i in (0, 3):
        for j in (0, 3):
            bell[i, j] = 0.5
    c_bell = concurrence(bell).value
    prod = np.zeros((4, 4), dtype=CPLX)
    prod[0, 0] = 1.0
    c_prod = concurrence(prod).value
    psi_m = np.zeros((4, 4), dtype=CPLX)
    psi_m[1, 1] = psi_m[2, 2] = 0.5
    psi_m[1, 2] = psi_m[2, 1] = -0.5
    werner = 0.8 * psi_m + 0.2 * np.eye(4, dtype=CPLX) / 4
    c_wer = concurrence(werner).value
    ok = (abs(c_bell - 1.0) <= 1e-10 and c_prod == 0.0 and abs(c_wer - 0.7) <= 1e-9)
    return ok, f"bell={c_bell:.12f} product={c_prod} werner={c_wer:.12f}"


def _check_mode_e_decoupling(cfg):
    spec = cfgmod.model_spec(cfg)
    reduced, _ = collective_transform(spec)
    h = build_hamiltonian_reduced(reduced, with_spectator=True)
    terms = build_liouvillian_reduced(reduced, with_spectator=True)
    run = IntegratorConfig(step=cfg.step, t_end=5.0, record_every=cfg.record_every)
    traj = evolve(h, terms, _ground_state(8), run)
    worst = float(traj.populations[:, 1].max())
    return worst <= 1e-10, f"max spectator population {worst:.2e}"


def _check_series_consistency(cfg):
    spec = cfgmod.model_spec(cfg)
    reduced, _ = collective_transform(spec)
    h = build_hamiltonian_reduced(reduced)
    terms = build_liouvillian_reduced(reduced)
    series = perturbative_series(h, terms, _ground_state(4), 2)
    errs = []
    for t in (0.02, 0.04):
        n = max(1, int(round(t / cfg.step)))
        run = IntegratorConfig(step=t / n, t_end=t, record_every=n)
        num = evolve(h, terms, _ground_state(4), run).states[-1]
        errs.append(np.abs(num - evaluate_series(series, t)).max())
    # truncation error should scale ~ t^3: doubling t -> factor 8, within 4x
    ratio = errs[1] / max(errs[0], 1e-300)
    ok = errs[1] < 1e-4 and 2.0 <= ratio <= 32.0
    return ok, f"errors {errs[0]:.2e} -> {errs[1]:.2e} (ratio {ratio:.1f})"


def _check_rabi_exchange(cfg):
    reduced, _ = collective_transform(cfgmod.model_spec(cfg))
    lossless = ReducedSpec(g=reduced.g, gamma=0.0, gamma_d=0.0, noise=White(0.0))
    h = build_hamiltonian_reduced(lossless)
    rho0 = np.zeros((4, 4), dtype=CPLX)
    rho0[1, 1] = 1.0  # bus excited, mode C ground
    run = IntegratorConfig(step=cfg.step, t_end=1.0,
                           record_every=max(1, int(round(1.0 / cfg.step))))
    traj = evolve(h, [], rho0, run)
    p_d = traj.populations[-1, 1]
    want = math.cos(reduced.g * traj.times[-1]) ** 2
    return abs(p_d - want) <= 1e-6, f"bus population {p_d:.8f} vs cos^2 {want:.8f}"


def _check_stationary_at_zero_noise(cfg):
    spec = cfgmod.model_spec(cfg)
    spec0 = ModelSpec(g_ad=spec.g_ad, g_bd=spec.g_bd, gamma=spec.gamma,
                      gamma_d=spec.gamma_d, noise=White(0.0), omega=spec.omega)
    run = IntegratorConfig(step=cfg.step, t_end=2.0, record_every=cfg.record_every)
    traj = evolve(build_hamiltonian_full(spec0), build_liouvillian_full(spec0),
                  _ground_state(8), run)
    worst = max(concurrence_ab(s).value for s in traj.states)
    return worst <= 1e-12, f"max concurrence {worst:.2e} at n_T = 0"


def _check_thermal_steady_state(cfg):
    spec = cfgmod.model_spec(cfg)
    gd = spec.gamma_d if spec.gamma_d > 0 else 0.2
    terms = [LindbladTerm(sigma_m, gd * 2.0), LindbladTerm(sigma_p, gd * 1.0)]
    h = np.zeros((2, 2), dtype=CPLX)
    coarse = IntegratorConfig(step=max(cfg.step, 1e-2), t_end=1.0)
    rho, _ = steady_state_longtime(h, terms, np.diag([1.0, 0.0]).astype(CPLX),
                                   50.0 / gd, coarse)
    p_e = rho[1, 1].real
    return abs(p_e - 1.0 / 3.0) <= 1e-6, f"excited population {p_e:.8f} vs 1/3"


def _check_collective_rotation(cfg):
    """Generator rewritten with rotated collective jumps must match entrywise."""
    spec = cfgmod.model_spec(cfg)
    rng = np.random.default_rng(cfg.seed)
    reduced, u = collective_transform(spec)
    v = kron(u, id2)
    rot = lambda x: v @ kron(x, id2) @ v.conj().T
    s_c, s_e = collective_jump_ops(spec)

    bus_only = ModelSpec(g_ad=spec.g_ad, g_bd=spec.g_bd, gamma=0.0,
                         gamma_d=spec.gamma_d, noise=spec.noise, omega=spec.omega)
    terms_rot = build_liouvillian_full(bus_only)
    if spec.gamma > 0:
        terms_rot += [LindbladTerm(rot(s), spec.gamma) for s in (s_c, s_e)]
    sp_d = kron(kron(id2, id2), sigma_p)
    h_rot = reduced.g * (sp_d @ rot(s_c))
    h_rot = h_rot + h_rot.conj().T

    h_full = build_hamiltonian_full(spec)
    terms_full = build_liouvillian_full(spec)
    worst = 0.0
    for _ in range(10):
        a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        r = a + a.conj().T
        lhs = v @ rhs(h_full, terms_full, v.conj().T @ r @ v) @ v.conj().T
        worst = max(worst, float(np.abs(lhs - rhs(h_rot, terms_rot, r)).max()))
    return worst <= 1e-12, f"max generator deviation {worst:.2e}"


def cmd_validate(cfg) -> int:
    """Run the invariant checks and print a pass/fail table."""
    checks = [
        ("physical-state bounds (white)", _check_physicality),
        ("physical-state bounds (squeezed boundary)", _check_physicality_squeezed),
        ("concurrence golden values", _check_concurrence_goldens),
        ("spectator-mode decoupling", _check_mode_e_decoupling),
        ("collective-mode rotation", _check_collective_rotation),
        ("short-time series consistency", _check_series_consistency),
        ("resonant exchange accuracy", _check_rabi_exchange),
        ("stationarity at zero noise", _check_stationary_at_zero_noise),
        ("thermal steady state", _check_thermal_steady_state),
    ]
    all_ok = True
    width = max(len(name) for name, _ in checks)
    for name, fn in checks:
        try:
            ok, detail = fn(cfg)
        except (NoisyBusError, ValueError) as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        all_ok &= ok
        print(f"{name:<{width}}  {'PASS' if ok else 'FAIL'}  {detail}")
    return EXIT_OK if all_ok else EXIT_VALIDATE


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noisybus",
        description="Noise-driven entanglement of two atoms through a dissipative bus",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("simulate", "integrate one trajectory of the three-atom model"),
        ("sweep", "grid sweep with CSV + SVG/PNG heatmap output"),
        ("shorttime", "integrated vs quadratic-law concurrence of the C-D pair"),
        ("validate", "run the built-in invariant checks"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", metavar="PATH", help="flat key = value configuration file")
        p.add_argument("--out", metavar="DIR", help="output directory")
        p.add_argument("--workers", type=int, metavar="N", help="process-pool width")
        p.add_argument("--noise", choices=("white", "squeezed"))
        p.add_argument("--nt", type=float, metavar="X", help="noise intensity n_T")
        p.add_argument("--m", metavar="X", help="squeezing parameter ('perfect' or number)")
        p.add_argument("--gamma", type=float, metavar="X")
        p.add_argument("--gamma-d", type=float, metavar="X")
        p.add_argument("--gad", type=float, metavar="X")
        p.add_argument("--gbd", type=float, metavar="X")
        p.add_argument("--t-end", type=float, metavar="X")
        p.add_argument("--step", type=float, metavar="X")
        p.add_argument("--record-every", type=int, metavar="N")
        p.add_argument("--seed", type=int, metavar="N")
        p.add_argument("--axis1", metavar="SPEC", help="sweep axis, name:start:stop:count")
        p.add_argument("--axis2", metavar="SPEC")
        p.add_argument("--t-fixed", metavar="X", help="snapshot time ('auto' = 1/g)")
        p.add_argument("--shorttime-rtol", type=float, metavar="X")
        p.add_argument("--shorttime-window", metavar="X")
    return parser


_FLAG_TO_KEY = {
    "out": "out", "workers": "workers", "noise": "noise", "nt": "n_t", "m": "m",
    "gamma": "gamma", "gamma_d": "gamma_d", "gad": "g_ad", "gbd": "g_bd",
    "t_end": "t_end", "step": "step", "record_every": "record_every",
    "seed": "seed", "axis1": "axis1", "axis2": "axis2", "t_fixed": "t_fixed",
    "shorttime_rtol": "shorttime_rtol", "shorttime_window": "shorttime_window",
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        file_values = cfgmod.parse_config_file(args.config) if args.config else {}
        overrides = {key: getattr(args, flag) for flag, key in _FLAG_TO_KEY.items()
                     if getattr(args, flag, None) is not None}
        cfg = cfgmod.make_run_config(file_values, overrides)
    except (ConfigError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    command = {
        "simulate": cmd_simulate,
        "sweep": cmd_sweep,
        "shorttime": cmd_shorttime,
        "validate": cmd_validate,
    }[args.command]
    try:
        return command(cfg)
    except StateCorrupted as exc:
        print(f"integrator failure: {exc}", file=sys.stderr)
        return EXIT_INTEGRATOR
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
