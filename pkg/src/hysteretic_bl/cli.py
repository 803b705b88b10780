"""Command-line front end: ``hbl <subcommand> [options]``.

Exit codes: 0 on success, 2 for configuration or input errors, 3 when a
solver fails.
"""

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .charpoints import characteristic_points, problem_points
from .config import FIGURE_NAMES, parse_config, parse_text
from .constitutive import CURVE_PRESETS
from .csvio import write_csv
from .errors import ConfigError
from .figures import ELEMENT_HEADER, element_rows, run_figure
from .pde import compare_to_hyperbolic, run
from .travelling_wave import integrate_profile
from .waves import eval_solution, solve_riemann_classical, solve_riemann_hysteretic

log = logging.getLogger("hysteretic_bl")

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER = 0, 2, 3


def _overrides(pairs):
    out = {}
    for item in pairs or ():
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects section.key=value, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def load_experiment(args):
    """Experiment from ``--config`` (or defaults) with ``--preset``/``--set`` applied."""
    overrides = _overrides(getattr(args, "set", None))
    if getattr(args, "preset", None):
        if args.preset not in CURVE_PRESETS:
            raise ConfigError(f"unknown curve preset {args.preset!r}; known: {', '.join(sorted(CURVE_PRESETS))}")
        overrides["curves.preset"] = args.preset
    if args.config:
        return parse_config(args.config, overrides)
    return parse_text("[riemann]\nS_B = 0.1\nS_T = 0.8\n", "<defaults>", overrides)


def _out_dir(args, exp):
    return Path(args.out if args.out else exp.out_dir)


def _riemann(exp):
    if exp.classical:
        return solve_riemann_classical(exp.flux, exp.S_T, exp.S_B)
    return solve_riemann_hysteretic(exp.flux, exp.curves, exp.S_T, exp.S_B)


def cmd_charpoints(args, exp):
    m = exp.flux
    rows = list(characteristic_points(m, exp.curves).as_rows())
    rows += problem_points(m, exp.S_B, exp.S_T).as_rows()
    if args.out:
        write_csv(Path(args.out) / "charpoints.csv", ("name", "value"), rows)
    else:
        write_csv(sys.stdout, ("name", "value"), rows)


def cmd_riemann(args, exp):
    w = _riemann(exp)
    out = _out_dir(args, exp)
    rows = element_rows(w)
    write_csv(out / "elements.csv", ELEMENT_HEADER, rows)
    times = exp.times or (1.0,)
    reach = 1.2 * max(times) * max(abs(s) for pair in w.speeds() for s in pair) or 1.0
    x = np.linspace(-reach, reach, exp.x_samples)
    prof = []
    for t in times:
        prof += [(t, a, b) for a, b in zip(x, eval_solution(w, x, t))]
    write_csv(out / "profile.csv", ("time", "x", "S"), prof)
    print(f"case {w.case}{' (derived)' if w.derived else ''}")
    write_csv(sys.stdout, ELEMENT_HEADER, rows)


def cmd_twave(args, exp):
    tw = exp.twave
    S_l, S_r = tw.get("S_l"), tw.get("S_r")
    if S_l is None or S_r is None:
        raise ConfigError("twave needs S_l and S_r (in [twave] or via --set twave.S_l=...)")
    which = tw.get("curve", "imbibition")
    curve = exp.curves.imbibition if which == "imbibition" else exp.curves.drainage
    prof = integrate_profile(exp.flux, curve, S_l, S_r, eps=tw.get("eps", 1e-6), label=which)
    path = write_csv(_out_dir(args, exp) / "twave.csv", ("eta", "S", "p"), prof.samples)
    print(f"c = {prof.c:.17g}, {len(prof.eta)} samples, decay rates {prof.decay_left:.6g} / {prof.decay_right:.6g} -> {path}")


def _simulate(exp, out, progress=None):
    cfg = exp.sim_config()
    res = run(cfg, cadence=exp.cadence, times=None if exp.cadence else exp.snapshot_times(), progress=progress)
    rows = []
    for s in res.snapshots:
        rows += [(s.t, a, b, c, d) for a, b, c, d in zip(s.x, s.S, s.p, s.tags)]
    write_csv(out / "snapshots.csv", ("time", "x", "S", "p", "state"), rows)
    write_csv(out / "ledger.csv", ("time", "mass", "left_flux", "right_flux"), res.ledger)
    return res


def cmd_simulate(args, exp):
    out = _out_dir(args, exp)
    res = _simulate(exp, out, _progress if args.verbose else None)
    d_mass, ledger, ideal = res.mass_balance()
    print(f"t = {res.state.t:g}: mass change {d_mass:.10g}, flux ledger {ledger:.10g}, T(h_T - h_B) = {ideal:.10g}")


def cmd_compare(args, exp):
    out = _out_dir(args, exp)
    res = _simulate(exp, out, _progress if args.verbose else None)
    w = _riemann(exp)
    rows, fronts = [], []
    for c in compare_to_hyperbolic(res.snapshots, w, res.cfg):
        pe = c.plateau_expected or (None, None)
        rows.append((c.t, c.l1, c.l1_per_length, c.linf, c.plateau_left, c.plateau_right, pe[0], pe[1]))
        fronts += [(c.t, f.position_exact, f.position_sim, f.error, f.stationary) for f in c.fronts]
    header = ("time", "l1", "l1_per_length", "linf", "plateau_left", "plateau_right", "expected_left", "expected_right")
    write_csv(out / "comparison.csv", header, rows)
    write_csv(out / "fronts.csv", ("time", "exact", "simulated", "error", "stationary"), fronts)
    write_csv(sys.stdout, header, rows)


def cmd_figure(args, exp):
    files = run_figure(
        args.name,
        args.out or "figures",
        full=args.full,
        config=args.config,
        overrides=_overrides(args.set),
        progress=_progress if args.verbose else None,
    )
    for f in files:
        print(f)


def _sweep_one(job):
    path, out, overrides = job
    try:
        exp = parse_config(path, overrides)
        res = _simulate(exp, Path(out))
        w = _riemann(exp)
        worst = max(c.l1_per_length for c in compare_to_hyperbolic(res.snapshots, w, res.cfg))
        return path, EXIT_OK, worst, ""
    except ConfigError as exc:
        return path, EXIT_CONFIG, None, str(exc)
    except (ValueError, RuntimeError) as exc:
        return path, EXIT_SOLVER, None, f"{type(exc).__name__}: {exc}"


def cmd_sweep(args, exp_unused):
    base = Path(args.out or "sweep")
    overrides = _overrides(args.set)
    if args.preset:
        overrides["curves.preset"] = args.preset
    jobs = [(str(p), str(base / Path(p).stem), overrides) for p in args.configs]
    with ProcessPoolExecutor(max_workers=args.workers) as pool:
        results = list(pool.map(_sweep_one, jobs))
    rows = [(p, code, l1, msg) for p, code, l1, msg in results]
    write_csv(base / "sweep.csv", ("config", "exit_code", "max_l1_per_length", "message"), rows)
    write_csv(sys.stdout, ("config", "exit_code", "max_l1_per_length", "message"), rows)
    return max(code for _, code, _, _ in results)


def _progress(state):
    log.info("t = %.6g, mass = %.10g, mean iterations %.2f", state.t, state.mass, float(np.mean(state.iterations or [0])))


COMMANDS = {
    "charpoints": cmd_charpoints,
    "riemann": cmd_riemann,
    "twave": cmd_twave,
    "simulate": cmd_simulate,
    "compare": cmd_compare,
    "figure": cmd_figure,
    "sweep": cmd_sweep,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="experiment config file")
    common.add_argument("--out", help="output directory")
    common.add_argument("--preset", help=f"curve preset ({', '.join(sorted(CURVE_PRESETS))})")
    common.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE", help="override one config value")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="hbl", description="Hysteretic Buckley-Leverett Riemann solutions and simulations.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("charpoints", parents=[common], help="characteristic saturations as name,value CSV")
    sub.add_parser("riemann", parents=[common], help="exact wave structure and sampled profiles")
    sub.add_parser("twave", parents=[common], help="travelling-wave profile behind a shock")
    sub.add_parser("simulate", parents=[common], help="run the parabolic simulator")
    sub.add_parser("compare", parents=[common], help="simulate and measure the distance to the exact solution")
    fig = sub.add_parser("figure", parents=[common], help="reproduce one validation figure")
    fig.add_argument("name", choices=FIGURE_NAMES)
    fig.add_argument("--full", action="store_true", help="use the configured grid instead of the desk-scale one")
    sw = sub.add_parser("sweep", parents=[common], help="simulate several configs in a worker pool")
    sw.add_argument("configs", nargs="+")
    sw.add_argument("--workers", type=int, default=None)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        exp = None if args.command in ("figure", "sweep") else load_experiment(args)
        if args.command == "figure" and args.preset:
            raise ConfigError("figure takes its curves from the figure config; use --config to change them")
        code = COMMANDS[args.command](args, exp)
        return code or EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"invalid input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RuntimeError as exc:
        print(f"solver failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
