"""Reproduction of the validation figures as CSV tables and SVG plots.

``fig2`` and ``fig5`` need only the exact solutions. ``fig6`` and ``fig7``
run the parabolic simulator; by default on the desk-scale grid with
snapshots at ``T/2`` and ``T``, and on the configured grid with ``full``.
"""

import logging
from pathlib import Path

import numpy as np

from .config import bundled_config, parse_config
from .constitutive import curve_preset
from .csvio import write_csv
from .pde import compare_to_hyperbolic, run
from .svgplot import Plot
from .waves import eval_solution, solve_riemann_classical, solve_riemann_hysteretic

log = logging.getLogger(__name__)

PANEL_TITLES = {"paper-set-1": "curve set 1", "paper-set-2": "curve set 2", "no-hysteresis": "no hysteresis"}

ELEMENT_HEADER = ("type", "S_l", "S_r", "speed_l", "speed_r", "left_state", "right_state", "p_l", "p_r")


def element_rows(w):
    return [tuple(r[k] for k in ELEMENT_HEADER) for r in w.rows()]


def exact_profile(w, x, t):
    return eval_solution(w, np.asarray(x, float), t)


def _panels(exp):
    return exp.figure.get("panels") or (exp.curve_preset,)


def _fig2(exp, out):
    m = exp.flux
    t = exp.figure.get("t", 100.0)
    classical = solve_riemann_classical(m, exp.S_T, exp.S_B)
    rows, files = [], []
    for panel in _panels(exp):
        w = solve_riemann_hysteretic(m, curve_preset(panel), exp.S_T, exp.S_B)
        reach = 1.15 * t * max(abs(s) for pair in w.speeds() + classical.speeds() for s in pair)
        x = np.linspace(-reach, reach, exp.x_samples)
        Sc, Sh = exact_profile(classical, x, t), exact_profile(w, x, t)
        rows += [(panel, a, b, c) for a, b, c in zip(x, Sc, Sh)]
        p = Plot(f"t = {t:g}, {PANEL_TITLES.get(panel, panel)}", "x", "S", ylim=(0, 1))
        p.line(x, Sc, "classical", color="#c0392b", dash="6 4")
        p.line(x, Sh, "hysteretic", color="#1f4e9c")
        files.append(p.save(out / f"fig2_{panel}.svg"))
    files.insert(0, write_csv(out / "fig2_profiles.csv", ("panel", "x", "S_classical", "S_hysteretic"), rows))
    return files


def _fig5(exp, out):
    m = exp.flux
    t = exp.figure.get("t", 100.0)
    rows, files = [], []
    for panel in _panels(exp):
        w = solve_riemann_hysteretic(m, curve_preset(panel), exp.S_T, exp.S_B)
        rows += [(panel, w.case) + r for r in element_rows(w)]
        reach = 1.15 * t * max(abs(s) for pair in w.speeds() for s in pair)
        p = Plot(f"wave fan, {PANEL_TITLES.get(panel, panel)} ({w.case})", "x", "t", xlim=(-reach, reach), ylim=(0, t))
        for e in w.elements:
            if e.kind == "shock":
                p.line([0, e.c * t], [0, t], color="#c0392b", width=2.2 if e.stationary else 1.8)
            else:
                for z in np.linspace(e.zeta_from, e.zeta_to, 9):
                    p.line([0, z * t], [0, t], color="#1f4e9c", dash="4 3", width=1.0)
        files.append(p.save(out / f"fig5_{panel}.svg"))
    header = ("panel", "case") + ELEMENT_HEADER
    files.insert(0, write_csv(out / "fig5_waves.csv", header, rows))
    return files


def _fig_pde(exp, out, name, full, progress=None):
    if not full:
        exp = exp.desk()
    cfg = exp.sim_config()
    times = exp.snapshot_times()
    log.info("%s: %d cells, %d steps", name, cfg.n_cells, cfg.n_steps)
    res = run(cfg, times=times, progress=progress)
    snaps = [s for s in res.snapshots if any(abs(s.t - t) < 0.5 * cfg.dt for t in times)]
    w = solve_riemann_hysteretic(cfg.flux, cfg.curves, cfg.S_T, cfg.S_B)

    files = []
    rows = []
    p = Plot(f"{name}: simulated vs exact", "x", "S", ylim=(0, 1))
    colors = ("#1f4e9c", "#2e8b57", "#8e44ad", "#d4860b")
    for i, s in enumerate(snaps):
        exact = exact_profile(w, s.x, s.t)
        rows += [(s.t, a, b, c) for a, b, c in zip(s.x, s.S, exact)]
        p.line(s.x, s.S, f"simulated t = {s.t:g}", color=colors[i % len(colors)])
        p.line(s.x, exact, f"exact t = {s.t:g}", color="#222222", dash="5 4", width=1.2)
    files.append(write_csv(out / f"{name}_profiles.csv", ("time", "x", "S_sim", "S_exact"), rows))
    files.append(p.save(out / f"{name}_profiles.svg"))

    last = snaps[-1]
    files.append(
        write_csv(out / f"{name}_pressure.csv", ("x", "S", "p", "state"), zip(last.x, last.S, last.p, last.tags))
    )
    grid = np.linspace(0.05, 0.99, 300)
    q = Plot(f"{name}: (S, p) at t = {last.t:g}", "S", "p")
    q.line(grid, cfg.curves.pi(grid), "imbibition curve", color="#1f4e9c")
    q.line(grid, cfg.curves.pd(grid), "drainage curve", color="#c0392b")
    left = last.x < 0
    q.scatter(last.S[left][::4], last.p[left][::4], "x < 0", color="#d4860b", size=1.6)
    q.scatter(last.S[~left][::4], last.p[~left][::4], "x > 0", color="#2e8b57", size=1.6)
    files.append(q.save(out / f"{name}_pressure.svg"))

    cmp_rows = []
    for c in compare_to_hyperbolic(snaps, w, cfg):
        pe = c.plateau_expected or (None, None)
        cmp_rows.append((c.t, c.l1, c.l1_per_length, c.linf, c.plateau_left, c.plateau_right, pe[0], pe[1]))
    header = ("time", "l1", "l1_per_length", "linf", "plateau_left", "plateau_right", "expected_left", "expected_right")
    files.append(write_csv(out / f"{name}_comparison.csv", header, cmp_rows))
    files.append(
        write_csv(out / f"{name}_ledger.csv", ("time", "mass", "left_flux", "right_flux"), res.ledger)
    )
    return files


def run_figure(name, out_dir, full=False, config=None, overrides=None, progress=None):
    """Write the CSV and SVG files of figure ``name`` into ``out_dir``.

    ``config`` replaces the bundled config of that figure; ``overrides``
    maps ``"section.key"`` to values as on the command line.
    """
    exp = parse_config(config if config is not None else bundled_config(name), overrides)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if name == "fig2":
        return _fig2(exp, out)
    if name == "fig5":
        return _fig5(exp, out)
    if name in ("fig6", "fig7"):
        return _fig_pde(exp, out, name, full, progress)
    raise ValueError(f"unknown figure {name!r}")
