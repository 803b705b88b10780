"""Parabolic capillarity simulator with relaxed play-type hysteresis.

Cell-centred finite differences on ``(-H, H)``. Each time step freezes the
saturation, solves the nonlinear elliptic problem

    Phi(S^n, p) + D_x [ h(S^n) + delta k(S^n) D_x p ] = 0

for the pressure, and then advances the saturation conservatively with the
same face fluxes. The left face carries the prescribed total flux
``h(S_T)``; the right face holds ``p = p_i(S_B)`` through a mirrored ghost.
"""

import logging
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import solve_banded

from .constitutive import FluxModel, HysteresisCurves
from .errors import ConfigError, NonlinearSolveFailure

log = logging.getLogger(__name__)

CLAMP_WARN = 1e-8


@dataclass(frozen=True)
class SimConfig:
    """Grid, time stepping, model and solver settings for one run."""

    S_B: float
    S_T: float
    flux: FluxModel
    curves: HysteresisCurves
    delta: float = 0.25
    tau: float = 0.01
    H: float = 30.0
    dx: float = 0.05
    dt: float = 1e-3
    T_end: float = 30.0
    tol: float = 1e-9
    max_iter: int = 50
    solver: str = "newton"
    face_flux: str = "upwind"
    damping: float = 0.5

    def __post_init__(self):
        for name in ("delta", "tau", "H", "dx", "dt"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if self.T_end < 0:
            raise ConfigError(f"T_end must be non-negative, got {self.T_end}")
        n = 2 * self.H / self.dx
        if abs(n - round(n)) > 1e-6 * n or round(n) < 10:
            raise ConfigError(f"2H/dx must be an integer >= 10, got {n}")
        if self.dt / self.tau > 0.1 + 1e-12:
            raise ConfigError(f"dt/tau = {self.dt / self.tau:g} exceeds 0.1")
        for name in ("S_B", "S_T"):
            if not 0 < getattr(self, name) < 1:
                raise ConfigError(f"{name} must lie in (0, 1)")
        if self.solver not in ("newton", "fixed-point"):
            raise ConfigError(f"unknown solver {self.solver!r}")
        if self.face_flux not in ("godunov", "upwind"):
            raise ConfigError(f"unknown face flux {self.face_flux!r}")

    @property
    def n_cells(self):
        return int(round(2 * self.H / self.dx))

    @property
    def n_steps(self):
        return int(round(self.T_end / self.dt))

    @property
    def p_right(self):
        return float(self.curves.pi(self.S_B))

    @property
    def flux_left(self):
        return float(self.flux.h(self.S_T))


DESK_SCALE = dict(H=30.0, dx=0.05, dt=1e-3, T_end=30.0, delta=0.25, tau=0.01)
PAPER_SCALE = dict(H=100.0, dx=0.01, dt=1e-4, T_end=100.0, delta=0.25, tau=0.01)


@dataclass
class SimState:
    x: np.ndarray
    S: np.ndarray
    p: np.ndarray
    t: float = 0.0
    steps: int = 0
    flux_left: float = 0.0
    flux_right: float = 0.0
    inflow: float = 0.0
    outflow: float = 0.0
    mass0: float = 0.0
    iterations: list = field(default_factory=list)

    @property
    def dx(self):
        return float(self.x[1] - self.x[0])

    @property
    def mass(self):
        return float(np.sum(self.S) * self.dx)

    def copy(self):
        return replace(self, x=self.x, S=self.S.copy(), p=self.p.copy(), iterations=[])


@dataclass(frozen=True)
class Snapshot:
    t: float
    x: np.ndarray
    S: np.ndarray
    p: np.ndarray
    tags: tuple


@dataclass
class RunResult:
    cfg: SimConfig
    snapshots: list
    ledger: list
    state: SimState

    def mass_balance(self):
        """(mass change, flux-ledger prediction, ideal T (h(S_T) - h(S_B)))."""
        st = self.state
        ideal = st.t * (float(self.cfg.flux.h(self.cfg.S_T)) - float(self.cfg.flux.h(self.cfg.S_B)))
        return st.mass - st.mass0, st.inflow - st.outflow, ideal


def state_tags(hc, S, p, tol=1e-3):
    """Per-cell hysteresis state read off the (S, p) position."""
    pi = hc.pi(S)
    pd = hc.pd(S)
    return tuple(
        np.where(p <= pi + tol, "imbibition", np.where(p >= pd - tol, "drainage", "undetermined")).tolist()
    )


def init_state(cfg):
    """Riemann data on the grid; pressure on the curve matching each side."""
    n = cfg.n_cells
    x = -cfg.H + (np.arange(n) + 0.5) * cfg.dx
    S = np.where(x < 0, cfg.S_T, cfg.S_B).astype(float)
    if cfg.S_T == cfg.S_B:
        p = np.full(n, cfg.p_right)
    else:
        p = np.where(x < 0, cfg.curves.pd(cfg.S_T), cfg.curves.pi(cfg.S_B)).astype(float)
    st = SimState(x=x, S=S, p=p)
    st.mass0 = st.mass
    return st


class _Step:
    """Face coefficients and residual for one frozen-saturation solve."""

    def __init__(self, cfg, S):
        m, hc = cfg.flux, cfg.curves
        self.cfg = cfg
        self.dx = cfg.dx
        self.h = m.h(S)
        self.pi = hc.pi(S)
        self.pd = hc.pd(S)
        self.S_ghost = cfg.S_B
        self.h_ghost = float(m.h(cfg.S_B))
        if cfg.face_flux == "godunov":
            S_ext = np.append(S, cfg.S_B)
            self.grav = _godunov(m, S_ext[:-1], S_ext[1:])
            h_ext = np.append(self.h, self.h_ghost)
            self.k = 0.5 * (h_ext[:-1] + h_ext[1:])
        else:
            self.grav = None
            self.k = None

    def _gradients(self, p):
        g = np.empty_like(p)
        g[:-1] = (p[1:] - p[:-1]) / self.dx
        g[-1] = 2.0 * (self.cfg.p_right - p[-1]) / self.dx
        return g

    def refresh_upwind(self, p):
        """Upwind ``h`` by the sign of the total face flux ``1 + delta D_x p``."""
        if self.cfg.face_flux != "upwind":
            return
        g = self._gradients(p)
        drive = 1.0 + self.cfg.delta * g
        h_left = self.h
        h_right = np.append(self.h[1:], self.h_ghost)
        hf = np.where(drive > 1e-12, h_left, np.where(drive < -1e-12, h_right, 0.5 * (h_left + h_right)))
        self.grav = hf
        self.k = hf

    def face_fluxes(self, p):
        """Fluxes on all ``n + 1`` faces, left boundary first."""
        F = np.empty(p.size + 1)
        F[0] = self.cfg.flux_left
        F[1:] = self.grav + self.cfg.delta * self.k * self._gradients(p)
        return F

    def rate(self, p):
        tau = self.cfg.tau
        return np.where(p < self.pi, (self.pi - p) / tau, np.where(p > self.pd, (self.pd - p) / tau, 0.0))

    def residual(self, p):
        F = self.face_fluxes(p)
        return self.rate(p) + (F[1:] - F[:-1]) / self.dx

    def linear_bands(self):
        """Banded matrix of the diffusion operator ``p -> D_x(delta k D_x p)``."""
        n = self.h.size
        a = self.cfg.delta * self.k / self.dx**2
        ab = np.zeros((3, n))
        ab[0, 1:] = a[:-1]
        ab[2, :-1] = a[:-1]
        ab[1, :] = -a
        ab[1, 1:] -= a[:-1]
        ab[1, -1] -= a[-1]  # mirrored ghost doubles the boundary coefficient
        return ab

    def rate_slope(self, p):
        outside = (p < self.pi) | (p > self.pd)
        return np.where(outside, -1.0 / self.cfg.tau, 0.0)


def _godunov(m, a, b):
    """Godunov flux for the unimodal ``h`` with maximum at ``S_M``."""
    S_M = m.landmarks[0]
    ha, hb = m.h(a), m.h(b)
    rising = np.minimum(ha, hb)
    spans_max = (b <= S_M) & (S_M <= a)
    falling = np.where(spans_max, float(m.h(S_M)), np.maximum(ha, hb))
    return np.where(a <= b, rising, falling)


def _newton(sys, p0, tol, max_iter):
    p = p0.copy()
    sys.refresh_upwind(p)
    R = sys.residual(p)
    rn = float(np.max(np.abs(R)))
    trace = [rn]
    for _ in range(max_iter):
        if rn < tol:
            return p, trace
        ab = sys.linear_bands()
        ab[1] += sys.rate_slope(p)
        dp = solve_banded((1, 1), ab, -R)
        lam = 1.0
        while True:
            p_try = p + lam * dp
            sys.refresh_upwind(p_try)
            R_try = sys.residual(p_try)
            rn_try = float(np.max(np.abs(R_try)))
            if rn_try < (1 - 1e-4 * lam) * rn or rn_try < tol or lam < 1.0 / 64:
                break
            lam *= 0.5
        p, R, rn = p_try, R_try, rn_try
        trace.append(rn)
    if rn < tol:
        return p, trace
    raise NonlinearSolveFailure(f"Newton did not converge; residual {rn:.3e}", trace)


def _fixed_point(sys, p0, tol, max_iter, damping):
    """Damped linearised iteration ``-L (p_new - p) + Phi(p) + A p_new + b = 0``."""
    L = 1.0 / sys.cfg.tau
    p = p0.copy()
    trace = []
    for _ in range(max_iter):
        sys.refresh_upwind(p)
        R = sys.residual(p)
        rn = float(np.max(np.abs(R)))
        trace.append(rn)
        if rn < tol:
            return p, trace
        ab = sys.linear_bands()
        ab[1] -= L
        # A p_new - L p_new = -(Phi(p) + b) - L p, and R = Phi(p) + A p + b
        A_p = _band_matvec(sys.linear_bands(), p)
        rhs = -(R - A_p) - L * p
        p_new = solve_banded((1, 1), ab, rhs)
        p = p + damping * (p_new - p)
    raise NonlinearSolveFailure(f"fixed-point iteration did not converge; residual {trace[-1]:.3e}", trace)


def _band_matvec(ab, v):
    out = ab[1] * v
    out[:-1] += ab[0, 1:] * v[1:]
    out[1:] += ab[2, :-1] * v[:-1]
    return out


def step(state, cfg):
    """Advance ``state`` by one backward-Euler step of size ``cfg.dt`` in place."""
    sys = _Step(cfg, state.S)
    if cfg.solver == "newton":
        try:
            p, trace = _newton(sys, state.p, cfg.tol, cfg.max_iter)
        except NonlinearSolveFailure as exc:
            log.warning("Newton failed at t=%.6g (%s); falling back to fixed point", state.t, exc)
            p, trace = _fixed_point(sys, state.p, cfg.tol, 50 * cfg.max_iter, cfg.damping)
    else:
        p, trace = _fixed_point(sys, state.p, cfg.tol, 50 * cfg.max_iter, cfg.damping)

    sys.refresh_upwind(p)
    F = sys.face_fluxes(p)
    dS = -cfg.dt * (F[1:] - F[:-1]) / cfg.dx
    if np.max(np.abs(dS)) > 0.1:
        warnings.warn(f"large saturation change {np.max(np.abs(dS)):.3g} in one step", RuntimeWarning, stacklevel=2)
    S = state.S + dS
    over = max(float(np.max(S - 1.0)), float(np.max(-S)))
    if over > CLAMP_WARN:
        warnings.warn(f"saturation left [0, 1] by {over:.3g}; clamping", RuntimeWarning, stacklevel=2)
    if over > 0:
        S = np.clip(S, 0.0, 1.0)

    state.S = S
    state.p = p
    state.t += cfg.dt
    state.steps += 1
    state.flux_left = float(F[0])
    state.flux_right = float(F[-1])
    state.inflow += cfg.dt * F[0]
    state.outflow += cfg.dt * F[-1]
    state.iterations.append(len(trace) - 1)
    return state


def _snapshot(state, cfg):
    return Snapshot(state.t, state.x, state.S.copy(), state.p.copy(), state_tags(cfg.curves, state.S, state.p))


def run(cfg, cadence=None, times=None, progress=None):
    """Step to ``cfg.T_end`` recording snapshots and a mass ledger.

    Snapshots are taken every ``cadence`` time units, or at the explicit
    ``times``; the initial and final states are always included.
    """
    state = init_state(cfg)
    n = cfg.n_steps
    marks = {0, n}
    if times is not None:
        marks |= {int(round(t / cfg.dt)) for t in times if 0 <= t <= cfg.T_end + 1e-12}
    elif cadence:
        every = max(1, int(round(cadence / cfg.dt)))
        marks |= set(range(0, n + 1, every))
    snaps = [_snapshot(state, cfg)]
    ledger = [(0.0, state.mass, cfg.flux_left, 0.0)]
    for k in range(1, n + 1):
        step(state, cfg)
        state.t = k * cfg.dt
        if k in marks:
            snaps.append(_snapshot(state, cfg))
            ledger.append((state.t, state.mass, state.flux_left, state.flux_right))
            if progress:
                progress(state)
    return RunResult(cfg, snaps, ledger, state)


# -- comparison with the hyperbolic limit ------------------------------------


@dataclass
class FrontError:
    position_exact: float
    position_sim: float | None
    stationary: bool

    @property
    def error(self):
        return None if self.position_sim is None else self.position_sim - self.position_exact


@dataclass
class SnapshotComparison:
    t: float
    l1: float
    l1_per_length: float
    linf: float
    fronts: list
    plateau_left: float | None = None
    plateau_right: float | None = None
    plateau_expected: tuple | None = None


def _crossing(x, S, level, centre, window):
    """Interpolated crossing of ``level`` nearest ``centre`` within ``window``."""
    s = S - level
    idx = np.nonzero(np.sign(s[:-1]) * np.sign(s[1:]) <= 0)[0]
    idx = idx[np.abs(x[idx] - centre) <= window]
    if idx.size == 0:
        return None
    i = idx[np.argmin(np.abs(x[idx] - centre))]
    if s[i + 1] == s[i]:
        return float(x[i])
    return float(x[i] - s[i] * (x[i + 1] - x[i]) / (s[i + 1] - s[i]))


def compare_to_hyperbolic(snapshots, w, cfg, m=None, probe=None):
    """Distance between simulated profiles and the exact Riemann solution.

    The interior excludes ``2 delta`` collars around every discontinuity and
    ``5 delta`` layers at both ends. ``probe`` (default ``10 delta``) sets
    where plateau values next to a stationary shock are read.
    """
    from .waves import eval_solution

    m = m if m is not None else cfg.flux
    probe = 10 * cfg.delta if probe is None else probe
    out = []
    for snap in snapshots:
        if snap.t <= 0:
            continue
        x = snap.x
        exact = eval_solution(w, x, snap.t, m)
        mask = np.abs(x) <= cfg.H - 5 * cfg.delta
        fronts = []
        for e in w.discontinuities():
            xs = e.c * snap.t
            mask &= np.abs(x - xs) > 2 * cfg.delta
            level = 0.5 * (e.S_l + e.S_r)
            fronts.append(FrontError(xs, _crossing(x, snap.S, level, xs, max(20 * cfg.delta, 0.2 * abs(xs))), e.stationary))
        diff = np.abs(snap.S - exact)
        l1 = float(np.sum(diff[mask]) * cfg.dx)
        cmp = SnapshotComparison(snap.t, l1, l1 / (2 * cfg.H), float(np.max(diff[mask])), fronts)
        st = w.stationary()
        if st:
            cmp.plateau_left = float(np.interp(-probe, x, snap.S))
            cmp.plateau_right = float(np.interp(probe, x, snap.S))
            cmp.plateau_expected = (st[0].S_l, st[0].S_r)
        out.append(cmp)
    return out
