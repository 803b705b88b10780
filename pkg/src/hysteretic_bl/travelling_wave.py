"""Travelling-wave profiles behind admissible shocks.

A shock ``{S_l, S_r, c}`` is the steep limit of a profile ``S(eta)`` with
``eta = (x - c t) / delta`` solving ``D(S) S' = F(S)`` where

    D(S) = -h(S) p_c'(S) > 0,
    F(S) = (S_l - S) c - (h(S_l) - h(S)),

and ``p = p_c(S)`` along a single capillary curve.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NotAdmissible, StiffError
from .waves import oleinik_margin, rh_speed

EPS_END = 1e-6
DS_MAX = 1e-3
MIN_STEP = 1e-12
STEP_TOL = 1e-12
TAIL_FRACTION = 0.2
ETA_SPAN = (-1e9, 1e9)
TAIL_GAP = 1e-12
TAIL_RATIO = 0.5
MIN_DECAY = 1e-8


@dataclass
class TWProfile:
    eta: np.ndarray
    S: np.ndarray
    p: np.ndarray
    S_l: float
    S_r: float
    c: float
    curve: str
    decay_left: float = np.nan
    decay_right: float = np.nan
    n_tail_left: int = 0
    n_tail_right: int = 0
    slope_cut_left: float = np.nan
    slope_cut_right: float = np.nan

    @property
    def samples(self):
        return list(zip(self.eta.tolist(), self.S.tolist(), self.p.tolist()))

    def reached_ends(self, eps=EPS_END):
        return abs(self.S[0] - self.S_l) <= eps * (1 + 1e-9) and abs(self.S[-1] - self.S_r) <= eps * (1 + 1e-9)


def _rk4(f, S, k):
    k1 = f(S)
    k2 = f(S + 0.5 * k * k1)
    k3 = f(S + 0.5 * k * k2)
    k4 = f(S + k * k3)
    return S + k * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0


def _march(f, S0, target, direction, eta_limit, eps, dS_max, tol=STEP_TOL):
    """Integrate from ``S0`` towards the rest point ``target``.

    ``direction`` is +1 (increasing eta) or -1. Each step keeps the increment
    below ``dS_max`` and below a fifth of the remaining gap, so the
    exponential tail is sampled geometrically, and its local error
    (estimated by step doubling) below ``tol``.
    """
    etas, Ss = [0.0], [S0]
    eta, S = 0.0, S0
    side = np.sign(S0 - target)
    k_err = np.inf
    while abs(S - target) > eps and abs(eta) < abs(eta_limit):
        rate = abs(f(S))
        if rate == 0.0:
            break
        k = min(dS_max / rate, TAIL_FRACTION * abs(S - target) / rate, abs(eta_limit) - abs(eta), k_err)
        while True:
            if k < MIN_STEP:
                raise StiffError(f"step collapsed at S={S}")
            full = _rk4(f, S, direction * k)
            half = _rk4(f, _rk4(f, S, direction * k / 2), direction * k / 2)
            err = abs(half - full)
            S_new = half + (half - full) / 15.0
            if (
                err <= tol
                and abs(S_new - S) <= dS_max
                and np.sign(S_new - target) == side
                and abs(S_new - target) < abs(S - target)
            ):
                break
            k *= 0.5
        k_err = 2.0 * k if err == 0 else k * min(2.0, 0.9 * (tol / err) ** 0.2)
        eta += direction * k
        S = S_new
        etas.append(eta)
        Ss.append(S)
    return etas, Ss


def _linear_tail(eta0, S0, target, rate, direction, gap_end, ratio=TAIL_RATIO):
    """Samples of ``target + (S0 - target) exp(rate (eta - eta0))`` beyond ``eta0``.

    Gaps shrink geometrically by ``ratio`` down to ``gap_end``. Empty when
    the rate does not decay in ``direction`` or is within ``MIN_DECAY`` of
    zero, as at a tangent end state where the approach is algebraic.
    """
    g0 = S0 - target
    if not direction * rate < -MIN_DECAY or abs(g0) <= gap_end:
        return [], []
    k = np.arange(1, int(np.ceil(np.log(gap_end / abs(g0)) / np.log(ratio))) + 1)
    gaps = g0 * ratio**k
    return (eta0 + np.log(ratio**k) / rate).tolist(), (target + gaps).tolist()


def integrate_profile(
    m, curve, S_l, S_r, eta_span=ETA_SPAN, anchor=None, eps=EPS_END, dS_max=DS_MAX, label=None, tail_gap=TAIL_GAP
):
    """Travelling-wave profile connecting ``S_l`` to ``S_r`` along ``curve``.

    The phase is fixed by ``S(0) = anchor`` (default: the midpoint).
    Integration stops within ``eps`` of each end state or at ``eta_span``.
    Steps are RK4 with increments capped at ``dS_max`` and local error
    control. Beyond the integrated part each end is extended analytically
    by the linearized tail ``S - S_end ~ exp(lambda eta)`` until the gap
    falls below ``tail_gap`` (``None`` disables the extension). The slope
    ``p'`` at the truncation points is kept in ``slope_cut_left/right``.
    """
    for S in (S_l, S_r):
        if not 0 < S < 1:
            raise DomainError(f"end state {S} outside (0, 1)")
    if label is None:
        label = "capillary"
    if abs(S_l - S_r) <= eps:
        eta = np.array([eta_span[0], 0.0, eta_span[1]])
        S = np.full(3, float(S_l))
        return TWProfile(eta, S, curve.pc(S), S_l, S_r, 0.0, label)

    c = rh_speed(m, S_l, S_r)
    if oleinik_margin(m, S_l, S_r) <= 0:
        raise NotAdmissible(f"F vanishes between {S_l} and {S_r}; no profile connects them")
    h_l = float(m.h(S_l))

    def D(S):
        return -m.h(S) * curve.dpc(S)

    def F(S):
        return (S_l - S) * c - (h_l - m.h(S))

    def f(S):
        return float(F(S) / D(S))

    S0 = 0.5 * (S_l + S_r) if anchor is None else float(anchor)
    if not min(S_l, S_r) < S0 < max(S_l, S_r):
        raise DomainError(f"anchor {S0} not strictly between the end states")
    eta_f, S_f = _march(f, S0, S_r, +1, eta_span[1], eps, dS_max)
    eta_b, S_b = _march(f, S0, S_l, -1, eta_span[0], eps, dS_max)
    decay_l = float((m.dh(S_l) - c) / D(S_l))
    decay_r = float((m.dh(S_r) - c) / D(S_r))
    te_l, ts_l, te_r, ts_r = [], [], [], []
    if tail_gap is not None:
        te_l, ts_l = _linear_tail(eta_b[-1], S_b[-1], S_l, decay_l, -1, tail_gap)
        te_r, ts_r = _linear_tail(eta_f[-1], S_f[-1], S_r, decay_r, +1, tail_gap)
    eta = np.array(te_l[::-1] + eta_b[::-1] + eta_f[1:] + te_r)
    S = np.array(ts_l[::-1] + S_b[::-1] + S_f[1:] + ts_r)

    def slope(S):
        return float(-F(S) / m.h(S))

    return TWProfile(
        eta, S, curve.pc(S), float(S_l), float(S_r), c, label, decay_l, decay_r,
        len(te_l), len(te_r), slope(S_b[-1]), slope(S_f[-1]),
    )


def stationary_profile_check(m, hc, S_l, S_r, tol=1e-10, n=10_000):
    """Whether a zero-speed jump admits only the two-plateau profile.

    Requires ``h(S_l) = h(S_r)``. True when ``h`` exceeds ``h(S_l)`` strictly
    between the states, so no smooth connection on either curve exists.
    """
    h_l, h_r = float(m.h(S_l)), float(m.h(S_r))
    if abs(h_l - h_r) > tol:
        raise DomainError(f"stationary jump needs h(S_l) = h(S_r); got {h_l} vs {h_r}")
    if abs(S_l - S_r) <= 1e-12:
        return True
    s = np.linspace(S_l, S_r, n + 2)[1:-1]
    return bool(np.all(m.h(s) > h_l))
