"""Characteristic saturations of the flux and of the hysteresis pair.

Everything here is a bracketing solve: a sign scan over a uniform grid
followed by bisection.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .constitutive import PC_GUARD
from .errors import DomainError, NoSignChange
from .roots import bisect, bisect_vec, scan_bracket

TOL_H = 1e-12
TOL_P = 1e-10
EDGE = 1e-9


@dataclass(frozen=True)
class CharacteristicPoints:
    """Flux landmarks plus the stationary pair ``S_star <= S_M <= S_star_up``."""

    S_M: float
    S_1: float
    S_2: float
    S_star: float
    S_star_up: float
    tol: float = TOL_H

    def as_rows(self):
        return [
            ("S_M", self.S_M),
            ("S_1", self.S_1),
            ("S_2", self.S_2),
            ("S_star", self.S_star),
            ("S_star_up", self.S_star_up),
        ]


@dataclass(frozen=True)
class ProblemPoints:
    """Saturations tied to particular Riemann data.

    ``S_bar_B``/``S_bar_T`` are the tangent points seen from the bottom and
    top states; ``S_check_T`` is the conjugate of ``S_T`` on the rising
    branch. Flags record whether a definition collapsed or is undefined.
    """

    S_B: float
    S_T: float
    S_bar_B: float
    S_bar_T: float
    S_check_T: float | None
    bar_B_collapsed: bool
    bar_T_collapsed: bool

    def as_rows(self):
        rows = [("S_B", self.S_B), ("S_T", self.S_T), ("S_bar_B", self.S_bar_B), ("S_bar_T", self.S_bar_T)]
        if self.S_check_T is not None:
            rows.append(("S_check_T", self.S_check_T))
        return rows


def find_landmarks(m):
    """Return ``(S_M, S_1, S_2)``: the flux maximum and its two inflections."""
    lo, hi = EDGE, 1 - EDGE
    S_M = bisect(m.dh, *scan_bracket(m.dh, lo, hi))
    S_1 = bisect(m.d2h, *scan_bracket(m.d2h, lo, S_M, first=False))
    S_2 = bisect(m.d2h, *scan_bracket(m.d2h, S_M, hi))
    if not 0 < S_1 < S_M < S_2 < 1:
        raise NoSignChange(f"flux is not unimodal with two inflections: {S_1}, {S_M}, {S_2}")
    return S_M, S_1, S_2


def hat_S(m, s):
    """Conjugate saturation on the falling branch with ``h(hat_S(s)) = h(s)``.

    Defined for ``s`` in [0, S_M]; maps 0 to 1 and S_M to itself.
    """
    S_M = m.landmarks[0]
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < -EDGE) or np.any(s_arr > S_M + EDGE):
        raise DomainError(f"hat_S needs s in [0, S_M={S_M}]")
    s_arr = np.clip(s_arr, 0.0, S_M)
    target = m.h(s_arr)
    lo = np.full_like(s_arr, S_M)
    hi = np.ones_like(s_arr)
    out = bisect_vec(lambda x: m.h(x) - target, lo, hi)
    out = np.where(s_arr >= S_M, S_M, np.where(s_arr <= 0, 1.0, out))
    return float(out) if out.ndim == 0 else out


def check_S_T(m, S_T):
    """Inverse of :func:`hat_S`: the rising-branch state with ``h = h(S_T)``."""
    S_M = m.landmarks[0]
    x = np.asarray(S_T, dtype=float)
    if np.any(x < S_M - EDGE) or np.any(x > 1 + EDGE):
        raise DomainError(f"check_S_T needs S_T in (S_M={S_M}, 1)")
    x = np.clip(x, S_M, 1.0)
    target = m.h(x)
    out = bisect_vec(lambda s: m.h(s) - target, np.zeros_like(x), np.full_like(x, S_M))
    out = np.where(x <= S_M, S_M, np.where(x >= 1, 0.0, out))
    return float(out) if out.ndim == 0 else out


def star_gap(m, hc, s):
    """``p_d(hat_S(s)) - p_i(s)``; increasing on (0, S_M), zero at ``S_star``."""
    return hc.pd(hat_S(m, s)) - hc.pi(s)


def find_star_pair(m, hc, tol_p=TOL_P):
    """Return ``(S_star, S_star_up)`` with equal flux and matched pressures.

    ``S_star`` is the root in (0, S_M) of :func:`star_gap`; the partner is
    ``hat_S(S_star)``. Coincident curves give ``(S_M, S_M)``.
    """
    S_M = m.landmarks[0]
    g_top = float(star_gap(m, hc, S_M))
    if abs(g_top) <= tol_p:
        return S_M, S_M
    if g_top < 0:
        raise NoSignChange("drainage curve is below imbibition at S_M")
    grid = np.linspace(PC_GUARD, S_M, 10_001)
    g = star_gap(m, hc, grid)
    if np.any(np.diff(g) <= 0):
        warnings.warn("pressure gap p_d(hat_S(s)) - p_i(s) is not strictly increasing", RuntimeWarning, stacklevel=2)
    neg = np.nonzero(g < 0)[0]
    if neg.size == 0:
        raise NoSignChange("p_d(hat_S(s)) >= p_i(s) down to the domain guard; degenerate hysteresis")
    i = neg[-1]
    S_star = bisect(lambda s: float(star_gap(m, hc, s)), grid[i], grid[i + 1])
    return S_star, hat_S(m, S_star)


def tangent_point(m, anchor, side):
    """Point where a line through ``(anchor, h(anchor))`` touches the flux.

    ``side='bottom'`` takes ``anchor = S_B < S_M`` and returns the tangent
    point above it; anchors at or past the first inflection are returned
    unchanged. ``side='top'`` is the mirror image for ``anchor > S_M``.
    """
    S_M, S_1, S_2 = m.landmarks
    h_a = float(m.h(anchor))

    def resid(x):
        return m.dh(x) * (x - anchor) - (m.h(x) - h_a)

    if side == "bottom":
        if not 0 <= anchor < S_M:
            raise DomainError(f"bottom tangent needs anchor < S_M={S_M}, got {anchor}")
        if anchor >= S_1:
            return float(anchor)
        lo, hi = S_1, S_2
    elif side == "top":
        if not S_M < anchor <= 1:
            raise DomainError(f"top tangent needs anchor > S_M={S_M}, got {anchor}")
        if anchor <= S_2:
            return float(anchor)
        lo, hi = S_2, S_1
    else:
        raise ValueError(f"side must be 'bottom' or 'top', got {side!r}")
    grid = np.linspace(lo, hi, 10_001)
    r = resid(grid)
    hit = np.nonzero(r <= 0)[0]
    if hit.size == 0:
        raise NoSignChange(f"no tangent point for anchor {anchor}")
    i = hit[0]
    if i == 0:
        return float(grid[0])
    return bisect(lambda x: float(resid(x)), grid[i - 1], grid[i])


def characteristic_points(m, hc):
    S_M, S_1, S_2 = m.landmarks
    S_star, S_star_up = find_star_pair(m, hc)
    return CharacteristicPoints(S_M, S_1, S_2, S_star, S_star_up)


def problem_points(m, S_B, S_T):
    S_M, S_1, S_2 = m.landmarks
    bar_B = tangent_point(m, S_B, "bottom") if S_B < S_M else float(S_B)
    bar_T = tangent_point(m, S_T, "top") if S_T > S_M else float(S_T)
    check_T = check_S_T(m, S_T) if S_T > S_M else None
    return ProblemPoints(
        S_B=float(S_B),
        S_T=float(S_T),
        S_bar_B=bar_B,
        S_bar_T=bar_T,
        S_check_T=check_T,
        bar_B_collapsed=S_B >= S_1,
        bar_T_collapsed=S_T <= S_2,
    )
