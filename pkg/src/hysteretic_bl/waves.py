"""Shock admissibility and the vanishing-capillarity Riemann solution.

A :class:`WaveStructure` lists the waves of the self-similar solution from
left (``S_T``) to right (``S_B``); constant plateaus sit between
consecutive waves. Speeds are in the similarity variable ``x / t``.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .charpoints import check_S_T, find_star_pair, hat_S, tangent_point
from .errors import ConsistencyError, DomainError
from .roots import bisect_vec

DEGENERATE = 1e-12
OLEINIK_GRID = 10_000
OLEINIK_SLACK = 1e-12
CASE_TOL = 1e-9
WIDTH_TOL = 1e-9


class HysState(str, Enum):
    IMBIBITION = "imbibition"
    DRAINAGE = "drainage"
    UNDETERMINED = "undetermined"
    NONE = "n/a"


class StationaryClass(Enum):
    """Rows of the admissible stationary-shock table, plus the two outcomes."""

    DRAINAGE_IMBIBITION = ("drainage", "imbibition")
    IMBIBITION_DRAINAGE = ("imbibition", "drainage")
    UNDETERMINED_IMBIBITION = ("undetermined", "imbibition")
    IMBIBITION_UNDETERMINED = ("imbibition", "undetermined")
    UNDETERMINED_DRAINAGE = ("undetermined", "drainage")
    DRAINAGE_UNDETERMINED = ("drainage", "undetermined")
    UNDETERMINED_UNDETERMINED = ("undetermined", "undetermined")
    TRIVIAL = ("trivial", "trivial")
    INADMISSIBLE = ("inadmissible", "inadmissible")

    @property
    def admissible(self):
        return self is not StationaryClass.INADMISSIBLE

    @property
    def label(self):
        if self in (StationaryClass.TRIVIAL, StationaryClass.INADMISSIBLE):
            return self.value[0]
        return "-".join(self.value)


@dataclass(frozen=True)
class Shock:
    S_l: float
    S_r: float
    c: float
    left_state: HysState = HysState.NONE
    right_state: HysState = HysState.NONE
    p_l: float | None = None
    p_r: float | None = None

    kind = "shock"

    @property
    def stationary(self):
        return self.c == 0.0

    @property
    def speed_l(self):
        return self.c

    @property
    def speed_r(self):
        return self.c


@dataclass(frozen=True)
class Rarefaction:
    S_from: float
    S_to: float
    zeta_from: float
    zeta_to: float
    state: HysState = HysState.NONE

    kind = "rarefaction"

    @property
    def S_l(self):
        return self.S_from

    @property
    def S_r(self):
        return self.S_to

    @property
    def speed_l(self):
        return self.zeta_from

    @property
    def speed_r(self):
        return self.zeta_to


@dataclass(frozen=True)
class WaveStructure:
    """Ordered waves of a Riemann solution.

    ``case`` is one of ``I``, ``II``, ``III-classical``, ``III-A``, ``III-B``,
    ``mirrored-III-A``, ``mirrored-III-B`` or ``custom``. ``derived`` marks
    mirrored constructions, which are obtained by symmetry rather than
    written down explicitly.
    """

    S_left: float
    S_right: float
    elements: tuple
    case: str
    derived: bool = False
    flux: object = field(default=None, compare=False, repr=False)

    def speeds(self):
        return [(e.speed_l, e.speed_r) for e in self.elements]

    def plateaus(self):
        """Constant states as ``(S, zeta_lo, zeta_hi)``; outer ones are unbounded."""
        out = []
        lo = -np.inf
        S = self.S_left
        for e in self.elements:
            out.append((S, lo, e.speed_l))
            lo = e.speed_r
            S = e.S_r
        out.append((S, lo, np.inf))
        return out

    def stationary(self):
        return [e for e in self.elements if e.kind == "shock" and e.stationary]

    def discontinuities(self):
        return [e for e in self.elements if e.kind == "shock"]

    def rows(self):
        """Element table rows for CSV output."""
        rows = []
        for e in self.elements:
            if e.kind == "shock":
                rows.append(
                    dict(
                        type="stationary-shock" if e.stationary else "shock",
                        S_l=e.S_l,
                        S_r=e.S_r,
                        speed_l=e.c,
                        speed_r=e.c,
                        left_state=e.left_state.value,
                        right_state=e.right_state.value,
                        p_l=e.p_l,
                        p_r=e.p_r,
                    )
                )
            else:
                rows.append(
                    dict(
                        type="rarefaction",
                        S_l=e.S_from,
                        S_r=e.S_to,
                        speed_l=e.zeta_from,
                        speed_r=e.zeta_to,
                        left_state=e.state.value,
                        right_state=e.state.value,
                        p_l=None,
                        p_r=None,
                    )
                )
        return rows


def rh_speed(m, S_l, S_r):
    """Rankine-Hugoniot speed ``(h(S_l) - h(S_r)) / (S_l - S_r)``."""
    if abs(S_l - S_r) < DEGENERATE:
        raise DomainError(f"degenerate shock: S_l={S_l}, S_r={S_r}")
    return float((m.h(S_l) - m.h(S_r)) / (S_l - S_r))


def oleinik_margin(m, S_l, S_r, n=OLEINIK_GRID):
    """Smallest ``c(S_l, S) - c(S_l, S_r)`` over interior grid points ``S``.

    A travelling-wave profile connecting the states exists iff the margin is
    positive for every ``S`` strictly between them, in either ordering.
    """
    c = rh_speed(m, S_l, S_r)
    S = np.linspace(S_l, S_r, n + 2)[1:-1]
    cs = (m.h(S_l) - m.h(S)) / (S_l - S)
    return float(np.min(cs - c))


def oleinik_admissible(m, S_l, S_r):
    """Chord admissibility of the shock ``{S_l, S_r}``."""
    for S in (S_l, S_r):
        if not 0 <= S <= 1:
            raise DomainError(f"saturation {S} outside [0, 1]")
    return oleinik_margin(m, S_l, S_r) >= -OLEINIK_SLACK


# -- stationary shocks -------------------------------------------------------

TOL_S = 1e-9
TOL_HJUMP = 1e-10
TOL_PJUMP = 1e-9


def _classify_side(p, pi, pd, tol):
    """Membership flags of ``p`` relative to the band ``[pi, pd]``."""
    return dict(
        on_i=abs(p - pi) <= tol,
        on_d=abs(p - pd) <= tol,
        band=pi - tol <= p <= pd + tol,
        band_open_lo=pi + tol < p <= pd + tol,
        band_open_hi=pi - tol <= p < pd - tol,
    )


def stationary_admissible(m, hc, S_l, p_l, S_r, p_r, points=None, tol_s=TOL_S, tol_h=TOL_HJUMP, tol_p=TOL_PJUMP):
    """Classify a zero-speed jump against the admissible stationary shocks.

    ``points`` may carry ``(S_M, S_star, S_star_up)`` to skip recomputing
    them. Rows are tried in table order and the first match is returned.
    """
    for S in (S_l, S_r):
        if not 0 < S < 1:
            raise DomainError(f"saturation {S} outside (0, 1)")
    if points is None:
        S_M = m.landmarks[0]
        lo_star, up_star = find_star_pair(m, hc)
    else:
        S_M, lo_star, up_star = points

    if abs(S_l - S_r) <= tol_s:
        return StationaryClass.TRIVIAL if abs(p_l - p_r) <= tol_p else StationaryClass.INADMISSIBLE
    if abs(float(m.h(S_l)) - float(m.h(S_r))) > tol_h or abs(p_l - p_r) > tol_p:
        return StationaryClass.INADMISSIBLE

    L = _classify_side(p_l, float(hc.pi(S_l)), float(hc.pd(S_l)), tol_p)
    R = _classify_side(p_r, float(hc.pi(S_r)), float(hc.pd(S_r)), tol_p)

    def near(S, target):
        return abs(S - target) <= tol_s

    def within(S, lo, hi):
        return lo - tol_s <= S <= hi + tol_s

    lower = (lo_star, S_M)
    upper = (S_M, up_star)
    SC = StationaryClass
    if near(S_l, up_star) and near(S_r, lo_star) and L["on_d"] and R["on_i"]:
        return SC.DRAINAGE_IMBIBITION
    if near(S_l, lo_star) and near(S_r, up_star) and L["on_i"] and R["on_d"]:
        return SC.IMBIBITION_DRAINAGE
    if within(S_l, *upper) and within(S_r, *lower) and L["band_open_lo"] and R["on_i"]:
        return SC.UNDETERMINED_IMBIBITION
    if within(S_l, *lower) and within(S_r, *upper) and L["on_i"] and R["band_open_lo"]:
        return SC.IMBIBITION_UNDETERMINED
    if within(S_l, *lower) and within(S_r, *upper) and L["band_open_hi"] and R["on_d"]:
        return SC.UNDETERMINED_DRAINAGE
    if within(S_l, *upper) and within(S_r, *lower) and L["on_d"] and R["band_open_hi"]:
        return SC.DRAINAGE_UNDETERMINED
    if within(S_l, lo_star, up_star) and within(S_r, lo_star, up_star) and L["band"] and R["band"]:
        return SC.UNDETERMINED_UNDETERMINED
    return SC.INADMISSIBLE


# -- construction ------------------------------------------------------------


def _moving_shock(m, S_l, S_r):
    c = rh_speed(m, S_l, S_r)
    tag = HysState.IMBIBITION if c > 0 else HysState.DRAINAGE if c < 0 else HysState.NONE
    return Shock(S_l, S_r, c, tag, tag)


def _rarefaction(m, S_from, S_to):
    z0 = float(m.dh(S_from))
    z1 = float(m.dh(S_to))
    mid = 0.5 * (z0 + z1)
    tag = HysState.IMBIBITION if mid > 0 else HysState.DRAINAGE if mid < 0 else HysState.NONE
    return Rarefaction(S_from, S_to, z0, z1, tag)


def _fan_below(m, S_l, S_B):
    """Waves from ``S_l <= S_M`` down to ``S_B``: a shock, or rarefaction plus shock."""
    if S_l - S_B <= WIDTH_TOL:
        return []
    bar_B = tangent_point(m, S_B, "bottom")
    if S_l <= bar_B + WIDTH_TOL:
        return [_moving_shock(m, S_l, S_B)]
    out = [_rarefaction(m, S_l, bar_B)]
    if bar_B - S_B > WIDTH_TOL:
        out.append(_moving_shock(m, bar_B, S_B))
    return out


def _fan_above(m, S_T, S_r):
    """Waves from ``S_T`` down to ``S_r >= S_M``: a shock, or shock plus rarefaction."""
    if S_T - S_r <= WIDTH_TOL:
        return []
    bar_T = tangent_point(m, S_T, "top")
    if S_r >= bar_T - WIDTH_TOL:
        return [_moving_shock(m, S_T, S_r)]
    out = []
    if S_T - bar_T > WIDTH_TOL:
        out.append(_moving_shock(m, S_T, bar_T))
    out.append(_rarefaction(m, bar_T, S_r))
    return out


def _check_order(S_T, S_B):
    if not 0 < S_B < S_T < 1:
        raise DomainError(f"Riemann data must satisfy 0 < S_B < S_T < 1, got S_B={S_B}, S_T={S_T}")


def solve_riemann_classical(m, S_T, S_B):
    """Vanishing-capillarity solution without hysteresis."""
    _check_order(S_T, S_B)
    S_M = m.landmarks[0]
    if S_T <= S_M + CASE_TOL:
        els, case = _fan_below(m, S_T, S_B), "I"
    elif S_B >= S_M - CASE_TOL:
        els, case = _fan_above(m, S_T, S_B), "II"
    else:
        # fan through S_M split into its two monotone-slope halves
        els, case = _fan_above(m, S_T, S_M) + _fan_below(m, S_M, S_B), "III-classical"
    w = WaveStructure(float(S_T), float(S_B), tuple(els), case, flux=m)
    _validate(m, None, w)
    return w


def solve_riemann_hysteretic(m, hc, S_T, S_B):
    """Vanishing-capillarity solution with play-type capillary hysteresis.

    Data on one side of ``S_M`` reproduce the classical solution. Otherwise
    a stationary shock sits at ``x = 0``: either the drainage/imbibition
    pair ``{S_star_up, S_star}`` with classical fans on both sides, or a
    frozen half-line carrying an undetermined state.
    """
    _check_order(S_T, S_B)
    S_M = m.landmarks[0]
    if S_T <= S_M + CASE_TOL or S_B >= S_M - CASE_TOL:
        w = solve_riemann_classical(m, S_T, S_B)
        return w

    lo_star, up_star = find_star_pair(m, hc)
    h_T, h_B = float(m.h(S_T)), float(m.h(S_B))
    mirrored = h_T < h_B

    if (not mirrored and S_T >= up_star - CASE_TOL) or (mirrored and S_B <= lo_star + CASE_TOL):
        els = _fan_above(m, S_T, up_star)
        if up_star - lo_star > WIDTH_TOL:
            els.append(
                Shock(
                    up_star,
                    lo_star,
                    0.0,
                    HysState.DRAINAGE,
                    HysState.IMBIBITION,
                    float(hc.pd(up_star)),
                    float(hc.pi(lo_star)),
                )
            )
        els += _fan_below(m, lo_star, S_B)
        if up_star - lo_star <= WIDTH_TOL:
            case = "III-classical"
        else:
            case = "mirrored-III-A" if mirrored else "III-A"
    elif not mirrored:
        check_T = check_S_T(m, S_T)
        p0 = float(hc.pi(check_T))
        els = [Shock(S_T, check_T, 0.0, HysState.UNDETERMINED, HysState.IMBIBITION, p0, p0)]
        els += _fan_below(m, check_T, S_B)
        case = "III-B"
    else:
        hat_B = hat_S(m, S_B)
        p0 = float(hc.pd(hat_B))
        els = _fan_above(m, S_T, hat_B)
        els.append(Shock(hat_B, S_B, 0.0, HysState.DRAINAGE, HysState.UNDETERMINED, p0, p0))
        case = "mirrored-III-B"

    w = WaveStructure(float(S_T), float(S_B), tuple(els), case, derived=mirrored, flux=m)
    _validate(m, hc, w)
    return w


def _validate(m, hc, w):
    prev = w.S_left
    last_speed = -np.inf
    for e in w.elements:
        if abs(e.S_l - prev) > 1e-12:
            raise ConsistencyError(f"edge mismatch {prev} -> {e.S_l} in case {w.case}")
        if e.speed_l < last_speed - 1e-9 or e.speed_r < e.speed_l - 1e-9:
            raise ConsistencyError(f"wave speeds out of order in case {w.case}")
        last_speed = e.speed_r
        prev = e.S_r
        if e.kind == "shock":
            if e.stationary:
                cls = stationary_admissible(m, hc, e.S_l, e.p_l, e.S_r, e.p_r)
                if not cls.admissible or cls is StationaryClass.TRIVIAL:
                    raise ConsistencyError(f"stationary shock {e.S_l}->{e.S_r} is {cls.label}")
            elif not oleinik_admissible(m, e.S_l, e.S_r):
                raise ConsistencyError(f"shock {e.S_l}->{e.S_r} violates the chord condition")
        elif not _rarefaction_ok(m, e):
            raise ConsistencyError(f"rarefaction {e.S_from}->{e.S_to} crosses an inflection")
    if abs(prev - w.S_right) > 1e-12:
        raise ConsistencyError(f"structure ends at {prev}, expected {w.S_right}")
    if len(w.stationary()) > 1:
        raise ConsistencyError("more than one stationary shock")


def _rarefaction_ok(m, r, n=1000):
    S = np.linspace(min(r.S_from, r.S_to), max(r.S_from, r.S_to), n)
    d2 = m.d2h(S)
    scale = np.max(np.abs(d2))
    return bool(np.all(d2 <= 1e-9 * scale) or np.all(d2 >= -1e-9 * scale)) and r.zeta_from <= r.zeta_to


# -- evaluation --------------------------------------------------------------


def invert_rarefaction(m, r, zeta):
    """Saturation ``S`` on the rarefaction with ``h'(S) = zeta``."""
    zeta = np.asarray(zeta, dtype=float)
    lo = np.full_like(zeta, min(r.S_from, r.S_to))
    hi = np.full_like(zeta, max(r.S_from, r.S_to))
    return bisect_vec(lambda S: m.dh(S) - zeta, lo, hi)


def eval_solution(w, x, t, m=None):
    """Saturation of the self-similar solution at position ``x`` and time ``t``.

    On a shock line the left value is returned.
    """
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    m = m if m is not None else w.flux
    zeta = np.asarray(x, dtype=float) / t
    out = np.full_like(zeta, w.S_left)
    # a tangent shock's speed can round a few ulps below the fan it closes
    floor = -np.inf
    for e in w.elements:
        if e.kind == "shock":
            c = max(e.c, floor)
            out = np.where(zeta > c, e.S_r, out)
            floor = c
        else:
            z0, z1 = max(e.zeta_from, floor), max(e.zeta_to, floor)
            inside = (zeta > z0) & (zeta <= z1)
            if np.any(inside):
                z = np.clip(zeta, e.zeta_from, e.zeta_to)
                out = np.where(inside, invert_rarefaction(m, e, z), out)
            out = np.where(zeta > z1, e.S_to, out)
            floor = z1
    return float(out) if out.ndim == 0 else out


# -- verification ------------------------------------------------------------


@dataclass
class WaveCheck:
    kind: str
    S_l: float
    S_r: float
    speed: float
    rh_residual: float = 0.0
    oleinik_margin: float | None = None
    jump_h: float | None = None
    jump_p: float | None = None
    stationary_class: str | None = None
    rarefaction_residual: float | None = None
    ok: bool = True


@dataclass
class WeakSolutionReport:
    checks: list

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def max_residual(self):
        vals = [0.0]
        for c in self.checks:
            vals.append(c.rh_residual)
            for v in (c.jump_h, c.jump_p, c.rarefaction_residual):
                if v is not None:
                    vals.append(v)
        return max(vals)


def weak_solution_check(w, m, hc=None, tol=1e-9):
    """Audit every wave: jump conditions, chord margins and fan residuals."""
    checks = []
    for e in w.elements:
        if e.kind == "shock":
            jump_h = abs(float(m.h(e.S_l)) - float(m.h(e.S_r)))
            c_rh = (float(m.h(e.S_l)) - float(m.h(e.S_r))) / (e.S_l - e.S_r)
            chk = WaveCheck("shock", e.S_l, e.S_r, e.c, rh_residual=abs(c_rh - e.c))
            if e.stationary:
                chk.kind = "stationary-shock"
                chk.jump_h = jump_h
                chk.jump_p = abs(e.p_l - e.p_r) if e.p_l is not None and e.p_r is not None else None
                chk.ok = jump_h < tol and (chk.jump_p is None or chk.jump_p < tol)
                if hc is not None:
                    cls = stationary_admissible(m, hc, e.S_l, e.p_l, e.S_r, e.p_r)
                    chk.stationary_class = cls.label
                    chk.ok = chk.ok and cls.admissible
            else:
                chk.oleinik_margin = oleinik_margin(m, e.S_l, e.S_r)
                chk.ok = chk.rh_residual < tol and chk.oleinik_margin >= -OLEINIK_SLACK
        else:
            z = np.linspace(e.zeta_from, e.zeta_to, 1000)
            r = invert_rarefaction(m, e, z)
            res = float(np.max(np.abs(m.dh(r) - z)))
            chk = WaveCheck("rarefaction", e.S_from, e.S_to, e.zeta_from, rarefaction_residual=res)
            chk.ok = res < tol and _rarefaction_ok(m, e)
        checks.append(chk)
    return WeakSolutionReport(checks)
