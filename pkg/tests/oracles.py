"""Reference computations that share no code with the package.

They use mpmath, scipy's Brent solver, brute-force grids or the M = 1
symmetry instead of the package's bisection machinery.
"""

import mpmath as mp
import numpy as np
from scipy import integrate, optimize

from hysteretic_bl.waves import eval_solution

mp.mp.dps = 40


def h_mp(M, S):
    S = mp.mpf(S)
    return S**2 * (1 - S) ** 2 / (S**2 / mp.mpf(M) + (1 - S) ** 2)


def h_np(M, S):
    S = np.asarray(S, dtype=float)
    return S**2 * (1 - S) ** 2 / (S**2 / M + (1 - S) ** 2)


def pc_mp(a, q, b, S):
    S = mp.mpf(S)
    a, q, b = mp.mpf(a), mp.mpf(q), mp.mpf(b)
    return a * (S ** (-1 / q) - 1) ** (1 - q) + b * (1 - S)


def pc_np(a, q, b, S):
    S = np.asarray(S, dtype=float)
    return a * (S ** (-1.0 / q) - 1.0) ** (1.0 - q) + b * (1.0 - S)


def central_diff(f, S, step=1e-6):
    return (f(S + step) - f(S - step)) / (2 * step)


def tangent_dense(M, anchor, side="bottom", n=10**6):
    """Tangent point by a dense sign scan of the tangency residual plus Brent."""
    hA = h_np(M, anchor)

    def dh(x):
        return central_diff(lambda s: h_np(M, s), x, 1e-7)

    def r(x):
        return dh(x) * (x - anchor) - (h_np(M, x) - hA)

    if side == "bottom":
        grid = np.linspace(anchor + 1e-6, 1 - 1e-6, n)
    else:
        grid = np.linspace(anchor - 1e-6, 1e-6, n)
    rv = r(grid)
    # the residual is positive just past the anchor and turns negative once
    i = np.nonzero(rv <= 0)[0][0]
    return optimize.brentq(r, min(grid[i - 1], grid[i]), max(grid[i - 1], grid[i]), xtol=1e-14)


def star_pair_m1(imb, dra):
    """Stationary pair for M = 1, where the conjugate state is exactly 1 - s."""

    def g(s):
        return pc_np(*dra, 1 - s) - pc_np(*imb, s)

    s = optimize.brentq(g, 1e-3, 0.5 - 1e-12, xtol=1e-15)
    return s, 1 - s


def chord_admissible(M, S_l, S_r, n=20_001):
    """Profile existence for ``{S_l, S_r}``: chord speeds from ``S_l`` stay on one side."""
    c = (h_np(M, S_l) - h_np(M, S_r)) / (S_l - S_r)
    S = np.linspace(S_l, S_r, n)[1:-1]
    cs = (h_np(M, S_l) - h_np(M, S)) / (S_l - S)
    return bool(np.all(cs >= c - 1e-12))


def mass_change_quad(sol, L, T):
    """Integral of ``S(x, T) - S(x, 0)`` over [-L, L] by adaptive quadrature.

    The profile is evaluated by the package; only the integration is
    independent.
    """
    breaks = sorted({0.0} | {float(e.speed_l * T) for e in sol.elements} | {float(e.speed_r * T) for e in sol.elements})
    breaks = [b for b in breaks if -L < b < L]
    # a tangent shock and its fan edge can differ by a few ulps; merge them
    breaks = [b for i, b in enumerate(breaks) if i == 0 or b - breaks[i - 1] > 1e-9]

    def f(x):
        return float(eval_solution(sol, x, T)) - (sol.S_left if x < 0 else sol.S_right)

    pts = [-L] + breaks + [L]
    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        if b > a:
            total += integrate.quad(f, a, b, epsabs=1e-11, epsrel=1e-10, limit=200)[0]
    return total


# -- stationary-shock table, vectorised --------------------------------------

ROWS = (
    # label, left state, right state, S_l range, S_r range
    ("drainage-imbibition", "d", "i", ("=", "up"), ("=", "lo")),
    ("imbibition-drainage", "i", "d", ("=", "lo"), ("=", "up")),
    ("undetermined-imbibition", "u(]", "i", ("[]", "M", "up"), ("[]", "lo", "M")),
    ("imbibition-undetermined", "i", "u(]", ("[]", "lo", "M"), ("[]", "M", "up")),
    ("undetermined-drainage", "u[)", "d", ("[]", "lo", "M"), ("[]", "M", "up")),
    ("drainage-undetermined", "d", "u[)", ("[]", "M", "up"), ("[]", "lo", "M")),
    ("undetermined-undetermined", "u[]", "u[]", ("[]", "lo", "up"), ("[]", "lo", "up")),
)


def table_oracle(M, hc, S_l, p_l, S_r, p_r, S_M, lo, up, tol_s=1e-9, tol_h=1e-10, tol_p=1e-9):
    """Row label of each tuple, or ``trivial``/``inadmissible``; first row wins."""
    S_l, p_l, S_r, p_r = (np.asarray(v, dtype=float) for v in (S_l, p_l, S_r, p_r))
    pts = {"lo": lo, "up": up, "M": S_M}
    imb, dra = hc.imbibition, hc.drainage
    pil, pdl = pc_np(imb.a, imb.q, imb.b, S_l), pc_np(dra.a, dra.q, dra.b, S_l)
    pir, pdr = pc_np(imb.a, imb.q, imb.b, S_r), pc_np(dra.a, dra.q, dra.b, S_r)

    def state_ok(code, p, pi, pd):
        if code == "i":
            return np.abs(p - pi) <= tol_p
        if code == "d":
            return np.abs(p - pd) <= tol_p
        lo_ok = p > pi + tol_p if code[1] == "(" else p >= pi - tol_p
        hi_ok = p < pd - tol_p if code[2] == ")" else p <= pd + tol_p
        return lo_ok & hi_ok

    def range_ok(rule, S):
        if rule[0] == "=":
            return np.abs(S - pts[rule[1]]) <= tol_s
        return (S >= pts[rule[1]] - tol_s) & (S <= pts[rule[2]] + tol_s)

    out = np.full(S_l.shape, "inadmissible", dtype=object)
    same = np.abs(S_l - S_r) <= tol_s
    out[same & (np.abs(p_l - p_r) <= tol_p)] = "trivial"
    jump_ok = (np.abs(h_np(M, S_l) - h_np(M, S_r)) <= tol_h) & (np.abs(p_l - p_r) <= tol_p) & ~same
    done = ~jump_ok
    for label, ls, rs, lr, rr in ROWS:
        hit = ~done & state_ok(ls, p_l, pil, pdl) & state_ok(rs, p_r, pir, pdr) & range_ok(lr, S_l) & range_ok(rr, S_r)
        out[hit] = label
        done |= hit
    return out


def profile_eta_quad(m, curve, S_l, S_r, anchor, S):
    """Travelling-wave coordinate of saturation ``S`` as the quadrature of ``D/F`` from the anchor."""
    c = (h_np(m.M, S_l) - h_np(m.M, S_r)) / (S_l - S_r)
    hl = h_np(m.M, S_l)

    def g(s):
        D = -h_np(m.M, s) * float(curve.dpc(s))
        F = (S_l - s) * c - (hl - h_np(m.M, s))
        return D / F

    return integrate.quad(g, anchor, S, epsabs=1e-13, epsrel=1e-13, limit=200)[0]
