"""Bracketing root finders shared by the characteristic-point and wave code."""

import numpy as np
from scipy import optimize

from .errors import ConvergenceError, NoSignChange

SCAN_POINTS = 10_000
MAX_BISECT = 200


def scan_bracket(f, lo, hi, n=SCAN_POINTS, first=True):
    """Find a sign-change bracket of vectorised ``f`` on a uniform grid.

    Returns ``(a, b)`` with ``f(a) * f(b) <= 0``; the first such interval
    from ``lo`` towards ``hi`` when ``first`` is true, otherwise the last.
    ``lo`` may exceed ``hi`` to scan downwards.
    """
    x = np.linspace(lo, hi, n + 1)
    fx = f(x)
    idx = np.nonzero(np.sign(fx[:-1]) * np.sign(fx[1:]) <= 0)[0]
    if idx.size == 0:
        raise NoSignChange(f"no sign change on [{lo}, {hi}]")
    i = idx[0] if first else idx[-1]
    return x[i], x[i + 1]


def bisect(f, a, b, xtol=1e-15):
    """Scalar bisection on a bracket; wraps :func:`scipy.optimize.bisect`."""
    a, b = min(a, b), max(a, b)
    fa, fb = f(a), f(b)
    if fa == 0:
        return float(a)
    if fb == 0:
        return float(b)
    if np.sign(fa) == np.sign(fb):
        raise NoSignChange(f"f({a})={fa} and f({b})={fb} have the same sign")
    try:
        return float(optimize.bisect(f, a, b, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=MAX_BISECT))
    except RuntimeError as exc:
        raise ConvergenceError(str(exc)) from exc


def bisect_vec(f, lo, hi, n_iter=64):
    """Elementwise bisection for a residual monotone in its argument.

    ``lo`` and ``hi`` are arrays of bracket ends; the sign of ``f`` at
    ``lo`` decides which half keeps the root. Exact zeros at ``lo`` are
    kept as they are.
    """
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    flo = f(lo)
    for _ in range(n_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        same = np.sign(fm) == np.sign(flo)
        lo = np.where(same, mid, lo)
        flo = np.where(same, fm, flo)
        hi = np.where(same, hi, mid)
    return 0.5 * (lo + hi)
