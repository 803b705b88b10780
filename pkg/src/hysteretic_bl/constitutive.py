"""Fractional flow and capillary pressure curves.

The flux is the Brooks-Corey fractional flow for gravity-driven,
counter-current flow (quadratic relative permeabilities)::

    h(S) = S^2 (1-S)^2 / (S^2 / M + (1-S)^2)

and the capillary pressure curves use a van Genuchten law with an optional
linear offset::

    p(S) = a (S^(-1/q) - 1)^(1-q) + b (1 - S)

All evaluators accept scalars or numpy arrays and return the same kind.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError

DOMAIN_TOL = 1e-12
PC_GUARD = 1e-9

WATER_METHANE_VISCOSITIES = (5.23e-4, 1.202e-5)


def mobility_ratio(mu_w, mu_n):
    """Viscosity ratio M = mu_w / mu_n."""
    return mu_w / mu_n


def capillary_number(p_ref, rho_w, rho_n, H, g=9.81):
    """Dimensionless capillary number p_ref / ((rho_w - rho_n) g H)."""
    if rho_w <= rho_n:
        raise DomainError("wetting phase must be the denser phase")
    return p_ref / ((rho_w - rho_n) * g * H)


def _unwrap(x, like):
    return float(x) if np.ndim(like) == 0 else x


def _check_range(S, lo, hi, lo_open=False, hi_open=False, what="S"):
    S = np.asarray(S, dtype=float)
    bad = (S < lo - DOMAIN_TOL) | (S > hi + DOMAIN_TOL)
    if lo_open:
        bad |= S <= lo
    if hi_open:
        bad |= S >= hi
    if np.any(bad) or np.any(np.isnan(S)):
        raise DomainError(f"{what} outside [{lo}, {hi}]: {S[bad] if S.ndim else S}")
    return np.clip(S, lo, hi)


@dataclass(frozen=True)
class FluxModel:
    """Brooks-Corey fractional flow with mobility ratio ``M``."""

    M: float = 1.0

    def __post_init__(self):
        if not (self.M > 0 and np.isfinite(self.M)):
            raise DomainError(f"mobility ratio must be positive, got {self.M}")

    @property
    def S_M_closed_form(self):
        return 1.0 / (1.0 + self.M ** (-1.0 / 3.0))

    @cached_property
    def landmarks(self):
        """(S_M, S_1, S_2) computed by root finding."""
        from .charpoints import find_landmarks

        return find_landmarks(self)

    def h(self, S):
        S = _check_range(S, 0.0, 1.0)
        num = S**2 * (1 - S) ** 2
        den = S**2 / self.M + (1 - S) ** 2
        return num / den

    def dh(self, S):
        S = _check_range(S, 0.0, 1.0)
        n, dn, _ = self._num(S)
        d, dd, _ = self._den(S)
        return (dn * d - n * dd) / d**2

    def d2h(self, S):
        S = _check_range(S, 0.0, 1.0)
        n, dn, ddn = self._num(S)
        d, dd, ddd = self._den(S)
        return (ddn * d - n * ddd) / d**2 - 2 * dd * (dn * d - n * dd) / d**3

    def _num(self, S):
        n = S**2 * (1 - S) ** 2
        dn = 2 * S * (1 - S) * (1 - 2 * S)
        ddn = 2 * (1 - 6 * S + 6 * S**2)
        return n, dn, ddn

    def _den(self, S):
        d = S**2 / self.M + (1 - S) ** 2
        dd = 2 * S / self.M - 2 * (1 - S)
        ddd = 2 / self.M + 2
        return d, dd, ddd


def eval_h(m, S):
    """Fractional flow ``h(S)`` for ``S`` in [0, 1]."""
    return _unwrap(m.h(S), S)


def eval_dh(m, S):
    """First derivative of ``h`` on the open interval (0, 1)."""
    _check_range(S, 0.0, 1.0, lo_open=True, hi_open=True)
    return _unwrap(m.dh(S), S)


def eval_d2h(m, S):
    """Second derivative of ``h`` on the open interval (0, 1)."""
    _check_range(S, 0.0, 1.0, lo_open=True, hi_open=True)
    return _unwrap(m.d2h(S), S)


@dataclass(frozen=True)
class CapillaryCurve:
    """van Genuchten capillary pressure ``a (S^(-1/q) - 1)^(1-q) + b (1-S)``."""

    a: float
    q: float
    b: float = 0.0

    def __post_init__(self):
        if not self.a > 0:
            raise DomainError(f"scale a must be positive, got {self.a}")
        if not 0 < self.q < 1:
            raise DomainError(f"exponent q must lie in (0, 1), got {self.q}")
        if self.b < 0:
            raise DomainError(f"offset b must be non-negative, got {self.b}")

    def _guard(self, S):
        S = np.asarray(S, dtype=float)
        if np.any(S < PC_GUARD) or np.any(S > 1 + DOMAIN_TOL) or np.any(np.isnan(S)):
            raise DomainError(f"capillary curve evaluated outside [{PC_GUARD}, 1]")
        return np.minimum(S, 1.0)

    def pc(self, S):
        S = self._guard(S)
        x = np.maximum(S ** (-1.0 / self.q) - 1.0, 0.0)
        return self.a * x ** (1.0 - self.q) + self.b * (1.0 - S)

    def dpc(self, S):
        S = self._guard(S)
        if np.any(S >= 1.0):
            raise DomainError("capillary slope is unbounded at S = 1")
        q = self.q
        x = S ** (-1.0 / q) - 1.0
        return -self.a * (1.0 - q) / q * x ** (-q) * S ** (-1.0 / q - 1.0) - self.b


def eval_pc(c, S):
    """Capillary pressure for ``S`` in (0, 1]; zero at ``S = 1``."""
    return _unwrap(c.pc(S), S)


def eval_dpc(c, S):
    """Slope ``dp/dS`` for ``S`` in (0, 1)."""
    return _unwrap(c.dpc(S), S)


@dataclass(frozen=True)
class HysteresisCurves:
    """Imbibition and drainage capillary pressure curves."""

    imbibition: CapillaryCurve
    drainage: CapillaryCurve

    @property
    def coincident(self):
        return self.imbibition == self.drainage

    def pi(self, S):
        return self.imbibition.pc(S)

    def pd(self, S):
        return self.drainage.pc(S)

    def validate(self, n=999, margin=1e-3):
        """Check ``p_i < p_d`` on a uniform interior grid.

        Coincident curves are accepted (the no-hysteresis limit).
        Returns the smallest sampled gap ``p_d - p_i``.
        """
        S = np.linspace(margin, 1 - margin, n)
        gap = self.pd(S) - self.pi(S)
        if not self.coincident and np.any(gap <= 0):
            bad = S[gap <= 0]
            raise DomainError(
                f"drainage curve not above imbibition at S in [{bad.min():.4g}, {bad.max():.4g}]"
            )
        return float(gap.min())


def play_type_pressure_rate(hc, S, p, tau):
    """Saturation rate of the relaxed play-type law.

    ``(p_i(S) - p)/tau`` below the imbibition curve, ``(p_d(S) - p)/tau``
    above the drainage curve, zero inside the hysteresis band.
    """
    if not tau > 0:
        raise DomainError(f"tau must be positive, got {tau}")
    S_arr = _check_range(S, 0.0, 1.0, lo_open=True, hi_open=True)
    p_arr = np.asarray(p, dtype=float)
    pi = hc.pi(S_arr)
    pd = hc.pd(S_arr)
    rate = np.where(p_arr < pi, (pi - p_arr) / tau, np.where(p_arr > pd, (pd - p_arr) / tau, 0.0))
    return float(rate) if rate.ndim == 0 else rate


def _preset_set1():
    imb = CapillaryCurve(3.5, 0.92)
    return HysteresisCurves(imb, CapillaryCurve(3.5, 0.92, 0.5))


def _preset_set2():
    return HysteresisCurves(CapillaryCurve(3.5, 0.92), CapillaryCurve(5.0, 0.9))


def _preset_none():
    imb = CapillaryCurve(3.5, 0.92)
    return HysteresisCurves(imb, imb)


CURVE_PRESETS = {
    "paper-set-1": _preset_set1,
    "paper-set-2": _preset_set2,
    "no-hysteresis": _preset_none,
}


def curve_preset(name):
    try:
        return CURVE_PRESETS[name]()
    except KeyError:
        raise DomainError(f"unknown curve preset {name!r}; known: {sorted(CURVE_PRESETS)}") from None
