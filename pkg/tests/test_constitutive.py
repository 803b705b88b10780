import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hysteretic_bl.constitutive import (
    CapillaryCurve,
    FluxModel,
    HysteresisCurves,
    capillary_number,
    curve_preset,
    eval_d2h,
    eval_dh,
    eval_dpc,
    eval_h,
    eval_pc,
    mobility_ratio,
    play_type_pressure_rate,
)
from hysteretic_bl.errors import DomainError

from oracles import central_diff, h_mp, pc_mp


def test_h_endpoints_vanish(m1):
    assert eval_h(m1, 0.0) == 0.0
    assert eval_h(m1, 1.0) == 0.0


def test_h_values(m1):
    assert eval_h(m1, 0.5) == pytest.approx(0.125, abs=1e-15)
    assert eval_h(m1, 0.1) == pytest.approx(0.0081 / 0.82, abs=1e-15)
    assert str(eval_h(m1, 0.1)).startswith("0.009878")


@pytest.mark.parametrize("M", [0.5, 1.0, 2.0, 43.52])
def test_h_matches_high_precision(M):
    m = FluxModel(M)
    for S in np.linspace(0.01, 0.99, 37):
        assert eval_h(m, S) == pytest.approx(float(h_mp(M, S)), rel=1e-13)


def test_h_domain_guard(m1):
    eval_h(m1, -1e-13)
    eval_h(m1, 1 + 1e-13)
    with pytest.raises(DomainError):
        eval_h(m1, -1e-11)
    with pytest.raises(DomainError):
        eval_h(m1, 1.001)


def test_derivatives_open_interval(m1):
    with pytest.raises(DomainError):
        eval_dh(m1, 0.0)
    with pytest.raises(DomainError):
        eval_d2h(m1, 1.0)


def test_dh_examples(m1):
    assert abs(eval_dh(m1, 0.5)) < 1e-15
    S, k = mp.mpf("0.35"), mp.mpf("1e-6")
    fd = float((h_mp(1, S + k) - h_mp(1, S - k)) / (2 * k))
    assert eval_dh(m1, 0.35) == pytest.approx(fd, rel=1e-9)
    assert eval_dh(m1, 0.35) == pytest.approx(0.35501, abs=5e-6)
    assert eval_d2h(m1, 0.5) < 0


@pytest.mark.parametrize("M", [0.5, 1.0, 2.0, 43.52])
def test_argmax_matches_closed_form(M):
    m = FluxModel(M)
    S = np.linspace(0.0, 1.0, 10**6 + 1)
    k = int(np.argmax(m.h(S)))
    assert abs(S[k] - 1.0 / (1.0 + M ** (-1.0 / 3.0))) <= S[1] - S[0]
    assert m.S_M_closed_form == pytest.approx(1.0 / (1.0 + M ** (-1.0 / 3.0)), abs=1e-15)


def test_m1_symmetry(m1):
    S = np.random.default_rng(0).uniform(0, 1, 1000)
    assert np.array_equal(m1.h(S), m1.h(1 - S)) or np.max(np.abs(m1.h(S) - m1.h(1 - S))) < 1e-16


def test_h_positive_and_unimodal():
    for M in (0.3, 1.0, 5.0, 43.52):
        m = FluxModel(M)
        S = np.linspace(1e-4, 1 - 1e-4, 5001)
        assert np.all(m.h(S) > 0)
        S_M = m.landmarks[0]
        assert np.all(m.dh(S[S < S_M - 1e-6]) > 0)
        assert np.all(m.dh(S[S > S_M + 1e-6]) < 0)


def test_flux_rejects_bad_mobility():
    with pytest.raises(DomainError):
        FluxModel(0.0)
    with pytest.raises(DomainError):
        FluxModel(-2.0)


@pytest.mark.parametrize("M", [0.5, 1.0, 43.52])
def test_flux_derivatives_against_central_differences(M):
    m = FluxModel(M)
    S = np.random.default_rng(1).uniform(0.01, 0.99, 1000)
    fd1 = central_diff(m.h, S)
    fd2 = central_diff(m.dh, S)
    assert np.max(np.abs(m.dh(S) - fd1) / np.maximum(np.abs(fd1), 1e-3)) < 1e-6
    assert np.max(np.abs(m.d2h(S) - fd2) / np.maximum(np.abs(fd2), 1e-3)) < 1e-6


def test_pc_endpoint_values():
    assert eval_pc(CapillaryCurve(3.5, 0.92), 1.0) == 0.0
    assert eval_pc(CapillaryCurve(3.5, 0.92, 0.5), 1.0) == 0.0


def test_pc_high_precision():
    c = CapillaryCurve(5.0, 0.9)
    assert eval_pc(c, 0.5) == pytest.approx(float(pc_mp(5, 0.9, 0, 0.5)), abs=1e-10)
    c = CapillaryCurve(3.5, 0.92, 0.5)
    for S in (1e-6, 0.01, 0.3, 0.77, 0.999):
        assert eval_pc(c, S) == pytest.approx(float(pc_mp(3.5, 0.92, 0.5, S)), rel=1e-12)


def test_pc_guards():
    c = CapillaryCurve(3.5, 0.92)
    with pytest.raises(DomainError):
        eval_pc(c, 0.0)
    with pytest.raises(DomainError):
        eval_pc(c, 5e-10)
    with pytest.raises(DomainError):
        eval_dpc(c, 1.0)
    with pytest.raises(DomainError):
        CapillaryCurve(3.5, 1.0)
    with pytest.raises(DomainError):
        CapillaryCurve(-1.0, 0.5)


@pytest.mark.parametrize("a,q,b", [(3.5, 0.92, 0.0), (3.5, 0.92, 0.5), (5.0, 0.9, 0.0)])
def test_dpc_against_central_differences(a, q, b):
    c = CapillaryCurve(a, q, b)
    S = np.random.default_rng(2).uniform(0.01, 0.99, 1000)
    fd = central_diff(c.pc, S)
    assert np.max(np.abs(c.dpc(S) - fd) / np.abs(fd)) < 1e-6


def test_pc_strictly_decreasing():
    for name in ("paper-set-1", "paper-set-2"):
        hc = curve_preset(name)
        S = np.linspace(1e-6, 1, 10001)
        assert np.all(np.diff(hc.pi(S)) < 0)
        assert np.all(np.diff(hc.pd(S)) < 0)


def test_presets_ordered():
    for name in ("paper-set-1", "paper-set-2"):
        assert curve_preset(name).validate() > 0
    assert curve_preset("no-hysteresis").coincident
    with pytest.raises(DomainError):
        curve_preset("nope")


def test_validate_rejects_crossed_curves():
    hc = HysteresisCurves(CapillaryCurve(5.0, 0.9), CapillaryCurve(3.5, 0.92))
    with pytest.raises(DomainError):
        hc.validate()


def test_rate_examples(set1):
    S, tau = 0.4, 0.01
    pi, pd = set1.pi(S), set1.pd(S)
    assert play_type_pressure_rate(set1, S, pi, tau) == 0.0
    assert play_type_pressure_rate(set1, S, 0.5 * (pi + pd), tau) == 0.0
    assert play_type_pressure_rate(set1, S, pd, tau) == 0.0
    assert play_type_pressure_rate(set1, S, pi - tau, tau) == pytest.approx(1.0, abs=1e-12)
    assert play_type_pressure_rate(set1, S, pd + 2 * tau, tau) == pytest.approx(-2.0, abs=1e-12)
    with pytest.raises(DomainError):
        play_type_pressure_rate(set1, S, pi, 0.0)


@settings(max_examples=200, deadline=None)
@given(
    S=st.floats(0.01, 0.99),
    p1=st.floats(-5.0, 15.0),
    p2=st.floats(-5.0, 15.0),
    tau=st.floats(1e-3, 1.0),
)
def test_rate_nonincreasing_in_pressure(S, p1, p2, tau):
    hc = curve_preset("paper-set-2")
    lo, hi = min(p1, p2), max(p1, p2)
    assert play_type_pressure_rate(hc, S, lo, tau) >= play_type_pressure_rate(hc, S, hi, tau)


def test_rate_vectorised(set2):
    S = np.array([0.2, 0.5, 0.8])
    p = set2.pi(S) - 0.01
    assert np.allclose(play_type_pressure_rate(set2, S, p, 0.01), 1.0)


def test_physical_helpers():
    M = mobility_ratio(5.23e-4, 1.202e-5)
    assert M == pytest.approx(43.51, abs=0.01)
    assert capillary_number(1e4, 1000, 700, 1.0) == pytest.approx(1e4 / (300 * 9.81 * 1.0))
    assert math.isfinite(FluxModel(M).landmarks[0])
