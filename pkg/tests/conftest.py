import functools

import pytest

from hysteretic_bl.constitutive import FluxModel, curve_preset
from hysteretic_bl.pde import DESK_SCALE, SimConfig, run


@pytest.fixture(scope="session")
def m1():
    return FluxModel(1.0)


@pytest.fixture(scope="session")
def set1():
    return curve_preset("paper-set-1")


@pytest.fixture(scope="session")
def set2():
    return curve_preset("paper-set-2")


@pytest.fixture(scope="session")
def no_hys():
    return curve_preset("no-hysteresis")


@functools.lru_cache(maxsize=None)
def desk_run(preset, S_T=0.8, S_B=0.1):
    """Desk-scale simulation, computed once per session and shared."""
    cfg = SimConfig(S_B=S_B, S_T=S_T, flux=FluxModel(1.0), curves=curve_preset(preset), **DESK_SCALE)
    T = cfg.T_end
    return run(cfg, times=(T / 2, T))


@pytest.fixture(scope="session")
def desk():
    return desk_run
