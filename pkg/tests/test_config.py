import pytest

from hysteretic_bl.config import FIGURE_NAMES, bundled_config, parse_config, parse_text
from hysteretic_bl.constitutive import curve_preset
from hysteretic_bl.errors import ConfigError
from hysteretic_bl.pde import DESK_SCALE

BASIC = """\
[model]
M = 1.0

[riemann]
S_B = 0.1
S_T = 0.8
"""


def test_bundled_fig6():
    exp = parse_config(bundled_config("fig6"))
    assert exp.curve_preset == "paper-set-1"
    assert (exp.S_B, exp.S_T, exp.M) == (0.1, 0.8, 1.0)
    cfg = exp.sim_config()
    assert (cfg.delta, cfg.tau, cfg.H, cfg.dx, cfg.dt, cfg.T_end) == (0.25, 0.01, 100.0, 0.01, 1e-4, 100.0)
    assert cfg.n_cells == 20000
    assert exp.snapshot_times() == (50.0, 100.0)


@pytest.mark.parametrize("name", FIGURE_NAMES)
def test_all_bundled_configs_parse(name):
    exp = parse_config(bundled_config(name))
    assert exp.figure["name"] == name


def test_bundled_unknown():
    with pytest.raises(ConfigError, match="no bundled config"):
        bundled_config("fig99")


def test_defaults():
    exp = parse_text(BASIC)
    assert exp.curves == curve_preset("paper-set-1")
    assert exp.classical is False
    assert exp.snapshot_times() == (DESK_SCALE["T_end"] / 2, DESK_SCALE["T_end"])


def test_missing_S_B():
    with pytest.raises(ConfigError, match="missing required key riemann.S_B"):
        parse_text("[riemann]\nS_T = 0.8\n")


def test_ordering_error_has_line():
    text = "[riemann]\nS_B = 0.8\nS_T = 0.3\n"
    with pytest.raises(ConfigError, match=r"<string>:2: .*0 < S_B < S_T < 1"):
        parse_text(text)


def test_unknown_key_reports_line():
    text = BASIC + "\n[solver]\ndelta = 0.25\ncfl = 0.5\n"
    with pytest.raises(ConfigError, match=r"<string>:10: unknown key 'cfl' in \[solver\]"):
        parse_text(text)


def test_unknown_section_reports_line():
    with pytest.raises(ConfigError, match=r"<string>:8: unknown section \[mesh\]"):
        parse_text(BASIC + "\n[mesh]\nn = 3\n")


def test_bad_value():
    with pytest.raises(ConfigError, match=r":2: bad value 'one' for model.M"):
        parse_text(BASIC.replace("1.0", "one"))


def test_preset_and_explicit_conflict():
    with pytest.raises(ConfigError, match="either a curve preset or explicit"):
        parse_text(BASIC + "[curves]\npreset = paper-set-2\nimbibition_a = 3\n")


def test_explicit_curves():
    text = BASIC + (
        "[curves]\nimbibition_a = 3.5\nimbibition_q = 0.92\n"
        "drainage_a = 3.5\ndrainage_q = 0.92\ndrainage_b = 0.5\n"
    )
    exp = parse_text(text)
    assert exp.curve_preset is None
    assert exp.curves == curve_preset("paper-set-1")


def test_explicit_curves_incomplete():
    with pytest.raises(ConfigError, match="missing curves.drainage_q"):
        parse_text(BASIC + "[curves]\nimbibition_a = 3.5\nimbibition_q = 0.92\ndrainage_a = 4\n")


def test_solver_validation_passes_through():
    with pytest.raises(ConfigError, match="dt/tau"):
        parse_text(BASIC + "[solver]\ndt = 0.01\n")


def test_overrides():
    exp = parse_text(BASIC, overrides={"riemann.S_T": "0.7", "solver.H": "10", "curves.preset": "paper-set-2"})
    assert exp.S_T == 0.7 and exp.solver["H"] == 10.0
    assert exp.curves == curve_preset("paper-set-2")
    with pytest.raises(ConfigError, match="section.key"):
        parse_text(BASIC, overrides={"S_T": "0.7"})
    with pytest.raises(ConfigError, match="unknown key"):
        parse_text(BASIC, overrides={"riemann.S_X": "0.7"})


def test_desk_switch():
    exp = parse_config(bundled_config("fig7")).desk()
    cfg = exp.sim_config()
    assert (cfg.H, cfg.dx, cfg.dt, cfg.T_end) == (30.0, 0.05, 1e-3, 30.0)
    assert exp.snapshot_times() == (15.0, 30.0)


def test_twave_and_figure_checks():
    with pytest.raises(ConfigError, match="twave curve"):
        parse_text(BASIC + "[twave]\ncurve = scanning\n")
    with pytest.raises(ConfigError, match="unknown figure"):
        parse_text(BASIC + "[figure]\nname = fig3\n")
    with pytest.raises(ConfigError, match="in panels"):
        parse_text(BASIC + "[figure]\npanels = paper-set-1, set-9\n")


def test_unreadable_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        parse_config(tmp_path / "absent.cfg")


def test_inline_comments_and_case():
    exp = parse_text(BASIC.replace("S_B = 0.1", "S_B = 0.2   # bottom"))
    assert exp.S_B == 0.2
    with pytest.raises(ConfigError, match="unknown key 's_b'"):
        parse_text(BASIC + "s_b = 0.3\n")
