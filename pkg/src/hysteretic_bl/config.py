"""Experiment configuration files.

A config is an INI-style text file of ``key = value`` lines grouped under
section headers::

    [model]
    M = 1.0

    [curves]
    preset = paper-set-1        # or imbibition_a, imbibition_q, ...

    [riemann]
    S_B = 0.1
    S_T = 0.8

    [solver]
    delta = 0.25
    tau = 0.01
    H = 30
    dx = 0.05
    dt = 1e-3
    T_end = 30

    [output]
    dir = out
    times = 15, 30

Keys are case sensitive. Unknown sections or keys are rejected with the
line they appear on.
"""

import configparser
import re
from dataclasses import dataclass, field, replace
from pathlib import Path

from .constitutive import CURVE_PRESETS, CapillaryCurve, FluxModel, HysteresisCurves, curve_preset
from .errors import ConfigError, DomainError
from .pde import DESK_SCALE, SimConfig

FIGURE_NAMES = ("fig2", "fig5", "fig6", "fig7")

_FLOAT = float
_INT = int


def _str(v):
    return v.strip()


def _floats(v):
    return tuple(float(t) for t in re.split(r"[,\s]+", v.strip()) if t)


def _names(v):
    return tuple(t for t in re.split(r"[,\s]+", v.strip()) if t)


SCHEMA = {
    "model": {"M": _FLOAT},
    "curves": {
        "preset": _str,
        "imbibition_a": _FLOAT,
        "imbibition_q": _FLOAT,
        "imbibition_b": _FLOAT,
        "drainage_a": _FLOAT,
        "drainage_q": _FLOAT,
        "drainage_b": _FLOAT,
    },
    "riemann": {"S_B": _FLOAT, "S_T": _FLOAT, "classical": _str},
    "solver": {
        "delta": _FLOAT,
        "tau": _FLOAT,
        "H": _FLOAT,
        "dx": _FLOAT,
        "dt": _FLOAT,
        "T_end": _FLOAT,
        "tol": _FLOAT,
        "max_iter": _INT,
        "solver": _str,
        "face_flux": _str,
        "damping": _FLOAT,
    },
    "twave": {"S_l": _FLOAT, "S_r": _FLOAT, "curve": _str, "eps": _FLOAT},
    "output": {"dir": _str, "times": _floats, "cadence": _FLOAT, "x_samples": _INT},
    "figure": {"name": _str, "panels": _names, "times": _floats, "t": _FLOAT},
}

SOLVER_KEYS = tuple(SCHEMA["solver"])


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated contents of one config file."""

    M: float = 1.0
    curves: HysteresisCurves = field(default_factory=lambda: curve_preset("paper-set-1"))
    curve_preset: str | None = "paper-set-1"
    S_B: float = 0.1
    S_T: float = 0.8
    classical: bool = False
    solver: dict = field(default_factory=dict)
    twave: dict = field(default_factory=dict)
    out_dir: str = "out"
    times: tuple = ()
    cadence: float | None = None
    x_samples: int = 2001
    figure: dict = field(default_factory=dict)
    source: str | None = None

    @property
    def flux(self):
        return FluxModel(self.M)

    def sim_config(self, **overrides):
        kw = dict(self.solver)
        kw.update(overrides)
        return SimConfig(S_B=self.S_B, S_T=self.S_T, flux=self.flux, curves=self.curves, **kw)

    def desk(self):
        """Copy with the solver switched to the desk-scale grid and horizon."""
        solver = dict(self.solver)
        solver.update(DESK_SCALE)
        T = DESK_SCALE["T_end"]
        return replace(self, solver=solver, times=(T / 2, T))

    def snapshot_times(self):
        T = self.solver.get("T_end", DESK_SCALE["T_end"])
        return tuple(self.times) if self.times else (T / 2, T)


def _line_index(text):
    """Map ``(section, key)`` to the 1-based line where it is set."""
    where = {}
    section = None
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in "#;":
            continue
        m = re.match(r"\[([^\]]+)\]", line)
        if m:
            section = m.group(1).strip()
            where[(section, None)] = no
            continue
        key = re.split(r"[=:]", line, maxsplit=1)[0].strip()
        where[(section, key)] = no
    return where


def _fail(path, line, msg):
    loc = f"{path}:{line}" if line else str(path)
    raise ConfigError(f"{loc}: {msg}")


def parse_text(text, path="<string>", overrides=None):
    """Parse config text; ``overrides`` maps ``"section.key"`` to a string value."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text, source=str(path))
    except configparser.Error as exc:
        line = getattr(exc, "lineno", None)
        _fail(path, line, exc.message.splitlines()[0] if hasattr(exc, "message") else str(exc))
    where = _line_index(text)

    raw = {s: dict(cp[s]) for s in cp.sections()}
    for item, value in (overrides or {}).items():
        sec, _, key = item.partition(".")
        if not key:
            _fail(path, None, f"override {item!r} must look like section.key")
        raw.setdefault(sec, {})[key] = value
        where.setdefault((sec, key), None)

    values = {}
    for sec, items in raw.items():
        if sec not in SCHEMA:
            _fail(path, where.get((sec, None)), f"unknown section [{sec}]")
        for key, text_value in items.items():
            line = where.get((sec, key))
            conv = SCHEMA[sec].get(key)
            if conv is None:
                _fail(path, line, f"unknown key {key!r} in [{sec}]; allowed: {', '.join(SCHEMA[sec])}")
            try:
                values[(sec, key)] = conv(text_value)
            except ValueError:
                _fail(path, line, f"bad value {text_value!r} for {sec}.{key}")
    return _build(values, where, path)


def _build(v, where, path):
    def get(sec, key, default=None):
        return v.get((sec, key), default)

    def line(sec, key):
        return where.get((sec, key))

    M = get("model", "M", 1.0)
    if not M > 0:
        _fail(path, line("model", "M"), f"M must be positive, got {M}")

    preset = get("curves", "preset")
    explicit = [k for (s, k) in v if s == "curves" and k != "preset"]
    if preset is not None and explicit:
        _fail(path, line("curves", explicit[0]), "give either a curve preset or explicit parameters, not both")
    try:
        if explicit:
            for side in ("imbibition", "drainage"):
                for k in ("a", "q"):
                    if (("curves", f"{side}_{k}")) not in v:
                        _fail(path, line("curves", None), f"missing curves.{side}_{k}")
            curves = HysteresisCurves(
                CapillaryCurve(get("curves", "imbibition_a"), get("curves", "imbibition_q"), get("curves", "imbibition_b", 0.0)),
                CapillaryCurve(get("curves", "drainage_a"), get("curves", "drainage_q"), get("curves", "drainage_b", 0.0)),
            )
            curves.validate()
            preset = None
        else:
            preset = preset or "paper-set-1"
            if preset not in CURVE_PRESETS:
                _fail(path, line("curves", "preset"), f"unknown curve preset {preset!r}; known: {', '.join(sorted(CURVE_PRESETS))}")
            curves = curve_preset(preset)
    except DomainError as exc:
        _fail(path, line("curves", None), str(exc))

    for key in ("S_B", "S_T"):
        if ("riemann", key) not in v:
            _fail(path, line("riemann", None), f"missing required key riemann.{key}")
    S_B, S_T = get("riemann", "S_B"), get("riemann", "S_T")
    if not 0 < S_B < S_T < 1:
        _fail(path, line("riemann", "S_B"), f"Riemann data must satisfy 0 < S_B < S_T < 1, got S_B={S_B}, S_T={S_T}")
    classical = str(get("riemann", "classical", "no")).lower() in ("1", "yes", "true", "on")

    solver = {k: v[("solver", k)] for k in SOLVER_KEYS if ("solver", k) in v}
    exp = ExperimentConfig(
        M=M,
        curves=curves,
        curve_preset=preset,
        S_B=S_B,
        S_T=S_T,
        classical=classical,
        solver=solver,
        twave={k: v[("twave", k)] for k in SCHEMA["twave"] if ("twave", k) in v},
        out_dir=get("output", "dir", "out"),
        times=get("output", "times", ()),
        cadence=get("output", "cadence"),
        x_samples=get("output", "x_samples", 2001),
        figure={k: v[("figure", k)] for k in SCHEMA["figure"] if ("figure", k) in v},
        source=str(path),
    )
    curve = exp.twave.get("curve", "imbibition")
    if curve not in ("imbibition", "drainage"):
        _fail(path, line("twave", "curve"), f"twave curve must be imbibition or drainage, got {curve!r}")
    name = exp.figure.get("name")
    if name is not None and name not in FIGURE_NAMES:
        _fail(path, line("figure", "name"), f"unknown figure {name!r}")
    for p in exp.figure.get("panels", ()):
        if p not in CURVE_PRESETS:
            _fail(path, line("figure", "panels"), f"unknown curve preset {p!r} in panels")
    try:
        exp.sim_config()
    except ConfigError as exc:
        _fail(path, line("solver", None), str(exc))
    return exp


def parse_config(path, overrides=None):
    """Read and validate the config file at ``path``."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config ({exc.strerror})") from None
    return parse_text(text, path, overrides)


def bundled_config(name):
    """Path of a config shipped with the package, e.g. ``fig6``."""
    p = Path(__file__).parent / "figures" / f"{name}.cfg"
    if not p.exists():
        raise ConfigError(f"no bundled config named {name!r}")
    return p
