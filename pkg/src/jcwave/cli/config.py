"""Scenario files: flat INI sections parsed with :mod:`configparser`.

Example::

    [scenario]
    mode = run

    [model]
    model = jc
    omega = 5
    g0 = 0.3

    [field]
    kind = coherent
    nu = 4

    [propagation]
    dt = 0.001
    t_final = 400
    record_stride = 100

Sections and keys not listed in :data:`SCHEMA` are rejected so that typos
fail loudly.
"""
import configparser
import hashlib
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigurationError, JCWaveError
from ..grid import make_grid
from ..models import Model, ModelParams
from ..propagator import PropagatorConfig, Sheet
from ..states import AtomStateSpec, FieldStateSpec

MODES = ("run", "sweep", "curves", "classical")
COMPARE_LABELS = ("rabi", "jc", "jc_interaction", "adiabatic")

SCHEMA = {
    "scenario": {"mode", "name"},
    "model": {"model", "omega", "g0"},
    "field": {"kind", "n", "nu"},
    "atom": {"plus", "minus"},
    "grid": {"n_points", "q_max"},
    "propagation": {"dt", "t_final", "record_stride", "scheme"},
    "observables": {"qfunc_times", "qfunc_points", "qfunc_radius", "amplitude_times", "spectrum", "revival"},
    "compare": {"models"},
    "sweep": {"g0", "omega"},
    "curves": {"sets", "q_range", "n"},
    "classical": {"q0", "p0", "sheets", "dt", "t_final", "contour_samples"},
    "output": {"directory"},
}


class ParseError(JCWaveError, ValueError):
    """Malformed scenario text; maps to exit status 2."""


@dataclass(frozen=True)
class CurveSet:
    omega: float
    g0: float


@dataclass
class Scenario:
    """Validated simulation request."""

    mode: str
    name: str
    params: ModelParams
    field_spec: FieldStateSpec
    atom: AtomStateSpec
    n_points: int
    q_max: float
    propagation: PropagatorConfig
    qfunc_times: tuple = ()
    qfunc_points: int = 201
    qfunc_radius: float = None
    amplitude_times: tuple = ()
    spectrum: bool = False
    revival: bool = False
    compare: tuple = ()
    sweep_g0: tuple = ()
    sweep_omega: tuple = ()
    curve_sets: tuple = ()
    curve_q_range: float = 6.0
    curve_n: int = 601
    classical_q0: float = 0.0
    classical_p0: float = 0.0
    classical_sheets: tuple = (Sheet.UPPER, Sheet.LOWER)
    classical_dt: float = 1e-3
    classical_t_final: float = 20.0
    contour_samples: int = 400
    output_dir: str = None
    source_text: str = field(default="", repr=False)

    @property
    def labels(self):
        return self.compare if self.compare else (self.params.model.value,)

    def grid(self):
        return make_grid(self.n_points, self.q_max)

    def config_hash(self):
        return hashlib.sha256(self.source_text.encode("utf-8")).hexdigest()


# ---------------------------------------------------------------- parsing helpers


def _where(parser, section, key):
    return f"[{section}] {key}"


def _get(parser, section, key, conv, default=None, required=False):
    if not parser.has_option(section, key):
        if required:
            raise ParseError(f"missing required key {_where(parser, section, key)}")
        return default
    raw = parser.get(section, key).strip()
    try:
        return conv(raw)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"cannot parse {_where(parser, section, key)} = {raw!r}: {exc}") from None


def _float(raw):
    return float(raw)


def _int(raw):
    v = float(raw)
    if v != int(v):
        raise ValueError("expected an integer")
    return int(v)


def _complex(raw):
    return complex(raw.replace(" ", "").replace("i", "j"))


def _bool(raw):
    key = raw.lower()
    if key in ("1", "true", "yes", "on"):
        return True
    if key in ("0", "false", "no", "off"):
        return False
    raise ValueError("expected a boolean")


def _floats(raw):
    """Comma list, or ``start:stop:step`` with an inclusive stop."""
    raw = raw.strip()
    if not raw:
        return ()
    if ":" in raw:
        parts = [float(x) for x in raw.split(":")]
        if len(parts) != 3 or parts[2] <= 0:
            raise ValueError("range must be start:stop:step with step > 0")
        a, b, h = parts
        n = int(np.floor((b - a) / h + 1e-9)) + 1
        return tuple(float(round(a + k * h, 12)) for k in range(max(n, 0)))
    return tuple(float(x) for x in raw.split(",") if x.strip())


def _words(raw):
    return tuple(w.strip().lower() for w in raw.split(",") if w.strip())


def _curve_sets(raw):
    out = []
    for item in raw.split(","):
        item = item.strip()
        if not item:
            continue
        om, g = item.split("/")
        out.append(CurveSet(float(om), float(g)))
    return tuple(out)


def parse_scenario(text, source="<string>"):
    """Parse and validate scenario text.

    Raises
    ------
    ParseError
        Malformed syntax, unknown section or key, or unparsable value.
    ConfigurationError
        Well-formed values that violate a model, grid or propagation constraint.
    """
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str.lower
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ParseError(f"{source}: {exc}") from None
    for sec in parser.sections():
        if sec not in SCHEMA:
            raise ParseError(f"{source}: unknown section [{sec}]")
        for key in parser[sec]:
            if key not in SCHEMA[sec]:
                raise ParseError(f"{source}: unknown key {_where(parser, sec, key)}")

    mode = _get(parser, "scenario", "mode", str.lower, "run")
    if mode not in MODES:
        raise ParseError(f"{source}: [scenario] mode must be one of {MODES}, got {mode!r}")
    name = _get(parser, "scenario", "name", str, "scenario")

    model = _get(parser, "model", "model", str, "jc")
    omega = _get(parser, "model", "omega", _float, 1.0)
    g0 = _get(parser, "model", "g0", _float, 1.0)

    kind = _get(parser, "field", "kind", str.lower, "fock")
    n = _get(parser, "field", "n", _int, 0)
    nu = _get(parser, "field", "nu", _complex, 0j)
    plus = _get(parser, "atom", "plus", _complex, 1.0)
    minus = _get(parser, "atom", "minus", _complex, 0.0)

    n_points = _get(parser, "grid", "n_points", _int, 2048)
    q_max = _get(parser, "grid", "q_max", _float, 40.0)

    dt = _get(parser, "propagation", "dt", _float, 1e-3)
    t_final = _get(parser, "propagation", "t_final", _float, 10.0)
    stride = _get(parser, "propagation", "record_stride", _int, 100)
    scheme = _get(parser, "propagation", "scheme", str, "vkv")

    qft = _get(parser, "observables", "qfunc_times", _floats, ())
    qfp = _get(parser, "observables", "qfunc_points", _int, 201)
    qfr = _get(parser, "observables", "qfunc_radius", _float, None)
    amp = _get(parser, "observables", "amplitude_times", _floats, ())
    spec = _get(parser, "observables", "spectrum", _bool, False)
    rev = _get(parser, "observables", "revival", _bool, False)

    compare = _get(parser, "compare", "models", _words, ())
    sweep_g0 = _get(parser, "sweep", "g0", _floats, ())
    sweep_om = _get(parser, "sweep", "omega", _floats, ())

    curve_sets = _get(parser, "curves", "sets", _curve_sets, ())
    q_range = _get(parser, "curves", "q_range", _float, 6.0)
    curve_n = _get(parser, "curves", "n", _int, 601)

    cq0 = _get(parser, "classical", "q0", _float, 0.0)
    cp0 = _get(parser, "classical", "p0", _float, 0.0)
    sheets = _get(parser, "classical", "sheets", _words, ("upper", "lower"))
    cdt = _get(parser, "classical", "dt", _float, 1e-3)
    ct = _get(parser, "classical", "t_final", _float, 20.0)
    csamp = _get(parser, "classical", "contour_samples", _int, 400)

    outdir = _get(parser, "output", "directory", str, None)

    # validation: value-level constraints raise ConfigurationError (exit 3)
    try:
        params = ModelParams(omega, g0, model)
        if kind == "fock":
            fspec = FieldStateSpec.fock(n)
        elif kind == "coherent":
            fspec = FieldStateSpec.coherent(nu)
        else:
            raise ConfigurationError(f"[field] kind must be fock or coherent, got {kind!r}")
        atom = AtomStateSpec.from_amplitudes(plus, minus)
        make_grid(n_points, q_max)
        prop = PropagatorConfig(dt, t_final, stride, scheme)
        sheet_objs = tuple(Sheet(s) for s in sheets)
    except ValueError as exc:
        if isinstance(exc, ConfigurationError):
            raise
        raise ConfigurationError(str(exc)) from None

    for t in qft + amp:
        if t < 0 or t > t_final + 1e-12:
            raise ConfigurationError(f"snapshot time {t} lies outside [0, t_final={t_final}]")
    for lab in compare:
        if lab not in COMPARE_LABELS:
            raise ConfigurationError(f"[compare] models entries must be among {COMPARE_LABELS}, got {lab!r}")
    if qfp < 3:
        raise ConfigurationError("qfunc_points must be at least 3")
    if qft:
        g = make_grid(n_points, q_max)
        half = (qfr if qfr is not None else fspec.radius) + 4.0
        if np.sqrt(2.0) * half + 5.0 > min(g.q_max, g.p_max):
            raise ConfigurationError(
                f"Q-function lattice |alpha| <= {half:g} does not fit the grid; raise q_max or lower qfunc_radius"
            )
    if mode == "sweep":
        if not sweep_g0 and not sweep_om:
            raise ConfigurationError("sweep mode needs a non-empty [sweep] g0 or omega axis")
        for v in sweep_g0:
            if v <= 0:
                raise ConfigurationError("sweep g0 values must be positive")
        for v in sweep_om:
            if v <= 0:
                raise ConfigurationError("sweep omega values must be positive")
    if mode == "curves" and not curve_sets:
        raise ConfigurationError("curves mode needs [curves] sets = omega/g0, ...")
    if mode == "curves":
        for cs in curve_sets:
            ModelParams(cs.omega, cs.g0, "rabi")
    if mode == "classical" and not (cdt > 0 and ct > 0):
        raise ConfigurationError("classical dt and t_final must be positive")

    return Scenario(
        mode=mode,
        name=name,
        params=params,
        field_spec=fspec,
        atom=atom,
        n_points=n_points,
        q_max=q_max,
        propagation=prop,
        qfunc_times=qft,
        qfunc_points=qfp,
        qfunc_radius=qfr,
        amplitude_times=amp,
        spectrum=spec,
        revival=rev,
        compare=compare,
        sweep_g0=sweep_g0 or (g0,),
        sweep_omega=sweep_om or (omega,),
        curve_sets=curve_sets,
        curve_q_range=q_range,
        curve_n=curve_n,
        classical_q0=cq0,
        classical_p0=cp0,
        classical_sheets=sheet_objs,
        classical_dt=cdt,
        classical_t_final=ct,
        contour_samples=csamp,
        output_dir=outdir,
        source_text=text,
    )


def load_scenario(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    return parse_scenario(text, source=str(path))
