"""Split-operator propagation of two-channel packets and classical RK4 trajectories.

The full stepper factorizes ``exp(-i dt (V(q) + K(p)))`` symmetrically; each
factor is a pointwise 2x2 unitary evaluated in closed form, applied in
position space for ``V`` and in FFT layout for ``K``.  Between observable
records the inner half-steps are fused, so a chunk of ``n`` steps costs
``n`` FFT pairs and ``n + 1`` potential multiplications.
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from . import kernels
from .adiabatic import check_rabi, from_adiabatic_basis, h_cor_expectation, to_adiabatic_basis
from .analytic import adiabatic_curves, lz_probability
from .errors import BasisError, ConfigurationError, GridTooSmallError, NumericalBlowupError
from .grid import WavePacket, make_grid
from .models import Model, ModelParams, kinetic_part, potential_part
from .observables import _Recorder, fidelity

BOUNDARY_TOLERANCE = 1e-8


class Scheme(str, Enum):
    VKV = "vkv"
    KVK = "kvk"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("strang", "").strip("_ ")
        try:
            return cls(key)
        except ValueError:
            raise ConfigurationError(f"unknown splitting scheme {value!r}") from None


@dataclass(frozen=True)
class PropagatorConfig:
    """Time stepping settings.

    ``t_final / dt`` must be an integer to within ``1e-9`` relative.
    """

    dt: float = 1e-3
    t_final: float = 10.0
    record_stride: int = 100
    scheme: Scheme = Scheme.VKV

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme.parse(self.scheme))
        if not (np.isfinite(self.dt) and self.dt > 0):
            raise ConfigurationError(f"dt must be positive, got {self.dt!r}")
        if not (np.isfinite(self.t_final) and self.t_final >= 0):
            raise ConfigurationError(f"t_final must be non-negative, got {self.t_final!r}")
        if int(self.record_stride) != self.record_stride or self.record_stride < 1:
            raise ConfigurationError(f"record_stride must be a positive integer, got {self.record_stride!r}")
        object.__setattr__(self, "record_stride", int(self.record_stride))
        ratio = self.t_final / self.dt
        if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
            raise ConfigurationError(f"t_final={self.t_final} is not a multiple of dt={self.dt}")

    @property
    def n_steps(self):
        return int(round(self.t_final / self.dt))

    @property
    def record_dt(self):
        return self.record_stride * self.dt

    def halved(self):
        return PropagatorConfig(self.dt / 2, self.t_final, 2 * self.record_stride, self.scheme)


class Propagator:
    """Cached Strang factors for one model, grid, time step and representation.

    Parameters
    ----------
    params : ModelParams
    grid : Grid
    dt : float
    scheme : Scheme or str
    representation : {'full', 'adiabatic'}
        ``'adiabatic'`` evolves the two adiabatic channels independently on the
        Rabi curves ``V_pm`` (the non-adiabatic coupling is dropped).
    """

    def __init__(self, params, grid, dt, scheme=Scheme.VKV, representation="full"):
        self.params = params
        self.grid = grid
        self.dt = float(dt)
        self.scheme = Scheme.parse(scheme)
        self.representation = representation
        if representation == "full":
            v = potential_part(params, grid)
            k = kinetic_part(params, grid)
            v_half, v_full = v.factor(0.5 * dt), v.factor(dt)
            k_half, k_full = k.factor(0.5 * dt), k.factor(dt)
            self.basis = "bare"
        elif representation == "adiabatic":
            check_rabi(params)
            c = adiabatic_curves(params, grid)
            kin = 0.5 * grid.p_values**2
            v_half = kernels.diagonal_factor(c.v_plus, c.v_minus, 0.5 * dt)
            v_full = kernels.diagonal_factor(c.v_plus, c.v_minus, dt)
            k_half = kernels.diagonal_factor(kin, kin, 0.5 * dt)
            k_full = kernels.diagonal_factor(kin, kin, dt)
            self.basis = "adiabatic"
        else:
            raise ConfigurationError(f"unknown representation {representation!r}")
        self._v_half, self._v_full = v_half, v_full
        self._k_half, self._k_full = k_half, k_full

    def advance(self, psi, n_steps):
        """Advance ``psi`` in place by ``n_steps`` steps."""
        if psi.basis != self.basis:
            raise BasisError(f"{self.representation} stepper expects a {self.basis}-basis packet")
        if psi.space != "position":
            raise BasisError("stepping starts from the position representation")
        if not psi.grid.same_as(self.grid):
            raise ConfigurationError("packet and propagator use different grids")
        if n_steps <= 0:
            return psi
        if self.scheme is Scheme.VKV:
            kernels.strang_vkv(psi.up, psi.down, self._v_half, self._v_full, self._k_full, int(n_steps))
        else:
            kernels.strang_kvk(psi.up, psi.down, self._k_half, self._k_full, self._v_full, int(n_steps))
        return psi


@lru_cache(maxsize=32)
def _cached(params, grid, dt, scheme, representation):
    return Propagator(params, grid, dt, scheme, representation)


def _checked(psi):
    nrm = psi.norm()
    if not np.isfinite(nrm):
        raise NumericalBlowupError("non-finite amplitudes after stepping")
    return psi


def step_full(psi, params, dt, scheme=Scheme.VKV):
    """One Strang step of the coupled model; returns a new packet."""
    if psi.basis != "bare":
        raise BasisError("the full stepper acts on bare-basis packets")
    out = psi.copy()
    _cached(params, psi.grid, float(dt), Scheme.parse(scheme), "full").advance(out, 1)
    return _checked(out)


def step_adiabatic(psi, params, dt, scheme=Scheme.VKV):
    """One step on the uncoupled adiabatic Rabi curves; returns a new packet."""
    if psi.basis != "adiabatic":
        raise BasisError("the adiabatic stepper acts on adiabatic-basis packets")
    out = psi.copy()
    _cached(params, psi.grid, float(dt), Scheme.parse(scheme), "adiabatic").advance(out, 1)
    return _checked(out)


@dataclass
class PropagationResult:
    series: object
    final: WavePacket
    snapshots: dict = field(default_factory=dict)
    adiabatic_final: WavePacket = None
    adiabatic_snapshots: dict = field(default_factory=dict)
    adiabatic_series: object = None


def _check_boundary(psi, t, tol):
    frac = psi.boundary_fraction()
    if frac > tol:
        raise GridTooSmallError(
            f"boundary amplitude {frac:.2e} of peak at t={t:.6g} exceeds {tol:.0e}; enlarge q_max"
        )


def propagate(psi0, params, config, snapshot_times=(), adiabatic_twin=False, boundary_tol=BOUNDARY_TOLERANCE):
    """Evolve ``psi0`` and record observables every ``config.record_stride`` steps.

    Parameters
    ----------
    psi0 : WavePacket
        Bare-basis initial state.
    params : ModelParams
    config : PropagatorConfig
    snapshot_times : sequence of float
        Times at which copies of the packet are stored (rounded to whole steps).
    adiabatic_twin : bool
        Also evolve the Rabi adiabatic approximation from the same initial state.
        Its fidelity and ``<H_cor>`` go into ``series``; its own observables,
        measured in the bare basis, into ``adiabatic_series``.
    boundary_tol : float or None
        Raise :class:`GridTooSmallError` when the edge amplitude exceeds this
        fraction of the peak; ``None`` disables the monitor.

    Returns
    -------
    PropagationResult

    Raises
    ------
    NumericalBlowupError, GridTooSmallError
        The exception carries the records taken so far as ``partial``.
    """
    if psi0.basis != "bare":
        raise BasisError("propagate expects a bare-basis initial packet")
    dt = config.dt
    n_steps = config.n_steps
    stride = config.record_stride
    for ts in snapshot_times:
        if ts < 0 or ts > config.t_final + 0.5 * dt:
            raise ConfigurationError(f"snapshot time {ts} outside [0, {config.t_final}]")
    snap_steps = {int(round(ts / dt)): ts for ts in snapshot_times}
    stops = sorted(set(range(0, n_steps + 1, stride)) | set(snap_steps) | {n_steps})

    full = Propagator(params, psi0.grid, dt, config.scheme, "full")
    psi = psi0.copy()
    twin = None
    adi = None
    if adiabatic_twin:
        check_rabi(params)
        twin = Propagator(params.with_model(Model.RABI), psi0.grid, dt, config.scheme, "adiabatic")
        adi = to_adiabatic_basis(psi0, params)
    rec = _Recorder(psi0, params)
    twin_rec = _Recorder(psi0, params.with_model(Model.RABI)) if twin is not None else None
    res = PropagationResult(None, psi)

    done = 0
    try:
        for s in stops:
            full.advance(psi, s - done)
            if twin is not None:
                twin.advance(adi, s - done)
            done = s
            t = s * dt
            is_record = s % stride == 0
            if is_record or s in snap_steps or s == n_steps:
                _checked(psi)
                if boundary_tol is not None:
                    _check_boundary(psi, t, boundary_tol)
                if twin is not None:
                    _checked(adi)
            if is_record:
                if twin is not None:
                    adi_bare = from_adiabatic_basis(adi, params)
                    rec.record(t, psi, fidelity(psi, adi_bare), h_cor_expectation(adi, params))
                    twin_rec.record(t, adi_bare)
                else:
                    rec.record(t, psi)
            if s in snap_steps:
                res.snapshots[snap_steps[s]] = psi.copy()
                if twin is not None:
                    res.adiabatic_snapshots[snap_steps[s]] = from_adiabatic_basis(adi, params)
    except (NumericalBlowupError, GridTooSmallError) as exc:
        exc.partial = rec.freeze()
        raise
    res.series = rec.freeze()
    res.final = psi
    res.adiabatic_final = adi
    if twin_rec is not None:
        res.adiabatic_series = twin_rec.freeze()
    return res


# ---------------------------------------------------------------- classical trajectories


class Sheet(str, Enum):
    UPPER = "upper"
    LOWER = "lower"

    @property
    def sign(self):
        return 1.0 if self is Sheet.UPPER else -1.0


@dataclass(frozen=True)
class ClassicalState:
    q_c: float
    p_c: float
    sheet: Sheet = Sheet.UPPER

    def __post_init__(self):
        object.__setattr__(self, "sheet", Sheet(getattr(self.sheet, "value", self.sheet)))
        if not (math.isfinite(self.q_c) and math.isfinite(self.p_c)):
            raise ConfigurationError("classical state must be finite")


@dataclass(frozen=True, eq=False)
class ClassicalTrajectory:
    times: np.ndarray
    q: np.ndarray
    p: np.ndarray
    sheet: Sheet
    params: ModelParams

    def __len__(self):
        return self.times.size

    def __getitem__(self, i):
        return ClassicalState(float(self.q[i]), float(self.p[i]), self.sheet)

    def energy(self):
        """``p^2/2 + V_pm(q)`` along the trajectory."""
        c = adiabatic_curves(self.params, self.q)
        v = c.v_plus if self.sheet is Sheet.UPPER else c.v_minus
        return 0.5 * self.p**2 + v


def classical_trajectory(init, params, dt=1e-3, t_final=2.0 * np.pi):
    """Fixed-step RK4 on one adiabatic sheet.

    ``q' = p``, ``p' = -q + 16 W^2 g^4 q/(W^2 + 2 g^2 q^2)^3 -+ 4 g^2 |q|/sqrt(W^2 + 8 g^2 q^2)``
    with the upper sign on the upper sheet.  The ``|q|`` makes the force kink
    at ``q = 0``; the kink is stepped through without event handling.
    """
    if not dt > 0:
        raise ConfigurationError("dt must be positive")
    n = int(round(t_final / dt))
    qs, ps = kernels.rk4_trajectory(
        float(init.q_c), float(init.p_c), params.omega_atom, params.g0, init.sheet.sign, float(dt), n
    )
    if not (np.all(np.isfinite(qs)) and np.all(np.isfinite(ps))):
        raise NumericalBlowupError("classical trajectory diverged")
    return ClassicalTrajectory(dt * np.arange(n + 1), qs, ps, init.sheet, params)


# ---------------------------------------------------------------- Landau-Zener scattering


@dataclass(frozen=True)
class LZTransfer:
    omega: float
    g0: float
    v: float
    measured: float
    predicted: float
    t_readout: float
    turning_distance: float

    @property
    def relative_error(self):
        return abs(self.measured - self.predicted) / self.predicted


def _lower_state(params, q):
    # pointwise lower eigenvector of bz sz + bx sx with bz = sqrt2 g q, bx = Omega/2
    th = 0.5 * np.arctan2(0.5 * params.omega_atom, np.sqrt(2.0) * params.g0 * q)
    return -np.sin(th), np.cos(th)


def lz_transfer(omega, g0, v, width=2.0, q0=-10.0, dt=1e-3, grid=None, scheme=Scheme.VKV):
    """Wave-packet estimate of the adiabatic transfer probability at a linear crossing.

    A Gaussian ``exp(-(q - q0)^2 / (2 width^2))`` starts at ``q0 < 0`` in the
    lower adiabatic state of ``sqrt(2) g0 q sz + Omega/2 sx`` with the
    momentum that brings it to the crossing at speed ``v``.  The branch that
    stays diabatic decelerates and turns at ``v^2 / (2 sqrt(2) g0)`` past the
    crossing; the lower-adiabatic population is read out at that moment.
    """
    params = ModelParams(omega, g0, Model.LZ)
    predicted = lz_probability(v, params)
    force = np.sqrt(2.0) * g0
    turn = v * v / (2.0 * force)
    if turn < 5.0 * width:
        raise ConfigurationError(
            f"turning distance {turn:.3g} is below five packet widths; not in the semiclassical regime"
        )
    v0 = math.sqrt(v * v - 2.0 * force * q0)
    t_cross = (v0 - v) / force
    t_read = t_cross + v / force
    if grid is None:
        reach = v * (v / force) + 0.5 * force * (v / force) ** 2
        qmax = max(reach, abs(q0)) + 8.0 * width
        grid = make_grid(2 ** math.ceil(math.log2(2.0 * qmax / 0.035)), qmax)
    q = grid.q_values
    env = np.exp(-0.5 * ((q - q0) / width) ** 2 + 1j * v0 * q)
    a, b = _lower_state(params, q)
    psi = WavePacket(a * env, b * env, grid).normalized()
    n = int(round(t_read / dt))
    Propagator(params, grid, dt, scheme, "full").advance(psi, n)
    _checked(psi)
    a, b = _lower_state(params, q)
    amp = np.conj(a) * psi.up + np.conj(b) * psi.down
    measured = grid.dq * float(np.vdot(amp, amp).real) / psi.norm()
    return LZTransfer(omega, g0, v, measured, predicted, n * dt, turn)
