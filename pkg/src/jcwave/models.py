"""Rabi, Jaynes-Cummings and linearized Landau-Zener Hamiltonians on a grid.

Units are scaled so that the field frequency and hbar are one.  Every model
splits as ``H = V(q) + K(p)`` where both parts are 2x2 Hermitian matrices
written in the Pauli basis, ``a I + bx sx + by sy + bz sz``.  Channel order
is ``(|+>, |->)``.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import BasisError, ConfigurationError
from .grid import WavePacket
from .kernels import su2_factor

SQRT2 = np.sqrt(2.0)


class Model(str, Enum):
    RABI = "rabi"
    JC = "jc"
    JC_INTERACTION = "jc_interaction"
    LZ = "lz"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "_")
        aliases = {"jc_interaction_picture": "jc_interaction", "jaynes_cummings": "jc", "landau_zener": "lz"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ConfigurationError(f"unknown model {value!r}") from None


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless model parameters.

    Parameters
    ----------
    omega_atom : float
        Atomic splitting in units of the field frequency.
    g0 : float
        Atom-field coupling in units of the field frequency.
    model : Model or str
    """

    omega_atom: float
    g0: float
    model: Model = Model.JC

    def __post_init__(self):
        object.__setattr__(self, "model", Model.parse(self.model))
        if not np.isfinite(self.omega_atom) or self.omega_atom <= 0:
            raise ConfigurationError(f"omega_atom must be > 0, got {self.omega_atom!r}")
        if not np.isfinite(self.g0) or self.g0 < 0:
            raise ConfigurationError(f"g0 must be >= 0, got {self.g0!r}")
        object.__setattr__(self, "omega_atom", float(self.omega_atom))
        object.__setattr__(self, "g0", float(self.g0))

    @property
    def detuning(self):
        return self.omega_atom - 1.0

    def with_model(self, model):
        return ModelParams(self.omega_atom, self.g0, model)


@dataclass(frozen=True, eq=False)
class PotentialMatrix:
    """Pointwise ``a I + bx sx + by sy + bz sz`` over ``q`` or ``p``."""

    a: np.ndarray
    bx: np.ndarray
    by: np.ndarray
    bz: np.ndarray
    variable: str = "q"

    def factor(self, tau):
        """``exp(-i tau M)`` as a ``(4, n)`` array of matrix elements."""
        return su2_factor(self.a, self.bx, self.by, self.bz, tau)

    def dense(self):
        """Matrices of shape ``(n, 2, 2)``."""
        n = np.broadcast(self.a, self.bx, self.by, self.bz).shape
        out = np.empty(n + (2, 2), dtype=np.complex128)
        out[..., 0, 0] = self.a + self.bz
        out[..., 0, 1] = self.bx - 1j * self.by
        out[..., 1, 0] = self.bx + 1j * self.by
        out[..., 1, 1] = self.a - self.bz
        return out

    def apply(self, up, down):
        """Matrix action on channel arrays; returns new arrays."""
        new_up = (self.a + self.bz) * up + (self.bx - 1j * self.by) * down
        new_down = (self.bx + 1j * self.by) * up + (self.a - self.bz) * down
        return new_up, new_down


def _full(x, shape):
    return np.broadcast_to(np.asarray(x, float), shape).copy()


def potential_part(params, grid):
    """Position-dependent part of the Hamiltonian."""
    q = grid.q_values
    g, om = params.g0, params.omega_atom
    zero = np.zeros_like(q)
    m = params.model
    if m is Model.RABI:
        return PotentialMatrix(0.5 * q * q, SQRT2 * g * q, zero, _full(0.5 * om, q.shape))
    if m is Model.JC:
        return PotentialMatrix(0.5 * q * q, g * q / SQRT2, zero, _full(0.5 * om, q.shape))
    if m is Model.JC_INTERACTION:
        return PotentialMatrix(zero, g * q / SQRT2, zero.copy(), _full(0.5 * params.detuning, q.shape))
    if m is Model.LZ:
        # rotated Rabi crossing with the confinement dropped
        return PotentialMatrix(zero, _full(0.5 * om, q.shape), zero.copy(), SQRT2 * g * q)
    raise ConfigurationError(f"unsupported model {m!r}")


def kinetic_part(params, grid):
    """Momentum-dependent part, laid out like ``grid.p_values``."""
    p = grid.p_values
    g = params.g0
    zero = np.zeros_like(p)
    m = params.model
    if m in (Model.RABI, Model.LZ):
        return PotentialMatrix(0.5 * p * p, zero, zero.copy(), zero.copy(), "p")
    if m is Model.JC:
        return PotentialMatrix(0.5 * p * p, zero, -g * p / SQRT2, zero.copy(), "p")
    if m is Model.JC_INTERACTION:
        return PotentialMatrix(zero, zero.copy(), -g * p / SQRT2, zero.copy(), "p")
    raise ConfigurationError(f"unsupported model {m!r}")


_U = np.array([[1.0, 1.0], [1.0, -1.0]]) / SQRT2


def rotate_to_displaced_basis(psi):
    """Mix the channels with ``U = (sx + sz)/sqrt(2)``; ``U`` is its own inverse."""
    if psi.basis != "bare":
        raise BasisError("displaced-oscillator rotation acts on bare-basis packets")
    up = _U[0, 0] * psi.up + _U[0, 1] * psi.down
    down = _U[1, 0] * psi.up + _U[1, 1] * psi.down
    return WavePacket(up, down, psi.grid, psi.basis, psi.space)


def diabatic_curves(params, grid):
    """Displaced harmonic potentials on the diagonal of the rotated Hamiltonian.

    Returns ``(V(q + s), V(q - s))`` minus the common offset, with
    ``s = sqrt(2) g0`` for Rabi and ``g0/sqrt(2)`` for JC.
    """
    q = grid.q_values
    if params.model is Model.RABI:
        s = SQRT2 * params.g0
    elif params.model is Model.JC:
        s = params.g0 / SQRT2
    else:
        raise ConfigurationError("diabatic curves are defined for the Rabi and JC models only")
    shift = 0.5 * s * s
    return 0.5 * (q + s) ** 2 - shift, 0.5 * (q - s) ** 2 - shift
