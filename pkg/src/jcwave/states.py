"""Initial field and atom states on the position grid."""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigurationError, ResolutionError
from .grid import WavePacket

PI_QUARTER = np.pi ** -0.25


class FieldKind(str, Enum):
    FOCK = "fock"
    COHERENT = "coherent"


@dataclass(frozen=True)
class FieldStateSpec:
    """Field state: Fock ``|n>`` or coherent ``|nu>``."""

    kind: FieldKind
    n: int = 0
    nu: complex = 0j

    def __post_init__(self):
        try:
            kind = FieldKind(str(getattr(self.kind, "value", self.kind)).lower())
        except ValueError:
            raise ConfigurationError(f"unknown field kind {self.kind!r}") from None
        object.__setattr__(self, "kind", kind)
        if kind is FieldKind.FOCK and (int(self.n) != self.n or self.n < 0):
            raise ConfigurationError(f"Fock index must be a non-negative integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "nu", complex(self.nu))

    @classmethod
    def fock(cls, n):
        return cls(FieldKind.FOCK, n=n)

    @classmethod
    def coherent(cls, nu):
        return cls(FieldKind.COHERENT, nu=nu)

    @property
    def mean_photon_number(self):
        return float(self.n) if self.kind is FieldKind.FOCK else abs(self.nu) ** 2

    @property
    def radius(self):
        """Phase-space radius ``|alpha|`` the state is concentrated around."""
        return np.sqrt(self.mean_photon_number)


@dataclass(frozen=True)
class AtomStateSpec:
    """Atomic amplitudes ``c+ |+> + c- |->``."""

    amplitude_plus: complex = 1.0
    amplitude_minus: complex = 0.0

    def __post_init__(self):
        cp, cm = complex(self.amplitude_plus), complex(self.amplitude_minus)
        if abs(abs(cp) ** 2 + abs(cm) ** 2 - 1.0) > 1e-12:
            raise ConfigurationError("atomic amplitudes must satisfy |c+|^2 + |c-|^2 = 1")
        object.__setattr__(self, "amplitude_plus", cp)
        object.__setattr__(self, "amplitude_minus", cm)

    @classmethod
    def from_amplitudes(cls, cp, cm):
        s = np.sqrt(abs(cp) ** 2 + abs(cm) ** 2)
        if s == 0:
            raise ConfigurationError("atomic amplitudes are both zero")
        return cls(cp / s, cm / s)

    @classmethod
    def excited(cls):
        return cls(1.0, 0.0)

    @classmethod
    def ground(cls):
        return cls(0.0, 1.0)


def max_fock_index(grid, momentum_fraction=0.9, margin=6.0):
    """Largest ``n`` whose turning point ``sqrt(2n+1)`` fits the grid.

    Both the momentum cutoff ``momentum_fraction * pi/dq`` and the spatial
    extent ``q_max - margin`` bound the turning point.
    """
    r = min(momentum_fraction * grid.p_max, grid.q_max - margin)
    if r <= 1.0:
        return -1
    return int(np.floor((r * r - 1.0) / 2.0))


def _check_fock(n, grid):
    if n < 0:
        raise ConfigurationError(f"Fock index must be non-negative, got {n}")
    nmax = max_fock_index(grid)
    if n > nmax:
        raise ResolutionError(
            f"Fock state n={n} is not resolved by the grid "
            f"(n_points={grid.n_points}, q_max={grid.q_max}); largest supported n is {nmax}"
        )


def fock_basis(n_max, grid, check=True):
    """Hermite functions ``psi_0 .. psi_{n_max}`` as rows of a real array.

    Built with the normalized recurrence
    ``psi_{n+1} = q sqrt(2/(n+1)) psi_n - sqrt(n/(n+1)) psi_{n-1}``.
    """
    if check:
        _check_fock(n_max, grid)
    q = grid.q_values
    out = np.empty((n_max + 1, q.size))
    out[0] = PI_QUARTER * np.exp(-0.5 * q * q)
    if n_max >= 1:
        out[1] = np.sqrt(2.0) * q * out[0]
    for n in range(1, n_max):
        out[n + 1] = q * np.sqrt(2.0 / (n + 1)) * out[n] - np.sqrt(n / (n + 1.0)) * out[n - 1]
    return out


def fock_wavefunction(n, grid):
    """Real Hermite function ``psi_n(q)`` on the grid."""
    _check_fock(n, grid)
    q = grid.q_values
    prev = np.zeros_like(q)
    cur = PI_QUARTER * np.exp(-0.5 * q * q)
    for k in range(n):
        prev, cur = cur, q * np.sqrt(2.0 / (k + 1)) * cur - np.sqrt(k / (k + 1.0)) * prev
    return cur


def coherent_wavefunction(nu, grid):
    """Coherent state ``|nu>`` with ``<n|nu> = exp(-|nu|^2/2) nu^n / sqrt(n!)``.

    ``psi(q) = pi^-1/4 exp(-q^2/2 + sqrt(2) nu q - (nu^2 + |nu|^2)/2)``, a Gaussian
    centred at ``sqrt(2) Re nu`` carrying the plane wave ``exp(i sqrt(2) Im nu q)``.
    """
    nu = complex(nu)
    if np.sqrt(2.0) * abs(nu.real) + 5.0 >= grid.q_max or np.sqrt(2.0) * abs(nu.imag) + 5.0 >= grid.p_max:
        raise ResolutionError(f"coherent state nu={nu} does not fit the grid")
    q = grid.q_values
    return PI_QUARTER * np.exp(-0.5 * q * q + np.sqrt(2.0) * nu * q - 0.5 * (nu * nu + abs(nu) ** 2))


def field_wavefunction(field, grid):
    if field.kind is FieldKind.FOCK:
        return fock_wavefunction(field.n, grid).astype(np.complex128)
    return coherent_wavefunction(field.nu, grid)


def build_initial(field, atom, grid):
    """Product state ``psi_field(q) (c+ |+> + c- |->)`` in the bare basis, normalized."""
    phi = field_wavefunction(field, grid)
    psi = WavePacket(atom.amplitude_plus * phi, atom.amplitude_minus * phi, grid)
    return psi.normalized()
