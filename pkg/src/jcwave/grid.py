"""Position lattice, its FFT-dual momentum lattice and the two-channel packet."""
from dataclasses import dataclass, field

import numpy as np

from .errors import BasisError, ConfigurationError, DimensionError

BASES = ("bare", "adiabatic")
SPACES = ("position", "momentum")


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform periodic lattice ``q_k = q_min + k dq`` on ``[-q_max, q_max)``.

    ``p_values`` follows ``np.fft.fftfreq`` ordering, so it lines up with the
    raw output of ``np.fft.fft`` without any shifting.
    """

    n_points: int
    q_max: float
    q_min: float = field(init=False)
    dq: float = field(init=False)
    q_values: np.ndarray = field(init=False, repr=False)
    p_values: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n = self.n_points
        if not isinstance(n, (int, np.integer)) or n < 16 or n & (n - 1):
            raise ConfigurationError(f"n_points must be a power of two >= 16, got {n!r}")
        if not np.isfinite(self.q_max) or self.q_max <= 0:
            raise ConfigurationError(f"q_max must be positive and finite, got {self.q_max!r}")
        dq = 2.0 * self.q_max / n
        q = -self.q_max + dq * np.arange(n)
        p = 2.0 * np.pi * np.fft.fftfreq(n, d=dq)
        q.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "n_points", int(n))
        object.__setattr__(self, "q_max", float(self.q_max))
        object.__setattr__(self, "q_min", -float(self.q_max))
        object.__setattr__(self, "dq", dq)
        object.__setattr__(self, "q_values", q)
        object.__setattr__(self, "p_values", p)

    @property
    def dp(self):
        return 2.0 * np.pi / (self.n_points * self.dq)

    @property
    def p_max(self):
        """Nyquist momentum ``pi/dq``."""
        return np.pi / self.dq

    def same_as(self, other):
        return self is other or (self.n_points == other.n_points and self.q_max == other.q_max)

    def momentum_phase(self):
        """Phase ``exp(-i p q_min)`` that maps the raw DFT onto a continuum transform."""
        return np.exp(-1j * self.p_values * self.q_min)


def make_grid(n_points=2048, q_max=40.0):
    """Symmetric grid with ``n_points`` samples on ``[-q_max, q_max)``.

    Examples
    --------
    >>> g = make_grid(16, 8.0)
    >>> g.dq
    1.0
    """
    return Grid(n_points, q_max)


@dataclass(eq=False)
class WavePacket:
    """Two-channel amplitudes on a :class:`Grid`.

    Parameters
    ----------
    up, down : ndarray of complex
        Channel amplitudes. In the bare basis these are the ``|+>`` and ``|->``
        components, in the adiabatic basis ``|up>`` and ``|down>``.
    grid : Grid
    basis : {'bare', 'adiabatic'}
    space : {'position', 'momentum'}
    """

    up: np.ndarray
    down: np.ndarray
    grid: Grid
    basis: str = "bare"
    space: str = "position"

    def __post_init__(self):
        self.up = np.ascontiguousarray(self.up, dtype=np.complex128)
        self.down = np.ascontiguousarray(self.down, dtype=np.complex128)
        n = self.grid.n_points
        if self.up.shape != (n,) or self.down.shape != (n,):
            raise DimensionError(
                f"channel shapes {self.up.shape}, {self.down.shape} do not match grid size {n}"
            )
        if self.basis not in BASES:
            raise BasisError(f"unknown basis {self.basis!r}")
        if self.space not in SPACES:
            raise BasisError(f"unknown representation {self.space!r}")

    @property
    def measure(self):
        return self.grid.dq if self.space == "position" else self.grid.dp

    def copy(self):
        return WavePacket(self.up.copy(), self.down.copy(), self.grid, self.basis, self.space)

    def channel_norms(self):
        w = self.measure
        return (w * np.vdot(self.up, self.up).real, w * np.vdot(self.down, self.down).real)

    def norm(self):
        """Squared norm ``sum(|up|^2 + |down|^2) * measure``."""
        a, b = self.channel_norms()
        return a + b

    def normalized(self):
        nrm = self.norm()
        if not np.isfinite(nrm) or nrm <= 0:
            raise ValueError("cannot normalize a zero or non-finite packet")
        s = 1.0 / np.sqrt(nrm)
        return WavePacket(self.up * s, self.down * s, self.grid, self.basis, self.space)

    def boundary_fraction(self, width=4):
        """Largest amplitude in the outer ``width`` points relative to the peak."""
        amp = np.sqrt(np.abs(self.up) ** 2 + np.abs(self.down) ** 2)
        peak = amp.max()
        if peak == 0:
            return 0.0
        edge = max(amp[:width].max(), amp[-width:].max())
        return float(edge / peak)


def _check_pair(a, b):
    if not a.grid.same_as(b.grid):
        raise DimensionError("wave packets live on different grids")
    if a.basis != b.basis:
        raise BasisError(f"basis mismatch: {a.basis} vs {b.basis}")
    if a.space != b.space:
        raise BasisError(f"representation mismatch: {a.space} vs {b.space}")


def inner_product(a, b):
    """``<a|b>`` summed over both channels, antilinear in ``a``."""
    _check_pair(a, b)
    return a.measure * (np.vdot(a.up, b.up) + np.vdot(a.down, b.down))


def to_momentum(psi):
    """Unitary transform to the momentum representation (FFT layout).

    ``phi(p_k) = dq / sqrt(2 pi) * exp(-i p_k q_min) * FFT(psi)_k``, which samples
    the continuum transform ``(2 pi)^-1/2 int psi(q) exp(-i p q) dq``.
    """
    if psi.space != "position":
        raise BasisError("packet is already in the momentum representation")
    g = psi.grid
    f = g.dq / np.sqrt(2.0 * np.pi) * g.momentum_phase()
    return WavePacket(f * np.fft.fft(psi.up), f * np.fft.fft(psi.down), g, psi.basis, "momentum")


def to_position(phi):
    """Inverse of :func:`to_momentum`."""
    if phi.space != "momentum":
        raise BasisError("packet is already in the position representation")
    g = phi.grid
    f = np.sqrt(2.0 * np.pi) / g.dq * np.conj(g.momentum_phase())
    return WavePacket(np.fft.ifft(f * phi.up), np.fft.ifft(f * phi.down), g, phi.basis, "position")
