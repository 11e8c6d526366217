"""Adiabatic (Born-Oppenheimer) basis of the Rabi potential matrix.

The Rabi potential ``Omega/2 sz + sqrt(2) g0 q sx`` is diagonalized pointwise by
the rotation ``U(theta) = [[cos, -sin], [sin, cos]]`` with
``tan 2 theta = 2 sqrt(2) g0 q / Omega``.  Columns of ``U`` are the adiabatic
states: ``|up> = (cos, sin)`` follows the upper curve and ``|down> = (-sin, cos)``
the lower one.  Far from the crossing ``theta -> +-pi/4``, so each adiabatic
state coincides with a displaced-oscillator (diabatic) state, and the two
swap diabatic identity as ``q`` passes through zero.
"""
import numpy as np

from .errors import BasisError, ConfigurationError
from .grid import WavePacket, to_momentum, to_position
from .models import Model

SQRT2 = np.sqrt(2.0)


def mixing_angle(params, q):
    """``theta(q) = arctan2(2 sqrt(2) g0 q, Omega) / 2``, in ``(-pi/4, pi/4)``."""
    return 0.5 * np.arctan2(2.0 * SQRT2 * params.g0 * np.asarray(q, float), params.omega_atom)


def mixing_angle_derivatives(params, q):
    """Exact ``d theta/dq`` and ``d2 theta/dq2`` of :func:`mixing_angle`."""
    q = np.asarray(q, float)
    om, g = params.omega_atom, params.g0
    den = om * om + 8.0 * g * g * q * q
    d1 = SQRT2 * g * om / den
    d2 = -16.0 * SQRT2 * g**3 * om * q / den**2
    return d1, d2


def to_adiabatic_basis(psi, params):
    """Rotate a bare packet into the adiabatic basis (``U^T`` pointwise)."""
    if psi.basis != "bare":
        raise BasisError("expected a bare-basis packet")
    if psi.space != "position":
        raise BasisError("basis rotation is pointwise in q; transform to position first")
    th = mixing_angle(params, psi.grid.q_values)
    c, s = np.cos(th), np.sin(th)
    up = c * psi.up + s * psi.down
    down = -s * psi.up + c * psi.down
    return WavePacket(up, down, psi.grid, "adiabatic")


def from_adiabatic_basis(psi, params):
    """Inverse of :func:`to_adiabatic_basis`."""
    if psi.basis != "adiabatic":
        raise BasisError("expected an adiabatic-basis packet")
    if psi.space != "position":
        raise BasisError("basis rotation is pointwise in q; transform to position first")
    th = mixing_angle(params, psi.grid.q_values)
    c, s = np.cos(th), np.sin(th)
    up = c * psi.up - s * psi.down
    down = s * psi.up + c * psi.down
    return WavePacket(up, down, psi.grid, "bare")


def h_cor_expectation(psi, params):
    """Expectation of the neglected non-adiabatic coupling.

    In the adiabatic basis the kinetic term produces
    ``H_cor = [[0, i X], [-i X, 0]]`` with ``X = {theta', p}/2``, so
    ``<H_cor> = -2 Im <up| X |down>``.  The exact angle derivatives are used.
    """
    if psi.basis != "adiabatic":
        raise BasisError("H_cor is evaluated on adiabatic-basis packets")
    if params.g0 == 0:
        return 0.0
    g = psi.grid
    d1, d2 = mixing_angle_derivatives(params, g.q_values)
    # p acting on the lower channel, back in position space
    pd = to_position(_p_times(to_momentum(WavePacket(psi.down, np.zeros_like(psi.down), g, "adiabatic"))))
    x_down = d1 * pd.up - 0.5j * d2 * psi.down
    z = g.dq * np.vdot(psi.up, x_down)
    return float(-2.0 * z.imag)


def _p_times(phi):
    p = phi.grid.p_values
    return WavePacket(p * phi.up, p * phi.down, phi.grid, phi.basis, "momentum")


def check_rabi(params):
    if params.model is not Model.RABI:
        raise ConfigurationError("the adiabatic representation is implemented for the Rabi model")
