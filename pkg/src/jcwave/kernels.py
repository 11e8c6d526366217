"""Hot loops: Strang stepping of two-channel packets and RK4 trajectories.

Every kernel exists twice: a numba version (``*_numba``) and a numpy
version (``*_numpy``).  The public names dispatch on
:data:`jcwave._accel.USE_NUMBA`.  Both versions operate in place on the
channel arrays and must agree to round-off; ``tests/test_kernels.py`` checks
this and ``benchmarks/bench_kernels.py`` times them against each other.

A 2x2 pointwise factor is stored as a ``(4, n)`` complex array holding the
matrix elements ``(m00, m01, m10, m11)`` at every lattice point.
"""
import math

import numpy as np

from ._accel import USE_NUMBA, maybe_njit


def su2_factor(a, bx, by, bz, tau):
    """Elementwise ``exp(-i tau (a I + bx sx + by sy + bz sz))``.

    Closed form ``exp(-i a tau) (cos(|b| tau) I - i sin(|b| tau) b.sigma/|b|)``.
    Inputs broadcast against each other; the result has shape ``(4, n)``.
    """
    a, bx, by, bz = np.broadcast_arrays(
        np.asarray(a, float), np.asarray(bx, float), np.asarray(by, float), np.asarray(bz, float)
    )
    b = np.sqrt(bx * bx + by * by + bz * bz)
    c = np.cos(b * tau)
    # sin(b tau)/b -> tau as b -> 0
    s = np.where(b > 0, np.sin(b * tau) / np.where(b > 0, b, 1.0), tau)
    phase = np.exp(-1j * a * tau)
    out = np.empty((4,) + b.shape, dtype=np.complex128)
    out[0] = phase * (c - 1j * s * bz)
    out[1] = phase * (-1j * s * (bx - 1j * by))
    out[2] = phase * (-1j * s * (bx + 1j * by))
    out[3] = phase * (c + 1j * s * bz)
    return out


def diagonal_factor(v_up, v_down, tau):
    """Factor for two uncoupled scalar potentials."""
    v_up = np.asarray(v_up, float)
    out = np.zeros((4,) + v_up.shape, dtype=np.complex128)
    out[0] = np.exp(-1j * v_up * tau)
    out[3] = np.exp(-1j * np.asarray(v_down, float) * tau)
    return out


# ---------------------------------------------------------------- numpy path


def _mix_numpy(m, u, d):
    new_u = m[0] * u + m[1] * d
    d *= m[3]
    d += m[2] * u
    u[:] = new_u


def apply_factor_numpy(m, u, d):
    _mix_numpy(m, u, d)


def strang_vkv_numpy(u, d, v_half, v_full, k_full, nsteps):
    """``nsteps`` steps of V/2 K V/2 with interior half-steps fused."""
    if nsteps <= 0:
        return
    _mix_numpy(v_half, u, d)
    for i in range(nsteps):
        uu = np.fft.fft(u)
        dd = np.fft.fft(d)
        _mix_numpy(k_full, uu, dd)
        u[:] = np.fft.ifft(uu)
        d[:] = np.fft.ifft(dd)
        _mix_numpy(v_full if i < nsteps - 1 else v_half, u, d)


def strang_kvk_numpy(u, d, k_half, k_full, v_full, nsteps):
    """``nsteps`` steps of K/2 V K/2 with interior half-steps fused."""
    if nsteps <= 0:
        return
    uu = np.fft.fft(u)
    dd = np.fft.fft(d)
    _mix_numpy(k_half, uu, dd)
    for i in range(nsteps):
        u[:] = np.fft.ifft(uu)
        d[:] = np.fft.ifft(dd)
        _mix_numpy(v_full, u, d)
        uu = np.fft.fft(u)
        dd = np.fft.fft(d)
        _mix_numpy(k_full if i < nsteps - 1 else k_half, uu, dd)
    u[:] = np.fft.ifft(uu)
    d[:] = np.fft.ifft(dd)


def _adiabatic_force(q, omega, g0, sheet_sign):
    # sheet_sign = +1 for the upper sheet V+, -1 for the lower sheet V-
    den = omega * omega + 2.0 * g0 * g0 * q * q
    force = -q + 16.0 * omega * omega * g0**4 * q / den**3
    force -= sheet_sign * 4.0 * g0 * g0 * abs(q) / math.sqrt(omega * omega + 8.0 * g0 * g0 * q * q)
    return force


def rk4_trajectory_numpy(q0, p0, omega, g0, sheet_sign, dt, nsteps):
    qs = np.empty(nsteps + 1)
    ps = np.empty(nsteps + 1)
    q, p = float(q0), float(p0)
    qs[0], ps[0] = q, p
    for i in range(nsteps):
        k1q, k1p = p, _adiabatic_force(q, omega, g0, sheet_sign)
        k2q, k2p = p + 0.5 * dt * k1p, _adiabatic_force(q + 0.5 * dt * k1q, omega, g0, sheet_sign)
        k3q, k3p = p + 0.5 * dt * k2p, _adiabatic_force(q + 0.5 * dt * k2q, omega, g0, sheet_sign)
        k4q, k4p = p + dt * k3p, _adiabatic_force(q + dt * k3q, omega, g0, sheet_sign)
        q += dt * (k1q + 2.0 * k2q + 2.0 * k3q + k4q) / 6.0
        p += dt * (k1p + 2.0 * k2p + 2.0 * k3p + k4p) / 6.0
        qs[i + 1], ps[i + 1] = q, p
    return qs, ps


# ---------------------------------------------------------------- numba path


@maybe_njit(cache=True)
def _mix_numba(m, u, d):
    for i in range(u.shape[0]):
        a = u[i]
        b = d[i]
        u[i] = m[0, i] * a + m[1, i] * b
        d[i] = m[2, i] * a + m[3, i] * b


@maybe_njit(cache=True)
def apply_factor_numba(m, u, d):
    _mix_numba(m, u, d)


@maybe_njit(cache=True)
def strang_vkv_numba(u, d, v_half, v_full, k_full, nsteps):
    if nsteps <= 0:
        return
    _mix_numba(v_half, u, d)
    for i in range(nsteps):
        uu = np.fft.fft(u)
        dd = np.fft.fft(d)
        _mix_numba(k_full, uu, dd)
        u[:] = np.fft.ifft(uu)
        d[:] = np.fft.ifft(dd)
        if i < nsteps - 1:
            _mix_numba(v_full, u, d)
        else:
            _mix_numba(v_half, u, d)


@maybe_njit(cache=True)
def strang_kvk_numba(u, d, k_half, k_full, v_full, nsteps):
    if nsteps <= 0:
        return
    uu = np.fft.fft(u)
    dd = np.fft.fft(d)
    _mix_numba(k_half, uu, dd)
    for i in range(nsteps):
        u[:] = np.fft.ifft(uu)
        d[:] = np.fft.ifft(dd)
        _mix_numba(v_full, u, d)
        uu = np.fft.fft(u)
        dd = np.fft.fft(d)
        if i < nsteps - 1:
            _mix_numba(k_full, uu, dd)
        else:
            _mix_numba(k_half, uu, dd)
    u[:] = np.fft.ifft(uu)
    d[:] = np.fft.ifft(dd)


_adiabatic_force_numba = maybe_njit(cache=True)(_adiabatic_force)


@maybe_njit(cache=True)
def rk4_trajectory_numba(q0, p0, omega, g0, sheet_sign, dt, nsteps):
    qs = np.empty(nsteps + 1)
    ps = np.empty(nsteps + 1)
    q = q0
    p = p0
    qs[0] = q
    ps[0] = p
    for i in range(nsteps):
        k1q = p
        k1p = _adiabatic_force_numba(q, omega, g0, sheet_sign)
        k2q = p + 0.5 * dt * k1p
        k2p = _adiabatic_force_numba(q + 0.5 * dt * k1q, omega, g0, sheet_sign)
        k3q = p + 0.5 * dt * k2p
        k3p = _adiabatic_force_numba(q + 0.5 * dt * k2q, omega, g0, sheet_sign)
        k4q = p + dt * k3p
        k4p = _adiabatic_force_numba(q + dt * k3q, omega, g0, sheet_sign)
        q += dt * (k1q + 2.0 * k2q + 2.0 * k3q + k4q) / 6.0
        p += dt * (k1p + 2.0 * k2p + 2.0 * k3p + k4p) / 6.0
        qs[i + 1] = q
        ps[i + 1] = p
    return qs, ps


# ---------------------------------------------------------------- dispatch

if USE_NUMBA:
    apply_factor = apply_factor_numba
    strang_vkv = strang_vkv_numba
    strang_kvk = strang_kvk_numba
    rk4_trajectory = rk4_trajectory_numba
else:
    apply_factor = apply_factor_numpy
    strang_vkv = strang_vkv_numpy
    strang_kvk = strang_kvk_numpy
    rk4_trajectory = rk4_trajectory_numpy
