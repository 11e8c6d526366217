"""Closed-form references: exact JC dynamics, revival times, adiabatic curves, P_LZ."""
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import ConfigurationError, DomainError, TruncationError
from .models import Model
from .observables import TimeSeries
from .states import FieldKind

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class JCEigenData:
    """Dressed block ``n >= 1`` spanned by ``|+, n-1>`` and ``|-, n>``.

    ``E_pm = n +- sqrt(Delta^2/4 + g0^2 n)`` with the field zero-point energy
    included, and ``tan 2 theta_n = 2 g0 sqrt(n) / Delta``.
    """

    n: int
    theta_n: float
    E_plus: float
    E_minus: float


def jc_eigen(n, params):
    if n < 1:
        raise DomainError("dressed blocks start at n = 1")
    d, g = params.detuning, params.g0
    r = math.sqrt(0.25 * d * d + g * g * n)
    return JCEigenData(n, 0.5 * math.atan2(2.0 * g * math.sqrt(n), d), n + r, n - r)


def jc_energies(params, n_max):
    """All dressed energies up to block ``n_max`` plus the isolated ``|-, 0>`` level."""
    n = np.arange(1, n_max + 1)
    r = np.sqrt(0.25 * params.detuning**2 + params.g0**2 * n)
    return np.concatenate([[-0.5 * params.detuning], n - r, n + r])


def _field_amplitudes(field, n_max):
    m = np.arange(n_max + 1)
    if field.kind is FieldKind.FOCK:
        f = np.zeros(n_max + 1, complex)
        if field.n <= n_max:
            f[field.n] = 1.0
        return f
    nu = field.nu
    if nu == 0:
        f = np.zeros(n_max + 1, complex)
        f[0] = 1.0
        return f
    logmag = -0.5 * abs(nu) ** 2 + m * math.log(abs(nu)) - 0.5 * gammaln(m + 1)
    return np.exp(logmag + 1j * m * np.angle(nu))


def default_nmax(field):
    if field.kind is FieldKind.FOCK:
        return field.n + 2
    r = abs(field.nu)
    return int(math.ceil(r * r + 10.0 * r + 20.0))


def _required_nmax(field, tol):
    n = default_nmax(field)
    while True:
        f = _field_amplitudes(field, n)
        if 1.0 - np.sum(np.abs(f) ** 2) < tol:
            return n
        n = int(n * 1.5) + 10


def jc_exact_evolution(field, atom, params, times, n_max=None, tail_tol=1e-12):
    """Exact JC evolution in the number basis.

    Parameters
    ----------
    field : FieldStateSpec
    atom : AtomStateSpec
    params : ModelParams
        Must describe the JC model.
    times : array_like
    n_max : int, optional
        Fock cutoff; defaults to ``ceil(|nu|^2 + 10|nu| + 20)``.
    tail_tol : float
        Largest allowed initial weight beyond the cutoff.

    Returns
    -------
    TimeSeries
        ``energy`` is relative to the same zero point as the grid Hamiltonian.
    """
    if params.model is not Model.JC:
        raise ConfigurationError("the exact number-basis solution covers the JC model")
    t = np.asarray(times, float)
    if n_max is None:
        n_max = default_nmax(field)
    f = _field_amplitudes(field, n_max)
    tail = 1.0 - np.sum(np.abs(f) ** 2)
    if tail >= tail_tol:
        need = _required_nmax(field, tail_tol)
        raise TruncationError(f"Fock cutoff {n_max} leaves tail weight {tail:.3g}; need n_max >= {need}", need)

    cp0 = atom.amplitude_plus * f
    cm0 = atom.amplitude_minus * f
    d, g = params.detuning, params.g0
    cp = np.zeros((t.size, n_max + 1), complex)
    cm = np.zeros((t.size, n_max + 1), complex)
    cm[:, 0] = cm0[0] * np.exp(0.5j * d * t)
    for k in range(1, n_max + 1):
        a0, b0 = cp0[k - 1], cm0[k]
        if a0 == 0 and b0 == 0:
            continue
        gk = g * math.sqrt(k)
        r = math.sqrt(0.25 * d * d + gk * gk)
        c = np.cos(r * t)
        s = np.sin(r * t) / r if r > 0 else t
        ph = np.exp(-1j * k * t)
        cp[:, k - 1] = ph * (c * a0 - 1j * s * (0.5 * d * a0 + gk * b0))
        cm[:, k] = ph * (c * b0 - 1j * s * (gk * a0 - 0.5 * d * b0))

    wp = np.abs(cp) ** 2
    wm = np.abs(cm) ** 2
    pp, pm = wp.sum(1), wm.sum(1)
    norm = pp + pm
    n = np.arange(n_max + 1)
    sq = np.sqrt(n[1:])
    sq2 = np.sqrt(n[2:] * (n[2:] - 1.0))
    a1 = np.sum(np.conj(cp[:, :-1]) * sq * cp[:, 1:] + np.conj(cm[:, :-1]) * sq * cm[:, 1:], axis=1)
    a2 = np.sum(np.conj(cp[:, :-2]) * sq2 * cp[:, 2:] + np.conj(cm[:, :-2]) * sq2 * cm[:, 2:], axis=1)
    nbar = (wp + wm) @ n
    mean_q = SQRT2 * a1.real
    mean_p = SQRT2 * a1.imag
    q2 = a2.real + nbar + 0.5
    p2 = -a2.real + nbar + 0.5
    rpm = np.sum(cp * np.conj(cm), axis=1)
    disc = np.minimum(np.sqrt((pp - pm) ** 2 + 4.0 * np.abs(rpm) ** 2), 1.0)
    ent = np.zeros_like(disc)
    for lam in (0.5 * (1.0 + disc), 0.5 * (1.0 - disc)):
        pos = lam > 0
        ent[pos] -= lam[pos] * np.log(lam[pos])
    # H = a^dag a + 1/2 + Omega/2 sz + g (a s+ + a^dag s-)
    coup = np.sum(np.conj(cp[:, :-1]) * sq * cm[:, 1:], axis=1)
    en = nbar + 0.5 + 0.5 * params.omega_atom * (pp - pm) + 2.0 * g * coup.real
    inv = pp - pm
    return TimeSeries(
        times=t,
        norm=norm,
        energy=en,
        inversion=inv,
        var_q=q2 - mean_q**2,
        var_p=p2 - mean_p**2,
        mean_q=mean_q,
        mean_p=mean_p,
        entropy=ent,
        autocorrelation=cp @ np.conj(cp0) + cm @ np.conj(cm0),
        excitation=nbar + 0.5 * inv + 0.5,
    )


# ---------------------------------------------------------------- adiabatic curves


@dataclass(frozen=True, eq=False)
class AdiabaticCurves:
    q: np.ndarray
    v_plus: np.ndarray
    v_minus: np.ndarray
    dtheta: np.ndarray
    d2theta: np.ndarray


def adiabatic_curves(params, grid_or_q):
    """Adiabatic Rabi potentials with the ``(d theta)^2`` correction and the angle derivatives.

    ``V_pm = q^2/2 + 2 W^2 g^2/(W^2 + 2 g^2 q^2)^2 +- sqrt(W^2/4 + 2 g^2 q^2)``,
    ``theta' = sqrt(2) W g/(W^2 + 2 g^2 q^2)``,
    ``theta'' = -4 sqrt(2) W g^3 q/(W^2 + 2 g^2 q^2)^2`` with ``W = Omega``.
    """
    q = np.asarray(getattr(grid_or_q, "q_values", grid_or_q), float)
    om, g = params.omega_atom, params.g0
    den = om * om + 2.0 * g * g * q * q
    corr = 2.0 * om * om * g * g / den**2
    split = np.sqrt(0.25 * om * om + 2.0 * g * g * q * q)
    base = 0.5 * q * q + corr
    return AdiabaticCurves(
        q,
        base + split,
        base - split,
        SQRT2 * om * g / den,
        -4.0 * SQRT2 * om * g**3 * q / den**2,
    )


# ---------------------------------------------------------------- revival estimates


@dataclass(frozen=True)
class RevivalEstimate:
    """Three revival-time estimates.

    ``t_r_adiabatic`` is ``pi Omega / g0^2`` and is flagged invalid (and set to
    NaN) when ``2 g0^2 / Omega >= 1``.  ``t_r_standard`` is NaN for an empty field.
    """

    t_r_adiabatic: float
    t_r_standard: float
    t_r_numeric_curvature: float
    adiabatic_valid: bool
    double_well: bool
    fit_halfwidth: float


def _minima(q, v):
    return np.nonzero((v[1:-1] < v[:-2]) & (v[1:-1] <= v[2:]))[0] + 1


def curvature_frequencies(params, fit_halfwidth=10.0, n_samples=801):
    """Harmonic frequencies of ``V_+`` and ``V_-`` from quadratic least-squares fits.

    Each curve is fitted over ``|q - q_min| <= fit_halfwidth`` around its global
    minimum.  Returns ``(w_plus, w_minus, double_well)``.
    """
    span = fit_halfwidth + 20.0
    qq = np.linspace(-span, span, 20001)
    dense = adiabatic_curves(params, qq)
    out = []
    double = False
    for sheet in ("v_plus", "v_minus"):
        v = getattr(dense, sheet)
        mins = _minima(qq, v)
        centre = 0.0
        if mins.size and np.abs(qq[mins]).max() > 1e-9:
            double = True
            centre = abs(qq[mins[np.argmin(v[mins])]])
        q = np.linspace(centre - fit_halfwidth, centre + fit_halfwidth, n_samples)
        c2 = np.polyfit(q - centre, getattr(adiabatic_curves(params, q), sheet), 2)[0]
        if c2 <= 0:
            raise DomainError("fitted curvature is not positive; widen the fit interval")
        out.append(math.sqrt(2.0 * c2))
    return out[0], out[1], double


def revival_estimates(params, field, fit_halfwidth=10.0):
    """Analytic, standard and curvature-fit revival times.

    Parameters
    ----------
    params : ModelParams
    field : FieldStateSpec
        Supplies the mean photon number for the standard estimate.
    fit_halfwidth : float
        Half-width of the quadratic-fit window around each curve minimum.
    """
    om, g = params.omega_atom, params.g0
    if g <= 0:
        raise DomainError("revival estimates need g0 > 0")
    valid = 2.0 * g * g / om < 1.0
    t_ad = math.pi * om / (g * g) if valid else math.nan
    nbar = field.mean_photon_number
    if nbar > 0:
        t_std = 2.0 * math.pi * math.sqrt(nbar) / g * math.sqrt(1.0 + params.detuning**2 / (4.0 * g * g * nbar))
    else:
        t_std = math.nan
    wp, wm, double = curvature_frequencies(params, fit_halfwidth)
    t_curv = 2.0 * math.pi / abs(wm - wp) if wm != wp else math.inf
    return RevivalEstimate(t_ad, t_std, t_curv, valid, double, float(fit_halfwidth))


# ---------------------------------------------------------------- Landau-Zener


def lz_probability(v, params):
    """Adiabatic transfer probability ``1 - exp(-pi Omega^2 / (4 sqrt(2) g0 v))``."""
    if not v > 0:
        raise DomainError(f"crossing velocity must be positive, got {v!r}")
    if not params.g0 > 0:
        raise DomainError("Landau-Zener probability needs g0 > 0")
    return -math.expm1(-math.pi * params.omega_atom**2 / (4.0 * SQRT2 * params.g0 * v))
