"""Observables computed from wave packets and recorded time series."""
from dataclasses import dataclass, field, fields

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy import ndimage
from scipy.signal import find_peaks as _sp_find_peaks

from .adiabatic import from_adiabatic_basis
from .errors import BasisError, MeasurementError, ResolutionError, SamplingError
from .grid import inner_product, to_momentum
from .models import kinetic_part, potential_part
from .states import fock_basis

LN2 = np.log(2.0)
PI_QUARTER = np.pi ** -0.25

TIMESERIES_COLUMNS = (
    "t",
    "norm",
    "energy",
    "inversion",
    "var_q",
    "var_p",
    "mean_q",
    "mean_p",
    "entropy",
    "re_A",
    "im_A",
    "excitation",
)


@dataclass
class TimeSeries:
    """Observables recorded at uniformly spaced times.

    ``fidelity`` and ``h_cor`` are filled only when an adiabatic twin run exists.
    """

    times: np.ndarray
    norm: np.ndarray
    energy: np.ndarray
    inversion: np.ndarray
    var_q: np.ndarray
    var_p: np.ndarray
    mean_q: np.ndarray
    mean_p: np.ndarray
    entropy: np.ndarray
    autocorrelation: np.ndarray
    excitation: np.ndarray
    fidelity: np.ndarray = None
    h_cor: np.ndarray = None

    def __post_init__(self):
        n = len(self.times)
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                continue
            v = np.asarray(v)
            if v.shape != (n,):
                raise ValueError(f"field {f.name} has shape {v.shape}, expected ({n},)")
            setattr(self, f.name, v)
        if n > 1 and np.any(np.diff(self.times) <= 0):
            raise SamplingError("record times must be strictly increasing")

    def __len__(self):
        return len(self.times)

    @property
    def spacing(self):
        return float(self.times[1] - self.times[0]) if len(self) > 1 else 0.0

    def columns(self):
        """Arrays in :data:`TIMESERIES_COLUMNS` order."""
        a = self.autocorrelation
        return {
            "t": self.times,
            "norm": self.norm,
            "energy": self.energy,
            "inversion": self.inversion,
            "var_q": self.var_q,
            "var_p": self.var_p,
            "mean_q": self.mean_q,
            "mean_p": self.mean_p,
            "entropy": self.entropy,
            "re_A": a.real,
            "im_A": a.imag,
            "excitation": self.excitation,
        }


class _Recorder:
    """Accumulates one row per snapshot and freezes into a :class:`TimeSeries`."""

    def __init__(self, psi0, params=None):
        self.psi0 = psi0
        self.params = params
        self.rows = {k: [] for k in ("times", "norm", "energy", "inversion", "var_q", "var_p",
                                     "mean_q", "mean_p", "entropy", "autocorrelation", "excitation")}
        self.extra = {"fidelity": [], "h_cor": []}

    def record(self, t, psi, fidelity=None, h_cor=None):
        m = field_moments(psi)
        r = self.rows
        r["times"].append(t)
        r["norm"].append(psi.norm())
        r["energy"].append(energy(psi, self.params) if self.params is not None else np.nan)
        r["inversion"].append(inversion(psi))
        r["var_q"].append(m.var_q)
        r["var_p"].append(m.var_p)
        r["mean_q"].append(m.mean_q)
        r["mean_p"].append(m.mean_p)
        r["entropy"].append(entanglement_entropy(psi))
        r["autocorrelation"].append(inner_product(self.psi0, psi))
        r["excitation"].append(0.5 * (m.mean_q2 + m.mean_p2) + 0.5 * inversion(psi))
        if fidelity is not None:
            self.extra["fidelity"].append(fidelity)
        if h_cor is not None:
            self.extra["h_cor"].append(h_cor)

    def freeze(self):
        n = len(self.rows["times"])
        kw = {k: np.asarray(v) for k, v in self.rows.items()}
        for k, v in self.extra.items():
            kw[k] = np.asarray(v) if len(v) == n and n else None
        return TimeSeries(**kw)


# ---------------------------------------------------------------- single-state observables


def _require_bare(psi):
    if psi.basis != "bare":
        raise BasisError("observable is defined in the bare basis; convert the packet first")


def inversion(psi):
    """Atomic inversion ``<sz> = (|up|^2 - |down|^2) / norm``."""
    _require_bare(psi)
    a, b = psi.channel_norms()
    return (a - b) / (a + b)


@dataclass(frozen=True)
class FieldMoments:
    mean_q: float
    mean_p: float
    mean_q2: float
    mean_p2: float

    @property
    def var_q(self):
        return self.mean_q2 - self.mean_q**2

    @property
    def var_p(self):
        return self.mean_p2 - self.mean_p**2


def field_moments(psi):
    """First and second quadrature moments of the channel-traced field state."""
    if psi.space != "position":
        raise BasisError("expected a position-space packet")
    g = psi.grid
    rho = np.abs(psi.up) ** 2 + np.abs(psi.down) ** 2
    nq = rho.sum()
    q = g.q_values
    phi = to_momentum(psi)
    sig = np.abs(phi.up) ** 2 + np.abs(phi.down) ** 2
    npn = sig.sum()
    p = g.p_values
    return FieldMoments(
        float(rho @ q / nq),
        float(sig @ p / npn),
        float(rho @ (q * q) / nq),
        float(sig @ (p * p) / npn),
    )


def quadrature_variances(psi):
    """``(var_q, var_p)`` of the field with the atom traced out."""
    m = field_moments(psi)
    return m.var_q, m.var_p


def excitation_number(psi):
    """``<N> = <q^2 + p^2>/2 + <sz>/2``."""
    m = field_moments(psi)
    return 0.5 * (m.mean_q2 + m.mean_p2) + 0.5 * inversion(psi)


def energy(psi, params):
    """``<H>`` for the bare-basis Hamiltonian of ``params``, per unit norm."""
    _require_bare(psi)
    g = psi.grid
    v = potential_part(params, g)
    vu, vd = v.apply(psi.up, psi.down)
    ev = g.dq * (np.vdot(psi.up, vu) + np.vdot(psi.down, vd))
    phi = to_momentum(psi)
    k = kinetic_part(params, g)
    ku, kd = k.apply(phi.up, phi.down)
    ek = g.dp * (np.vdot(phi.up, ku) + np.vdot(phi.down, kd))
    return float((ev + ek).real / psi.norm())


def reduced_density_matrix(psi):
    """2x2 atomic density matrix with the field traced out."""
    _require_bare(psi)
    w = psi.measure
    rpp = w * np.vdot(psi.up, psi.up).real
    rmm = w * np.vdot(psi.down, psi.down).real
    rpm = w * np.vdot(psi.down, psi.up)
    tr = rpp + rmm
    return np.array([[rpp, rpm], [np.conj(rpm), rmm]]) / tr


def entanglement_entropy(psi):
    """Von Neumann entropy (natural log) of the reduced atomic state, in ``[0, ln 2]``."""
    rho = reduced_density_matrix(psi)
    d = rho[0, 0].real - rho[1, 1].real
    disc = np.sqrt(d * d + 4.0 * abs(rho[0, 1]) ** 2)
    disc = min(disc, 1.0)
    s = 0.0
    for lam in (0.5 * (1.0 + disc), 0.5 * (1.0 - disc)):
        if lam > 0:
            s -= lam * np.log(lam)
    return float(min(max(s, 0.0), LN2))


def fidelity(exact, approx, params=None):
    """``F = sqrt(|<exact|approx>|)``.

    An adiabatic-basis ``approx`` is rotated to the bare basis first, which
    needs ``params``.
    """
    if approx.basis == "adiabatic":
        if params is None:
            raise BasisError("model parameters are needed to rotate the adiabatic packet")
        approx = from_adiabatic_basis(approx, params)
    if exact.basis == "adiabatic":
        if params is None:
            raise BasisError("model parameters are needed to rotate the adiabatic packet")
        exact = from_adiabatic_basis(exact, params)
    return float(min(np.sqrt(abs(inner_product(exact, approx))), 1.0))


def autocorrelation(psi0, psi):
    """``A = <psi(0)|psi(t)>``."""
    return complex(inner_product(psi0, psi))


def fock_populations(psi, n_max):
    """Weights ``|<n, +|psi>|^2`` and ``|<n, -|psi>|^2`` as an ``(n_max + 1, 2)`` array."""
    _require_bare(psi)
    basis = fock_basis(n_max, psi.grid, check=False)
    dq = psi.grid.dq
    cu = dq * basis @ psi.up
    cd = dq * basis @ psi.down
    return np.stack([np.abs(cu) ** 2, np.abs(cd) ** 2], axis=1)


# ---------------------------------------------------------------- Husimi Q


@dataclass(frozen=True, eq=False)
class QFunctionFrame:
    """Husimi ``Q(alpha)`` on a rectangular lattice, ``q[i, j]`` at
    ``alpha = alpha_re[i] + 1j * alpha_im[j]``."""

    alpha_re: np.ndarray
    alpha_im: np.ndarray
    q: np.ndarray
    time: float = 0.0

    @property
    def cell(self):
        return (self.alpha_re[1] - self.alpha_re[0]) * (self.alpha_im[1] - self.alpha_im[0])

    def total(self):
        return float(self.q.sum() * self.cell)

    def blob_count(self, rel_threshold=0.2):
        return count_blobs(self, rel_threshold)


def default_alpha_lattice(radius, n=201):
    """Square lattice covering ``|Re a|, |Im a| <= radius + 4``."""
    r = float(radius) + 4.0
    ax = np.linspace(-r, r, n)
    return ax, ax.copy()


def _check_alpha_extent(grid, re_max, im_max):
    if np.sqrt(2.0) * re_max + 5.0 > grid.q_max or np.sqrt(2.0) * im_max + 5.0 > grid.p_max:
        raise ResolutionError("alpha lattice exceeds the phase-space region covered by the grid")


def _overlaps(psi, x, y):
    # <alpha|psi_c> up to a phase: pi^-1/4 dq sum_q exp(-(q - sqrt2 x)^2/2 - i sqrt2 y q) psi_c(q)
    g = psi.grid
    q = g.q_values
    keep = (np.abs(psi.up) + np.abs(psi.down)) > 1e-300
    q = q[keep]
    gauss = np.exp(-0.5 * (q[None, :] - np.sqrt(2.0) * x[:, None]) ** 2)
    wave = np.exp(-1j * np.sqrt(2.0) * np.outer(q, y))
    c = PI_QUARTER * g.dq
    return [c * (gauss * ch[keep][None, :]) @ wave for ch in (psi.up, psi.down)]


def q_function(psi, alpha_re=None, alpha_im=None, time=0.0, radius=None):
    """Husimi function of the channel-traced field, ``pi^-1 sum_c |<alpha|psi_c>|^2``.

    Without an explicit lattice a 201 x 201 square of half-width ``radius + 4``
    is used; ``radius`` defaults to the root mean photon number of the packet.
    """
    _require_bare(psi)
    if alpha_re is None or alpha_im is None:
        if radius is None:
            radius = np.sqrt(max(excitation_number(psi) - 0.5 * inversion(psi) - 0.5, 0.0))
        alpha_re, alpha_im = default_alpha_lattice(radius)
    x = np.asarray(alpha_re, float)
    y = np.asarray(alpha_im, float)
    _check_alpha_extent(psi.grid, np.abs(x).max(), np.abs(y).max())
    ou, od = _overlaps(psi, x, y)
    qv = (np.abs(ou) ** 2 + np.abs(od) ** 2) / (np.pi * psi.norm())
    return QFunctionFrame(x, y, qv, float(time))


def q_function_at(psi, alphas):
    """Husimi function at arbitrary complex points."""
    _require_bare(psi)
    alphas = np.asarray(alphas, complex).ravel()
    x, y = alphas.real, alphas.imag
    _check_alpha_extent(psi.grid, np.abs(x).max(), np.abs(y).max())
    g = psi.grid
    q = g.q_values
    kern = np.exp(-0.5 * (q[None, :] - np.sqrt(2.0) * x[:, None]) ** 2 - 1j * np.sqrt(2.0) * y[:, None] * q[None, :])
    c = PI_QUARTER * g.dq
    ou = c * kern @ psi.up
    od = c * kern @ psi.down
    return (np.abs(ou) ** 2 + np.abs(od) ** 2) / (np.pi * psi.norm())


def count_blobs(frame, rel_threshold=0.2):
    """Connected components of ``Q >= rel_threshold * max Q`` (8-connectivity)."""
    mask = frame.q >= rel_threshold * frame.q.max()
    _, n = ndimage.label(mask, structure=np.ones((3, 3), dtype=bool))
    return int(n)


@dataclass(frozen=True)
class RingProfile:
    angles: np.ndarray
    radii: np.ndarray
    peak_values: np.ndarray

    @property
    def mean_radius(self):
        return float(self.radii.mean())

    @property
    def uniformity(self):
        """``(max - min)/mean`` of the ridge height around the ring."""
        v = self.peak_values
        return float((v.max() - v.min()) / v.mean())


def ring_profile(psi, n_angles=72, r_max=None, n_r=401):
    """Radius and height of the Q-function ridge along rays from the origin."""
    if r_max is None:
        r_max = np.sqrt(max(excitation_number(psi) - 0.5 * inversion(psi) - 0.5, 0.0)) + 3.0
    phis = np.linspace(0.0, 2.0 * np.pi, n_angles, endpoint=False)
    r = np.linspace(0.0, r_max, n_r)
    dr = r[1] - r[0]
    pts = (r[None, :] * np.exp(1j * phis[:, None])).ravel()
    qv = q_function_at(psi, pts).reshape(n_angles, n_r)
    radii = np.empty(n_angles)
    peaks = np.empty(n_angles)
    for i in range(n_angles):
        j = int(np.clip(np.argmax(qv[i]), 1, n_r - 2))
        off, h = _parabolic(qv[i, j - 1], qv[i, j], qv[i, j + 1])
        radii[i] = r[j] + off * dr
        peaks[i] = h
    return RingProfile(phis, radii, peaks)


# ---------------------------------------------------------------- spectra and peaks


def _parabolic(y0, y1, y2):
    """Vertex offset (in samples) and height of the parabola through three points."""
    den = y0 - 2.0 * y1 + y2
    if den == 0:
        return 0.0, y1
    d = 0.5 * (y0 - y2) / den
    return d, y1 - 0.25 * (y0 - y2) * d


def _uniform_step(times):
    t = np.asarray(times, float)
    if t.size < 2:
        raise SamplingError("need at least two samples")
    dt = np.diff(t)
    if np.any(np.abs(dt - dt[0]) > 1e-9 * max(abs(dt[0]), 1.0)) or dt[0] <= 0:
        raise SamplingError("times are not uniformly spaced")
    return float(dt[0])


def spectrum(times, series, window=None):
    """Power spectrum ``|dt sum_j A_j exp(i eps t_j)|^2`` on the FFT energy lattice.

    A component ``exp(-i E t)`` of ``series`` produces a peak at ``eps = E``.
    Returns ``(eps, power)`` sorted by energy; the lattice spacing is
    ``2 pi / (N dt)``.
    """
    dt = _uniform_step(times)
    a = np.asarray(series, complex)
    n = a.size
    if window is not None:
        a = a * np.asarray(window)
    power = np.abs(dt * n * np.fft.ifft(a)) ** 2
    eps = 2.0 * np.pi * np.fft.fftfreq(n, d=dt)
    order = np.argsort(eps, kind="stable")
    return eps[order], power[order]


@dataclass(frozen=True)
class SpectralPeak:
    energy: float
    height: float
    weight: float


def find_peaks(eps, power, rel_threshold=1e-3):
    """Local maxima above ``rel_threshold`` of the tallest, with parabolic refinement.

    ``weight`` is the power between the neighbouring minima divided by the total.
    """
    eps = np.asarray(eps, float)
    power = np.asarray(power, float)
    if power.size < 3:
        return []
    de = eps[1] - eps[0]
    thr = rel_threshold * power.max()
    inner = (power[1:-1] > power[:-2]) & (power[1:-1] >= power[2:]) & (power[1:-1] >= thr)
    idx = np.nonzero(inner)[0] + 1
    if idx.size == 0:
        return []
    bounds = [0]
    for a, b in zip(idx[:-1], idx[1:]):
        bounds.append(a + int(np.argmin(power[a:b + 1])))
    bounds.append(power.size)
    total = power.sum()
    out = []
    for k, j in enumerate(idx):
        off, h = _parabolic(power[j - 1], power[j], power[j + 1])
        w = power[bounds[k]:bounds[k + 1]].sum() / total
        out.append(SpectralPeak(float(eps[j] + off * de), float(h), float(w)))
    return out


# ---------------------------------------------------------------- revival times


def revival_time_from_autocorrelation(times, series, rel_height=0.05):
    """Revival time from the drift of the split autocorrelation peaks.

    After each oscillator period ``2 pi k`` the return of ``|A|`` is split into
    two sub-peaks whose separation ``s_k`` grows linearly in time.  A linear fit
    of ``s`` against time, solved for ``s = 2 pi``, gives the time when the
    sub-peaks of neighbouring periods merge, i.e. the revival.
    """
    t = np.asarray(times, float)
    a = np.abs(np.asarray(series))
    j = np.nonzero((a[1:-1] > a[:-2]) & (a[1:-1] >= a[2:]) & (a[1:-1] >= rel_height * a.max()))[0] + 1
    tp, hp = t[j], a[j]
    k = np.round(tp / (2.0 * np.pi)).astype(int)
    rows = []
    for kk in np.unique(k):
        if kk < 1:
            continue
        sel = np.nonzero(k == kk)[0]
        if sel.size < 2:
            continue
        top = sel[np.argsort(hp[sel])[-2:]]
        t1, t2 = np.sort(tp[top])
        s = t2 - t1
        if s >= np.pi:
            break
        rows.append((0.5 * (t1 + t2), s))
    if len(rows) < 2:
        raise MeasurementError("fewer than two resolvable sub-peak pairs in |A(t)|")
    rows = np.asarray(rows)
    slope, icpt = np.polyfit(rows[:, 0], rows[:, 1], 1)
    if slope <= 0:
        raise MeasurementError("sub-peak separation does not grow with time")
    return float((2.0 * np.pi - icpt) / slope)


def inversion_envelope(times, inv, window=3.0):
    """Sliding peak-to-peak amplitude of the inversion, centred on each window."""
    t = np.asarray(times, float)
    dt = _uniform_step(t)
    w = max(int(round(window / dt)), 2)
    if w > t.size:
        raise MeasurementError("window longer than the series")
    sw = sliding_window_view(np.asarray(inv, float), w)
    env = sw.max(axis=1) - sw.min(axis=1)
    tc = t[w // 2:w // 2 + env.size]
    return tc, env


def revival_time_from_inversion(times, inv, window=3.0, collapse_level=0.25, prominence=0.05):
    """First prominent maximum of the inversion envelope after it has collapsed.

    The envelope must first fall below ``collapse_level`` times its initial value.
    """
    tc, env = inversion_envelope(times, inv, window)
    below = np.nonzero(env < collapse_level * env[0])[0]
    if below.size == 0:
        raise MeasurementError("inversion never collapses")
    start = below[0]
    pk, _ = _sp_find_peaks(env[start:], prominence=prominence * env[0])
    if pk.size == 0:
        raise MeasurementError("no revival of the inversion envelope")
    return float(tc[start + pk[0]])
