"""Semiclassical energy manifolds in the (q, p) plane.

Rabi sheets: ``eps_pm(p, q) = p^2/2 + q^2/2 +- sqrt(Omega^2/4 + 2 g0^2 q^2)``.
JC sheets depend on ``r^2 = q^2 + p^2`` only,
``eps_pm = r^2/2 +- sqrt(Omega^2/4 + g0^2 r^2 / 2)``, so their contours are
circles.
"""
from dataclasses import dataclass

import numpy as np

from .errors import EmptyContourError
from .propagator import Sheet


def rabi_sheet_energy(q, p, params, sheet):
    s = Sheet(getattr(sheet, "value", sheet)).sign
    q = np.asarray(q, float)
    return 0.5 * np.asarray(p, float) ** 2 + 0.5 * q * q + s * np.sqrt(
        0.25 * params.omega_atom**2 + 2.0 * params.g0**2 * q * q
    )


def jc_sheet_energy(q, p, params, sheet):
    s = Sheet(getattr(sheet, "value", sheet)).sign
    r2 = np.asarray(q, float) ** 2 + np.asarray(p, float) ** 2
    return 0.5 * r2 + s * np.sqrt(0.25 * params.omega_atom**2 + 0.5 * params.g0**2 * r2)


@dataclass(frozen=True, eq=False)
class EnergyManifold:
    """Closed contours of one energy sheet at ``epsilon0``.

    ``loops`` is a list of ``(n, 2)`` arrays of ``(q, p)`` points, each traced
    once around; the first point is not repeated.
    """

    epsilon0: float
    sheet: Sheet
    loops: list
    model: str = "rabi"

    @property
    def points(self):
        return np.concatenate(self.loops, axis=0)

    @property
    def n_loops(self):
        return len(self.loops)


def _bisect(f, a, b, tol):
    fa = f(a)
    for _ in range(200):
        m = 0.5 * (a + b)
        fm = f(m)
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
        if b - a < tol:
            break
    return 0.5 * (a + b)


def _roots(f, lo, hi, n_scan, tol):
    x = np.linspace(lo, hi, n_scan)
    y = f(x)
    out = []
    for i in np.nonzero(np.sign(y[:-1]) != np.sign(y[1:]))[0]:
        if y[i] == 0:
            out.append(x[i])
        else:
            out.append(_bisect(f, x[i], x[i + 1], tol))
    return out, x, y


def manifold_contour(epsilon0, sheet, params, n_samples=400, tol=1e-12):
    """Contour ``eps_pm(p, q) = epsilon0`` of a Rabi sheet.

    The allowed ``q`` intervals come from bisecting the turning points of
    ``U(q) = eps_pm(0, q)``; inside each interval ``p = +-sqrt(2 (epsilon0 - U))``.
    Below the barrier of a double-well lower sheet two loops are returned.

    Raises
    ------
    EmptyContourError
        If ``epsilon0`` is below the minimum of the sheet.
    """
    sheet = Sheet(getattr(sheet, "value", sheet))
    g, om = params.g0, params.omega_atom

    def f(q):
        return rabi_sheet_energy(q, 0.0, params, sheet) - epsilon0

    reach = np.sqrt(2.0) * g + np.sqrt(max(2.0 * g * g + om + 2.0 * abs(epsilon0), 0.0)) + 2.0
    roots, xs, ys = _roots(f, -reach, reach, 20001, tol)
    if not roots:
        if np.all(ys > 0):
            raise EmptyContourError(f"energy {epsilon0} is below the minimum of the {sheet.value} sheet")
        raise EmptyContourError("allowed region is not bounded inside the scan window")
    if len(roots) % 2:
        raise EmptyContourError("odd number of turning points; energy sits on a stationary point")
    loops = []
    phi = np.linspace(0.0, np.pi, n_samples // 2 + 1)
    for a, b in zip(roots[0::2], roots[1::2]):
        q = 0.5 * (a + b) - 0.5 * (b - a) * np.cos(phi)
        p = np.sqrt(np.maximum(-2.0 * f(q), 0.0))
        # upper branch left to right, lower branch back, endpoints shared
        qq = np.concatenate([q, q[-2:0:-1]])
        pp = np.concatenate([p, -p[-2:0:-1]])
        loops.append(np.column_stack([qq, pp]))
    return EnergyManifold(float(epsilon0), sheet, loops, "rabi")


def jc_manifold_contour(epsilon0, sheet, params, n_samples=400, tol=1e-12):
    """Circular contours of a JC sheet; radii found by bisection."""
    sheet = Sheet(getattr(sheet, "value", sheet))

    def f(r):
        return jc_sheet_energy(r, 0.0, params, sheet) - epsilon0

    reach = np.sqrt(2.0 * abs(epsilon0) + params.omega_atom + 2.0 * params.g0**2 + 1.0) + 2.0
    radii, _, ys = _roots(f, 0.0, reach, 20001, tol)
    if not radii:
        raise EmptyContourError(f"energy {epsilon0} is below the minimum of the {sheet.value} JC sheet")
    phi = np.linspace(0.0, 2.0 * np.pi, n_samples, endpoint=False)
    loops = [np.column_stack([r * np.cos(phi), r * np.sin(phi)]) for r in radii]
    return EnergyManifold(float(epsilon0), sheet, loops, "jc")
