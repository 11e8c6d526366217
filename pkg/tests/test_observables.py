import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jcwave.errors import BasisError, MeasurementError, SamplingError
from jcwave.grid import WavePacket, make_grid
from jcwave.models import ModelParams
from jcwave.observables import (
    TimeSeries,
    count_blobs,
    energy,
    entanglement_entropy,
    fidelity,
    find_peaks,
    inversion,
    q_function,
    reduced_density_matrix,
    revival_time_from_autocorrelation,
    revival_time_from_inversion,
    ring_profile,
    spectrum,
)
from jcwave.states import AtomStateSpec, FieldStateSpec, build_initial, fock_wavefunction

LN2 = np.log(2.0)


def _two_mode(grid, a, b, n=0, m=1):
    """``a |n,+> + b |m,->`` on the grid."""
    return WavePacket(a * fock_wavefunction(n, grid).astype(complex), b * fock_wavefunction(m, grid).astype(complex), grid)


def test_inversion_of_basis_states(grid):
    assert np.isclose(inversion(build_initial(FieldStateSpec.fock(2), AtomStateSpec.excited(), grid)), 1.0)
    assert np.isclose(inversion(build_initial(FieldStateSpec.fock(2), AtomStateSpec.ground(), grid)), -1.0)


def test_product_state_entropy(grid):
    psi = build_initial(FieldStateSpec.coherent(1 + 1j), AtomStateSpec.from_amplitudes(0.6, 0.8j), grid)
    assert entanglement_entropy(psi) < 1e-10


def test_orthogonal_superposition_entropy(grid):
    psi = _two_mode(grid, 1 / np.sqrt(2), 1 / np.sqrt(2))
    assert abs(entanglement_entropy(psi) - LN2) < 1e-10


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 2 * np.pi), st.floats(0.01, 0.99), st.integers(0, 3), st.integers(0, 3))
def test_entropy_bounds(phase, w, n, m):
    g = make_grid(256, 12.0)
    psi = _two_mode(g, np.sqrt(w), np.sqrt(1 - w) * np.exp(1j * phase), n, m)
    s = entanglement_entropy(psi)
    assert 0.0 <= s <= LN2
    rho = reduced_density_matrix(psi)
    assert np.isclose(np.trace(rho).real, 1.0)
    assert np.allclose(rho, rho.conj().T)
    if n != m:
        lam = np.array([w, 1 - w])
        assert np.isclose(s, -np.sum(lam * np.log(lam)), atol=1e-10)


def test_fidelity_properties(grid):
    a = build_initial(FieldStateSpec.coherent(1.0), AtomStateSpec.excited(), grid)
    b = build_initial(FieldStateSpec.coherent(1.0j), AtomStateSpec.excited(), grid)
    assert abs(fidelity(a, a) - 1) < 1e-12
    assert np.isclose(fidelity(a, b), fidelity(b, a))
    assert np.isclose(fidelity(a, b), np.exp(-abs(1 - 1j) ** 2 / 4))
    adi = WavePacket(a.up, a.down, grid, basis="adiabatic")
    with pytest.raises(BasisError):
        fidelity(a, adi)


def test_energy_of_fock_state(grid):
    psi = build_initial(FieldStateSpec.fock(3), AtomStateSpec.excited(), grid)
    # JC at g0 = 0: n + 1/2 + Omega/2
    assert np.isclose(energy(psi, ModelParams(2.0, 0.0, "jc")), 3.5 + 1.0, atol=1e-10)


def test_q_function_normalised_and_centred():
    g = make_grid(1024, 30.0)
    nu = 2.0 - 1.0j
    psi = build_initial(FieldStateSpec.coherent(nu), AtomStateSpec.excited(), g)
    fr = q_function(psi)
    assert abs(fr.total() - 1) < 1e-3
    i, j = np.unravel_index(np.argmax(fr.q), fr.q.shape)
    assert abs(fr.alpha_re[i] - nu.real) < 0.06 and abs(fr.alpha_im[j] - nu.imag) < 0.06
    assert count_blobs(fr) == 1


def test_fock_ring():
    g = make_grid(1024, 30.0)
    psi = build_initial(FieldStateSpec.fock(6), AtomStateSpec.excited(), g)
    ring = ring_profile(psi)
    assert abs(ring.mean_radius - np.sqrt(6)) / np.sqrt(6) < 0.02
    assert ring.uniformity < 0.01
    assert count_blobs(q_function(psi)) == 1


def test_spectrum_peaks_at_energies():
    t = np.arange(4000) * 0.05
    a = 0.7 * np.exp(-1.3j * t) + 0.3 * np.exp(2.1j * t)
    eps, p = spectrum(t, a)
    peaks = sorted(find_peaks(eps, p), key=lambda x: -x.height)[:2]
    got = sorted(pk.energy for pk in peaks)
    assert np.allclose(got, [-2.1, 1.3], atol=0.3 * (eps[1] - eps[0]))
    w = {round(pk.energy, 1): pk.weight for pk in peaks}
    assert w[1.3] > w[-2.1]


def test_spectrum_rejects_uneven_sampling():
    with pytest.raises(SamplingError):
        spectrum([0.0, 0.1, 0.3], [1, 1, 1])


def test_inversion_revival_on_synthetic_signal():
    t = np.arange(0, 200, 0.05)
    env = np.exp(-((t / 8) ** 2)) + 0.6 * np.exp(-(((t - 120) / 10) ** 2))
    assert abs(revival_time_from_inversion(t, env * np.cos(3 * t)) - 120) < 1.5
    with pytest.raises(MeasurementError):
        revival_time_from_inversion(t, np.cos(3 * t))


def test_autocorrelation_revival_needs_peaks():
    t = np.arange(0, 50, 0.05)
    with pytest.raises(MeasurementError):
        revival_time_from_autocorrelation(t, np.exp(-t))


def test_timeseries_validation():
    z = np.zeros(3)
    with pytest.raises(SamplingError):
        TimeSeries(np.array([0.0, 1.0, 1.0]), z, z, z, z, z, z, z, z, z.astype(complex), z)
