import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jcwave.errors import ConfigurationError, ResolutionError
from jcwave.grid import make_grid
from jcwave.observables import excitation_number, field_moments, fock_populations, quadrature_variances
from jcwave.states import (
    AtomStateSpec,
    FieldStateSpec,
    build_initial,
    coherent_wavefunction,
    fock_basis,
    fock_wavefunction,
    max_fock_index,
)


def test_fock_basis_orthonormal(grid):
    b = fock_basis(30, grid)
    gram = grid.dq * b @ b.T
    assert np.allclose(gram, np.eye(31), atol=1e-12)


def test_fock_wavefunction_matches_basis_row(grid):
    assert np.allclose(fock_wavefunction(7, grid), fock_basis(7, grid)[7])


def test_fock_resolution_guard():
    g = make_grid(64, 8.0)
    with pytest.raises(ResolutionError):
        fock_wavefunction(max_fock_index(g) + 1, g)
    with pytest.raises(ConfigurationError):
        FieldStateSpec.fock(-1)


@settings(max_examples=25, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3))
def test_coherent_state_photon_statistics(re, im):
    g = make_grid(512, 20.0)
    nu = complex(re, im)
    psi = build_initial(FieldStateSpec.coherent(nu), AtomStateSpec.ground(), g)
    pops = fock_populations(psi, 60).sum(axis=1)
    n = np.arange(61)
    logp = -abs(nu) ** 2 + 2 * n * np.log(max(abs(nu), 1e-300)) - np.array([np.sum(np.log(np.arange(1, k + 1))) for k in n])
    ref = np.exp(logp) if abs(nu) > 0 else (n == 0).astype(float)
    assert np.allclose(pops, ref, atol=1e-10)
    m = field_moments(psi)
    assert np.isclose(m.mean_q, np.sqrt(2) * re, atol=1e-10)
    assert np.isclose(m.mean_p, np.sqrt(2) * im, atol=1e-10)
    vq, vp = quadrature_variances(psi)
    assert np.isclose(vq, 0.5, atol=1e-10) and np.isclose(vp, 0.5, atol=1e-10)


def test_coherent_phase_convention(grid):
    # <0|nu> = exp(-|nu|^2/2), real and positive
    nu = 1.2 - 0.7j
    phi = coherent_wavefunction(nu, grid)
    overlap = grid.dq * np.sum(fock_basis(0, grid)[0] * phi)
    assert np.isclose(overlap, np.exp(-abs(nu) ** 2 / 2), atol=1e-12)


def test_coherent_does_not_fit():
    with pytest.raises(ResolutionError):
        coherent_wavefunction(10.0, make_grid(256, 12.0))


def test_atom_spec_normalization():
    with pytest.raises(ConfigurationError):
        AtomStateSpec(1.0, 1.0)
    a = AtomStateSpec.from_amplitudes(1.0, 1j)
    assert np.isclose(abs(a.amplitude_plus) ** 2 + abs(a.amplitude_minus) ** 2, 1.0)
    with pytest.raises(ConfigurationError):
        AtomStateSpec.from_amplitudes(0, 0)


def test_build_initial_product(grid):
    psi = build_initial(FieldStateSpec.fock(3), AtomStateSpec.from_amplitudes(1, 1), grid)
    assert abs(psi.norm() - 1) < 1e-12
    assert np.allclose(psi.up, psi.down)
    # <a^dag a + sigma_+ sigma_-> = 3 + 1/2
    assert np.isclose(excitation_number(psi), 3.5, atol=1e-10)
