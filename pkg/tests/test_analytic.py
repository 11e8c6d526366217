import numpy as np
import pytest
from scipy.linalg import eigh

from jcwave.analytic import (
    adiabatic_curves,
    jc_eigen,
    jc_energies,
    jc_exact_evolution,
    lz_probability,
    revival_estimates,
)
from jcwave.errors import ConfigurationError, DomainError, TruncationError
from jcwave.models import ModelParams
from jcwave.states import AtomStateSpec, FieldStateSpec


def _jc_matrix(params, n_max):
    """Dense JC Hamiltonian on |+,n>, |-,n> for n <= n_max (index 2n + channel)."""
    dim = 2 * (n_max + 1)
    h = np.zeros((dim, dim))
    for n in range(n_max + 1):
        h[2 * n, 2 * n] = n + 0.5 + params.omega_atom / 2
        h[2 * n + 1, 2 * n + 1] = n + 0.5 - params.omega_atom / 2
        if n + 1 <= n_max:
            # g a sigma_+ couples |-, n+1> to |+, n>
            h[2 * n, 2 * (n + 1) + 1] = h[2 * (n + 1) + 1, 2 * n] = params.g0 * np.sqrt(n + 1)
    return h


@pytest.mark.parametrize("om,g", [(1.0, 1.0), (5.0, 0.3), (0.2, 2.0)])
def test_dressed_energies_match_diagonalisation(om, g):
    params = ModelParams(om, g, "jc")
    n_max = 12
    ref = np.sort(eigh(_jc_matrix(params, n_max), eigvals_only=True))
    # the top bare level |+, n_max> is uncoupled in the truncated matrix
    ref = np.sort(np.delete(ref, np.argmin(np.abs(ref - (n_max + 0.5 + om / 2)))))
    assert np.allclose(np.sort(jc_energies(params, n_max)), ref, atol=1e-10)


def test_jc_eigen_block():
    e = jc_eigen(4, ModelParams(1.0, 0.5, "jc"))
    assert np.isclose(e.E_plus - e.E_minus, 2 * 0.5 * 2)
    assert np.isclose(e.theta_n, np.pi / 4)
    with pytest.raises(DomainError):
        jc_eigen(0, ModelParams(1.0, 0.5, "jc"))


def test_vacuum_rabi_oscillation():
    params = ModelParams(1.0, 0.7, "jc")
    t = np.linspace(0, 20, 201)
    s = jc_exact_evolution(FieldStateSpec.fock(0), AtomStateSpec.excited(), params, t)
    assert np.allclose(s.inversion, np.cos(2 * 0.7 * t), atol=1e-12)
    assert np.allclose(s.norm, 1.0)
    assert np.ptp(s.energy) < 1e-12


def test_exact_evolution_conserves_excitation():
    params = ModelParams(5.0, 0.3, "jc")
    t = np.linspace(0, 50, 101)
    s = jc_exact_evolution(FieldStateSpec.coherent(2.0 + 1j), AtomStateSpec.from_amplitudes(1, 1j), params, t)
    assert np.ptp(s.excitation) < 1e-10 and np.ptp(s.energy) < 1e-10
    assert np.all((s.entropy >= 0) & (s.entropy <= np.log(2)))


def test_truncation_error_reports_cutoff():
    with pytest.raises(TruncationError) as info:
        jc_exact_evolution(FieldStateSpec.coherent(4.0), AtomStateSpec.excited(), ModelParams(1, 1, "jc"), [0.0], n_max=20)
    assert info.value.required_nmax > 20


def test_exact_evolution_needs_jc():
    with pytest.raises(ConfigurationError):
        jc_exact_evolution(FieldStateSpec.fock(0), AtomStateSpec.excited(), ModelParams(1, 1, "rabi"), [0.0])


def test_adiabatic_curves_at_origin():
    om, g = 2.0, 0.5
    c = adiabatic_curves(ModelParams(om, g, "rabi"), np.array([0.0, 30.0]))
    assert np.isclose(c.v_plus[0], 2 * g * g / om**2 + om / 2)
    assert np.isclose(c.v_minus[0], 2 * g * g / om**2 - om / 2)
    # far away the curves approach the displaced oscillators
    assert np.isclose(c.v_minus[1], 0.5 * 30**2 - np.sqrt(2) * g * 30, atol=0.05)


def test_revival_estimates_fig6_parameters():
    est = revival_estimates(ModelParams(5.0, 0.3, "rabi"), FieldStateSpec.coherent(4.0))
    assert abs(est.t_r_adiabatic - np.pi * 5 / 0.09) < 1e-9
    assert est.adiabatic_valid and not est.double_well
    assert abs(est.t_r_numeric_curvature - 125.8) / 125.8 < 0.05


def test_revival_estimate_flags():
    est = revival_estimates(ModelParams(0.1, 1.0, "rabi"), FieldStateSpec.fock(0))
    assert not est.adiabatic_valid and np.isnan(est.t_r_adiabatic)
    assert est.double_well
    assert np.isnan(est.t_r_standard)
    with pytest.raises(DomainError):
        revival_estimates(ModelParams(1.0, 0.0, "rabi"), FieldStateSpec.fock(0))


def test_lz_probability():
    p = lz_probability(6.0, ModelParams(2.0, 1.0, "lz"))
    assert np.isclose(p, 1 - np.exp(-np.pi * 4 / (4 * np.sqrt(2) * 6)))
    for v in (0.0, -1.0):
        with pytest.raises(DomainError):
            lz_probability(v, ModelParams(2.0, 1.0, "lz"))
