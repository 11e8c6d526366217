import numpy as np
import pytest

from jcwave.adiabatic import from_adiabatic_basis, to_adiabatic_basis
from jcwave.analytic import jc_exact_evolution
from jcwave.errors import BasisError, ConfigurationError, GridTooSmallError
from jcwave.grid import make_grid
from jcwave.models import Model, ModelParams
from jcwave.propagator import (
    ClassicalState,
    PropagatorConfig,
    Scheme,
    Sheet,
    classical_trajectory,
    lz_transfer,
    propagate,
    step_adiabatic,
    step_full,
)
from jcwave.states import AtomStateSpec, FieldStateSpec, build_initial


def _psi(grid, field=None):
    return build_initial(field or FieldStateSpec.coherent(1.5), AtomStateSpec.excited(), grid)


def test_config_validation():
    with pytest.raises(ConfigurationError):
        PropagatorConfig(dt=-1)
    with pytest.raises(ConfigurationError):
        PropagatorConfig(record_stride=0)
    c = PropagatorConfig(1e-3, 1.0, 10)
    assert c.n_steps == 1000 and np.isclose(c.record_dt, 0.01)
    h = c.halved()
    assert h.n_steps == 2000 and np.isclose(h.record_dt, c.record_dt)


@pytest.mark.parametrize("model", list(Model))
def test_norm_and_energy_conserved(grid, model):
    params = ModelParams(1.5, 0.8, model)
    # the linear LZ potential pushes packets out of the box sooner
    t_final = 1.5 if model is Model.LZ else 2.5
    res = propagate(_psi(grid), params, PropagatorConfig(2e-3, t_final, 50))
    s = res.series
    assert np.abs(s.norm - 1).max() < 1e-12
    assert np.ptp(s.energy) < 1e-5 * max(1.0, np.abs(s.energy).max())


def test_jc_matches_exact_solution(grid):
    params = ModelParams(1.0, 1.0, Model.JC)
    field = FieldStateSpec.coherent(1.5)
    res = propagate(_psi(grid, field), params, PropagatorConfig(1e-3, 10.0, 200))
    ref = jc_exact_evolution(field, AtomStateSpec.excited(), params, res.series.times)
    assert np.abs(res.series.inversion - ref.inversion).max() < 1e-5
    assert np.abs(res.series.energy - ref.energy).max() < 1e-5


def test_jc_excitation_number_splitting_error(grid):
    # the splitting does not commute with N; the excursion is bounded and O(dt^2)
    params = ModelParams(2.0, 0.7, "jc")
    a = propagate(_psi(grid), params, PropagatorConfig(2e-3, 5.0, 50)).series.excitation
    b = propagate(_psi(grid), params, PropagatorConfig(1e-3, 5.0, 100)).series.excitation
    assert np.ptp(b) < 1e-5
    assert 3.3 < np.ptp(a) / np.ptp(b) < 4.7


def test_second_order_convergence(grid):
    params = ModelParams(2.0, 1.0, Model.RABI)
    psi0 = _psi(grid)

    def inv(dt):
        return propagate(psi0, params, PropagatorConfig(dt, 2.0, int(round(2.0 / dt)))).series.inversion[-1]

    ref = inv(0.02 / 8)
    e1, e2 = abs(inv(0.02) - ref), abs(inv(0.01) - ref)
    assert 3.3 < e1 / e2 < 4.7


def test_schemes_agree(grid):
    params = ModelParams(2.0, 1.0, Model.RABI)
    a = propagate(_psi(grid), params, PropagatorConfig(1e-3, 3.0, 100, Scheme.VKV)).series
    b = propagate(_psi(grid), params, PropagatorConfig(1e-3, 3.0, 100, Scheme.KVK)).series
    assert np.abs(a.inversion - b.inversion).max() < 1e-5


def test_snapshots_and_bad_times(grid):
    cfg = PropagatorConfig(1e-3, 1.0, 100)
    res = propagate(_psi(grid), ModelParams(1, 1, "jc"), cfg, snapshot_times=(0.0, 0.25, 1.0))
    assert set(res.snapshots) == {0.0, 0.25, 1.0}
    assert np.allclose(res.snapshots[1.0].up, res.final.up)
    with pytest.raises(ConfigurationError):
        propagate(_psi(grid), ModelParams(1, 1, "jc"), cfg, snapshot_times=(2.0,))


def test_boundary_monitor_keeps_partial_records():
    g = make_grid(128, 10.0)
    psi = build_initial(FieldStateSpec.coherent(1.5), AtomStateSpec.excited(), g)
    with pytest.raises(GridTooSmallError) as info:
        propagate(psi, ModelParams(1, 3, "rabi"), PropagatorConfig(1e-3, 20.0, 50))
    assert len(info.value.partial) >= 1


def test_adiabatic_twin_limits(grid):
    field = FieldStateSpec.fock(0)
    res = propagate(_psi(grid, field), ModelParams(10.0, 0.1, "rabi"), PropagatorConfig(1e-3, 5.0, 100),
                    adiabatic_twin=True)
    f = res.series.fidelity
    assert abs(f[0] - 1) < 1e-12
    assert f.min() > 0.999
    assert res.adiabatic_series is not None and len(res.adiabatic_series) == len(res.series)
    with pytest.raises(ConfigurationError):
        propagate(_psi(grid), ModelParams(1, 1, "jc"), PropagatorConfig(1e-3, 0.1, 10), adiabatic_twin=True)


def test_single_steps_check_basis(grid):
    params = ModelParams(1, 1, "rabi")
    psi = _psi(grid)
    out = step_full(psi, params, 1e-3)
    assert abs(out.norm() - 1) < 1e-12
    with pytest.raises(BasisError):
        step_adiabatic(psi, params, 1e-3)
    adi = step_adiabatic(to_adiabatic_basis(psi, params), params, 1e-3)
    assert adi.basis == "adiabatic"
    back = from_adiabatic_basis(to_adiabatic_basis(psi, params), params)
    assert np.allclose(back.up, psi.up) and np.allclose(back.down, psi.down)


def test_classical_harmonic_limit():
    params = ModelParams(1.0, 0.0, "rabi")
    tr = classical_trajectory(ClassicalState(2.0, 0.0, Sheet.UPPER), params, 1e-3, 20 * np.pi)
    r = np.hypot(tr.q, tr.p)
    assert np.abs(r - 2.0).max() < 1e-8
    assert abs(tr.q[-1] - 2.0) < 1e-6


def test_classical_sheets_split_amplitudes():
    params = ModelParams(1.0, 1.0, "rabi")
    up = classical_trajectory(ClassicalState(np.sqrt(2) * 4, 0.0, "upper"), params, 1e-3, 20.0)
    lo = classical_trajectory(ClassicalState(np.sqrt(2) * 4, 0.0, "lower"), params, 1e-3, 20.0)
    assert abs(np.abs(up.q).max() - np.abs(lo.q).max()) > 0.5
    # the |q| force conserves p^2/2 + V_pm only on the starting side of q = 0
    e = up.energy()
    right = up.q > 0.1
    assert np.ptp(e[right]) < 1e-4


def test_lz_transfer_matches_formula():
    res = lz_transfer(2.0, 1.0, 6.0)
    assert res.relative_error < 0.03


def test_lz_transfer_rejects_slow_packets():
    with pytest.raises(ConfigurationError):
        lz_transfer(1.0, 1.0, 5.0)
