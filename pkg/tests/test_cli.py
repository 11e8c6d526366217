import os

import numpy as np
import pytest

from jcwave.cli.config import ParseError, parse_scenario
from jcwave.cli.main import main
from jcwave.cli.presets import PRESETS, preset_names
from jcwave.errors import ConfigurationError

SMALL_RUN = """
[scenario]
mode = run
name = small
[model]
model = jc
omega = 1
g0 = 1
[field]
kind = coherent
nu = 1.5
[grid]
n_points = 256
q_max = 16
[propagation]
dt = 0.002
t_final = 2
record_stride = 50
[observables]
qfunc_times = 0, 1
qfunc_points = 41
amplitude_times = 2
spectrum = true
[compare]
models = rabi, adiabatic, jc
"""

SMALL_SWEEP = """
[scenario]
mode = sweep
[model]
model = rabi
omega = 2
[field]
kind = fock
n = 0
[grid]
n_points = 256
q_max = 12
[propagation]
dt = 0.005
t_final = 1
record_stride = 50
[sweep]
g0 = 0.1, 0.3
omega = 1, 2
"""


def _write(tmp_path, text, name="scn.ini"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def _read(path):
    with open(path, "rb") as fh:
        return fh.read()


def test_parse_defaults_and_labels():
    scn = parse_scenario(SMALL_RUN)
    assert scn.labels == ("rabi", "adiabatic", "jc")
    assert scn.propagation.n_steps == 1000
    assert scn.qfunc_times == (0.0, 1.0)


@pytest.mark.parametrize("text", [
    "[scenario\nmode = run",
    "[bogus]\nx = 1",
    "[model]\nomegaa = 1",
    "[model]\nomega = fast",
    "[scenario]\nmode = dance",
    "[grid]\nn_points = 12.5",
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_scenario(text)


@pytest.mark.parametrize("text", [
    "[model]\ng0 = -1",
    "[grid]\nn_points = 1000",
    "[propagation]\nt_final = 1\n[observables]\nqfunc_times = 2",
    "[compare]\nmodels = rabi, dicke",
    "[scenario]\nmode = curves",
    "[atom]\nplus = 0\nminus = 0",
    "[grid]\nq_max = 8\n[field]\nkind = coherent\nnu = 2\n[observables]\nqfunc_times = 0",
    "[field]\nkind = squeezed",
])
def test_validation_errors(text):
    with pytest.raises(ConfigurationError):
        parse_scenario(text)


def test_range_syntax():
    scn = parse_scenario("[scenario]\nmode = sweep\n[sweep]\ng0 = 0.05:1.0:0.05")
    assert len(scn.sweep_g0) == 20 and scn.sweep_g0[-1] == 1.0


def test_malformed_config_exit_2_without_outputs(tmp_path):
    out = tmp_path / "out"
    assert main(["run", _write(tmp_path, "[scenario\n"), "--out", str(out)]) == 2
    assert not out.exists()


def test_invalid_config_exit_3(tmp_path):
    out = tmp_path / "out"
    assert main(["run", _write(tmp_path, "[model]\ng0 = -2\n"), "--out", str(out)]) == 3
    assert not out.exists()


def test_run_outputs_are_deterministic(tmp_path):
    cfg = _write(tmp_path, SMALL_RUN)
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["run", cfg, "--out", str(a)]) == 0
    assert main(["run", cfg, "--out", str(b)]) == 0
    names = sorted(os.listdir(a))
    assert names == sorted(os.listdir(b))
    for nm in names:
        assert _read(a / nm) == _read(b / nm), nm
    for label in ("rabi", "adiabatic", "jc"):
        assert f"timeseries_{label}.csv" in names
        assert f"qfunc_{label}_t1.csv" in names
        assert f"amplitudes_{label}_t2.csv" in names
    header = (a / "timeseries_rabi.csv").read_text().splitlines()[0]
    assert header.endswith("fidelity,h_cor")
    manifest = (a / "manifest.txt").read_text()
    assert "status = ok" in manifest
    for nm in names:
        if nm != "manifest.txt":
            assert nm in manifest
    q = np.loadtxt(a / "qfunc_jc_t0.csv", delimiter=",", skiprows=1)
    assert q.shape == (41 * 41, 3)


def test_dt_check_reports_difference(tmp_path):
    cfg = _write(tmp_path, SMALL_RUN.replace("rabi, adiabatic, jc", "jc"))
    assert main(["run", cfg, "--out", str(tmp_path / "o"), "--dt-check"]) == 0
    summary = (tmp_path / "o" / "summary.txt").read_text()
    line = [s for s in summary.splitlines() if s.startswith("dt_check")][0]
    assert float(line.split("=")[1]) < 1e-3


def test_blowup_exit_4_with_partial_outputs(tmp_path):
    text = SMALL_RUN.replace("q_max = 16", "q_max = 9").replace("g0 = 1", "g0 = 3").replace("t_final = 2", "t_final = 20")
    text = text.replace("rabi, adiabatic, jc", "rabi").replace("qfunc_times = 0, 1", "qfunc_times =").replace(
        "amplitude_times = 2", "amplitude_times =")
    out = tmp_path / "o"
    assert main(["run", _write(tmp_path, text), "--out", str(out)]) == 4
    assert (out / "FAILED").exists()
    assert (out / "timeseries_partial.csv").exists()
    assert "status = FAILED" in (out / "manifest.txt").read_text()


def test_sweep_ordering_and_parallel_equivalence(tmp_path):
    cfg = _write(tmp_path, SMALL_SWEEP)
    assert main(["sweep", cfg, "--out", str(tmp_path / "s1")]) == 0
    assert main(["sweep", cfg, "--out", str(tmp_path / "s2"), "--workers", "2"]) == 0
    f1 = _read(tmp_path / "s1" / "fidelity_surface.csv")
    assert f1 == _read(tmp_path / "s2" / "fidelity_surface.csv")
    data = np.loadtxt(tmp_path / "s1" / "fidelity_surface.csv", delimiter=",", skiprows=1)
    keys = [tuple(r) for r in data[:, :3]]
    assert keys == sorted(keys)
    assert np.all(data[data[:, 2] == 0, 3] == 1.0)


def test_sweep_command_rejects_run_scenario(tmp_path):
    assert main(["sweep", _write(tmp_path, SMALL_RUN), "--out", str(tmp_path / "o")]) == 3


def test_every_preset_validates():
    assert preset_names() == sorted(PRESETS, key=lambda k: int(k[3:]))
    expected = {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig8", "fig10",
                "fig11", "fig12", "fig13", "fig14", "fig15", "fig16"}
    assert set(PRESETS) == expected
    for name, parts in PRESETS.items():
        for part, text in parts.items():
            parse_scenario(text, f"{name}:{part}")


def test_fig6_and_fig13_preset_layout():
    fig6 = parse_scenario(PRESETS["fig6"][""])
    assert fig6.labels == ("rabi", "adiabatic", "jc") and fig6.revival
    fig13 = parse_scenario(PRESETS["fig13"][""])
    assert fig13.qfunc_times == (0.0, 50.0, 62.5, 75.0)


def test_unknown_preset_exit_3(tmp_path):
    assert main(["preset", "fig99", "--out", str(tmp_path)]) == 3


def test_list_presets(capsys):
    assert main(["list-presets"]) == 0
    assert "fig13" in capsys.readouterr().out


@pytest.mark.slow
@pytest.mark.parametrize("name", preset_names())
def test_preset_smoke(tmp_path, name):
    out = tmp_path / name
    assert main(["preset", name, "--out", str(out), "--t-final", "0.5", "--workers", "2"]) == 0
    manifests = [os.path.join(r, f) for r, _, fs in os.walk(out) for f in fs if f == "manifest.txt"]
    assert len(manifests) == len(PRESETS[name])
