"""Bundled scenarios, one per reproduced figure.

Each preset maps part names to scenario text.  Single-part presets use the
empty part name and write straight into the output directory; multi-part
presets write one subdirectory per part.
"""

_FIG1 = """
[scenario]
mode = curves
name = fig1
[curves]
sets = 0.1/1, 4/2, 1/1, 5/0.3
q_range = 6
n = 601
"""

_SWEEP = """
[scenario]
mode = sweep
name = {name}
[model]
model = rabi
omega = {omega}
[field]
{field}
[grid]
n_points = {n_points}
q_max = {q_max}
[propagation]
dt = 0.001
t_final = 50
record_stride = 100
[sweep]
g0 = 0.05:1.0:0.05
omega = {omega}
"""

_RUN = """
[scenario]
mode = run
name = {name}
[model]
model = {model}
omega = {omega}
g0 = {g0}
[field]
{field}
[grid]
n_points = {n_points}
q_max = {q_max}
[propagation]
dt = 0.001
t_final = {t_final}
record_stride = {stride}
[observables]
qfunc_times = {qfunc}
amplitude_times = {amps}
spectrum = {spectrum}
revival = {revival}
[compare]
models = {compare}
"""

_CLASSICAL = """
[scenario]
mode = classical
name = fig12
[model]
model = rabi
omega = 1
g0 = 1
[classical]
q0 = 5.656854249492381
p0 = 0
sheets = upper, lower
dt = 0.001
t_final = 20
contour_samples = 400
"""


def _run(name, omega, g0, field, t_final, compare="", model="rabi", stride=100, qfunc="", amps="",
         spectrum=False, revival=False, n_points=2048, q_max=40.0):
    return _RUN.format(
        name=name, model=model, omega=omega, g0=g0, field=field, t_final=t_final, stride=stride,
        qfunc=qfunc, amps=amps, spectrum=str(spectrum).lower(), revival=str(revival).lower(),
        compare=compare, n_points=n_points, q_max=q_max,
    )


def _fock(n):
    return f"kind = fock\nn = {n}"


def _coh(nu):
    return f"kind = coherent\nnu = {nu}"


PRESETS = {
    "fig1": {"": _FIG1},
    "fig2": {"": _SWEEP.format(name="fig2", omega=2, field=_fock(0), n_points=1024, q_max=20)},
    "fig3": {
        "omega10": _SWEEP.format(name="fig3_omega10", omega=10, field=_coh(4), n_points=2048, q_max=40),
        "omega0.1": _SWEEP.format(name="fig3_omega0.1", omega=0.1, field=_coh(4), n_points=2048, q_max=40),
    },
    "fig4": {
        "a": _run("fig4a", 0.2, 2, _fock(0), 40, "rabi, jc", stride=50, n_points=1024, q_max=20),
        "b": _run("fig4b", 4, 2, _fock(0), 40, "rabi, jc", stride=50, n_points=1024, q_max=20),
    },
    "fig5": {
        "n0": _run("fig5_n0", 0.2, 2, _fock(0), 20, "rabi, jc", amps="0, 5, 10, 15, 20", n_points=1024, q_max=20),
        "n2": _run("fig5_n2", 0.2, 2, _fock(2), 20, "rabi, jc", amps="0, 5, 10, 15, 20", n_points=1024, q_max=20),
    },
    "fig6": {"": _run("fig6", 5, 0.3, _coh(4), 400, "rabi, adiabatic, jc", revival=True)},
    "fig8": {"": _run("fig8", 0.2, 2, _coh(4), 100, "rabi, adiabatic, jc")},
    "fig10": {
        "a": _run("fig10a", 5, 0.3, _coh(4), 400, "rabi, jc"),
        "b": _run("fig10b", 1, 1, _coh(4), 100, "rabi, jc"),
        "c": _run("fig10c", 0.2, 2, _coh(4), 100, "rabi, jc"),
        "d": _run("fig10d", 1, 1, _fock(0), 100, "rabi, jc", n_points=1024, q_max=20),
    },
    "fig11": {
        "ab": _run("fig11ab", 5, 0.3, _coh(4), 400, "rabi, jc",
                   qfunc="0, 50, 100, 150, 200, 250, 300, 350, 400"),
        "cd": _run("fig11cd", 1, 1, _coh(4), 6, "rabi, jc", qfunc="0, 1.5, 3, 4.5, 6"),
    },
    "fig12": {"": _CLASSICAL},
    "fig13": {"": _run("fig13", 1, 0.5, _fock(6), 75, qfunc="0, 50, 62.5, 75")},
    "fig14": {
        "a": _run("fig14a", 5, 0.3, _coh(3), 400, "jc, rabi", revival=True),
        "b": _run("fig14b", 1, 1, _fock(0), 100, "jc, rabi", n_points=1024, q_max=20),
    },
    "fig15": {
        "omega1": _run("fig15_omega1", 1, 1, _coh(15), 150, "jc, rabi", stride=50, revival=True),
        "omega5": _run("fig15_omega5", 5, 0.3, _coh(15), 400, "jc, rabi", stride=50, revival=True),
    },
    "fig16": {
        "omega1": _run("fig16_omega1", 1, 1, _coh(15), 150, "jc, rabi", stride=50, spectrum=True),
        "omega5": _run("fig16_omega5", 5, 0.3, _coh(15), 400, "jc, rabi", stride=50, spectrum=True),
    },
}


def preset_names():
    return sorted(PRESETS, key=lambda k: int(k[3:]))


def get_preset(name):
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(preset_names())}") from None
