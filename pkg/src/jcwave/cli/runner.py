"""Execute scenarios and write their outputs."""
import multiprocessing
import os
from concurrent.futures import ProcessPoolExecutor
from types import SimpleNamespace

import numpy as np

from .._accel import backend_name
from ..analytic import adiabatic_curves, revival_estimates
from ..classical import manifold_contour, rabi_sheet_energy
from ..errors import EmptyContourError, MeasurementError
from ..models import Model, ModelParams, diabatic_curves
from ..observables import (
    TIMESERIES_COLUMNS,
    default_alpha_lattice,
    find_peaks,
    q_function,
    revival_time_from_autocorrelation,
    revival_time_from_inversion,
    spectrum,
)
from ..propagator import ClassicalState, classical_trajectory, propagate
from ..states import build_initial
from .output import time_tag, write_csv, write_manifest, write_rows, write_summary


def _suffix(scn, label):
    return "" if len(scn.labels) == 1 else f"_{label}"


def _series_columns(series):
    cols = series.columns()
    header = list(TIMESERIES_COLUMNS)
    data = [cols[k] for k in header]
    if series.fidelity is not None:
        header += ["fidelity", "h_cor"]
        data += [series.fidelity, series.h_cor]
    return header, data


def write_series(path, series):
    header, data = _series_columns(series)
    write_csv(path, header, data)


def _simulate(scn, label, grid, psi0, snap_times):
    """Run one labelled model; returns ``{label: (series, snapshots)}``."""
    if label == "adiabatic":
        params = scn.params.with_model(Model.RABI)
        res = propagate(psi0, params, scn.propagation, snap_times, adiabatic_twin=True)
        return {"rabi": (res.series, res.snapshots), "adiabatic": (res.adiabatic_series, res.adiabatic_snapshots)}
    params = scn.params.with_model(Model.parse(label))
    twin = label == "rabi" and "adiabatic" in scn.labels
    res = propagate(psi0, params, scn.propagation, snap_times, adiabatic_twin=twin)
    out = {label: (res.series, res.snapshots)}
    if twin:
        out["adiabatic"] = (res.adiabatic_series, res.adiabatic_snapshots)
    return out


def _revival_items(scn, label, series):
    items = []
    try:
        items.append((f"t_r_autocorrelation{_suffix(scn, label)}",
                      revival_time_from_autocorrelation(series.times, series.autocorrelation)))
    except MeasurementError as exc:
        items.append((f"t_r_autocorrelation{_suffix(scn, label)}", f"nan ({exc})"))
    try:
        items.append((f"t_r_inversion{_suffix(scn, label)}", revival_time_from_inversion(series.times, series.inversion)))
    except MeasurementError as exc:
        items.append((f"t_r_inversion{_suffix(scn, label)}", f"nan ({exc})"))
    return items


def run_scenario(scn, outdir, dt_check=False):
    """Run a ``mode = run`` scenario into ``outdir``; returns summary items."""
    grid = scn.grid()
    psi0 = build_initial(scn.field_spec, scn.atom, grid)
    snap_times = sorted(set(scn.qfunc_times) | set(scn.amplitude_times))
    results = {}
    for label in scn.labels:
        if label in results:
            continue
        results.update(_simulate(scn, label, grid, psi0, snap_times))

    summary = [("scenario", scn.name), ("mode", scn.mode)]
    for label in scn.labels:
        series, snaps = results[label]
        sfx = _suffix(scn, label)
        write_series(os.path.join(outdir, f"timeseries{sfx}.csv"), series)
        for t in scn.qfunc_times:
            fr = _qframe(scn, snaps[t], t)
            aa, bb = np.meshgrid(fr.alpha_re, fr.alpha_im, indexing="ij")
            write_csv(os.path.join(outdir, f"qfunc{sfx}_t{time_tag(t)}.csv"),
                      ["alpha_re", "alpha_im", "Q"], [aa.ravel(), bb.ravel(), fr.q.ravel()])
            summary.append((f"qfunc_blobs{sfx}_t{time_tag(t)}", str(fr.blob_count())))
        for t in scn.amplitude_times:
            ps = snaps[t]
            write_csv(os.path.join(outdir, f"amplitudes{sfx}_t{time_tag(t)}.csv"),
                      ["q", "abs_up", "abs_down"], [grid.q_values, np.abs(ps.up), np.abs(ps.down)])
        if scn.spectrum:
            eps, power = spectrum(series.times, series.autocorrelation)
            write_csv(os.path.join(outdir, f"spectrum{sfx}.csv"), ["epsilon", "power"], [eps, power])
            peaks = [p for p in find_peaks(eps, power) if p.weight >= 0.01]
            summary.append((f"spectrum_peaks{sfx}", " ".join(f"{p.energy:.6f}" for p in peaks)))
        if scn.revival:
            summary += _revival_items(scn, label, series)
    if scn.revival and scn.params.g0 > 0:
        est = revival_estimates(scn.params, scn.field_spec)
        summary += [
            ("t_r_adiabatic", est.t_r_adiabatic),
            ("t_r_standard", est.t_r_standard),
            ("t_r_curvature", est.t_r_numeric_curvature),
            ("adiabatic_estimate_valid", str(est.adiabatic_valid).lower()),
            ("double_well", str(est.double_well).lower()),
        ]
    if dt_check:
        half = scn.propagation.halved()
        label = scn.labels[0]
        params = scn.params.with_model(Model.RABI if label == "adiabatic" else Model.parse(label))
        fine = propagate(psi0, params, half).series
        coarse = results[label][0] if label != "adiabatic" else results["rabi"][0]
        diff = float(np.max(np.abs(fine.inversion - coarse.inversion)))
        summary.append(("dt_check_max_inversion_difference", diff))
    return summary


def _qframe(scn, psi, t):
    radius = scn.qfunc_radius if scn.qfunc_radius is not None else scn.field_spec.radius
    ax, ay = default_alpha_lattice(radius, scn.qfunc_points)
    return q_function(psi, ax, ay, time=t)


# ---------------------------------------------------------------- sweeps


def _sweep_point(args):
    scn, omega, g0 = args
    params = ModelParams(omega, g0, Model.RABI)
    grid = scn.grid()
    psi0 = build_initial(scn.field_spec, scn.atom, grid)
    res = propagate(psi0, params, scn.propagation, adiabatic_twin=True)
    return res.series.times, res.series.fidelity


def run_sweep(scn, outdir, workers=1):
    """Fidelity surface in long format, rows ordered by g0, then omega, then t."""
    tasks = [(scn, om, g) for g in scn.sweep_g0 for om in scn.sweep_omega]
    if workers > 1 and len(tasks) > 1:
        ctx = multiprocessing.get_context("spawn")
        with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
            results = list(pool.map(_sweep_point, tasks))
    else:
        results = [_sweep_point(t) for t in tasks]
    rows = []
    for (_, om, g), (times, fid) in zip(tasks, results):
        rows.extend((g, om, t, f) for t, f in zip(times, fid))
    write_rows(os.path.join(outdir, "fidelity_surface.csv"), ["g0", "omega", "t", "fidelity"], rows)
    mins = [(f"min_fidelity_g0_{g:g}_omega_{om:g}", float(np.min(fid))) for (_, om, g), (_, fid) in zip(tasks, results)]
    return [("scenario", scn.name), ("mode", "sweep"), ("points", str(len(tasks)))] + mins


# ---------------------------------------------------------------- curves and classical modes


def run_curves(scn, outdir):
    q = np.linspace(-scn.curve_q_range, scn.curve_q_range, scn.curve_n)
    summary = [("scenario", scn.name), ("mode", "curves")]
    for k, cs in enumerate(scn.curve_sets):
        params = ModelParams(cs.omega, cs.g0, Model.RABI)
        c = adiabatic_curves(params, q)
        d1, d2 = diabatic_curves(params, SimpleNamespace(q_values=q))
        write_csv(os.path.join(outdir, f"curves_{k}.csv"),
                  ["q", "v_plus", "v_minus", "diabatic_plus_shift", "diabatic_minus_shift", "dtheta", "d2theta"],
                  [q, c.v_plus, c.v_minus, d1, d2, c.dtheta, c.d2theta])
        summary.append((f"curves_{k}", f"omega={cs.omega:g} g0={cs.g0:g}"))
    return summary


def run_classical(scn, outdir):
    summary = [("scenario", scn.name), ("mode", "classical")]
    for sheet in scn.classical_sheets:
        init = ClassicalState(scn.classical_q0, scn.classical_p0, sheet)
        tr = classical_trajectory(init, scn.params, scn.classical_dt, scn.classical_t_final)
        e = tr.energy()
        write_csv(os.path.join(outdir, f"trajectory_{sheet.value}.csv"), ["t", "q", "p", "energy"], [tr.times, tr.q, tr.p, e])
        summary.append((f"energy_excursion_{sheet.value}", float(np.ptp(e))))
        try:
            e0 = float(rabi_sheet_energy(init.q_c, init.p_c, scn.params, sheet))
            man = manifold_contour(e0, sheet, scn.params, scn.contour_samples)
            for i, loop in enumerate(man.loops):
                write_csv(os.path.join(outdir, f"contour_{sheet.value}_{i}.csv"), ["q", "p"], [loop[:, 0], loop[:, 1]])
            summary.append((f"contour_loops_{sheet.value}", str(man.n_loops)))
        except EmptyContourError as exc:
            summary.append((f"contour_loops_{sheet.value}", f"0 ({exc})"))
    return summary


def execute(scn, outdir, workers=1, dt_check=False):
    """Dispatch on ``scn.mode``, then write ``summary.txt`` and ``manifest.txt``."""
    os.makedirs(outdir, exist_ok=True)
    if scn.mode == "run":
        summary = run_scenario(scn, outdir, dt_check)
    elif scn.mode == "sweep":
        summary = run_sweep(scn, outdir, workers)
    elif scn.mode == "curves":
        summary = run_curves(scn, outdir)
    else:
        summary = run_classical(scn, outdir)
    write_summary(os.path.join(outdir, "summary.txt"), summary)
    write_manifest(outdir, scn.config_hash(), "ok", backend_name())
    return summary


def write_failure(scn, outdir, exc):
    """Flush partial records and a FAILED marker after a numerical failure."""
    os.makedirs(outdir, exist_ok=True)
    partial = getattr(exc, "partial", None)
    if partial is not None and len(partial):
        write_series(os.path.join(outdir, "timeseries_partial.csv"), partial)
    with open(os.path.join(outdir, "FAILED"), "w", encoding="utf-8") as fh:
        fh.write(f"{type(exc).__name__}: {exc}\n")
    write_manifest(outdir, scn.config_hash(), "FAILED", backend_name())


__all__ = ["execute", "run_scenario", "run_sweep", "run_curves", "run_classical", "write_failure"]
