"""Acceptance criteria, one test per criterion, each logging a PASS/FAIL line."""

import math
import time

import numpy as np
import pytest

from squeezed_dsp import double_lambda as dl
from squeezed_dsp import single_lambda as sl
from squeezed_dsp import validation as v
from squeezed_dsp.dynamics import ControlSchedule, evolve
from squeezed_dsp.gaussian import SqueezeSpec
from squeezed_dsp.scan import PRESETS, Axis, GridSpec, sweep

ORACLE_POINTS = 1000
IDENTITY_POINTS = 10_000
EXCLUSION_SAMPLES = 100_000
DEGENERATE_POINTS = 1000

CLOSED_TOL = 1e-12
FOCK_FLAT_TOL = 1e-6
IDENTITY_TOL = 1e-12
BOUNDARY_TOL = 1e-10
EXACT_TOL = 1e-15


def _oracle_points(seed):
    rng = np.random.default_rng(seed)
    single = [v.random_single_params(rng) for _ in range(ORACLE_POINTS)]
    double = [v.random_double_params(rng) for _ in range(ORACLE_POINTS)]
    return single, double


@pytest.fixture(scope="module")
def fock_comparison():
    """Gaussian vs Fock mode statistics at d=40 (2 modes) and d=20 (3 modes)."""
    single, double = _oracle_points(2024)
    start = time.perf_counter()
    rows = []
    for points, cutoff in ((single, 40), (double, 20)):
        for params, spec in points:
            gq = v.gaussian_quadratures(params, spec)
            fq, tail = v.fock_quadratures(params, spec, cutoff, max_tail=math.inf)
            dev, _ = v.quadrature_deviation(gq, fq)
            rows.append((params, spec, cutoff, dev, tail))
    return rows, time.perf_counter() - start


def test_1a_closed_forms_match_gaussian(acceptance_log):
    single, double = _oracle_points(2024)
    worst, where = 0.0, ""
    for params, spec in single + double:
        dev, name = v.max_deviation(v.closed_form_report(params, spec), v.gaussian_report(params, spec))
        if dev > worst:
            worst, where = dev, name
    ok = acceptance_log(
        "1a closed forms vs Gaussian (2x1000 pts)",
        worst <= CLOSED_TOL,
        f"max |dev| = {worst:.2e} ({where}), tol {CLOSED_TOL:g}",
    )
    assert ok


def test_1b_gaussian_matches_fock_flat(acceptance_log, fock_comparison):
    rows, elapsed = fock_comparison
    bad = [(p, s, d, dev, tail) for p, s, d, dev, tail in rows if dev > FOCK_FLAT_TOL]
    worst = max(rows, key=lambda row: row[3])
    ok = acceptance_log(
        "1b Gaussian vs Fock, flat 1e-6 (d=40/d=20)",
        not bad and elapsed < 300,
        f"{len(bad)}/{len(rows)} points above tol; worst {worst[3]:.2e} at r={worst[1].r:.3f} "
        f"(d={worst[2]}, tail {worst[4]:.1e}); {elapsed:.0f} s",
    )
    assert ok


def test_1c_gaussian_matches_fock_tail_scaled(acceptance_log, fock_comparison):
    rows, _ = fock_comparison
    ratios = [dev / v.fock_tail_tolerance(tail, d) for _, _, d, dev, tail in rows]
    ok = acceptance_log(
        "1c Gaussian vs Fock, tail-scaled bound",
        max(ratios) <= 1.0,
        f"max dev / max(1e-6, 6 (d+20) tail) = {max(ratios):.2f}",
    )
    assert ok


def test_2_identity_suite(acceptance_log):
    rng = np.random.default_rng(7)
    worst = {"reconstruction": 0.0, "ic_vs_f": 0.0, "vvc": 0.0, "reduction": 0.0}
    for _ in range(IDENTITY_POINTS):
        spec = SqueezeSpec(rng.uniform(0, 1.2), rng.uniform(0, 2 * math.pi))
        n = rng.uniform(1, 100)
        x = rng.uniform(0, 10)
        vx, vy = sl.input_variances(spec)
        sp = sl.SingleLambdaParams(x, n)
        srep = sl.single_lambda_report(sp, spec)
        dp = dl.DoubleLambdaParams(rng.uniform(0, 10), rng.uniform(0, 10), n)
        drep = dl.double_lambda_report(dp, spec)
        worst["reconstruction"] = max(
            worst["reconstruction"],
            abs(sl.polariton_reconstruction(srep, sp, "x") - vx),
            abs(sl.polariton_reconstruction(srep, sp, "y") - vy),
            abs(dl.polariton_reconstruction(drep, dp, "x") - vx),
            abs(dl.polariton_reconstruction(drep, dp, "y") - vy),
        )
        bound = 2 + 2 / n
        worst["ic_vs_f"] = max(worst["ic_vs_f"], abs((srep.ic_normalized - 1) * bound - 4 * srep.f_value / (x * x + n)))
        worst["vvc"] = max(worst["vvc"], abs(srep.v_total - srep.v_cs - srep.c_corr - (srep.ic_normalized * bound - bound)))
        red = dl.double_lambda_report(dl.DoubleLambdaParams(x, 0, n), spec)
        pairs = [
            (red.var_x_1, srep.var_x_field), (red.var_y_1, srep.var_y_field),
            (red.var_x_atom, srep.var_x_atom), (red.var_y_atom, srep.var_y_atom),
            (red.corr_x_1s, srep.corr_x), (red.corr_y_1s, srep.corr_y),
            (red.g1, srep.f_value), (red.ic_fa1, srep.ic_normalized), (red.theta, srep.theta),
        ]  # fmt: skip
        worst["reduction"] = max(worst["reduction"], max(abs(a - b) for a, b in pairs))
    detail = ", ".join(f"{k} {val:.1e}" for k, val in worst.items())
    ok = acceptance_log("2 identity suite (4x10^4 checks)", max(worst.values()) <= IDENTITY_TOL, detail)
    assert ok


def _boundary_residuals():
    worst, checked = 0.0, 0
    for r in (0.5, 1.0, 2.0):
        for delta in (0.0, math.pi):
            spec = SqueezeSpec(r, delta)
            window = sl.entanglement_window(spec)
            if window:
                for b in window:
                    worst = max(worst, abs(sl.f_function(sl.SingleLambdaParams(b, 10), spec)), abs(dl.g_function(b, spec)))
                    checked += 2
            wedge = dl.field_field_wedge(spec)
            if wedge:
                for slope in wedge:
                    for y1 in (0.5, 1.0, 3.0):
                        worst = max(worst, abs(dl.h_function(dl.DoubleLambdaParams(y1, slope * y1, 10), spec)))
                        checked += 1
    return worst, checked


def test_3_region_boundaries(acceptance_log):
    worst, checked = _boundary_residuals()
    details, ok = [f"|F|,|G|,|H| on boundaries <= {worst:.1e} ({checked} checks)"], worst <= BOUNDARY_TOL
    for name in ("fig3d", "fig7a", "fig7b", "fig7c", "fig7d"):
        start = time.perf_counter()
        res = PRESETS[name].run()
        elapsed = time.perf_counter() - start
        agree = res.agreement
        ok = ok and agree == 1.0 and elapsed < 60 and min(res.grid.shape) >= 200
        details.append(f"{name} {100 * agree:.0f}% in {elapsed:.1f} s")
    ok = acceptance_log("3 region boundaries and masks", ok, "; ".join(details))
    assert ok


def test_4_figure_datasets(acceptance_log):
    ok, details = True, []
    fig2 = PRESETS["fig2"].run()
    n = fig2.grid.fixed["n_atoms"]
    x_axis = fig2.grid.axes[1]
    step = (x_axis.max - x_axis.min) / (x_axis.count - 1)
    for j, r in enumerate(fig2.grid.axes[0].values()):
        block = slice(j * x_axis.count, (j + 1) * x_axis.count)
        xs, vals = fig2.column("x")[block], fig2.column("corr_x")[block]
        peak_x = xs[np.argmax(vals)]
        spec = SqueezeSpec(r, 0.0)
        formula = (1 - sl.input_variances(spec)[0]) / (2 * math.sqrt(n))
        at_peak = sl.field_atom_correlation(sl.SingleLambdaParams(math.sqrt(n), n), spec)[0]
        ok = ok and abs(peak_x - math.sqrt(n)) <= step and abs(formula - at_peak) <= 1e-12
        details.append(f"r={r:g} peak at {peak_x:.3f} (|formula-closed| {abs(formula - at_peak):.0e})")
    fig6 = PRESETS["fig6"].run()
    values = fig6.column("corr_x_12")
    ends = sweep(GridSpec("double", (Axis("r", 0.5, 1.5, 3), Axis("y1", 0.0, 1e3, 2)), {"y2": 1, "n_atoms": 10, "delta": 0}), "corr_x_12")
    end_vals = np.abs(ends.column("corr_x_12"))
    ok = ok and bool(np.all(values <= 0)) and bool(np.all(end_vals < 1e-3))
    details.append(f"fig6 max {values.max():.1e}, |ends| <= {end_vals.max():.1e}")
    ok = acceptance_log("4 figure datasets (fig2, fig6)", ok, "; ".join(details))
    assert ok


def test_5_tripartite_exclusion(acceptance_log):
    rng = np.random.default_rng(11)
    start = time.perf_counter()
    hits = 0
    for _ in range(EXCLUSION_SAMPLES):
        params = dl.DoubleLambdaParams(rng.uniform(0, 10), rng.uniform(0, 10), rng.uniform(1, 100))
        spec = SqueezeSpec(rng.uniform(1e-9, 3.0), rng.uniform(0, 2 * math.pi))
        s = dl.tripartite_coexistence(params, spec)
        hits += (s["g1_neg"] or s["g2_neg"]) and s["h_neg"]
    elapsed = time.perf_counter() - start
    ok = acceptance_log("5 tripartite exclusion (10^5 samples)", hits == 0 and elapsed < 10, f"{hits} co-occurrences in {elapsed:.1f} s")
    assert ok


def test_6_dynamics(acceptance_log):
    n, spec = 10.0, SqueezeSpec(1.0, 0.0)
    sched = ControlSchedule.ramp_hold_ramp(3.0, 1.0, 1.0)
    traj = evolve(sched, n, spec, np.linspace(0, 3, 301))
    vx = sl.input_variances(spec)[0]
    drift = max(abs(sl.polariton_reconstruction(row.report, sl.SingleLambdaParams(row.x, n)) - vx) for row in traj.rows)
    first, last = traj.rows[0].report.as_dict(), traj.rows[-1].report.as_dict()
    retrieval = max(abs(first[k] - last[k]) for k in first)
    stored = [row.report.var_x_atom for row in traj.rows if row.x == 0]
    exact = bool(stored) and all(a == vx / n for a in stored)
    ok = drift <= 1e-12 and retrieval <= 1e-12 and exact
    detail = f"polariton drift {drift:.1e}, retrieval diff {retrieval:.1e}, stored = dX_in^2/N exactly: {exact}"
    ok = acceptance_log("6 storage and retrieval", ok, detail)
    assert ok


def test_7_degenerate_inputs(acceptance_log):
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(DEGENERATE_POINTS):
        spec = SqueezeSpec(0.0, rng.uniform(0, 2 * math.pi))
        n = rng.uniform(1, 100)
        s = sl.single_lambda_report(sl.SingleLambdaParams(rng.uniform(0, 10), n), spec)
        d = dl.double_lambda_report(dl.DoubleLambdaParams(rng.uniform(0, 10), rng.uniform(0, 10), n), spec)
        zeros = [s.corr_x, s.corr_y, s.f_value, d.corr_x_12, d.corr_x_1s, d.corr_x_2s, d.corr_y_12, d.corr_y_1s, d.corr_y_2s, d.g1, d.g2, d.h]
        ones = [s.ic_normalized, d.ic_fa1, d.ic_fa2, d.ic_ff]
        worst = max(worst, max(abs(z) for z in zeros), max(abs(o - 1) for o in ones))
    ok = acceptance_log("7 degenerate r = 0 inputs (10^3 points)", worst <= EXACT_TOL, f"max deviation {worst:.1e}")
    assert ok
