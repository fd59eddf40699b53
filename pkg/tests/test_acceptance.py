"""Release criteria, each run at its stated tolerance.

One line per criterion is printed and collected in the terminal summary.
"""

import warnings
from dataclasses import replace

import numpy as np
import pytest

from conftest import record
from qplatesim import KernelMode, QPlateSpec, UniaxialMedium, am_report, energy, qplate_propagate, spin_am
from qplatesim.experiments import (
    RunConfig,
    _rel_l2,
    empirical_prefactor,
    exact_crosscheck,
    fit_cosine,
    run_scan,
    run_single,
)
from qplatesim.grid import Grid
from qplatesim.media import K0, propagate_homogeneous
from qplatesim.modes import BeamSpec, JonesVector, LGIndex, make_input_field

HALF_WAVE = 2.5  # k0 * 0.2 * d = pi
BASE = RunConfig()


def cfg_with(cfg=BASE, **params):
    for k, v in params.items():
        cfg = cfg.with_param(k, v)
    return cfg


def d_scan(cfg, steps, start=0.5, stop=10.0):
    return run_scan(replace(cfg, scan=replace(cfg.scan, param="d", start=start, stop=stop, steps=steps)), write=False)


def test_criterion_1_q1_conservation():
    worst = 0.0
    for sigma in (1.0, -1.0):
        for ell in (0, 1):
            rows = d_scan(cfg_with(q=1.0, sigma=sigma, ell=ell), steps=20)
            worst = max(worst, max(abs(r.DwJz) for r in rows))
    assert record(1, worst, 2e-3, worst < 2e-3, "max |dJz| over 4 x 20-point d-scans")


def test_criterion_2_ratio_law():
    worst = 0.0
    for q in (0.5, 1.0, 1.5, 2.0):
        res = run_single(cfg_with(q=q, sigma=1.0, d=HALF_WAVE), write=False)
        assert abs(res.delta.dwSz) > 0.05
        worst = max(worst, abs(res.delta.dwLz / res.delta.dwSz + q) / q)
    assert record(2, worst, 0.01, worst < 0.01, "max relative deviation of dLz/dSz from -q")


def test_criterion_3_modulation_law():
    rows = d_scan(cfg_with(sigma=1.0), steps=40)
    d = np.array([r.value for r in rows])
    ds = np.array([r.DwSz for r in rows])
    dn = abs(BASE.medium.n_o - BASE.medium.n_e)
    _, _, r2 = fit_cosine(d, ds, K0 * dn)
    step = d[1] - d[0]
    # interior local minima of dSz (sigma=+1 gives dSz <= 0)
    idx = [i for i in range(1, len(d) - 1) if ds[i] <= ds[i - 1] and ds[i] <= ds[i + 1]]
    expected = [(2 * m + 1) / (2 * dn) for m in range(3) if (2 * m + 1) / (2 * dn) < d[-1]]
    assert len(idx) == len(expected)
    loc_err = max(abs(d[i] - e) for i, e in zip(idx, expected))
    ok = r2 > 0.999 and loc_err <= step
    assert record(3, 1 - r2, 1e-3, ok, f"R2={r2:.6f}, extremum offset {loc_err:.3g} <= step {step:.3g}")


def test_criterion_4_mode_independence():
    vals = []
    for ell in (0, 1, 2):
        for p in (0, 1):
            for w0 in (50.0, 100.0):
                res = run_single(cfg_with(sigma=1.0, d=HALF_WAVE, ell=ell, p=p, w0=w0), write=False)
                vals.append(res.delta.dwLz)
    vals = np.array(vals)
    spread = (vals.max() - vals.min()) / abs(vals.mean())
    assert record(4, spread, 0.01, spread < 0.01, f"dLz in [{vals.min():.5f}, {vals.max():.5f}] over 12 modes")


def test_criterion_5_linear_polarization():
    worst = 0.0
    for q in (0.5, 1.0, 2.0):
        for ell in (0, 1, 2):
            for d in (1.3, HALF_WAVE):
                res = run_single(cfg_with(q=q, sigma=0.0, ell=ell, d=d), write=False)
                worst = max(worst, abs(res.delta.dwJz), abs(res.report_out.wLz - ell))
    assert record(5, worst, 2e-3, worst < 2e-3, "max of |dJz|, |Lz_out - l|")


def test_criterion_6_isotropic_reduction():
    worst = 0.0
    for q in (0.5, 1.0):
        for d in (2.5, 40.0):
            cfg = cfg_with(q=q, d=d, n_e=BASE.medium.n_o, ell=1)
            res = run_single(cfg, write=False)
            m = cfg.make_medium()
            ref = propagate_homogeneous(res.field_in, 0.0, m.d, m, paraxial=True)
            worst = max(worst, _rel_l2(res.field_out, ref))
    assert record(6, worst, 1e-6, worst < 1e-6, "relative L2 vs component-wise scalar Fresnel")


@pytest.mark.slow
def test_criterion_7_full_conversion():
    n, w0 = 1024, 500.0
    thin_worst = approx_worst = 0.0
    for q in (0.5, 1.0, 1.5, 2.0):
        for sigma in (1.0, -1.0):
            base = replace(BASE, grid=replace(BASE.grid, n=n), kernel="thin")
            base = cfg_with(base, q=q, sigma=sigma, w0=w0, d=HALF_WAVE)
            thin = run_single(base, write=False).report_out
            thin_worst = max(thin_worst, abs(thin.wLz - 2 * sigma * q), abs(thin.wSz + sigma))
            if sigma > 0:
                for d in (HALF_WAVE, 7.5):
                    ap = run_single(replace(cfg_with(base, d=d), kernel="approx"), write=False).report_out
                    approx_worst = max(approx_worst, abs(ap.wLz - 2 * sigma * q), abs(ap.wSz + sigma))
    ok = thin_worst < 2e-3 and approx_worst < 1e-2
    assert record(7, thin_worst, 2e-3, ok, f"thin; approx at w0=500 worst {approx_worst:.3g} <= 1e-2")


def test_criterion_8_kernel_oracle():
    worst = 0.0
    gaps = []
    for dn in (0.01, -0.01, 0.005):
        rel, gap = exact_crosscheck(dn=dn, q=0.0)
        worst = max(worst, rel)
        gaps.append(gap)
    # the direct quadrature must itself be resolved for the comparison to mean anything
    assert max(gaps) < 1e-6
    assert record(8, worst, 1e-3, worst < 1e-3, "uniform axis, n=64, d=50, dx=0.7")


@pytest.mark.xfail(strict=True, reason="astigmatic term is singular at the axis defect; see decisions ledger")
def test_criterion_8_kernel_oracle_patterned_axis():
    rel, _ = exact_crosscheck(dn=0.01, q=0.5)
    print(f"criterion 8 (q=1/2): measured={rel:.4g} bound=1e-3")
    assert rel < 1e-3


def test_criterion_9_numerical_hygiene():
    e_worst = e_thin = spin_gap = 0.0
    for kernel in ("thin", "approx"):
        for q in (0.5, 1.0, 2.0):
            for sigma in (1.0, 0.3):
                res = run_single(replace(cfg_with(q=q, sigma=sigma, ell=1), kernel=kernel), write=False)
                err = abs(res.report_out.energy / res.report_in.energy - 1)
                if kernel == "thin":
                    e_thin = max(e_thin, err)
                else:
                    e_worst = max(e_worst, err)
                spin_gap = max(spin_gap, abs(spin_am(res.field_out, "radial") - spin_am(res.field_out, "density")))
    # small-spacing Fresnel kernels.  Exact: uniform axis on the oracle grid.
    # Patterned axis: approx on a window wide enough to hold the light the
    # defect scatters to wide angles (the n=64 window clips about 1e-3 of it).
    m = UniaxialMedium(1.5, 1.51, 50.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for n, q, mode, method in ((64, 0.0, KernelMode.EXACT, "direct"),
                                   (64, 0.0, KernelMode.APPROX, "direct"),
                                   (128, 0.5, KernelMode.APPROX, "transfer"),
                                   (128, 1.0, KernelMode.APPROX, "transfer"),
                                   (128, 2.0, KernelMode.APPROX, "transfer")):
            g = Grid(n, n / 2 * 0.7)
            f = make_input_field(BeamSpec(LGIndex(0, 0, 5.6), JonesVector.from_sigma(1.0)), g)
            out = qplate_propagate(f, QPlateSpec(q), m, mode, method=method)
            e_worst = max(e_worst, abs(energy(out) / energy(f) - 1))
    l_worst = 0.0
    for ell in range(-3, 4):
        for p in (0, 1):
            g = Grid(256, 464.0)
            r = am_report(make_input_field(BeamSpec(LGIndex(ell, p, 100.0), JonesVector(1, 0)), g))
            l_worst = max(l_worst, abs(r.wLz - ell))
    ok = e_worst < 1e-3 and e_thin < 1e-12 and spin_gap < 1e-3 and l_worst < 1e-4
    detail = f"energy {e_worst:.2g}<=1e-3, thin {e_thin:.2g}<=1e-12, spin gap {spin_gap:.2g}<=1e-3, Lz {l_worst:.2g}<=1e-4"
    assert record(9, max(e_worst, spin_gap), 1e-3, ok, detail)


def test_criterion_10_closed_form_proportionality():
    rows = d_scan(cfg_with(sigma=1.0), steps=40)
    meas = np.array([r.DwSz for r in rows])
    pred = np.array([r.dwSz_closed for r in rows])
    gap = np.max(np.abs(meas / np.max(np.abs(meas)) - pred / np.max(np.abs(pred))))
    c = empirical_prefactor(rows)
    assert np.isfinite(c) and c > 0
    assert record(10, gap, 0.01, gap < 0.01, f"peak-normalized; empirical prefactor {c:.4f}")
