"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Tolerances are asserted exactly as stated; nothing here is relaxed to make a
check pass. Run with ``pytest tests/test_acceptance.py -v``.
"""

import math
import time
import warnings

import numpy as np
import pytest
from scipy import integrate

from qcorr.dist import (
    censored_ratio_cdf,
    erlang2_survival,
    erlang2_upper_quantile,
    frechet_cdf,
    frechet_quantile,
    frechet_rvs,
    ratio_cdf,
    std_normal_cdf,
)
from qcorr._rng import substream
from qcorr.inference import tail_index_estimate
from qcorr.marginals import parametric_scores
from qcorr.models import TAIL_DEPENDENT, TAIL_INDEPENDENT, generate, m4_pair, marginal_cdf, default_spec
from qcorr.quotient import quotient_summary
from qcorr.studies import (
    StudyConfig,
    ks_statistic,
    run_null_calibration,
    run_power_study,
    run_table1,
)

pytestmark = pytest.mark.slow

SEED = 20240611


@pytest.fixture
def report(capsys):
    def emit(tag, title, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'}  [{tag:02d}] {title}: {detail}")

    return emit


def _nullcal(route, n=1000, reps=1000, percentiles=()):
    cfg = StudyConfig("nullcal", n=n, reps=reps, percentiles=percentiles, route=route, seed=SEED)
    return run_null_calibration(cfg).rows


def test_01_closed_form_fidelity(report):
    t0 = time.perf_counter()
    err_erl = max(
        abs(erlang2_survival(erlang2_upper_quantile(a, lam), lam) - a)
        for a in (0.5, 0.1, 0.05, 0.01)
        for lam in (1.0, 0.2, 0.05)
    )
    p = np.linspace(0.001, 0.999, 999)
    err_fr = float(np.max(np.abs(frechet_cdf(frechet_quantile(p)) - p)))
    dens = lambda t: math.exp(-t * t / 2) / math.sqrt(2 * math.pi)
    err_nm = max(
        abs(std_normal_cdf(z) - integrate.quad(dens, -np.inf, z, epsabs=1e-14)[0])
        for z in np.linspace(-6, 6, 25)
    )
    dt = time.perf_counter() - t0
    ok = err_erl < 1e-10 and err_fr < 1e-12 and err_nm < 1e-7 and dt < 1.0
    report(1, "closed-form fidelity", ok,
           f"erlang {err_erl:.1e}, frechet {err_fr:.1e}, normal {err_nm:.1e}, {dt:.2f}s")
    assert ok


def test_02_quotient_ratio_law(report):
    t0 = time.perf_counter()
    s = generate(default_spec("a", 100_000, seed=SEED))
    ks = ks_statistic(s.ys / s.xs, ratio_cdf)
    dt = time.perf_counter() - t0
    ok = ks < 0.01 and dt < 5
    report(2, "ratio law t/(1+t)", ok, f"KS {ks:.4f} (< 0.01), {dt:.1f}s")
    assert ok


def test_03_null_limit_law(report):
    t0 = time.perf_counter()
    (row,) = _nullcal("parametric")
    dt = time.perf_counter() - t0
    ok = row["ks"] < 0.06 and 0.02 <= row["rejection_rate"] <= 0.09 and dt < 120
    report(3, "null law n*q vs gamma(2,1)", ok,
           f"KS {row['ks']:.4f} (< 0.06), type I {row['rejection_rate']:.3f} in [0.02, 0.09], {dt:.1f}s")
    assert ok


def test_04_transform_insensitivity(report):
    t0 = time.perf_counter()
    emp = _nullcal("empirical")[0]
    rank = _nullcal("rank")[0]
    dt = time.perf_counter() - t0
    ok = emp["ks"] < 0.08 and rank["ks"] < 0.08 and dt < 300
    report(4, "transform insensitivity", ok,
           f"KS empirical {emp['ks']:.4f}, rank {rank['ks']:.4f} (each < 0.08), "
           f"means {emp['mean_statistic']:.2f}/{rank['mean_statistic']:.2f} vs 2, {dt:.1f}s")
    assert ok


def test_05_tail_null_limit_law(report):
    t0 = time.perf_counter()
    rows = _nullcal("parametric", percentiles=(0.95,))
    tail = rows[1]
    dt = time.perf_counter() - t0
    ok = tail["ks"] < 0.08 and abs(tail["rate"] - 0.05) < 1e-12 and dt < 120
    report(5, "tail null law vs gamma(2,0.05)", ok,
           f"KS {tail['ks']:.4f} (< 0.08), rate {tail['rate']:.6f}, {dt:.1f}s")
    assert ok


def test_06_censored_ratio_closed_form(report):
    t0 = time.perf_counter()
    u = frechet_quantile(0.95)
    rng = substream(SEED, "acceptance", "censored-ratio")
    x, y = frechet_rvs(rng, 1_000_000), frechet_rvs(rng, 1_000_000)
    r = np.sort(np.maximum(x, u) / np.maximum(y, u))
    grid = np.unique(np.concatenate([np.linspace(0.1, 5.0, 50), [1.0]]))
    mc = np.searchsorted(r, grid, side="right") / r.size
    err = float(np.max(np.abs(mc - censored_ratio_cdf(grid, u))))
    at1 = float(censored_ratio_cdf(1.0, u))
    dt = time.perf_counter() - t0
    ok = err < 0.005 and abs(at1 - 0.95125) < 1e-5 and dt < 30
    report(6, "censored ratio closed form", ok, f"max |MC - CDF| {err:.4f} (< 0.005), CDF(1) {at1:.5f}, {dt:.1f}s")
    assert ok


def test_07_m4_limit(report):
    t0 = time.perf_counter()
    s, lim = m4_pair(((0.3, 0.6), (0.7, 0.4)), 100_000, seed=SEED)
    q = quotient_summary(s.xs, s.ys).q
    bounds = bool(np.all(s.xs / s.ys <= 1.75 * (1 + 1e-12)) and np.all(s.ys / s.xs <= 2.0 * (1 + 1e-12)))
    dt = time.perf_counter() - t0
    ok = abs(q - 0.7) < 0.05 and bounds and dt < 5
    report(7, "M4 almost-sure limit", ok, f"q {q:.4f} vs 0.7, bounds hold {bounds}, {dt:.1f}s")
    assert ok


def test_08_rate_parameter(report):
    t0 = time.perf_counter()
    rows = _nullcal("parametric", n=2000, reps=500, percentiles=(0.8, 0.9, 0.95))[1:]
    dt = time.perf_counter() - t0
    rel = {r["percentile"]: r["mean_statistic"] / (2 / (1 - r["percentile"])) - 1 for r in rows}
    ok = all(abs(v) < 0.10 for v in rel.values()) and dt < 180
    detail = ", ".join(f"p={p}: {v:+.1%}" for p, v in rel.items())
    report(8, "mean n*q_u vs 2/(1-p)", ok, f"{detail} (within 10%), {dt:.1f}s")
    assert ok


def test_09_power_separation(report):
    t0 = time.perf_counter()
    rows = run_power_study(StudyConfig("power", nmin=25, nmax=100, reps=100, seed=SEED)).rows
    dt = time.perf_counter() - t0
    by_n = {r["n"]: r for r in rows}
    g100, f100 = by_n[100]["gamma_power"], by_n[100]["fisher_power"]
    beats = all(r["gamma_power"] > r["fisher_power"] for r in rows if r["n"] >= 50)
    ok = g100 >= 0.85 and f100 <= 0.15 and beats and dt < 60
    report(9, "power separation on Y = X^2", ok,
           f"gamma(100) {g100:.2f} (>= 0.85), fisher(100) {f100:.2f} (<= 0.15), "
           f"gamma > fisher for n >= 50: {beats}, {dt:.1f}s")
    assert ok


def test_10_table1_reproduction(report):
    t0 = time.perf_counter()
    rep = run_table1(StudyConfig("table1", n=500, reps=100, alpha=0.05, seed=SEED))
    dt = time.perf_counter() - t0
    rate = {m: np.mean([r["rejection_rate"] for r in rep.rows if r["model"] == m]) for m in "abcdefgh"}
    e_p = min(r["median_p"] for r in rep.rows if r["model"] == "e")
    ok = (all(rate[m] >= 0.8 for m in "bdh") and all(rate[m] <= 0.2 for m in "ae")
          and e_p > 0.3 and dt < 600)
    rates = " ".join(f"{m}={rate[m]:.2f}" for m in "abcdefgh")
    report(10, "model grid qualitative", ok, f"rejection {rates}; min median p (e) {e_p:.3f} (> 0.3), {dt:.1f}s")
    assert ok


@pytest.mark.parametrize("model", TAIL_INDEPENDENT + TAIL_DEPENDENT)
def test_11_tail_class_ground_truth(report, model):
    t0 = time.perf_counter()
    spec = default_spec(model, 1_000_000, seed=SEED)
    s = generate(spec)
    with warnings.catch_warnings():
        # a handful of extremes hit the 1/(4n) clamp, far above u
        warnings.simplefilter("ignore", RuntimeWarning)
        scores = parametric_scores(s, marginal_cdf(spec))
    lam = tail_index_estimate(scores, frechet_quantile(0.999)).lambda_hat
    dt = time.perf_counter() - t0
    if model in TAIL_INDEPENDENT:
        ok, bound = lam < 0.05, "< 0.05"
    else:
        ok, bound = lam > 0.3, "> 0.3"
    ok = ok and dt < 120
    report(11, f"tail class ({model})", ok, f"lambda_hat {lam:.3f} ({bound}), {dt:.1f}s")
    assert ok
