"""Study drivers: model-by-percentile grids, power curves, null calibration and
tests on user data.

Every driver is a pure function of its :class:`StudyConfig`: trial ``t`` of
cell ``c`` draws from a seed derived from ``(config.seed, c, t)``, so rows
never depend on evaluation order.
"""

import csv
import functools
import io
import json
import math
import warnings
from dataclasses import asdict, dataclass, field, replace

import numpy as np
from scipy import special

from qcorr._rng import derive_seed, substream
from qcorr.dist import CdfSpec, GammaRef, frechet_quantile
from qcorr.inference import (
    fisher_z_test,
    gamma_independence_test,
    gamma_tail_test,
)
from qcorr.marginals import (
    PairedSample,
    empirical_scores,
    parametric_scores,
)
from qcorr.models import TABLE1_MODELS, generate, marginal_cdf, default_spec
from qcorr.quotient import (
    rank_quotient_correlation,
    scores_quotient,
    select_threshold,
    tail_quotient_correlation,
    tail_quotient_rank,
)

STUDIES = ("table1", "power", "nullcal", "datatest")
DEFAULT_PERCENTILES = (0.80, 0.825, 0.85, 0.875, 0.90, 0.925, 0.95, 0.975)
THRESHOLD_RULES = ("frechet", "sample")
DEFAULT_ROUTE = {"table1": "parametric", "power": "rank", "nullcal": "parametric", "datatest": "rank"}


@dataclass
class StudyConfig:
    study: str
    n: int = 500
    reps: int = 100
    alpha: float = 0.05
    percentiles: tuple = DEFAULT_PERCENTILES
    models: tuple = TABLE1_MODELS
    seed: int = 0
    route: str | None = None
    replicates: int = 10
    aggregate: str = "median"
    threshold_rule: str = "frechet"
    nmin: int = 25
    nmax: int = 100
    step: int = 1
    design: str = "x2"
    cdf: CdfSpec | None = None

    def __post_init__(self):
        if self.study not in STUDIES:
            raise ValueError(f"unknown study {self.study!r}")
        if self.route is None:
            self.route = DEFAULT_ROUTE[self.study]
        if self.route not in ("rank", "empirical", "parametric"):
            raise ValueError(f"unknown route {self.route!r}")
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        self.percentiles = tuple(float(p) for p in self.percentiles)
        if any(not 0 < p < 1 for p in self.percentiles):
            raise ValueError("percentiles must lie in (0, 1)")
        if list(self.percentiles) != sorted(self.percentiles):
            raise ValueError("percentiles must be sorted ascending")
        if self.threshold_rule not in THRESHOLD_RULES:
            raise ValueError(f"threshold_rule must be one of {THRESHOLD_RULES}")
        self.models = tuple(self.models)

    def to_dict(self):
        d = asdict(self)
        d["cdf"] = None if self.cdf is None else {"family": self.cdf.family, "params": self.cdf.params, "estimate": self.cdf.estimate}
        d["percentiles"] = list(self.percentiles)
        d["models"] = list(self.models)
        return d


@dataclass
class StudyReport:
    study: str
    rows: list
    meta: dict = field(default_factory=dict)

    def columns(self):
        cols = []
        for row in self.rows:
            for k in row:
                if k not in cols:
                    cols.append(k)
        return cols

    def to_csv(self):
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=self.columns(), lineterminator="\n")
        w.writeheader()
        for row in self.rows:
            w.writerow({k: _fmt(v) for k, v in row.items()})
        return buf.getvalue()

    def to_json(self):
        return json.dumps({"study": self.study, "meta": self.meta, "rows": self.rows}, indent=2, default=_json_default)

    def wide(self, value="median_p", row_key="percentile", col_key="model"):
        """Pivot long rows into ``{row: {col: value}}`` (percentile by model grid)."""
        out = {}
        for r in self.rows:
            out.setdefault(r[row_key], {})[r[col_key]] = r[value]
        return out


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    if v is None:
        return ""
    return v


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(f"cannot serialise {type(o).__name__}")


def _meta(config, **extra):
    from qcorr import __version__

    meta = {"config": config.to_dict(), "seed": config.seed, "route": config.route, "version": __version__}
    meta.update(extra)
    return meta


def ks_statistic(sample, cdf):
    """Two-sided Kolmogorov-Smirnov distance between a sample and a CDF.

    ``cdf`` may be a callable, a :class:`~qcorr.dist.CdfSpec` or any object
    with a ``cdf`` method (e.g. :class:`~qcorr.dist.GammaRef`).
    """
    x = np.sort(np.asarray(sample, dtype=np.float64))
    n = x.size
    if n == 0:
        raise ValueError("KS statistic of an empty sample")
    f = cdf.cdf if hasattr(cdf, "cdf") else cdf
    fx = np.asarray(f(x), dtype=np.float64)
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - fx)
    d_minus = np.max(fx - (i - 1) / n)
    return float(max(d_plus, d_minus))


# -- route dispatch ---------------------------------------------------------


def _scores(sample, route, cdf):
    if route == "empirical":
        return empirical_scores(sample)
    if route == "parametric":
        if cdf is None:
            raise ValueError("parametric route needs a marginal CDF")
        if isinstance(cdf, tuple):
            return parametric_scores(sample, *cdf)
        return parametric_scores(sample, cdf)
    raise ValueError(f"route {route!r} does not produce a single score set")


def plain_quotient(sample, route, seed=0, replicates=10, aggregate="median", cdf=None):
    """Quotient correlation of ``sample`` along the chosen marginal route."""
    if route == "rank":
        return rank_quotient_correlation(sample, seed, replicates, aggregate)
    return scores_quotient(_scores(sample, route, cdf))


def tail_quotients(sample, percentiles, route, seed=0, replicates=10, aggregate="median",
                   cdf=None, threshold_rule="frechet"):
    """Tail quotient summaries at each percentile, sharing one score set."""
    if route == "rank":
        if threshold_rule != "frechet":
            raise ValueError("the rank route uses the global Frechet threshold only")
        return [tail_quotient_rank(sample, p, seed, replicates, aggregate) for p in percentiles]
    scores = _scores(sample, route, cdf)
    out = []
    for p in percentiles:
        if threshold_rule == "sample":
            u = select_threshold(scores, p).resolved_u
        else:
            u = frechet_quantile(p)
        out.append(tail_quotient_correlation(scores, u))
    return out


def _tail_test(summary, alpha, route, percentile):
    return gamma_tail_test(
        summary.q, summary.n, summary.threshold, alpha,
        route=route, percentile=percentile, degenerate=summary.degenerate,
    )


# -- drivers ------------------------------------------------------------------


def run_data_test(sample, config):
    """Tail gamma tests at each percentile plus the plain gamma and Fisher tests."""
    if config.study != "datatest":
        raise ValueError("run_data_test needs a datatest config")
    rows = []
    tails = tail_quotients(
        sample, config.percentiles, config.route, config.seed, config.replicates,
        config.aggregate, config.cdf, config.threshold_rule,
    )
    for p, s in zip(config.percentiles, tails):
        rep = _tail_test(s, config.alpha, config.route, p)
        rows.append(_test_row("tail", config.route, p, s.q, rep))
    s = plain_quotient(sample, config.route, config.seed, config.replicates, config.aggregate, config.cdf)
    rep = gamma_independence_test(s.q, s.n, config.alpha, route=config.route)
    rows.append(_test_row("plain", config.route, None, s.q, rep))
    f = fisher_z_test(sample, config.alpha)
    rows.append({
        "test": "fisher", "route": "raw", "percentile": None, "threshold": None, "q": None,
        "statistic": f.z, "rate": None, "p_value": f.p_value, "reject": f.reject, "degenerate": False,
    })
    return StudyReport("datatest", rows, _meta(config, n=sample.n, source=sample.meta.get("source")))


def _test_row(test, route, percentile, q, rep):
    return {
        "test": test, "route": route, "percentile": percentile, "threshold": rep.threshold,
        "q": q, "statistic": rep.statistic, "rate": rep.rate, "p_value": rep.p_value,
        "reject": rep.reject, "degenerate": rep.degenerate,
    }


def _quiet(func):
    # simulated extremes hit the CDF clamp routinely; a warning per trial
    # would drown the output
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            return func(*args, **kwargs)

    return wrapper


def _model_cdf(spec, route):
    return marginal_cdf(spec) if route == "parametric" else None


@_quiet
def run_table1(config):
    """Tail gamma test for each model and percentile over ``reps`` samples.

    Each cell reports the median p-value, the median statistic and the
    rejection rate at ``config.alpha``.
    """
    if config.study != "table1":
        raise ValueError("run_table1 needs a table1 config")
    rows = []
    for m in config.models:
        pvals = np.empty((config.reps, len(config.percentiles)))
        stats = np.empty_like(pvals)
        for t in range(config.reps):
            spec = default_spec(m, config.n, derive_seed(config.seed, "table1", m, t))
            sample = generate(spec)
            tails = tail_quotients(
                sample, config.percentiles, config.route,
                derive_seed(config.seed, "table1-rank", m, t), config.replicates,
                config.aggregate, _model_cdf(spec, config.route), config.threshold_rule,
            )
            for j, (p, s) in enumerate(zip(config.percentiles, tails)):
                rep = _tail_test(s, config.alpha, config.route, p)
                pvals[t, j] = rep.p_value
                stats[t, j] = rep.statistic
        for j, p in enumerate(config.percentiles):
            rows.append({
                "model": m, "percentile": p, "median_p": float(np.median(pvals[:, j])),
                "median_statistic": float(np.median(stats[:, j])),
                "rejection_rate": float(np.mean(pvals[:, j] < config.alpha)), "reps": config.reps,
            })
    return StudyReport("table1", rows, _meta(config))


def _power_sample(design, n, rng):
    if design != "x2":
        raise ValueError(f"unknown power design {design!r}")
    x = rng.standard_normal(n)
    return PairedSample(x, x * x)


def _power_cdf():
    # X ~ N(0, 1) and Y = X**2 ~ chi-square(1)
    return (special.ndtr, lambda y: special.chdtr(1, np.maximum(y, 0.0)))


@_quiet
def run_power_study(config):
    """Empirical power of the gamma test and Fisher's Z on ``Y = X**2``."""
    if config.study != "power":
        raise ValueError("run_power_study needs a power config")
    if config.nmin < 4 or config.nmax < config.nmin or config.step < 1:
        raise ValueError("need 4 <= nmin <= nmax and step >= 1")
    cdf = _power_cdf() if config.route == "parametric" else None
    rows = []
    for n in range(config.nmin, config.nmax + 1, config.step):
        g_rej = f_rej = 0
        for t in range(config.reps):
            sample = _power_sample(config.design, n, substream(config.seed, "power", n, t))
            s = plain_quotient(
                sample, config.route, derive_seed(config.seed, "power-rank", n, t),
                config.replicates, config.aggregate, cdf,
            )
            g_rej += gamma_independence_test(s.q, n, config.alpha).reject
            f_rej += fisher_z_test(sample, config.alpha).reject
        rows.append({
            "n": n, "gamma_power": g_rej / config.reps, "fisher_power": f_rej / config.reps,
            "reps": config.reps,
        })
    return StudyReport("power", rows, _meta(config))


@_quiet
def run_null_calibration(config, routes=None):
    """Null (model a) law of ``n*q`` and ``n*q_u`` against their gamma limits.

    One row per (variant, route, percentile) with the KS distance to the
    gamma reference, the rejection rate at ``alpha`` and the mean
    statistic next to the reference mean ``2/rate``.
    """
    if config.study != "nullcal":
        raise ValueError("run_null_calibration needs a nullcal config")
    routes = (config.route,) if routes is None else tuple(routes)
    rows = []
    for route in routes:
        plain = np.empty(config.reps)
        tail = np.empty((config.reps, len(config.percentiles)))
        rates = None
        for t in range(config.reps):
            spec = default_spec("a", config.n, derive_seed(config.seed, "nullcal", t))
            sample = generate(spec)
            rseed = derive_seed(config.seed, "nullcal-rank", t)
            cdf = CdfSpec("frechet")
            s = plain_quotient(sample, route, rseed, config.replicates, config.aggregate, cdf)
            plain[t] = s.statistic
            if config.percentiles:
                tails = tail_quotients(
                    sample, config.percentiles, route, rseed, config.replicates,
                    config.aggregate, cdf, config.threshold_rule,
                )
                tail[t] = [x.statistic for x in tails]
                if config.threshold_rule == "frechet":
                    rates = [-math.expm1(-1.0 / x.threshold) for x in tails]
        rows.append(_cal_row("plain", route, None, plain, 1.0, config.alpha))
        if config.percentiles and rates is not None:
            for j, p in enumerate(config.percentiles):
                rows.append(_cal_row("tail", route, p, tail[:, j], rates[j], config.alpha))
    return StudyReport("nullcal", rows, _meta(config))


def _cal_row(variant, route, percentile, stats, rate, alpha):
    ref = GammaRef(rate)
    cut = ref.upper_quantile(alpha)
    return {
        "variant": variant, "route": route, "percentile": percentile, "rate": rate,
        "ks": ks_statistic(stats, ref), "rejection_rate": float(np.mean(stats > cut)),
        "mean_statistic": float(np.mean(stats)), "reference_mean": ref.mean, "reps": stats.size,
    }


def with_overrides(config, **kw):
    return replace(config, **{k: v for k, v in kw.items() if v is not None})
