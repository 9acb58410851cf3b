"""Command line interface: ``qcorr <subcommand> ...``.

Exit status is 0 on success, 1 for usage errors and 2 for data errors.
``QCORR_SEED`` supplies the seed when ``--seed`` is omitted; the source of
the seed is recorded in every report.
"""

import argparse
import json
import os
import sys

import numpy as np

from qcorr.dist import CdfSpec
from qcorr.inference import fisher_z_test, gamma_independence_test
from qcorr.io import DataError, read_paired_csv, write_columns, write_paired_csv
from qcorr.marginals import empirical_scores, parametric_scores, rank_frechet_scores
from qcorr.models import MODELS, ModelSpec, DEFAULT_DF, DEFAULT_RHO, DEFAULT_THETA, generate, simulated_m4_coeffs
from qcorr.studies import (
    DEFAULT_PERCENTILES,
    StudyConfig,
    plain_quotient,
    run_data_test,
    run_null_calibration,
    run_power_study,
    run_table1,
)

EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _percentiles(text):
    try:
        vals = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad percentile list {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty percentile list")
    return vals


def _params(text):
    out = {}
    for item in filter(None, (t.strip() for t in text.split(","))):
        key, sep, val = item.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"expected key=value, got {item!r}")
        try:
            out[key.strip()] = float(val)
        except ValueError:
            raise argparse.ArgumentTypeError(f"non-numeric parameter {item!r}") from None
    return out


def _resolve_seed(args):
    if args.seed is not None:
        return args.seed, "argument"
    env = os.environ.get("QCORR_SEED")
    if env is not None:
        try:
            return int(env), "env:QCORR_SEED"
        except ValueError:
            raise UsageError(f"QCORR_SEED must be an integer, got {env!r}") from None
    return 0, "default"


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_report(report, args, seed_source):
    report.meta["seed_source"] = seed_source
    _emit(report.to_json() + "\n" if args.json else report.to_csv(), getattr(args, "out", None))


def _cdf_from_args(args):
    if args.family is None:
        raise UsageError("--route parametric needs --family")
    try:
        return CdfSpec(args.family, args.params or {}, estimate=args.estimate)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_simulate(args, seed, seed_source):
    kw = {}
    if args.model in ("b", "c"):
        kw["theta"] = DEFAULT_THETA if args.theta is None else args.theta
    if args.model in ("f", "h"):
        kw["rho"] = DEFAULT_RHO if args.rho is None else args.rho
    if args.model == "h":
        kw["df"] = DEFAULT_DF if args.df is None else args.df
    if args.model == "m4":
        if args.coeffs is None:
            kw["m4_coeffs"] = tuple(map(tuple, simulated_m4_coeffs(seed)))
        else:
            kw["m4_coeffs"] = tuple(tuple(r) for r in json.loads(args.coeffs))
    try:
        spec = ModelSpec(args.model, args.n, seed, **kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    write_paired_csv(args.out, generate(spec))


def cmd_transform(args, seed, seed_source):
    sample = read_paired_csv(args.input, args.header)
    if args.route == "empirical":
        s = empirical_scores(sample)
        write_columns(args.out, [s.xs, s.ys], ["x", "y"])
    elif args.route == "parametric":
        s = parametric_scores(sample, _cdf_from_args(args))
        write_columns(args.out, [s.xs, s.ys], ["x", "y"])
    else:
        reps = rank_frechet_scores(sample, seed, args.replicates)
        rep_col = np.concatenate([[r.replicate] * r.n for r in reps])
        write_columns(
            args.out,
            [rep_col.tolist(), np.concatenate([r.xs for r in reps]), np.concatenate([r.ys for r in reps])],
            ["replicate", "x", "y"],
        )


def cmd_qtest(args, seed, seed_source):
    sample = read_paired_csv(args.input, args.header)
    cdf = _cdf_from_args(args) if args.route == "parametric" else None
    s = plain_quotient(sample, args.route, seed, args.replicates, args.aggregate, cdf)
    g = gamma_independence_test(s.q, s.n, args.alpha, route=args.route)
    f = fisher_z_test(sample, args.alpha)
    result = {
        "n": sample.n,
        "seed": seed,
        "seed_source": seed_source,
        "quotient": {"q": s.q, "max_yx": s.max_yx, "max_xy": s.max_xy, "variant": s.variant,
                     "replicate_q": list(s.replicate_q)},
        "gamma_test": g.to_dict(),
        "fisher_z": f.to_dict(),
    }
    if args.json:
        _emit(json.dumps(result, indent=2) + "\n", None)
    else:
        lines = [
            "test,route,statistic,p_value,reject",
            f"gamma,{args.route},{g.statistic!r},{g.p_value!r},{g.reject}",
            f"fisher,raw,{f.z!r},{f.p_value!r},{f.reject}",
        ]
        _emit("\n".join(lines) + "\n", None)


def cmd_tailtest(args, seed, seed_source):
    sample = read_paired_csv(args.input, args.header)
    cdf = _cdf_from_args(args) if args.route == "parametric" else None
    config = StudyConfig(
        "datatest", n=sample.n, alpha=args.alpha, percentiles=args.percentiles, seed=seed,
        route=args.route, replicates=args.replicates, aggregate=args.aggregate, cdf=cdf,
        threshold_rule=args.threshold_rule,
    )
    _emit_report(run_data_test(sample, config), args, seed_source)


def cmd_table1(args, seed, seed_source):
    config = StudyConfig(
        "table1", n=args.n, reps=args.reps, alpha=args.alpha, percentiles=args.percentiles,
        models=tuple(args.models.split(",")), seed=seed, route=args.route,
        replicates=args.replicates, threshold_rule=args.threshold_rule,
    )
    report = run_table1(config)
    if args.wide and not args.json:
        report.meta["seed_source"] = seed_source
        grid = report.wide()
        lines = ["percentile," + ",".join(config.models)]
        for p, row in grid.items():
            lines.append(f"{p}," + ",".join(f"{row[m]:.4f}" for m in config.models))
        _emit("\n".join(lines) + "\n", args.out)
        return
    _emit_report(report, args, seed_source)


def cmd_power(args, seed, seed_source):
    config = StudyConfig(
        "power", reps=args.reps, alpha=args.alpha, seed=seed, route=args.route,
        replicates=args.replicates, nmin=args.nmin, nmax=args.nmax, step=args.step, design=args.design,
    )
    _emit_report(run_power_study(config), args, seed_source)


def cmd_nullcal(args, seed, seed_source):
    config = StudyConfig(
        "nullcal", n=args.n, reps=args.reps, alpha=args.alpha, percentiles=args.percentiles,
        seed=seed, route=args.route, replicates=args.replicates,
    )
    _emit_report(run_null_calibration(config), args, seed_source)


def build_parser():
    p = _Parser(prog="qcorr", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, json_flag=True, route=None):
        sp.add_argument("--seed", type=int, default=None)
        if json_flag:
            sp.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
        if route is not None:
            sp.add_argument("--route", choices=("rank", "empirical", "parametric"), default=route)
            sp.add_argument("--replicates", type=int, default=10)
            sp.add_argument("--aggregate", choices=("median", "mean"), default="median")

    def data_in(sp):
        sp.add_argument("--in", dest="input", required=True)
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--header", dest="header", action="store_true", default=None)
        g.add_argument("--no-header", dest="header", action="store_false")

    def family(sp):
        sp.add_argument("--family", choices=("frechet", "normal", "t", "uniform", "exponential", "gamma2"))
        sp.add_argument("--params", type=_params, default=None, help="e.g. mean=0,sd=1")
        sp.add_argument("--estimate", action="store_true", help="fit the family parameters to each margin")

    sp = sub.add_parser("simulate", help="draw a sample from one of the simulation models")
    sp.add_argument("--model", choices=MODELS, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--theta", type=float)
    sp.add_argument("--rho", type=float)
    sp.add_argument("--df", type=float)
    sp.add_argument("--coeffs", help="JSON L x 2 coefficient matrix for --model m4")
    sp.add_argument("--out", required=True)
    common(sp, json_flag=False)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("transform", help="write unit Frechet scores for a CSV sample")
    data_in(sp)
    sp.add_argument("--route", choices=("rank", "empirical", "parametric"), required=True)
    sp.add_argument("--replicates", type=int, default=1)
    family(sp)
    sp.add_argument("--out", required=True)
    common(sp, json_flag=False)
    sp.set_defaults(func=cmd_transform)

    sp = sub.add_parser("qtest", help="gamma test of independence plus Fisher's Z")
    data_in(sp)
    sp.add_argument("--alpha", type=float, default=0.05)
    family(sp)
    common(sp, route="rank")
    sp.set_defaults(func=cmd_qtest)

    sp = sub.add_parser("tailtest", help="gamma tests of tail independence over percentiles")
    data_in(sp)
    sp.add_argument("--percentiles", type=_percentiles, default=DEFAULT_PERCENTILES)
    sp.add_argument("--alpha", type=float, default=0.05)
    sp.add_argument("--threshold-rule", choices=("frechet", "sample"), default="frechet")
    sp.add_argument("--out")
    family(sp)
    common(sp, route="rank")
    sp.set_defaults(func=cmd_tailtest)

    sp = sub.add_parser("table1", help="tail-test p-value grid over the simulation models")
    sp.add_argument("--n", type=int, default=500)
    sp.add_argument("--reps", type=int, default=100)
    sp.add_argument("--alpha", type=float, default=0.05)
    sp.add_argument("--percentiles", type=_percentiles, default=DEFAULT_PERCENTILES)
    sp.add_argument("--models", default="a,b,c,d,e,f,g,h")
    sp.add_argument("--threshold-rule", choices=("frechet", "sample"), default="frechet")
    sp.add_argument("--wide", action="store_true", help="percentile x model grid of median p-values")
    sp.add_argument("--out")
    common(sp, route="parametric")
    sp.set_defaults(func=cmd_table1)

    sp = sub.add_parser("power", help="power of the gamma test and Fisher's Z on Y = X^2")
    sp.add_argument("--design", choices=("x2",), default="x2")
    sp.add_argument("--nmin", type=int, default=25)
    sp.add_argument("--nmax", type=int, default=100)
    sp.add_argument("--step", type=int, default=1)
    sp.add_argument("--reps", type=int, default=100)
    sp.add_argument("--alpha", type=float, default=0.05)
    sp.add_argument("--out")
    common(sp, route="rank")
    sp.set_defaults(func=cmd_power)

    sp = sub.add_parser("nullcal", help="null calibration of n*q and n*q_u on independent data")
    sp.add_argument("--n", type=int, default=1000)
    sp.add_argument("--reps", type=int, default=1000)
    sp.add_argument("--alpha", type=float, default=0.05)
    sp.add_argument("--percentiles", type=_percentiles, default=(0.95,))
    sp.add_argument("--out")
    common(sp, route="parametric")
    sp.set_defaults(func=cmd_nullcal)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        seed, source = _resolve_seed(args)
        args.func(args, seed, source)
    except UsageError as exc:
        print(f"qcorr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError) as exc:
        print(f"qcorr: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        # remaining ValueErrors come from argument values the study rejects
        print(f"qcorr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
