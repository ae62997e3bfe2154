"""Command-line front end.

Verbs: walk-entropy, drift, growth, cogrowth, gap-check, guivarch,
theorem-a, boundary-entropy, proximality, lattice-experiment.  Exit
codes: 0 success, 2 parameter or parse error, 3 resource guard tripped,
4 numerical non-convergence.  Reports are deterministic: identical
inputs give byte-identical JSON for any --threads value, so the thread
cap, the output path, and the format are not echoed into the report
body.  GWEL_THREADS overrides --threads.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

from . import boundary, entropy, growth, lattice, measures, parsing, quotients
from .errors import GwelError, ParameterError, ResourceGuardError
from .reports import Report, emit_report

DEFAULT_SEED = 0xD0DD5  # documented default master seed


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: A003 - argparse API
        raise _UsageError(message)


def _add_common(sub, steps_default=None, trials_default=None):
    sub.add_argument("--rank", type=int, default=2, help="free group rank d (default 2)")
    if steps_default is not None:
        sub.add_argument(
            "--steps", type=int, default=steps_default,
            help=f"number of steps (default {steps_default})",
        )
    if trials_default is not None:
        sub.add_argument(
            "--trials", type=int, default=trials_default,
            help=f"number of Monte Carlo trials (default {trials_default})",
        )
    sub.add_argument(
        "--seed", type=int, default=DEFAULT_SEED,
        help=f"master RNG seed (default 0x{DEFAULT_SEED:X})",
    )
    sub.add_argument("--out", default=None, help="output path (default stdout)")
    sub.add_argument(
        "--threads", type=int, default=1,
        help="worker cap; results are byte-identical for any value "
        "(GWEL_THREADS overrides)",
    )
    sub.add_argument(
        "--format", choices=("json", "csv"), default="json",
        help="report format (default json)",
    )


def _add_quotient(sub, required=False):
    sub.add_argument(
        "--quotient", required=required, default=None,
        help="quotient spec: trivial | abelian | relators: w1, w2, ... | "
        "perm: a=(1 2); b=(1 3)",
    )
    sub.add_argument(
        "--max-cosets", type=int, default=quotients.DEFAULT_MAX_COSETS,
        help="coset table guard for relator specs (default 10^6)",
    )


def build_parser() -> _Parser:
    parser = _Parser(
        prog="gwel",
        description="Random-walk, growth, and boundary-entropy laboratory "
        "for free groups and their quotients.  All entropies in nats.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("walk-entropy", help="exact H(mu^k) series")
    _add_common(p, steps_default=50)
    _add_quotient(p)

    p = sub.add_parser("drift", help="Monte Carlo escape rate")
    _add_common(p, steps_default=10000, trials_default=1000)

    p = sub.add_parser("growth", help="exact ball counts of F_d")
    _add_common(p, steps_default=10)

    p = sub.add_parser("cogrowth", help="kernel sphere counts and critical exponent")
    _add_common(p, steps_default=12)
    _add_quotient(p, required=True)
    p.add_argument(
        "--method", choices=("transfer", "brute", "both"), default="transfer",
        help="kernel counting method (default transfer)",
    )

    p = sub.add_parser("gap-check", help="entropy gap vs critical exponent")
    _add_common(p, steps_default=6)
    _add_quotient(p, required=True)

    p = sub.add_parser("guivarch", help="h <= drift * growth cross-check")
    _add_common(p, steps_default=10000, trials_default=1000)

    p = sub.add_parser("theorem-a", help="boundary-family entropy bound value")
    _add_common(p)

    p = sub.add_parser("boundary-entropy", help="exact Furstenberg entropy of (srw, nu)")
    _add_common(p)

    p = sub.add_parser("proximality", help="pushed prefix-cylinder masses along walks")
    _add_common(p, steps_default=50, trials_default=10)
    p.add_argument(
        "--prefix-depth", type=int, default=3,
        help="cylinder prefix depth k (default 3)",
    )

    p = sub.add_parser("lattice-experiment", help="partition chain limits on a finite space")
    _add_common(p)
    p.add_argument("--config", required=True, help="flat key-value config file")

    return parser


def _resolve_threads(args) -> int:
    env = os.environ.get("GWEL_THREADS")
    if env is not None:
        try:
            val = int(env)
        except ValueError:
            raise ParameterError(f"GWEL_THREADS must be an integer, got {env!r}") from None
    else:
        val = args.threads
    if val < 1:
        raise ParameterError("thread count must be >= 1")
    return val


def _quotient_rep(args):
    return parsing.resolve_quotient_spec(
        args.quotient, args.rank, max_cosets=args.max_cosets
    )


def _entropy_series_payload(series: entropy.EntropySeries):
    rows = [[k, h, hn, inc] for k, h, hn, inc in series.rows()]
    return {"columns": ["n", "H", "H_over_n", "increment"], "rows": rows}


def _cmd_walk_entropy(args) -> Report:
    d = args.rank
    params = {"rank": d, "steps": args.steps, "quotient": args.quotient}
    if args.quotient is None:
        series = entropy.radial_entropy_exact(d, args.steps)
        label = f"free group F_{d}"
    else:
        rep = _quotient_rep(args)
        series = entropy.quotient_entropy_dp(rep, args.steps)
        label = parsing.describe_quotient_spec(rep)
    summary = {
        "walk_on": label,
        "h_rw_exact": entropy.exact_free_entropy(d),
        "last_H_over_n": series.h_over_n()[-1] if series.values else None,
        "last_increment": series.increments()[-1] if series.values else None,
        "last_increments": series.last_increments(5),
    }
    return Report(
        command="walk-entropy",
        params=params,
        seed=args.seed,
        series=_entropy_series_payload(series),
        summary=summary,
    )


def _cmd_drift(args) -> Report:
    d = args.rank
    est = entropy.drift_mc(d, args.steps, args.trials, args.seed)
    exact = entropy.exact_drift(d)
    err = abs(est.estimate - exact)
    summary = {
        "estimate": est.estimate,
        "stderr": est.stderr,
        "exact_drift": exact,
        "abs_error": err,
        "within_three_stderr": bool(err <= 3 * est.stderr),
    }
    return Report(
        command="drift",
        params={"rank": d, "steps": args.steps, "trials": args.trials},
        seed=args.seed,
        series={
            "columns": ["steps", "estimate", "stderr"],
            "rows": [[est.steps, est.estimate, est.stderr]],
        },
        summary=summary,
    )


def _cmd_growth(args) -> Report:
    d = args.rank
    series = growth.ball_counts(d, args.steps)
    rows = [[n, c, r] for n, c, r in series.rows()]
    return Report(
        command="growth",
        params={"rank": d, "steps": args.steps},
        seed=args.seed,
        series={"columns": ["n", "count", "log_count_over_n"], "rows": rows},
        summary={
            "count_normalization": "ball",
            "growth_rate_exact": math.log(2 * d - 1),
            "last_log_count_over_n": series.last_ratio(),
        },
    )


def _cmd_cogrowth(args) -> Report:
    d = args.rank
    rep = _quotient_rep(args)
    params = {
        "rank": d,
        "steps": args.steps,
        "quotient": args.quotient,
        "method": args.method,
    }
    if isinstance(rep, quotients.AbelianRep):
        counts = growth.abelian_zero_sphere_counts(d, args.steps, work_budget=5 * 10**7)
        if len(counts) < args.steps + 1:
            raise ResourceGuardError(
                f"abelian kernel sphere DP exceeds work budget beyond radius "
                f"{len(counts) - 1}; lower --steps"
            )
        series = growth.GrowthSeries(d, "kernel", tuple(counts))
        if args.method in ("brute", "both"):
            brute = growth.kernel_sphere_counts(d, rep, args.steps, method="brute")
            if brute.counts != series.counts:
                raise GwelError("abelian transfer and brute kernel counts disagree")
        delta = growth.grigorchuk_delta(1.0, d)
        delta_method = "amenable-endpoint prediction at spectral radius 1"
    else:
        series = growth.kernel_sphere_counts(d, rep, args.steps, method=args.method)
        delta = growth.critical_exponent(d, rep)
        delta_method = "transfer-matrix power iteration"
    rows = [[n, c, r] for n, c, r in series.rows()]
    bound = growth.half_growth_bound(d)
    return Report(
        command="cogrowth",
        params=params,
        seed=args.seed,
        series={"columns": ["n", "count", "log_count_over_n"], "rows": rows},
        summary={
            "count_normalization": "kernel-sphere",
            "quotient": parsing.describe_quotient_spec(rep),
            "delta": delta,
            "delta_method": delta_method,
            "half_growth_bound": bound,
            "bound_holds": bool(delta >= bound - 1e-9),
            "growth_rate_exact": math.log(2 * d - 1),
        },
    )


def _cmd_gap_check(args) -> Report:
    d = args.rank
    rep = _quotient_rep(args)
    rpt = entropy.entropy_gap_check(d, rep, args.steps)
    rows = [
        [r.k, r.h_free, r.h_quotient, r.gap, r.gap_over_k,
         r.coset_bound, r.log_ball_k, r.log_ball_2k]
        for r in rpt.rows
    ]
    return Report(
        command="gap-check",
        params={"rank": d, "steps": args.steps, "quotient": args.quotient},
        seed=args.seed,
        series={
            "columns": [
                "k", "h_free", "h_quotient", "gap", "gap_over_k",
                "coset_bound", "log_ball_k", "log_ball_2k",
            ],
            "rows": rows,
        },
        summary={
            "quotient": rpt.quotient,
            "h_rw_exact": rpt.h_rw,
            "h_quotient_limit": rpt.h_quotient_limit,
            "h_quotient_reason": rpt.h_quotient_reason,
            "delta": rpt.delta,
            "delta_source": rpt.delta_source,
            "gap_limit": rpt.gap_limit,
            "lemma_holds": rpt.lemma_holds,
        },
        warnings=list(rpt.warnings),
    )


def _cmd_guivarch(args) -> Report:
    d = args.rank
    h = entropy.exact_free_entropy(d)
    v = math.log(2 * d - 1)
    est = entropy.drift_mc(d, args.steps, args.trials, args.seed)
    # drift is a Monte Carlo estimate, so the inequality is judged at 3 SE
    chk = entropy.guivarch_check(h, est.estimate, v, tol=3 * est.stderr * v)
    return Report(
        command="guivarch",
        params={"rank": d, "steps": args.steps, "trials": args.trials},
        seed=args.seed,
        series={
            "columns": ["h_exact", "drift_estimate", "v_exact", "product", "residual"],
            "rows": [[chk.h, chk.drift, chk.v, chk.product, chk.residual]],
        },
        summary={
            "h_exact": h,
            "v_exact": v,
            "drift_estimate": est.estimate,
            "drift_stderr": est.stderr,
            "drift_exact": entropy.exact_drift(d),
            "product": chk.product,
            "residual": chk.residual,
            "holds_within_3se": chk.holds,
        },
    )


def _cmd_theorem_a(args) -> Report:
    d = args.rank
    bound = entropy.theorem_a_bound(d)
    coeff = entropy.theorem_a_coefficient(d)
    from fractions import Fraction

    return Report(
        command="theorem-a",
        params={"rank": d},
        seed=args.seed,
        series={"columns": ["d", "bound"], "rows": [[d, bound]]},
        summary={
            "bound": bound,
            "coefficient_of_h_rw": Fraction(d - 2, 2 * d - 2),
            "coefficient_of_log": coeff,
            "h_rw_exact": entropy.exact_free_entropy(d),
            "note": "bound = (d-2)/(2d-2) * h_RW, h_RW = (d-1)/d * log(2d-1)",
        },
    )


def _cmd_boundary_entropy(args) -> Report:
    d = args.rank
    mu = measures.srw(d)
    coeff = boundary.boundary_entropy_coefficient(d, mu)
    h = boundary.boundary_entropy(d, mu)
    rows = []
    for g in sorted(mu.support(), key=lambda w: w.sort_key()):
        c = boundary.kl_coefficient(d, g)
        rows.append([str(g), float(c), float(c) * math.log(2 * d - 1)])
    h_rw = entropy.exact_free_entropy(d)
    return Report(
        command="boundary-entropy",
        params={"rank": d},
        seed=args.seed,
        series={"columns": ["generator", "kl_coefficient", "kl_nats"], "rows": rows},
        summary={
            "h_nats": h,
            "coefficient": coeff,
            "log_base": "nats (factor log(2d-1))",
            "h_rw_exact": h_rw,
            "matches_h_rw_exact": bool(h == h_rw),
            "convention": "integrand is -log d(g^-1 nu)/d nu; symmetric srw "
            "makes the value orientation-independent",
        },
    )


def _cmd_proximality(args) -> Report:
    d = args.rank
    rpt = boundary.proximality_sim(
        d, args.steps, args.prefix_depth, args.seed, trials=args.trials
    )
    rows = [
        [r.trial, r.step, r.length, r.mass, r.shallow] for r in rpt.rows
    ]
    finals = [m for m in rpt.final_masses() if m is not None]
    return Report(
        command="proximality",
        params={
            "rank": d,
            "steps": args.steps,
            "prefix_depth": args.prefix_depth,
            "trials": args.trials,
        },
        seed=args.seed,
        series={
            "columns": ["trial", "step", "length", "mass", "shallow"],
            "rows": rows,
        },
        summary={
            "final_mass_min": min(finals) if finals else None,
            "final_mass_max": max(finals) if finals else None,
            "skipped_rows": sum(1 for r in rpt.rows if r.mass is None),
            "shallow_rows": sum(1 for r in rpt.rows if r.shallow),
            "mass_formula": "1 - (1/(2d)) (2d-1)^-(L-k), exact per step",
        },
    )


def _cmd_lattice_experiment(args) -> Report:
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ParameterError(f"cannot read config {args.config}: {e}") from None
    cfg = parsing.parse_lattice_config(text)
    rpt = lattice.monotone_chain_limit(
        cfg.space, cfg.chain, cfg.direction, action=cfg.action
    )
    rows = []
    for i, part in enumerate(cfg.chain):
        func = rpt.functionals[i] if rpt.functionals is not None else None
        rows.append([i, part.n_blocks, rpt.distances[i], func])
    return Report(
        command="lattice-experiment",
        params={"config": args.config, "direction": cfg.direction,
                "points": cfg.space.m},
        seed=args.seed,
        series={
            "columns": ["step", "blocks", "l2_to_limit", "functional"],
            "rows": rows,
        },
        summary={
            "limit_blocks": rpt.limit.n_blocks,
            "stabilized_at": rpt.stabilized_at,
            "distances_non_increasing": rpt.distances_non_increasing,
            "functional_monotone": rpt.functional_monotone,
            "functional_limit": rpt.functional_limit,
        },
    )


_HANDLERS = {
    "walk-entropy": _cmd_walk_entropy,
    "drift": _cmd_drift,
    "growth": _cmd_growth,
    "cogrowth": _cmd_cogrowth,
    "gap-check": _cmd_gap_check,
    "guivarch": _cmd_guivarch,
    "theorem-a": _cmd_theorem_a,
    "boundary-entropy": _cmd_boundary_entropy,
    "proximality": _cmd_proximality,
    "lattice-experiment": _cmd_lattice_experiment,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    try:
        _resolve_threads(args)  # validated; all operations are deterministic
        report = _HANDLERS[args.verb](args)
        emit_report(report, fmt=args.format, out=args.out)
    except GwelError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
