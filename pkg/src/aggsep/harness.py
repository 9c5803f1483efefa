"""Separation harness: runs the aggregators, collects cuts and metrics."""

from dataclasses import dataclass, field

import numpy as np

from .aggregate import ZERO_TOL
from .cmir import DEFAULT_VIOLATION_THRESHOLD, separate_on_aggregation
from .errors import ContractViolation, LpFailure
from .lasso import LassoConfig, lasso_aggregate
from .lp import INFEASIBLE, LpProblem, OPTIMAL, UNBOUNDED, solve_lp
from .mw import mw_aggregate
from .preprocess import MODE_NORMAL_ROWS, MODE_UNIFIED, PreprocessConfig, preprocess

POLICY_ALL = "all-useful"
POLICY_TOP = "top-k-by-score"
POLICY_NAMED = "named"


@dataclass
class RunConfig:
    algorithm: str = "both"  # 'mw' | 'lasso' | 'both'
    maxaggr: int = 6
    density_threshold: float = 0.0
    max_bad_vars: int = 50
    max_useful_rows: int = 5000
    start_policy: str = POLICY_TOP
    start_k: int = 20
    start_names: tuple = ()
    seed: int = 0
    violation_threshold: float = DEFAULT_VIOLATION_THRESHOLD

    def algorithms(self):
        if self.algorithm == "both":
            return ("mw", "lasso")
        if self.algorithm in ("mw", "lasso"):
            return (self.algorithm,)
        raise ContractViolation("unknown algorithm %r" % self.algorithm)


@dataclass
class SparsityMetrics:
    bad_cols: float = 0.0  # mean residual bad columns per aggregated row
    total_bad_cols: float = 0.0  # mean distinct bad columns across used rows
    ratio: float = None  # bad_cols / total_bad_cols, None if undefined
    used_rows: float = 0.0  # mean active-factor count
    n_aggregations: int = 0
    empty: bool = True


@dataclass
class RunResult:
    cuts: list = field(default_factory=list)
    metrics: dict = field(default_factory=dict)  # algorithm -> SparsityMetrics
    aggregations: dict = field(default_factory=dict)  # algorithm -> [AggregationResult]
    diagnostics: list = field(default_factory=list)
    nothing_to_do: bool = False


def sparsity_metrics(aggregations, ctx):
    """Means over the emitted aggregations, Table-2 style arithmetic."""
    if not aggregations:
        return SparsityMetrics()
    A = ctx.instance.matrix
    bad = ctx.bad_vars
    res_counts = []
    tot_counts = []
    used_counts = []
    for agg in aggregations:
        res_counts.append(len(agg.residual_bad))
        touched = set()
        for i in agg.used_rows:
            for j in bad:
                if A[i, j] != 0.0:
                    touched.add(int(j))
        tot_counts.append(len(touched))
        used_counts.append(len(agg.used_rows))
    mean_bad = float(np.mean(res_counts))
    mean_tot = float(np.mean(tot_counts))
    return SparsityMetrics(
        bad_cols=mean_bad,
        total_bad_cols=mean_tot,
        ratio=(mean_bad / mean_tot) if mean_tot > 0 else None,
        used_rows=float(np.mean(used_counts)),
        n_aggregations=len(aggregations),
        empty=False,
    )


def _starting_rows(ctx, config):
    rows = [int(i) for i in ctx.useful_rows]
    if config.start_policy == POLICY_ALL:
        return rows
    if config.start_policy == POLICY_TOP:
        return rows[: config.start_k]
    if config.start_policy == POLICY_NAMED:
        index = ctx.instance.row_index
        out = []
        for name in config.start_names:
            if name not in index:
                raise ContractViolation("unknown starting row %r" % name)
            i = index[name]
            if i in rows:
                out.append(i)
        return out
    raise ContractViolation("unknown starting-row policy %r" % config.start_policy)


def run_separation(instance, point, config=None, duals=None):
    """One separation round over the configured starting rows.

    Deterministic for fixed inputs; per-starting-row LP failures become
    diagnostics and the run continues.
    """
    config = config or RunConfig()
    result = RunResult()
    contexts = {}

    for algo in config.algorithms():
        mode = MODE_UNIFIED if algo == "lasso" else MODE_NORMAL_ROWS
        if mode not in contexts:
            contexts[mode] = preprocess(
                instance,
                point,
                duals,
                PreprocessConfig(config.max_bad_vars, config.max_useful_rows, mode),
            )
        ctx = contexts[mode]
        aggs = []
        cuts = []
        if ctx.nothing_to_do:
            result.metrics[algo] = SparsityMetrics()
            result.aggregations[algo] = []
            result.diagnostics.append("%s: nothing to do (no bad variables)" % algo)
            continue
        used_rows = set()
        counter = [0]

        def on_aggregation(agg, _cuts=cuts, _ctx=ctx, _algo=algo):
            counter[0] += 1
            cut = separate_on_aggregation(
                agg, _ctx, config.violation_threshold,
                cut_name="%s_%d" % (_algo, counter[0]),
            )
            if cut is not None:
                _cuts.append(cut)

        for i0 in _starting_rows(ctx, config):
            if i0 in used_rows:
                continue  # already used inside an earlier aggregation
            try:
                if algo == "mw":
                    emitted = mw_aggregate(ctx, i0, config.maxaggr, on_aggregation)
                else:
                    cfg = LassoConfig(
                        maxaggr=config.maxaggr,
                        density_threshold=config.density_threshold,
                    )
                    emitted = lasso_aggregate(ctx, i0, cfg, on_aggregation)
            except LpFailure as exc:
                result.diagnostics.append(
                    "%s: starting row %s skipped: %s"
                    % (algo, instance.rows[i0].name, exc)
                )
                continue
            aggs.extend(emitted)
            for agg in emitted:
                used_rows.update(agg.used_rows)
        result.aggregations[algo] = aggs
        result.metrics[algo] = sparsity_metrics(aggs, ctx)
        result.cuts.extend(cuts)

    if all(m.empty for m in result.metrics.values()):
        result.nothing_to_do = True
    return result


def instance_lp(instance):
    """LP relaxation of a normalized instance (all rows are <=)."""
    return LpProblem(
        obj=instance.objective,
        A=instance.matrix,
        row_type=["L"] * instance.n_rows,
        rhs=instance.rhs,
        col_lb=instance.lower,
        col_ub=instance.upper,
    )


def solve_relaxation(instance):
    """Optimal LP-relaxation point and row duals."""
    sol = solve_lp(instance_lp(instance))
    if sol.status in (INFEASIBLE, UNBOUNDED):
        raise LpFailure("LP relaxation is %s" % sol.status, status=sol.status)
    if sol.status != OPTIMAL:
        raise LpFailure("LP relaxation solve hit %s" % sol.status, status=sol.status)
    return sol.x, sol.duals


def format_metrics(metrics):
    lines = []
    for algo in sorted(metrics):
        m = metrics[algo]
        lines.append("algorithm %s" % algo)
        if m.empty:
            lines.append("  nothing-to-do")
            continue
        lines.append("  aggregations %d" % m.n_aggregations)
        lines.append("  bad-cols %r" % m.bad_cols)
        lines.append("  total-bad-cols %r" % m.total_bad_cols)
        lines.append(
            "  ratio %s" % ("undefined" if m.ratio is None else repr(m.ratio))
        )
        lines.append("  used-rows %r" % m.used_rows)
    return "\n".join(lines) + "\n"
