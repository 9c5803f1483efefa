"""Sparsity-driven LP-based aggregation.

First solve: an L1 surrogate that trades weighted bad-column mass against
the slack of the aggregated base inequality.  If too many bad columns
survive, iterative reweighting re-solves a slack-free variant restricted
to the active rows, warm-started from the previous basis, until the
aggregated row is sparse enough or the round limit is hit.
"""

from dataclasses import dataclass

import numpy as np

from .aggregate import ZERO_TOL, make_result
from .errors import ContractViolation, LpFailure
from .lp import OPTIMAL, build_abs_value_lp, solve_lp

WEIGHT_CAP = 1e6  # stands in for infinite bound distances


@dataclass
class LassoConfig:
    maxaggr: int = 6
    density_threshold: float = 0.0
    reweight_eps: float = 1e-6
    lam_cap: float = 1e6
    zero_tol: float = ZERO_TOL


def _capped_weights(ctx):
    return np.minimum(ctx.bad_weights, WEIGHT_CAP)


def _abs_terms(ctx, rows, weights):
    A = ctx.instance.matrix
    return [
        (float(w), A[rows, j].astype(float))
        for w, j in zip(weights, ctx.bad_vars)
    ]


def build_lasso_lp(ctx, i0, cfg=None):
    """Factor-search LP: weighted |bad columns| plus aggregated slack."""
    cfg = cfg or LassoConfig()
    rows = [int(i) for i in ctx.useful_rows]
    if i0 not in rows:
        raise ContractViolation("starting row %r is not a useful row" % (i0,))
    lb = np.zeros(len(rows))
    lb[rows.index(i0)] = 1.0
    ub = np.full(len(rows), cfg.lam_cap)
    slack_cost = ctx.slacks[rows]
    prob = build_abs_value_lp(_abs_terms(ctx, rows, _capped_weights(ctx)),
                              slack_cost, lb, ub)
    prob.meta["rows"] = rows
    return prob


def build_reweighted_lp(ctx, active_rows, i0, w, cfg=None):
    """Reweighted LP over the active set: bad-column mass only, no slack cost.

    Keeps the full column layout of the lasso LP (inactive factors are
    pinned at zero through their bounds) so a prior basis stays valid.
    """
    cfg = cfg or LassoConfig()
    rows = [int(i) for i in ctx.useful_rows]
    if i0 not in active_rows:
        raise ContractViolation("starting row must be in the active set")
    active = set(int(i) for i in active_rows)
    lb = np.zeros(len(rows))
    ub = np.zeros(len(rows))
    for t, i in enumerate(rows):
        if i in active:
            ub[t] = cfg.lam_cap
    lb[rows.index(i0)] = 1.0
    ub[rows.index(i0)] = cfg.lam_cap
    prob = build_abs_value_lp(_abs_terms(ctx, rows, w), np.zeros(len(rows)), lb, ub)
    prob.meta["rows"] = rows
    return prob


def reweight(w, a, eps, zero_tol=ZERO_TOL):
    """Per-column update w <- w/(eps+|a|); vanished columns get weight 0."""
    if eps <= 0:
        raise ContractViolation("reweighting epsilon must be positive")
    w = np.asarray(w, dtype=float)
    a = np.abs(np.asarray(a, dtype=float))
    out = np.where(a > zero_tol, w / (eps + a), 0.0)
    return out


def lasso_aggregate(ctx, i0, cfg=None, on_aggregation=None):
    """Run the LP-based aggregation from starting row ``i0``.

    Returns the emitted aggregations (at most maxaggr+1).  An LP failure
    aborts the starting row without emitting anything.
    """
    cfg = cfg or LassoConfig()
    i0 = int(i0)
    prob = build_lasso_lp(ctx, i0, cfg)
    rows = prob.meta["rows"]
    sol = solve_lp(prob)
    if sol.status != OPTIMAL:
        raise LpFailure(
            "lasso LP for starting row %d ended with status %s" % (i0, sol.status),
            status=sol.status,
        )
    nlam = len(rows)

    def current_factors():
        lam = sol.x[:nlam]
        factors = {
            rows[t]: float(lam[t])
            for t in range(nlam)
            if lam[t] > cfg.zero_tol or rows[t] == i0
        }
        return factors

    factors = current_factors()
    active = sorted(factors)
    w = _capped_weights(ctx)
    results = []
    c = 0
    while True:
        res = make_result(ctx, factors, "lasso", i0, c)
        results.append(res)
        if on_aggregation is not None:
            on_aggregation(res)
        nbad = len(ctx.bad_vars)
        density = len(res.residual_bad) / nbad if nbad else 0.0
        if density > cfg.density_threshold and c < cfg.maxaggr:
            a_bad = res.alpha[ctx.bad_vars]
            w = reweight(w, a_bad, cfg.reweight_eps, cfg.zero_tol)
            prob = build_reweighted_lp(ctx, active, i0, w, cfg)
            sol = solve_lp(prob, warm=sol.warm_start())
            if sol.status != OPTIMAL:
                raise LpFailure(
                    "reweighted LP for starting row %d ended with status %s"
                    % (i0, sol.status),
                    status=sol.status,
                )
            factors = current_factors()
            c += 1
        else:
            return results
