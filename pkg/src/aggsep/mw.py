"""Greedy stepwise row aggregation (Marchand-Wolsey style).

Starting from one row, bad continuous variables are eliminated one at a
time by adding a scaled useful row; a candidate is rejected if it would
need a nonpositive factor or would reintroduce an already-eliminated bad
variable.  Every accepted step (and the bare starting row) is offered to
the separation callback.
"""

import numpy as np

from .aggregate import ZERO_TOL, make_result
from .errors import ContractViolation


def elimination_factor(alpha_j, row_coef_j):
    """Factor lam > 0 with alpha_j + lam * row_coef_j == 0, or None.

    <=-rows may only enter with a positive factor, so a factor that comes
    out nonpositive disqualifies the candidate row.
    """
    if row_coef_j == 0.0:
        raise ContractViolation("candidate row has no coefficient on target")
    lam = -alpha_j / row_coef_j
    return lam if lam > 0.0 else None


def mw_aggregate(ctx, i0, maxaggr=6, on_aggregation=None):
    """Run the stepwise heuristic from starting row ``i0``.

    Returns the list of emitted aggregations (bare starting row first,
    then one per accepted elimination step, at most maxaggr of those).
    """
    if i0 not in set(int(i) for i in ctx.useful_rows):
        raise ContractViolation("starting row %r is not a useful row" % (i0,))
    A = ctx.instance.matrix
    results = []

    def emit(factors, step, eliminated):
        res = make_result(ctx, factors, "mw", i0, step, eliminated)
        results.append(res)
        if on_aggregation is not None:
            on_aggregation(res)
        return res

    factors = {int(i0): 1.0}
    alpha = A[i0].copy()
    used = {int(i0)}
    eliminated = []
    c = 0
    emit(factors, 0, eliminated)

    for j in ctx.bad_vars:
        if c >= maxaggr:
            break
        j = int(j)
        if j in eliminated or abs(alpha[j]) <= ZERO_TOL:
            continue
        for i in ctx.useful_rows:
            i = int(i)
            if i in used or A[i, j] == 0.0:
                continue
            lam = elimination_factor(alpha[j], A[i, j])
            if lam is None:
                continue
            alpha_new = alpha + lam * A[i]
            if any(abs(alpha_new[k]) > ZERO_TOL for k in eliminated):
                continue  # would reintroduce an eliminated bad variable
            alpha = alpha_new
            alpha[j] = 0.0
            factors[i] = lam
            used.add(i)
            eliminated.append(j)
            c += 1
            emit(factors, c, eliminated)
            if c >= maxaggr:
                return results
            break
    return results
