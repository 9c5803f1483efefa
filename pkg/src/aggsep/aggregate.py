"""Shared result type for row aggregation."""

from dataclasses import dataclass, field

import numpy as np

ZERO_TOL = 1e-9


@dataclass
class AggregationResult:
    """One aggregated base inequality  alpha . x <= beta  =  lambda^T (Ax <= b)."""

    factors: dict  # row index -> factor > 0 (includes the starting row)
    alpha: np.ndarray  # dense coefficients over instance variables
    beta: float
    used_rows: tuple  # row indices with nonzero factor
    eliminated: tuple  # bad-variable indices projected out (MW only)
    residual_bad: tuple  # bad-variable indices still present in alpha
    algorithm: str  # 'mw' | 'lasso'
    starting_row: int
    step: int = 0  # 0 = first emission for this starting row

    def recompute(self, instance):
        """Re-derive (alpha, beta) from the stored factors."""
        A = instance.matrix
        b = instance.rhs
        alpha = np.zeros(instance.n_vars)
        beta = 0.0
        for i, lam in self.factors.items():
            alpha += lam * A[i]
            beta += lam * b[i]
        return alpha, beta


def residual_bad_columns(alpha, bad_vars, tol=ZERO_TOL):
    return tuple(int(j) for j in bad_vars if abs(alpha[j]) > tol)


def make_result(ctx, factors, algorithm, starting_row, step, eliminated=()):
    A = ctx.instance.matrix
    b = ctx.instance.rhs
    alpha = np.zeros(ctx.instance.n_vars)
    beta = 0.0
    used = []
    for i in sorted(factors):
        lam = factors[i]
        if lam <= ZERO_TOL and i != starting_row:
            continue
        alpha += lam * A[i]
        beta += lam * b[i]
        used.append(i)
    return AggregationResult(
        factors={i: float(factors[i]) for i in used},
        alpha=alpha,
        beta=float(beta),
        used_rows=tuple(used),
        eliminated=tuple(eliminated),
        residual_bad=residual_bad_columns(alpha, ctx.bad_vars),
        algorithm=algorithm,
        starting_row=int(starting_row),
        step=step,
    )
