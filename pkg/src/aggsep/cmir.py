"""Bound substitution, c-MIR cut generation, and a brute-force validity oracle.

An aggregated base inequality is rewritten over shifted bounded integers z
and a single nonnegative slack aggregate s (the weighted sum of continuous
bound slacks), giving the mixed knapsack row sum a_j z_j <= b + s.  Cuts
are produced by complementing a subset U, scaling by delta and applying
the MIR rounding function, then mapped back to original variables.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._kernels import max_box_violation
from .aggregate import ZERO_TOL
from .errors import ContractViolation, DegenerateCutError, OracleRefusedError
from .mpsio import CutRecord

FRACTIONAL_TOL = 1e-6
DEGENERATE_F_TOL = 1e-9
DEFAULT_VIOLATION_THRESHOLD = 1e-4
ORACLE_BOX_LIMIT = 10 ** 6


@dataclass
class SlackTerm:
    """One contribution  mult * y  to s, with  y = const + coefs . x  >= 0."""

    var: int  # the substituted continuous variable
    mult: float  # |alpha_var|
    const: float
    coefs: dict  # variable index -> coefficient (affine expression of y)
    kind: str  # 'upper' | 'implied' | 'lower'


@dataclass
class MixedKnapsackRow:
    """sum a_j z_j <= b + s  with  0 <= z_j <= u_j integer, s >= 0."""

    a: np.ndarray
    u: np.ndarray
    b: float
    int_vars: tuple  # original variable index per knapsack position
    int_shift: np.ndarray  # lower bound subtracted per position
    slack_terms: tuple  # of SlackTerm
    zbar: np.ndarray
    sbar: float

    @property
    def q(self):
        return len(self.a)


@dataclass
class CmirCut:
    partition_t: tuple  # knapsack positions
    partition_u: tuple
    delta: float
    beta: float
    f: float
    z_coefs: np.ndarray  # expanded coefficient per knapsack position
    rhs_knapsack: float  # constant right-hand side in (z, s) space
    s_coef: float  # 1 / (delta * (1 - f))
    coefficients: dict = field(default_factory=dict)  # original var idx -> coef
    rhs: float = 0.0  # mapped-back right-hand side
    violation: float = 0.0  # coefficients . xbar - rhs


def g_function(d, f):
    """MIR rounding function floor(d) + (frac(d) - f)^+ / (1 - f)."""
    if f >= 1.0:
        raise ContractViolation("g_function needs f < 1")
    fl = math.floor(d)
    fd = d - fl
    return fl + max(fd - f, 0.0) / (1.0 - f)


def bound_substitute(aggregation, ctx):
    """Rewrite an aggregated inequality as a mixed knapsack row.

    Continuous variables are replaced by the bound nearest the point
    (simple upper, the best implied upper, or a finite lower bound when
    the point sits closer to it); integer variables are shifted to a zero
    lower bound.  Returns None when a needed bound is missing.
    """
    inst = ctx.instance
    xbar = ctx.xbar
    alpha = aggregation.alpha
    b = aggregation.beta
    int_coef = {}
    slack_terms = []

    for j in np.flatnonzero(np.abs(alpha) > ZERO_TOL):
        j = int(j)
        var = inst.variables[j]
        if var.is_integer:
            int_coef[j] = int_coef.get(j, 0.0) + alpha[j]
            continue
        aj = alpha[j]
        # tightest upper-type candidate at xbar
        best_val = var.upper if math.isfinite(var.upper) else math.inf
        best = ("upper", None)
        for e in ctx.bounds.entries(j):
            cand = e.const + e.coef * xbar[e.int_var]
            if cand < best_val:
                best_val = cand
                best = ("implied", e)
        has_upper = math.isfinite(best_val)
        has_lower = math.isfinite(var.lower)
        use_lower = False
        if has_lower and (
            not has_upper or xbar[j] - var.lower < best_val - xbar[j]
        ):
            use_lower = True
        if not has_upper and not use_lower:
            return None
        if use_lower:
            # x_j = l_j + y_j
            b -= aj * var.lower
            slack_terms.append(SlackTerm(j, abs(aj), -var.lower, {j: 1.0}, "lower"))
        elif best[1] is None:
            # x_j = u_j - y_j
            b -= aj * var.upper
            slack_terms.append(SlackTerm(j, abs(aj), var.upper, {j: -1.0}, "upper"))
        else:
            # x_j = u + d z_j' - y_j
            e = best[1]
            b -= aj * e.const
            int_coef[e.int_var] = int_coef.get(e.int_var, 0.0) + aj * e.coef
            slack_terms.append(
                SlackTerm(j, abs(aj), e.const, {e.int_var: e.coef, j: -1.0}, "implied")
            )

    int_vars = []
    a = []
    u = []
    shift = []
    zbar = []
    for j in sorted(int_coef):
        coef = int_coef[j]
        if abs(coef) <= ZERO_TOL:
            continue
        var = inst.variables[j]
        if not (math.isfinite(var.lower) and math.isfinite(var.upper)):
            return None
        int_vars.append(j)
        a.append(coef)
        u.append(round(var.upper - var.lower))
        shift.append(var.lower)
        zbar.append(xbar[j] - var.lower)
        b -= coef * var.lower

    sbar = 0.0
    for t in slack_terms:
        y = t.const + sum(c * xbar[k] for k, c in t.coefs.items())
        sbar += t.mult * y

    return MixedKnapsackRow(
        a=np.array(a, dtype=float),
        u=np.array(u, dtype=float),
        b=float(b),
        int_vars=tuple(int_vars),
        int_shift=np.array(shift, dtype=float),
        slack_terms=tuple(slack_terms),
        zbar=np.array(zbar, dtype=float),
        sbar=float(sbar),
    )


def cmir_inequality(k, T, U, delta):
    """Build the rounding cut for partition (T, U) and scaling delta.

    Raises DegenerateCutError when the rounded fraction is within
    tolerance of an integer (the cut collapses to the scaled base row).
    """
    if delta <= 0:
        raise ContractViolation("delta must be positive")
    T = tuple(int(j) for j in T)
    U = tuple(int(j) for j in U)
    if sorted(T + U) != list(range(k.q)) or set(T) & set(U):
        raise ContractViolation("(T, U) must partition the knapsack positions")
    beta = (k.b - sum(k.a[j] * k.u[j] for j in U)) / delta
    f = beta - math.floor(beta)
    if min(f, 1.0 - f) < DEGENERATE_F_TOL:
        raise DegenerateCutError("fraction %r is numerically integral" % f)
    z_coefs = np.zeros(k.q)
    rhs = math.floor(beta)
    for j in T:
        z_coefs[j] = g_function(k.a[j] / delta, f)
    for j in U:
        g = g_function(-k.a[j] / delta, f)
        z_coefs[j] = -g
        rhs -= g * k.u[j]
    s_coef = 1.0 / (delta * (1.0 - f))
    cut = CmirCut(
        partition_t=T,
        partition_u=U,
        delta=float(delta),
        beta=float(beta),
        f=float(f),
        z_coefs=z_coefs,
        rhs_knapsack=float(rhs),
        s_coef=float(s_coef),
    )
    _map_back(cut, k)
    return cut


def _map_back(cut, k):
    """Express the knapsack-space cut over the original variables."""
    coefs = {}
    rhs = cut.rhs_knapsack
    for pos, j in enumerate(k.int_vars):
        c = cut.z_coefs[pos]
        if c != 0.0:
            coefs[j] = coefs.get(j, 0.0) + c
            rhs += c * k.int_shift[pos]
    for t in k.slack_terms:
        scale = cut.s_coef * t.mult
        rhs += scale * t.const
        for j, c in t.coefs.items():
            coefs[j] = coefs.get(j, 0.0) + scale * c
    cut.coefficients = {j: v for j, v in coefs.items() if abs(v) > ZERO_TOL}
    cut.rhs = float(rhs)
    # violation in knapsack space; the affine map back preserves it
    cut.violation = float(
        cut.z_coefs @ k.zbar - cut.rhs_knapsack - cut.s_coef * k.sbar
    )


def proximity_partition(k):
    """U collects positions whose point value is nearer the upper bound."""
    U = tuple(
        j for j in range(k.q) if k.zbar[j] > k.u[j] - k.zbar[j]
    )
    T = tuple(j for j in range(k.q) if j not in U)
    return T, U


def delta_candidates(k):
    """{1} and |a_j| of fractional positions, each with its /2 and /4."""
    base = [1.0]
    for j in range(k.q):
        fz = k.zbar[j] - math.floor(k.zbar[j])
        if min(fz, 1.0 - fz) > FRACTIONAL_TOL:
            base.append(abs(k.a[j]))
    out = []
    seen = set()
    for d in base:
        for dd in (d, d / 2.0, d / 4.0):
            if dd > 0 and dd not in seen:
                seen.add(dd)
                out.append(dd)
    return out


def select_partition_and_delta(k, violation_threshold=DEFAULT_VIOLATION_THRESHOLD):
    """Most violated cut over the candidate deltas, or None."""
    if k.q == 0:
        return None
    T, U = proximity_partition(k)
    best = None
    for delta in delta_candidates(k):
        try:
            cut = cmir_inequality(k, T, U, delta)
        except DegenerateCutError:
            continue
        if best is None or cut.violation > best.violation:
            best = cut
    if best is not None and best.violation > violation_threshold:
        return best
    return None


def separate_on_aggregation(aggregation, ctx, violation_threshold=DEFAULT_VIOLATION_THRESHOLD,
                            cut_name=None):
    """bound substitution -> (T, U, delta) search -> CutRecord, or None."""
    k = bound_substitute(aggregation, ctx)
    if k is None or k.q == 0:
        return None
    fz = k.zbar - np.floor(k.zbar)
    if np.all(np.minimum(fz, 1.0 - fz) <= FRACTIONAL_TOL):
        return None
    cut = select_partition_and_delta(k, violation_threshold)
    if cut is None:
        return None
    inst = ctx.instance
    coefficients = {
        inst.variables[j].name: cut.coefficients[j]
        for j in sorted(cut.coefficients)
    }
    rows = inst.rows
    return CutRecord(
        name=cut_name or ("cmir_%s" % rows[aggregation.starting_row].name),
        coefficients=coefficients,
        rhs=cut.rhs,
        violation=cut.violation,
        algorithm=aggregation.algorithm,
        starting_row=rows[aggregation.starting_row].name,
        used_rows=[(rows[i].name, aggregation.factors[i]) for i in aggregation.used_rows],
        partition_t=[inst.variables[k.int_vars[j]].name for j in cut.partition_t],
        partition_u=[inst.variables[k.int_vars[j]].name for j in cut.partition_u],
        delta=cut.delta,
    )


def validate_cut_bruteforce(cut, k, tol=1e-7):
    """Exhaustively check the cut over the integer box of the knapsack row.

    For each z the minimum feasible slack is max(0, a.z - b); the cut must
    hold at every such (z, s).
    """
    box = 1.0
    for u in k.u:
        box *= u + 1
    if box > ORACLE_BOX_LIMIT:
        raise OracleRefusedError("enumeration box of size %g refused" % box)
    viol = max_box_violation(
        np.ascontiguousarray(k.a, dtype=np.float64),
        np.ascontiguousarray(k.u, dtype=np.int64),
        float(k.b),
        np.ascontiguousarray(cut.z_coefs, dtype=np.float64),
        float(cut.rhs_knapsack),
        float(cut.s_coef),
    )
    return viol <= tol
