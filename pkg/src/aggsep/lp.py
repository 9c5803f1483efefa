"""Dense bounded-variable primal simplex with warm starting.

Sized for the small aggregation subproblems (tens of rows, up to a few
thousand columns).  Two-phase, big-M free; Dantzig pricing with a Bland
fallback after a run of degenerate pivots.  The basis descriptor of an
optimal solve can warm-start a problem that differs only in objective
and/or variable bounds.
"""

from dataclasses import dataclass, field

import numpy as np

from ._kernels import ratio_test
from .errors import ContractViolation, LpFailure

BASIC = 0
AT_LOWER = 1
AT_UPPER = 2
FREE = 3
FIXED_ROW = 4  # row-status marker for equality rows (no slack column)

FEAS_TOL = 1e-7
OPT_TOL = 1e-7
DEGEN_PIVOT_LIMIT = 1000

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITERATION_LIMIT = "iteration-limit"


@dataclass
class LpProblem:
    """min obj.x  s.t.  A x (= or <=) rhs,  col_lb <= x <= col_ub."""

    obj: np.ndarray
    A: np.ndarray
    row_type: list  # 'E' or 'L' per row
    rhs: np.ndarray
    col_lb: np.ndarray
    col_ub: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.obj = np.asarray(self.obj, dtype=float)
        self.A = np.asarray(self.A, dtype=float)
        if self.A.ndim != 2:
            self.A = self.A.reshape(len(self.rhs), -1)
        self.A = self.A.reshape(len(self.rhs), len(self.obj))
        self.rhs = np.asarray(self.rhs, dtype=float)
        self.col_lb = np.asarray(self.col_lb, dtype=float)
        self.col_ub = np.asarray(self.col_ub, dtype=float)
        m, n = self.A.shape
        if not (len(self.obj) == len(self.col_lb) == len(self.col_ub) == n):
            raise ContractViolation("inconsistent LP column dimensions")
        if len(self.row_type) != m:
            raise ContractViolation("inconsistent LP row dimensions")
        if np.any(self.col_lb > self.col_ub):
            raise ContractViolation("LP has a column with lower > upper")

    @property
    def n_cols(self):
        return self.A.shape[1]

    @property
    def n_rows(self):
        return self.A.shape[0]


@dataclass
class LpSolution:
    status: str
    x: np.ndarray = None
    duals: np.ndarray = None
    objective: float = None
    col_status: np.ndarray = None
    row_status: np.ndarray = None
    iterations: int = 0

    def warm_start(self):
        return WarmStart(self.col_status.copy(), self.row_status.copy())


@dataclass
class WarmStart:
    col_status: np.ndarray
    row_status: np.ndarray


class _Tableau:
    """Augmented problem: structural columns, then slacks for 'L' rows."""

    def __init__(self, problem):
        m, n = problem.A.shape
        slack_rows = [i for i, t in enumerate(problem.row_type) if t == "L"]
        ns = len(slack_rows)
        A = np.zeros((m, n + ns))
        A[:, :n] = problem.A
        for k, i in enumerate(slack_rows):
            A[i, n + k] = 1.0
        self.A = A
        self.b = problem.rhs.astype(float)
        self.c = np.concatenate([problem.obj, np.zeros(ns)])
        self.lb = np.concatenate([problem.col_lb, np.zeros(ns)])
        self.ub = np.concatenate([problem.col_ub, np.full(ns, np.inf)])
        self.n = n
        self.slack_rows = slack_rows
        self.m = m


def _nonbasic_values(status, lb, ub):
    x = np.zeros(len(status))
    at_lo = status == AT_LOWER
    at_up = status == AT_UPPER
    x[at_lo] = lb[at_lo]
    x[at_up] = ub[at_up]
    return x


def _default_status(lb, ub):
    status = np.full(len(lb), FREE, dtype=np.int64)
    status[np.isfinite(lb)] = AT_LOWER
    only_ub = ~np.isfinite(lb) & np.isfinite(ub)
    status[only_ub] = AT_UPPER
    return status


def _simplex_loop(A, b, c, lb, ub, basis, status, enterable, max_iter):
    """Primal iterations from a feasible basis; returns (code, iterations).

    code is OPTIMAL / UNBOUNDED / ITERATION_LIMIT.  basis and status are
    updated in place.
    """
    m = len(basis)
    degen = 0
    bland = False
    it = 0
    while True:
        B = A[:, basis]
        xn = _nonbasic_values(status, lb, ub)
        xn[basis] = 0.0
        try:
            xb = np.linalg.solve(B, b - A @ xn)
            y = np.linalg.solve(B.T, c[basis])
        except np.linalg.LinAlgError:
            raise LpFailure("singular basis matrix")
        d = c - y @ A
        viol = np.zeros(len(c))
        lowish = (status == AT_LOWER) | (status == FREE)
        viol[lowish & enterable] = -d[lowish & enterable]
        upish = status == AT_UPPER
        viol[upish & enterable] = d[upish & enterable]
        free_dn = (status == FREE) & enterable & (d > 0)
        viol[free_dn] = d[free_dn]
        viol[basis] = 0.0
        if bland:
            cand = np.flatnonzero(viol > OPT_TOL)
            if len(cand) == 0:
                return OPTIMAL, it
            j = int(cand[0])
        else:
            j = int(np.argmax(viol))
            if viol[j] <= OPT_TOL:
                return OPTIMAL, it
        if status[j] == AT_UPPER or (status[j] == FREE and d[j] > 0):
            sdir = -1.0
        else:
            sdir = 1.0
        w = np.linalg.solve(B, A[:, j])
        tcap = ub[j] - lb[j] if status[j] != FREE else np.inf
        t, leave, to_upper = ratio_test(
            w, xb, lb[basis], ub[basis], sdir, float(tcap)
        )
        if not np.isfinite(t):
            return UNBOUNDED, it
        if leave < 0:
            # entering variable flips to its opposite bound
            status[j] = AT_UPPER if status[j] == AT_LOWER else AT_LOWER
        else:
            out = basis[leave]
            status[out] = AT_UPPER if to_upper else AT_LOWER
            basis[leave] = j
            status[j] = BASIC
        if t <= 1e-10:
            degen += 1
            if degen > DEGEN_PIVOT_LIMIT:
                bland = True
        else:
            degen = 0
        it += 1
        if it >= max_iter:
            return ITERATION_LIMIT, it


def _finish(tab, problem, basis, status, iterations, lp_status):
    A, b, c = tab.A, tab.b, tab.c
    B = A[:, basis]
    x = _nonbasic_values(status, tab.lb, tab.ub)
    x[basis] = 0.0
    try:
        xb = np.linalg.solve(B, b - A @ x)
        y = np.linalg.solve(B.T, c[basis])
    except np.linalg.LinAlgError:
        raise LpFailure("singular basis at termination")
    x[basis] = xb
    scale = 1.0 + np.abs(b).max(initial=0.0)
    if lp_status == OPTIMAL:
        resid = np.abs(A @ x - b).max(initial=0.0)
        bound_viol = max(
            np.max(tab.lb - x, initial=0.0), np.max(x - tab.ub, initial=0.0)
        )
        if resid > FEAS_TOL * scale * 10 or bound_viol > FEAS_TOL * scale * 10:
            raise LpFailure("feasibility could not be certified", status=lp_status)
    xs = x[: tab.n]
    col_status = status[: tab.n].copy()
    row_status = np.full(tab.m, FIXED_ROW, dtype=np.int64)
    for k, i in enumerate(tab.slack_rows):
        row_status[i] = status[tab.n + k]
    return LpSolution(
        status=lp_status,
        x=xs,
        duals=np.asarray(y, dtype=float),
        objective=float(problem.obj @ xs),
        col_status=col_status,
        row_status=row_status,
        iterations=iterations,
    )


def _try_warm(tab, warm):
    n, m = tab.n, tab.m
    if warm.col_status.shape != (n,) or warm.row_status.shape != (m,):
        return None
    status = np.full(tab.A.shape[1], AT_LOWER, dtype=np.int64)
    status[:n] = warm.col_status
    for k, i in enumerate(tab.slack_rows):
        status[n + k] = warm.row_status[i]
    basis = np.flatnonzero(status == BASIC)
    if len(basis) != m:
        return None
    # nonbasic columns whose recorded bound no longer exists fall back to 0
    for j in np.flatnonzero(status == AT_LOWER):
        if not np.isfinite(tab.lb[j]):
            status[j] = FREE
    for j in np.flatnonzero(status == AT_UPPER):
        if not np.isfinite(tab.ub[j]):
            status[j] = AT_LOWER if np.isfinite(tab.lb[j]) else FREE
    x = _nonbasic_values(status, tab.lb, tab.ub)
    x[basis] = 0.0
    try:
        xb = np.linalg.solve(tab.A[:, basis], tab.b - tab.A @ x)
    except np.linalg.LinAlgError:
        return None
    scale = 1.0 + np.abs(tab.b).max(initial=0.0)
    if np.max(tab.lb[basis] - xb, initial=0.0) > FEAS_TOL * scale or np.max(
        xb - tab.ub[basis], initial=0.0
    ) > FEAS_TOL * scale:
        return None
    return basis.astype(np.int64), status


def solve_lp(problem, warm=None, max_iter=None):
    """Solve an LpProblem, optionally warm-started from a prior basis.

    The warm start is used only if its basis is primal feasible for the new
    data; otherwise the solve silently falls back to a cold two-phase run.
    """
    tab = _Tableau(problem)
    m, ntot = tab.m, tab.A.shape[1]
    if max_iter is None:
        max_iter = 50 * (problem.n_rows + problem.n_cols)

    if warm is not None:
        start = _try_warm(tab, warm)
        if start is not None:
            basis, status = start
            enterable = np.ones(ntot, dtype=bool)
            code, it = _simplex_loop(
                tab.A, tab.b, tab.c, tab.lb, tab.ub, basis, status, enterable, max_iter
            )
            if code in (OPTIMAL, UNBOUNDED, ITERATION_LIMIT):
                return _finish(tab, problem, basis, status, it, code)

    # phase 1: artificial columns form the starting basis
    status = _default_status(tab.lb, tab.ub)
    xn = _nonbasic_values(status, tab.lb, tab.ub)
    r = tab.b - tab.A @ xn
    sgn = np.where(r >= 0, 1.0, -1.0)
    A1 = np.hstack([tab.A, np.diag(sgn)])
    lb1 = np.concatenate([tab.lb, np.zeros(m)])
    ub1 = np.concatenate([tab.ub, np.full(m, np.inf)])
    c1 = np.concatenate([np.zeros(ntot), np.ones(m)])
    status1 = np.concatenate([status, np.full(m, BASIC, dtype=np.int64)])
    basis = np.arange(ntot, ntot + m, dtype=np.int64)
    enterable = np.ones(ntot + m, dtype=bool)
    enterable[ntot:] = False
    code, it1 = _simplex_loop(A1, tab.b, c1, lb1, ub1, basis, status1, enterable, max_iter)
    if code == ITERATION_LIMIT:
        return LpSolution(status=ITERATION_LIMIT, iterations=it1)
    x1 = _nonbasic_values(status1, lb1, ub1)
    x1[basis] = 0.0
    xb = np.linalg.solve(A1[:, basis], tab.b - A1 @ x1)
    art_mask = basis >= ntot
    phase1_obj = float(np.sum(np.abs(xb[art_mask]))) if art_mask.any() else 0.0
    scale = 1.0 + np.abs(tab.b).max(initial=0.0)
    if phase1_obj > FEAS_TOL * scale * 10:
        return LpSolution(status=INFEASIBLE, iterations=it1)

    # phase 2: pin remaining artificials at zero, restore real costs
    ub1[ntot:] = 0.0
    lb1[ntot:] = 0.0
    c2 = np.concatenate([tab.c, np.zeros(m)])
    code, it2 = _simplex_loop(A1, tab.b, c2, lb1, ub1, basis, status1, enterable,
                              max_iter)
    if code == ITERATION_LIMIT:
        return LpSolution(status=ITERATION_LIMIT, iterations=it1 + it2)
    if code == UNBOUNDED:
        return LpSolution(status=UNBOUNDED, iterations=it1 + it2)

    if np.any(basis >= ntot):
        # artificials pinned at zero may remain basic; report through the
        # augmented system (their values do not affect the solution slice)
        tab_ext = _Tableau(problem)
        tab_ext.A = A1
        tab_ext.c = c2
        tab_ext.lb = lb1
        tab_ext.ub = ub1
        return _finish(tab_ext, problem, basis, status1, it1 + it2, code)
    return _finish(tab, problem, basis, status1[:ntot], it1 + it2, code)


def build_abs_value_lp(terms, extra_cost, lam_lb, lam_ub):
    """LP for  min  sum_t w_t |expr_t(lam)| + extra_cost . lam.

    Each term is ``(weight, coef_vector)`` or ``(weight, coef_vector,
    const)`` describing the affine expression ``coef_vector . lam + const``
    with weight >= 0; the absolute value is split into mu+ - mu- with an
    equality row ``expr_t(lam) - mu+ + mu- = 0`` and cost
    ``w_t (mu+ + mu-)``.
    """
    lam_lb = np.asarray(lam_lb, dtype=float)
    lam_ub = np.asarray(lam_ub, dtype=float)
    extra_cost = np.asarray(extra_cost, dtype=float)
    k = len(lam_lb)
    nt = len(terms)
    A = np.zeros((nt, k + 2 * nt))
    rhs = np.zeros(nt)
    obj = np.zeros(k + 2 * nt)
    obj[:k] = extra_cost
    for t, term in enumerate(terms):
        w, coefs = term[0], term[1]
        const = term[2] if len(term) > 2 else 0.0
        if w < 0:
            raise ContractViolation("absolute-value weight must be nonnegative")
        A[t, :k] = np.asarray(coefs, dtype=float)
        A[t, k + 2 * t] = -1.0
        A[t, k + 2 * t + 1] = 1.0
        rhs[t] = -const
        obj[k + 2 * t] = w
        obj[k + 2 * t + 1] = w
    lb = np.concatenate([lam_lb, np.zeros(2 * nt)])
    ub = np.concatenate([lam_ub, np.full(2 * nt, np.inf)])
    return LpProblem(
        obj=obj,
        A=A,
        row_type=["E"] * nt,
        rhs=rhs,
        col_lb=lb,
        col_ub=ub,
        meta={"n_lambda": k, "n_terms": nt},
    )
