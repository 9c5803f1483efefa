"""Normalized MILP data model.

All constraint rows are stored in <= form.  Integrality lives on the
variables; rows carry an ``origin`` tag describing how they were produced
from the raw input (plain <=, negated >=, one half of an equality split, or
a detected implied-bound row).
"""

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ContractViolation, MalformedInstanceError

ZERO_TOL = 1e-9

CONTINUOUS = "continuous"
INTEGER = "integer"

ORIGIN_LEQ = "original-<="
ORIGIN_NEGATED_GEQ = "negated->="
ORIGIN_EQ_POS = "equality-half-pos"
ORIGIN_EQ_NEG = "equality-half-neg"
ORIGIN_BOUND_ROW = "bound-row"


@dataclass
class Variable:
    name: str
    kind: str = CONTINUOUS
    lower: float = 0.0
    upper: float = math.inf
    objective: float = 0.0

    def __post_init__(self):
        if self.kind not in (CONTINUOUS, INTEGER):
            raise MalformedInstanceError("unknown variable kind %r" % self.kind)
        if math.isnan(self.lower) or math.isnan(self.upper):
            raise MalformedInstanceError("NaN bound on variable %s" % self.name)
        if self.lower > self.upper:
            raise MalformedInstanceError(
                "variable %s has lower %g > upper %g" % (self.name, self.lower, self.upper)
            )

    @property
    def is_integer(self):
        return self.kind == INTEGER


@dataclass
class Row:
    """A single constraint row ``coefficients . x <= rhs``."""

    name: str
    coefficients: dict  # variable name -> nonzero coefficient
    rhs: float
    origin: str = ORIGIN_LEQ


@dataclass
class RawRow:
    """A row as read from the input, before sense normalization."""

    name: str
    coefficients: dict
    sense: str  # '<=', '>=' or '='
    rhs: float


def _clean_coefficients(name, coefficients):
    out = {}
    for var, val in coefficients.items():
        if not math.isfinite(val):
            raise MalformedInstanceError(
                "non-finite coefficient %r on %s in row %s" % (val, var, name)
            )
        if abs(val) >= ZERO_TOL:
            out[var] = float(val)
    return out


def normalize_rows(raw_rows):
    """Normalize raw rows of any sense into <= rows.

    '>=' rows are negated; '=' rows are split into two opposed <= halves
    (the negative half gets the suffix ``_neg``); explicit zeros are
    dropped.
    """
    rows = []
    for raw in raw_rows:
        if not math.isfinite(raw.rhs):
            raise MalformedInstanceError("non-finite rhs in row %s" % raw.name)
        coefs = _clean_coefficients(raw.name, raw.coefficients)
        if raw.sense == "<=":
            rows.append(Row(raw.name, coefs, float(raw.rhs), ORIGIN_LEQ))
        elif raw.sense == ">=":
            neg = {v: -c for v, c in coefs.items()}
            rows.append(Row(raw.name, neg, -float(raw.rhs), ORIGIN_NEGATED_GEQ))
        elif raw.sense == "=":
            neg = {v: -c for v, c in coefs.items()}
            rows.append(Row(raw.name, dict(coefs), float(raw.rhs), ORIGIN_EQ_POS))
            rows.append(Row(raw.name + "_neg", neg, -float(raw.rhs), ORIGIN_EQ_NEG))
        else:
            raise MalformedInstanceError("unknown sense %r in row %s" % (raw.sense, raw.name))
    return rows


@dataclass
class MilpInstance:
    """Immutable-by-convention MILP: share freely once built."""

    name: str
    variables: list
    rows: list

    def __post_init__(self):
        names = set()
        for v in self.variables:
            if v.name in names:
                raise MalformedInstanceError("duplicate variable name %s" % v.name)
            names.add(v.name)
        rnames = set()
        for r in self.rows:
            if r.name in rnames:
                raise MalformedInstanceError("duplicate row name %s" % r.name)
            rnames.add(r.name)
            for var in r.coefficients:
                if var not in names:
                    raise MalformedInstanceError(
                        "row %s references unknown variable %s" % (r.name, var)
                    )

    @cached_property
    def var_index(self):
        return {v.name: i for i, v in enumerate(self.variables)}

    @cached_property
    def row_index(self):
        return {r.name: i for i, r in enumerate(self.rows)}

    @property
    def n_vars(self):
        return len(self.variables)

    @property
    def n_rows(self):
        return len(self.rows)

    @cached_property
    def matrix(self):
        """Dense (rows x vars) coefficient matrix."""
        A = np.zeros((len(self.rows), len(self.variables)))
        idx = self.var_index
        for i, r in enumerate(self.rows):
            for var, val in r.coefficients.items():
                A[i, idx[var]] = val
        return A

    @cached_property
    def rhs(self):
        return np.array([r.rhs for r in self.rows], dtype=float)

    @cached_property
    def lower(self):
        return np.array([v.lower for v in self.variables], dtype=float)

    @cached_property
    def upper(self):
        return np.array([v.upper for v in self.variables], dtype=float)

    @cached_property
    def objective(self):
        return np.array([v.objective for v in self.variables], dtype=float)

    @cached_property
    def integer_mask(self):
        return np.array([v.is_integer for v in self.variables], dtype=bool)


@dataclass
class ImpliedBound:
    """An implied upper bound ``x_var <= const + coef * x_intvar``."""

    var: int  # continuous variable index
    int_var: int  # integer variable index
    const: float
    coef: float
    source_row: str


@dataclass
class VariableBoundTable:
    """Implied bounds per continuous variable plus row tagging bookkeeping."""

    implied: dict = field(default_factory=dict)  # var index -> [ImpliedBound]
    bound_row_names: set = field(default_factory=set)

    def entries(self, j):
        return self.implied.get(j, ())


def detect_variable_bounds(instance):
    """Find implied-bound rows and tag them with origin ``bound-row``.

    A row qualifies iff it has exactly two nonzeros, a positive coefficient
    on a continuous variable and its other nonzero on an integer variable;
    it then encodes ``x_j <= rhs/a - (c/a) x_j'``.  Idempotent.
    """
    table = VariableBoundTable()
    idx = instance.var_index
    for row in instance.rows:
        if len(row.coefficients) != 2:
            continue
        items = sorted(row.coefficients.items(), key=lambda kv: idx[kv[0]])
        cont = [
            (v, c) for v, c in items
            if not instance.variables[idx[v]].is_integer and c > 0
        ]
        ints = [(v, c) for v, c in items if instance.variables[idx[v]].is_integer]
        if len(cont) != 1 or len(ints) != 1:
            continue
        (cv, a), (iv, c) = cont[0], ints[0]
        entry = ImpliedBound(
            var=idx[cv],
            int_var=idx[iv],
            const=row.rhs / a,
            coef=-c / a,
            source_row=row.name,
        )
        table.implied.setdefault(entry.var, []).append(entry)
        table.bound_row_names.add(row.name)
        row.origin = ORIGIN_BOUND_ROW
    return table


def make_point(instance, values):
    """Dense point aligned with the instance's variable order."""
    x = np.asarray(values, dtype=float)
    if x.shape != (instance.n_vars,):
        raise ContractViolation(
            "point has %s entries, instance has %d variables" % (x.shape, instance.n_vars)
        )
    if not np.all(np.isfinite(x)):
        raise ContractViolation("point contains non-finite entries")
    return x


def row_slack(row, point, instance):
    """``rhs - coefficients . point`` for one row."""
    idx = instance.var_index
    acc = 0.0
    for var, val in row.coefficients.items():
        acc += val * point[idx[var]]
    return row.rhs - acc
