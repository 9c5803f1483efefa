"""Free-format MPS reading, solution-point reading, and cut output."""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import MpsParseError, SolutionParseError
from .instance import (
    INTEGER,
    CONTINUOUS,
    MilpInstance,
    RawRow,
    Variable,
    detect_variable_bounds,
    make_point,
    normalize_rows,
)

_SECTIONS = {
    "NAME", "OBJSENSE", "ROWS", "COLUMNS", "RHS", "RANGES", "BOUNDS", "ENDATA",
}


@dataclass
class CutRecord:
    """One generated cut in original variable space, with provenance."""

    name: str
    coefficients: dict  # variable name -> coefficient
    rhs: float
    violation: float
    algorithm: str
    starting_row: str
    used_rows: list = field(default_factory=list)  # [(row name, factor)]
    partition_t: list = field(default_factory=list)  # integer variable names
    partition_u: list = field(default_factory=list)
    delta: float = 1.0
    sense: str = "<="


def parse_mps(stream, name_hint="instance"):
    """Parse free-format MPS text into a normalized MilpInstance.

    Supports NAME, OBJSENSE, ROWS, COLUMNS (with INTORG/INTEND markers),
    RHS, RANGES and BOUNDS.  The objective row lands on the variables'
    objective field; ranged and equality rows are expanded into <= pairs.
    """
    name = name_hint
    section = None
    row_sense = {}  # row name -> 'N' | 'L' | 'G' | 'E'
    row_order = []
    col_order = []
    col_entries = {}  # col -> {row: coef}
    integrality = set()
    objsense = "MIN"
    obj_row = None
    rhs_vals = {}
    range_vals = {}
    bounds = {}  # col -> list of (type, value)
    in_integer = False
    seen = set()

    for lineno, rawline in enumerate(stream, start=1):
        line = rawline.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("*"):
            continue
        is_header = not line[0].isspace()
        tok = line.split()
        if is_header:
            head = tok[0].upper()
            if head not in _SECTIONS:
                raise MpsParseError("unknown section %r" % tok[0], line=lineno)
            section = head
            seen.add(head)
            if head == "NAME" and len(tok) > 1:
                name = tok[1]
            if head == "ENDATA":
                break
            continue
        if section == "OBJSENSE":
            objsense = tok[0].upper()
            continue
        if section == "ROWS":
            if len(tok) != 2:
                raise MpsParseError("ROWS entries need sense and name", line=lineno)
            sense, rname = tok[0].upper(), tok[1]
            if sense not in ("N", "L", "G", "E"):
                raise MpsParseError("unknown row sense %r" % tok[0], line=lineno)
            if rname in row_sense:
                raise MpsParseError("duplicate row name %s" % rname, line=lineno)
            row_sense[rname] = sense
            if sense == "N":
                if obj_row is None:
                    obj_row = rname
            else:
                row_order.append(rname)
            continue
        if section == "COLUMNS":
            if len(tok) >= 3 and tok[1].upper() == "'MARKER'":
                marker = tok[2].upper().strip("'")
                if marker == "INTORG":
                    in_integer = True
                elif marker == "INTEND":
                    in_integer = False
                else:
                    raise MpsParseError("unknown marker %r" % tok[2], line=lineno)
                continue
            if len(tok) < 3 or len(tok) % 2 == 0:
                raise MpsParseError("malformed COLUMNS entry", line=lineno)
            col = tok[0]
            if col not in col_entries:
                col_entries[col] = {}
                col_order.append(col)
            if in_integer:
                integrality.add(col)
            for rname, val in zip(tok[1::2], tok[2::2]):
                if rname != obj_row and rname not in row_sense:
                    raise MpsParseError(
                        "coefficient for unknown row %s" % rname, line=lineno
                    )
                try:
                    col_entries[col][rname] = col_entries[col].get(rname, 0.0) + float(val)
                except ValueError:
                    raise MpsParseError("bad coefficient %r" % val, line=lineno)
            continue
        if section in ("RHS", "RANGES"):
            if len(tok) < 3:
                raise MpsParseError("malformed %s entry" % section, line=lineno)
            pairs = tok[1:]
            if len(pairs) % 2:
                raise MpsParseError("malformed %s entry" % section, line=lineno)
            target = rhs_vals if section == "RHS" else range_vals
            for rname, val in zip(pairs[0::2], pairs[1::2]):
                if rname not in row_sense:
                    raise MpsParseError(
                        "%s for unknown row %s" % (section, rname), line=lineno
                    )
                try:
                    target[rname] = float(val)
                except ValueError:
                    raise MpsParseError("bad value %r" % val, line=lineno)
            continue
        if section == "BOUNDS":
            btype = tok[0].upper()
            if btype in ("FR", "MI", "PL", "BV"):
                if len(tok) < 3:
                    raise MpsParseError("malformed BOUNDS entry", line=lineno)
                col, val = tok[2], None
            else:
                if len(tok) < 4:
                    raise MpsParseError("malformed BOUNDS entry", line=lineno)
                col = tok[2]
                try:
                    val = float(tok[3])
                except ValueError:
                    raise MpsParseError("bad bound value %r" % tok[3], line=lineno)
            if col not in col_entries:
                raise MpsParseError("bound on unknown column %s" % col, line=lineno)
            bounds.setdefault(col, []).append((btype, val))
            continue
        raise MpsParseError("data before any section header", line=lineno)

    if "ROWS" not in seen:
        raise MpsParseError("missing ROWS section")
    if "COLUMNS" not in seen:
        raise MpsParseError("missing COLUMNS section")

    sign = -1.0 if objsense.startswith("MAX") else 1.0
    variables = []
    for col in col_order:
        kind = INTEGER if col in integrality else CONTINUOUS
        lo, hi = 0.0, math.inf
        for btype, val in bounds.get(col, ()):
            if btype == "LO":
                lo = val
            elif btype == "UP":
                hi = val
            elif btype == "FX":
                lo = hi = val
            elif btype == "FR":
                lo, hi = -math.inf, math.inf
            elif btype == "MI":
                lo = -math.inf
            elif btype == "PL":
                hi = math.inf
            elif btype == "BV":
                kind = INTEGER
                lo, hi = 0.0, 1.0
            elif btype == "LI":
                kind = INTEGER
                lo = val
            elif btype == "UI":
                kind = INTEGER
                hi = val
            else:
                raise MpsParseError("unknown bound type %r" % btype)
        if kind == INTEGER:
            if math.isfinite(lo):
                lo = math.ceil(lo - 1e-9)
            if math.isfinite(hi):
                hi = math.floor(hi + 1e-9)
        obj = sign * col_entries[col].get(obj_row, 0.0) if obj_row else 0.0
        variables.append(Variable(col, kind, lo, hi, obj))

    raw_rows = []
    for rname in row_order:
        coefs = {}
        for col in col_order:
            v = col_entries[col].get(rname)
            if v is not None:
                coefs[col] = v
        sense = row_sense[rname]
        rhs = rhs_vals.get(rname, 0.0)
        if rname in range_vals:
            r = range_vals[rname]
            if sense == "L":
                lo_rhs, hi_rhs = rhs - abs(r), rhs
            elif sense == "G":
                lo_rhs, hi_rhs = rhs, rhs + abs(r)
            else:  # E
                if r >= 0:
                    lo_rhs, hi_rhs = rhs, rhs + r
                else:
                    lo_rhs, hi_rhs = rhs + r, rhs
            raw_rows.append(RawRow(rname, dict(coefs), "<=", hi_rhs))
            raw_rows.append(RawRow(rname + "_lo", dict(coefs), ">=", lo_rhs))
        elif sense == "L":
            raw_rows.append(RawRow(rname, coefs, "<=", rhs))
        elif sense == "G":
            raw_rows.append(RawRow(rname, coefs, ">=", rhs))
        else:
            raw_rows.append(RawRow(rname, coefs, "=", rhs))

    instance = MilpInstance(name=name, variables=variables, rows=normalize_rows(raw_rows))
    detect_variable_bounds(instance)
    return instance


def parse_mps_file(path):
    with open(path, "r") as fh:
        return parse_mps(fh, name_hint=str(path))


def parse_solution(stream, instance):
    """Read ``<variable> <value>`` lines into a dense point.

    ``#`` starts a comment; variables absent from the file default to 0.
    """
    values = np.zeros(instance.n_vars)
    idx = instance.var_index
    for lineno, rawline in enumerate(stream, start=1):
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if len(tok) != 2:
            raise SolutionParseError("expected '<name> <value>'", line=lineno)
        if tok[0] not in idx:
            raise SolutionParseError("unknown variable %s" % tok[0], line=lineno)
        try:
            values[idx[tok[0]]] = float(tok[1])
        except ValueError:
            raise SolutionParseError("bad value %r" % tok[1], line=lineno)
    return make_point(instance, values)


def parse_solution_file(path, instance):
    with open(path, "r") as fh:
        return parse_solution(fh, instance)


def write_solution(point, instance, stream):
    for var, val in zip(instance.variables, point):
        stream.write("%s %r\n" % (var.name, float(val)))


def cut_to_dict(cut):
    """Deterministically ordered plain-dict form of a CutRecord."""
    return {
        "name": cut.name,
        "sense": cut.sense,
        "coefficients": {k: float(v) for k, v in cut.coefficients.items()},
        "rhs": float(cut.rhs),
        "violation": float(cut.violation),
        "provenance": {
            "algorithm": cut.algorithm,
            "starting_row": cut.starting_row,
            "used_rows": [
                {"row": r, "factor": float(f)} for r, f in cut.used_rows
            ],
            "T": list(cut.partition_t),
            "U": list(cut.partition_u),
            "delta": float(cut.delta),
        },
    }


def write_cuts(cuts, stream):
    """One JSON object per line, field order fixed, round-trip floats."""
    for cut in cuts:
        stream.write(json.dumps(cut_to_dict(cut)) + "\n")
