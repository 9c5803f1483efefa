import io

import numpy as np
import pytest

from aggsep.errors import MpsParseError, SolutionParseError
from aggsep.mpsio import (
    CutRecord,
    parse_mps,
    parse_solution,
    write_cuts,
    write_solution,
)

TINY = """NAME tiny
ROWS
 N obj
 L c1
COLUMNS
 x c1 1.0
 MARKER1 'MARKER' 'INTORG'
 y c1 1.0
 MARKER2 'MARKER' 'INTEND'
RHS
 rhs c1 1.0
BOUNDS
 UP bnd x 1.0
 UP bnd y 1.0
"""


def test_parse_tiny_instance():
    inst = parse_mps(io.StringIO(TINY))
    assert inst.name == "tiny"
    assert [v.name for v in inst.variables] == ["x", "y"]
    assert [v.is_integer for v in inst.variables] == [False, True]
    assert len(inst.rows) == 1
    assert inst.rows[0].coefficients == {"x": 1.0, "y": 1.0}
    assert inst.rows[0].rhs == 1.0
    assert inst.upper.tolist() == [1.0, 1.0]


def test_parse_geq_row_normalized():
    text = "ROWS\n N obj\n G c1\nCOLUMNS\n x c1 1.0\nRHS\n rhs c1 2.0\n"
    inst = parse_mps(io.StringIO(text))
    assert inst.rows[0].coefficients == {"x": -1.0}
    assert inst.rows[0].rhs == -2.0


def test_parse_example1_matches_expected_coefficients(example1):
    A = example1.matrix
    expect = np.array(
        [
            [1.0 / 3.0, 1.0, -2.0 / 3.0, 0.0],
            [2.0 / 3.0, -1.0 / 3.0, -4.0 / 3.0, 1.0],
            [0.0, -1.0 / 3.0, 1.0, 0.0],
        ]
    )
    assert np.allclose(A, expect, atol=1e-15)
    assert example1.rhs.tolist() == [1.0, 1.0, 1.0]


def test_parse_errors_carry_line_numbers():
    with pytest.raises(MpsParseError):
        parse_mps(io.StringIO("COLUMNS\n x c1 1.0\n"))  # missing ROWS
    with pytest.raises(MpsParseError):
        parse_mps(io.StringIO("ROWS\n L c1\n"))  # missing COLUMNS
    with pytest.raises(MpsParseError) as exc:
        parse_mps(io.StringIO("ROWS\n L c1\n L c1\nCOLUMNS\n x c1 1.0\n"))
    assert exc.value.line == 3
    with pytest.raises(MpsParseError) as exc:
        parse_mps(io.StringIO("ROWS\n L c1\nCOLUMNS\n x nosuch 1.0\n"))
    assert exc.value.line == 4


def test_parse_ranges_expand_to_pairs():
    text = (
        "ROWS\n N obj\n L c1\nCOLUMNS\n x c1 1.0\nRHS\n rhs c1 5.0\n"
        "RANGES\n rng c1 2.0\n"
    )
    inst = parse_mps(io.StringIO(text))
    assert len(inst.rows) == 2
    # 3 <= x <= 5 expands to {x <= 5, -x <= -3}
    assert inst.rows[0].rhs == 5.0
    assert inst.rows[1].coefficients == {"x": -1.0}
    assert inst.rows[1].rhs == -3.0


def test_parse_integer_bounds_rounded():
    text = (
        "ROWS\n N obj\n L c1\nCOLUMNS\n x c1 1.0\nRHS\n rhs c1 5.0\n"
        "BOUNDS\n UI bnd x 3.7\n"
    )
    inst = parse_mps(io.StringIO(text))
    assert inst.variables[0].is_integer
    assert inst.variables[0].upper == 3.0


def test_parse_deterministic():
    a = parse_mps(io.StringIO(TINY))
    b = parse_mps(io.StringIO(TINY))
    assert np.array_equal(a.matrix, b.matrix)
    assert [v.name for v in a.variables] == [v.name for v in b.variables]


def test_parse_solution_basic(example1):
    point = parse_solution(io.StringIO("x1 0.5\nx2 1.0\n"), example1)
    assert point.tolist() == [0.5, 1.0, 0.0, 0.0]


def test_parse_solution_empty_defaults_to_zero(example1):
    assert parse_solution(io.StringIO(""), example1).tolist() == [0.0] * 4


def test_parse_solution_comments(example1):
    point = parse_solution(io.StringIO("x1 0.5 # at bound\n# whole line\n"), example1)
    assert point.tolist() == [0.5, 0.0, 0.0, 0.0]


def test_parse_solution_errors(example1):
    with pytest.raises(SolutionParseError):
        parse_solution(io.StringIO("nosuch 1.0\n"), example1)
    with pytest.raises(SolutionParseError):
        parse_solution(io.StringIO("x1 abc\n"), example1)


def test_solution_roundtrip(example1):
    point = np.array([0.1, 1.0 / 3.0, 2.5, 0.0])
    buf = io.StringIO()
    write_solution(point, example1, buf)
    back = parse_solution(io.StringIO(buf.getvalue()), example1)
    assert np.max(np.abs(back - point)) <= 1e-15


def _cut(name="c1", violation=0.2):
    return CutRecord(
        name=name,
        coefficients={"x1": 2.0, "x4": 1.0},
        rhs=3.0,
        violation=violation,
        algorithm="lasso",
        starting_row="r1",
        used_rows=[("r1", 1.0), ("r2", 1.0)],
        partition_t=["x1"],
        partition_u=["x4"],
        delta=0.5,
    )


def test_write_cuts_empty():
    buf = io.StringIO()
    write_cuts([], buf)
    assert buf.getvalue() == ""


def test_write_cuts_exact_float_and_order():
    buf = io.StringIO()
    write_cuts([_cut(violation=0.2)], buf)
    line = buf.getvalue().strip()
    assert '"violation": 0.2' in line
    assert line.index('"name"') < line.index('"coefficients"') < line.index('"rhs"')

    buf = io.StringIO()
    write_cuts([_cut("a"), _cut("b")], buf)
    lines = buf.getvalue().splitlines()
    assert len(lines) == 2
    assert '"a"' in lines[0] and '"b"' in lines[1]
