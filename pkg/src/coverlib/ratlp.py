"""Exact rational feasibility of systems  { x >= 0,  A x >= b }.

Decided with a phase-one simplex over ``fractions.Fraction``.  Every
pivot is exact, Bland's smallest-index rule prevents cycling, and a
returned witness satisfies the system exactly; no floating point ever
enters the decision path.

Construction of the tableau, per inequality row:

* ``b_i <= 0``: the row holds at x = 0, so it only needs a surplus
  variable and that surplus starts basic (the row is negated first so
  the right-hand side is non-negative).
* ``b_i > 0``: the row gets a surplus variable with coefficient -1 plus
  an artificial variable that starts basic.

Phase one minimises the sum of artificials; the system is feasible
exactly when that minimum is zero.  Artificial columns never re-enter
the basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple


@dataclass(frozen=True)
class FeasibilityProblem:
    """Integer data of the system  { x >= 0, a x >= b }.

    ``a`` is a tuple of rows (one inequality each); all rows must have
    the same number of columns, one per variable.  ``b`` holds one bound
    per row.  A system with zero columns is legal and constrains nothing
    beyond the signs of ``b``.
    """

    a: Tuple[Tuple[int, ...], ...]
    b: Tuple[int, ...]

    def __post_init__(self) -> None:
        a = tuple(tuple(row) for row in self.a)
        b = tuple(self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if len(a) != len(b):
            raise ValueError(f"{len(a)} rows but {len(b)} bounds")
        if a:
            width = len(a[0])
            for row in a:
                if len(row) != width:
                    raise ValueError("ragged constraint matrix")
        for row in a:
            for v in row:
                if not isinstance(v, int):
                    raise ValueError(f"matrix entries must be integers, got {v!r}")
        for v in b:
            if not isinstance(v, int):
                raise ValueError(f"bounds must be integers, got {v!r}")

    @property
    def num_vars(self) -> int:
        return len(self.a[0]) if self.a else 0


def _pivot(rows: List[List[Fraction]], obj: List[Fraction], r: int, c: int) -> None:
    piv = rows[r][c]
    rows[r] = [v / piv for v in rows[r]]
    prow = rows[r]
    for i, row in enumerate(rows):
        if i != r and row[c]:
            f = row[c]
            rows[i] = [v - f * pv for v, pv in zip(row, prow)]
    if obj[c]:
        f = obj[c]
        obj[:] = [v - f * pv for v, pv in zip(obj, prow)]


def feasible(problem: FeasibilityProblem) -> Tuple[bool, Optional[List[Fraction]]]:
    """Decide the system; on success also return one exact solution.

    Returns ``(True, witness)`` with ``witness[j] >= 0`` satisfying every
    row of ``a . witness >= b``, or ``(False, None)``.
    """
    m = len(problem.a)
    n = problem.num_vars

    art_rows = [i for i, bi in enumerate(problem.b) if bi > 0]
    if not art_rows:
        return True, [Fraction(0)] * n

    n_art = len(art_rows)
    total = n + m + n_art  # lambdas, surpluses, artificials
    rows: List[List[Fraction]] = []
    basis: List[int] = []
    art_col_of_row = {}
    next_art = 0
    for i in range(m):
        coeffs = [Fraction(0)] * (total + 1)
        bi = problem.b[i]
        if bi <= 0:
            for j, aij in enumerate(problem.a[i]):
                coeffs[j] = Fraction(-aij)
            coeffs[n + i] = Fraction(1)
            coeffs[total] = Fraction(-bi)
            basis.append(n + i)
        else:
            for j, aij in enumerate(problem.a[i]):
                coeffs[j] = Fraction(aij)
            coeffs[n + i] = Fraction(-1)
            col = n + m + next_art
            next_art += 1
            coeffs[col] = Fraction(1)
            coeffs[total] = Fraction(bi)
            basis.append(col)
            art_col_of_row[i] = col
        rows.append(coeffs)

    # Objective: sum of artificials, expressed over non-basic columns.
    obj = [Fraction(0)] * (total + 1)
    for i in art_rows:
        for j, v in enumerate(rows[i]):
            obj[j] += v
    for col in art_col_of_row.values():
        obj[col] = Fraction(0)

    while True:
        enter = None
        for j in range(n + m):  # Bland: smallest improving column, no artificials
            if obj[j] > 0:
                enter = j
                break
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            c = rows[i][enter]
            if c > 0:
                ratio = rows[i][total] / c
                if (best is None or ratio < best
                        or (ratio == best and basis[i] < basis[leave])):
                    best = ratio
                    leave = i
        if leave is None:
            # The phase-one objective is bounded below by zero, so an
            # unbounded improving direction cannot exist.
            raise ArithmeticError("phase-one simplex lost boundedness")
        _pivot(rows, obj, leave, enter)
        basis[leave] = enter

    if obj[total] != 0:
        return False, None

    witness = [Fraction(0)] * n
    for i, col in enumerate(basis):
        if col < n:
            witness[col] = rows[i][total]

    # Exactness guard: the arithmetic is rational, so a true verdict must
    # re-substitute cleanly.  A failure here means a bug, not bad input.
    for row, bi in zip(problem.a, problem.b):
        lhs = sum(aij * xj for aij, xj in zip(row, witness))
        if lhs < bi:
            raise ArithmeticError("simplex produced an invalid witness")
    for xj in witness:
        if xj < 0:
            raise ArithmeticError("simplex produced a negative witness entry")
    return True, witness
