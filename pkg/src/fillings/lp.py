"""Exact rational linear programming: minimize c.x subject to A x = b, x >= 0.

The solver is a revised simplex method with Bland's rule, so it cannot
cycle.  Each iteration factors the basis with the exact sparse eliminator.
A floating-point HiGHS solve may propose a starting basis; it only ever
saves pivots, since the final basis is re-derived and its primal and dual
feasibility are checked in exact arithmetic.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence

import numpy as np

from .errors import BudgetError, Infeasible
from .linalg import ExactElimination

log = logging.getLogger(__name__)

Column = Mapping[int, object]


@dataclass
class LPResult:
    x: Dict[int, Fraction]
    objective: Fraction
    basis: List[int]
    dual: Dict[int, Fraction]
    pivots: int
    warm_started: bool = False
    removed_rows: List[int] = field(default_factory=list)


def _q(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


def independent_rows(columns: Sequence[Column], nrows: int) -> List[int]:
    """A maximal set of linearly independent rows of ``A`` (over Q)."""
    transposed: List[Dict[int, object]] = [dict() for _ in range(nrows)]
    for j, col in enumerate(columns):
        for i, v in col.items():
            if v:
                transposed[i][j] = v
    elim = ExactElimination(transposed, len(columns), "q")
    return sorted(elim.pivot_columns)


class _Basis:
    """Exact factorization of the basis matrix and of its transpose."""

    def __init__(self, cols: Sequence[Column], m: int):
        self.m = m
        self.cols = cols
        self.fwd = ExactElimination(cols, m, "q")
        if self.fwd.rank != m:
            raise ValueError("singular basis")
        rows: List[Dict[int, object]] = [dict() for _ in range(m)]
        for k, col in enumerate(cols):
            for i, v in col.items():
                rows[i][k] = v
        self.bwd = ExactElimination(rows, m, "q")

    def solve(self, rhs: Mapping[int, object]) -> Dict[int, Fraction]:
        """Coefficients of ``rhs`` in the basis columns, by position."""
        out = self.fwd.solve(rhs)
        assert out is not None
        return {k: _q(v) for k, v in out.items()}

    def solve_transposed(self, rhs: Mapping[int, object]) -> Dict[int, Fraction]:
        out = self.bwd.solve(rhs)
        assert out is not None
        return {i: _q(v) for i, v in out.items()}


def _dot(col: Column, y: Mapping[int, Fraction]) -> Fraction:
    acc = Fraction(0)
    for i, v in col.items():
        yi = y.get(i)
        if yi:
            acc += v * yi
    return acc


def _simplex(cols: List[Column], cost: List[Fraction], b: Dict[int, Fraction], m: int,
             basis: List[int], allowed: int, max_pivots: int):
    """Bland-rule primal simplex from a primal-feasible basis.

    Only columns ``< allowed`` may enter.  Returns (basis, x_B, y, pivots).
    """
    pivots = 0
    while True:
        fac = _Basis([cols[j] for j in basis], m)
        xb = fac.solve(b)
        y = fac.solve_transposed({k: cost[j] for k, j in enumerate(basis) if cost[j]})
        in_basis = set(basis)
        entering = None
        for j in range(allowed):
            if j in in_basis:
                continue
            if cost[j] - _dot(cols[j], y) < 0:
                entering = j
                break
        if entering is None:
            return basis, xb, y, pivots
        d = fac.solve(cols[entering])
        best = None
        for k, dk in d.items():
            if dk > 0:
                ratio = xb.get(k, Fraction(0)) / dk
                key = (ratio, basis[k])
                if best is None or key < best[0]:
                    best = (key, k)
        if best is None:
            raise Infeasible("linear program is unbounded")
        basis[best[1]] = entering
        pivots += 1
        if pivots > max_pivots:
            raise BudgetError(f"simplex exceeded {max_pivots} pivots")


def _highs_basis(cols: List[Column], cost: List[Fraction], b: Dict[int, Fraction],
                 m: int) -> Optional[List[int]]:
    """A candidate optimal basis from a floating-point HiGHS solve, or None.

    The support of the HiGHS vertex is completed by columns of zero reduced
    cost (with respect to the HiGHS duals), chosen numerically independent
    by pivoted QR.  The result is only a guess; the caller checks it exactly.
    """
    from scipy.linalg import qr
    from scipy.optimize import linprog
    from scipy.sparse import coo_matrix

    n = len(cols)
    r, c, v = [], [], []
    for j, col in enumerate(cols):
        for i, a in col.items():
            r.append(i)
            c.append(j)
            v.append(float(a))
    A = coo_matrix((v, (r, c)), shape=(m, n)).tocsc()
    rhs = np.array([float(b.get(i, 0)) for i in range(m)])
    cf = np.array([float(x) for x in cost])
    res = linprog(cf, A_eq=A, b_eq=rhs, bounds=(0, None), method="highs-ds")
    if res.status != 0:
        return None
    scale = max(1.0, float(np.abs(res.x).max()))
    support = [int(j) for j in np.flatnonzero(res.x > 1e-9 * scale)]
    if len(support) > m:
        return None
    y = np.asarray(res.eqlin.marginals, dtype=float)
    reduced = cf - A.T @ y
    tol = 1e-9 * max(1.0, float(np.abs(cf).max()))
    chosen = set(support)
    cand = [j for j in np.flatnonzero(np.abs(reduced) <= tol) if j not in chosen]
    need = m - len(support)
    if need == 0:
        return support
    if len(cand) < need:
        return None
    dense = A[:, cand].toarray()
    if support:
        q, _ = np.linalg.qr(A[:, support].toarray())
        dense = dense - q @ (q.T @ dense)
    _, _, piv = qr(dense, mode="economic", pivoting=True)
    return support + [int(cand[k]) for k in piv[:need]]


def _complete(cols: List[Column], guess: List[int], m: int) -> Optional[List[int]]:
    """A basis from the independent part of ``guess``, padded with artificials.

    Artificial column for row ``i`` has index ``len(cols) + i``.
    """
    sub = [cols[j] for j in guess]
    elim = ExactElimination(sub, m, "q")
    keep = [guess[k] for k in sorted(elim.pivot_columns)]
    covered = set(elim.pivot_rows)
    if len(keep) != elim.rank:  # pragma: no cover - Q elimination has no residual
        return None
    return keep + [len(cols) + i for i in range(m) if i not in covered]


def solve_lp(cost: Sequence, columns: Sequence[Column], b: Mapping[int, object], nrows: int,
             warm_start: bool = True, max_pivots: int = 100000) -> LPResult:
    """Exact optimum of ``min cost.x, A x = b, x >= 0``.

    Raises ``Infeasible`` if no nonnegative solution exists.  Redundant
    equality rows are detected exactly and dropped.
    """
    cost = [_q(c) for c in cost]
    n = len(columns)
    full = ExactElimination(columns, nrows, "q")
    if full.solve(b) is None:
        raise Infeasible("A x = b has no solution at all")
    keep = independent_rows(columns, nrows)
    pos = {i: k for k, i in enumerate(keep)}
    removed = [i for i in range(nrows) if i not in pos]
    m = len(keep)
    cols = [{pos[i]: _q(v) for i, v in col.items() if v and i in pos} for col in columns]
    bb = {pos[i]: _q(v) for i, v in b.items() if v and i in pos}
    if m == 0:
        return LPResult({}, Fraction(0), [], {}, 0, removed_rows=removed)
    # artificial columns: sign chosen so the all-artificial basis is feasible
    art = [{i: Fraction(1) if bb.get(i, 0) >= 0 else Fraction(-1)} for i in range(m)]
    allcols = cols + art
    basis = None
    warm = False
    if warm_start:
        guess = _highs_basis(cols, cost, bb, m)
        if guess is not None:
            cand = _complete(cols, guess, m)
            if cand is not None:
                fac = _Basis([allcols[j] for j in cand], m)
                xb = fac.solve(bb)
                art_ok = all(xb.get(k, 0) == 0 for k, j in enumerate(cand) if j >= n)
                if art_ok and all(v >= 0 for v in xb.values()):
                    basis, warm = cand, True
    if basis is None:
        basis = [n + i for i in range(m)]
    pivots = 0
    if warm:
        # artificials of a checked warm basis sit at level zero
        basis = _drive_out(allcols, basis, n, m)
    elif any(j >= n for j in basis):
        phase1 = [Fraction(0)] * n + [Fraction(1)] * m
        basis, xb, _, p = _simplex(allcols, phase1, bb, m, basis, n + m, max_pivots)
        pivots += p
        if any(xb.get(k, 0) != 0 for k, j in enumerate(basis) if j >= n):
            raise Infeasible("no nonnegative solution")
        basis = _drive_out(allcols, basis, n, m)
    basis, xb, y, p = _simplex(allcols, cost + [Fraction(0)] * m, bb, m, basis, n, max_pivots)
    pivots += p
    x = {basis[k]: v for k, v in xb.items() if v}
    obj = sum((cost[j] * v for j, v in x.items()), Fraction(0))
    dual = {keep[i]: v for i, v in y.items() if v}
    log.debug("exact LP: %d rows, %d columns, %d pivots, warm=%s", m, n, pivots, warm)
    return LPResult(x, obj, basis, dual, pivots, warm, removed)


def _drive_out(cols: List[Column], basis: List[int], n: int, m: int) -> List[int]:
    """Replace zero-level artificial basics by original columns (degenerate pivots)."""
    while True:
        ks = [k for k, j in enumerate(basis) if j >= n]
        if not ks:
            return basis
        k = ks[0]
        fac = _Basis([cols[j] for j in basis], m)
        # row k of B^-1 is the solution of B^T u = e_k
        u = fac.solve_transposed({k: 1})
        in_basis = set(basis)
        for j in range(n):
            if j not in in_basis and _dot(cols[j], u) != 0:
                basis[k] = j
                break
        else:  # pragma: no cover - rows are independent
            raise AssertionError("cannot drive artificial variable out of the basis")
