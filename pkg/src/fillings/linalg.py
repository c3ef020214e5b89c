"""Exact sparse linear algebra over Z, Q and Z/2.

Matrices are given column-wise: ``columns[j]`` maps a row index to a nonzero
entry.  Boundary matrices of simplicial complexes are very sparse and almost
always admit pivots equal to +1 or -1, so the integer eliminator pivots on
units first and hands only the (usually tiny) leftover block to a dense Smith
normal form.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .snf import smith_normal_form

Number = int | Fraction
Column = Mapping[int, Number]


# --------------------------------------------------------------------------
# Z/2: rows as Python-int bitsets over columns


def _rows_as_bits(columns: Sequence[Iterable[int]], nrows: int) -> List[int]:
    rows = [0] * nrows
    for j, col in enumerate(columns):
        bit = 1 << j
        for i in col:
            rows[i] ^= bit
    return rows


def gf2_solve(columns: Sequence[Iterable[int]], nrows: int,
              rhs: Iterable[int]) -> Optional[List[int]]:
    """Solve ``A x = b`` over Z/2.

    ``columns[j]`` lists the rows where column ``j`` is one and ``rhs`` lists
    the rows where ``b`` is one.  Returns the support of one solution, or
    ``None`` if ``b`` is not in the column space.
    """
    ncols = len(columns)
    rows = _rows_as_bits(columns, nrows)
    zbit = 1 << ncols
    for i in rhs:
        rows[i] ^= zbit
    colmask = zbit - 1
    pivots: Dict[int, int] = {}
    for row in rows:
        while row & colmask:
            p = (row & -row).bit_length() - 1
            other = pivots.get(p)
            if other is None:
                pivots[p] = row
                break
            row ^= other
        else:
            if row:
                return None
    x = 0
    for p in sorted(pivots, reverse=True):
        row = pivots[p]
        if ((row >> ncols) ^ (row & x).bit_count()) & 1:
            x |= 1 << p
    return [j for j in range(ncols) if (x >> j) & 1]


def gf2_rref(columns: Sequence[Iterable[int]], nrows: int) -> Tuple[Dict[int, int], List[int]]:
    """Fully reduced row echelon form over Z/2.

    Returns ``(pivots, free)``: ``pivots[p]`` is the reduced row whose lowest
    column is ``p`` (no other pivot row touches column ``p``), and ``free``
    lists the non-pivot columns.
    """
    ncols = len(columns)
    pivots: Dict[int, int] = {}
    for row in _rows_as_bits(columns, nrows):
        for p, prow in pivots.items():
            if (row >> p) & 1:
                row ^= prow
        if row:
            p = (row & -row).bit_length() - 1
            for q in pivots:
                if (pivots[q] >> p) & 1:
                    pivots[q] ^= row
            pivots[p] = row
    free = [j for j in range(ncols) if j not in pivots]
    return pivots, free


def gf2_rank(columns: Sequence[Iterable[int]], nrows: int) -> int:
    pivots: Dict[int, int] = {}
    for row in _rows_as_bits(columns, nrows):
        while row:
            p = (row & -row).bit_length() - 1
            other = pivots.get(p)
            if other is None:
                pivots[p] = row
                break
            row ^= other
    return len(pivots)


def gf2_kernel(columns: Sequence[Iterable[int]], nrows: int) -> List[List[int]]:
    """Basis of the null space over Z/2, one support list per vector.

    Each basis vector owns exactly one free column, so the basis is in
    reduced form.
    """
    pivots, free = gf2_rref(columns, nrows)
    basis = []
    for f in free:
        support = [f] + [p for p, row in pivots.items() if (row >> f) & 1]
        basis.append(sorted(support))
    return basis


# --------------------------------------------------------------------------
# Z and Q: sparse elimination with unit pivots first


class ExactElimination:
    """Row-reduce an integer matrix, remembering the operations.

    ``ring`` is ``"z"`` or ``"q"``.  Over Q every nonzero entry can serve as
    a pivot (units are preferred to keep entries integral).  Over Z only
    +1/-1 pivots are taken; what remains is the residual block, which is put
    in Smith normal form.  The factorization can be reused for any number of
    right-hand sides.
    """

    def __init__(self, columns: Sequence[Column], nrows: int, ring: str = "q"):
        if ring not in ("z", "q"):
            raise ValueError(f"ring must be 'z' or 'q', got {ring!r}")
        self.ring = ring
        self.nrows = nrows
        self.ncols = len(columns)
        rows: List[Dict[int, Number]] = [dict() for _ in range(nrows)]
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    rows[i][j] = v
        self._ops: List[Tuple[int, List[Tuple[int, Number]]]] = []
        self._pivots: List[Tuple[int, int, Number, Dict[int, Number]]] = []
        self._eliminate(rows)

    def _eliminate(self, rows: List[Dict[int, Number]]) -> None:
        field = self.ring == "q"
        col_rows: Dict[int, set] = {}
        for i, row in enumerate(rows):
            for j in row:
                col_rows.setdefault(j, set()).add(i)
        active = {i for i, row in enumerate(rows) if row}
        heap = [(len(rows[i]), i) for i in active]
        heapq.heapify(heap)
        stalled: set = set()
        while heap:
            length, i = heapq.heappop(heap)
            if i not in active or len(rows[i]) != length or i in stalled:
                continue
            row = rows[i]
            if not row:
                active.discard(i)
                continue
            units = [j for j, v in row.items() if v == 1 or v == -1]
            if units:
                j = min(units, key=lambda c: (len(col_rows[c]), c))
            elif field:
                j = min(row, key=lambda c: (len(col_rows[c]), c))
            else:
                stalled.add(i)
                continue
            p = row[j]
            active.discard(i)
            for c in row:
                col_rows[c].discard(i)
            ops = []
            for r in list(col_rows[j]):
                target = rows[r]
                factor = target[j] * p if p in (1, -1) else Fraction(target[j]) / p
                for c, v in row.items():
                    nv = target.get(c, 0) - factor * v
                    if nv:
                        if c not in target:
                            col_rows[c].add(r)
                        target[c] = nv
                    else:
                        if c in target:
                            del target[c]
                            col_rows[c].discard(r)
                ops.append((r, factor))
                stalled.discard(r)
                heapq.heappush(heap, (len(target), r))
            self._ops.append((i, ops))
            self._pivots.append((i, j, p, dict(row)))
        self._residual_rows = sorted(i for i in active if rows[i])
        self._residual_cols = sorted({c for i in self._residual_rows for c in rows[i]})
        self._rank = len(self._pivots)
        self._snf = None
        if self._residual_rows:
            # only reachable over Z
            cidx = {c: k for k, c in enumerate(self._residual_cols)}
            dense = [[0] * len(self._residual_cols) for _ in self._residual_rows]
            for a, i in enumerate(self._residual_rows):
                for c, v in rows[i].items():
                    dense[a][cidx[c]] = int(v)
            d, s, t = smith_normal_form(dense)
            diag = []
            for k in range(min(len(d), len(d[0]))):
                if d[k][k] == 0:
                    break
                diag.append(d[k][k])
            self._snf = (diag, s, t)
            self._rank += len(diag)

    @property
    def rank(self) -> int:
        return self._rank

    @property
    def pivot_columns(self) -> List[int]:
        return [j for _, j, _, _ in self._pivots]

    @property
    def pivot_rows(self) -> List[int]:
        """Rows carrying a unit/field pivot (a row basis when no residual)."""
        return [i for i, _, _, _ in self._pivots]

    def invariant_factors(self) -> List[int]:
        """Invariant factors greater than one (torsion coefficients over Z)."""
        if self._snf is None:
            return []
        return [v for v in self._snf[0] if v > 1]

    def _reduced_rhs(self, rhs: Mapping[int, Number]) -> Dict[int, Number]:
        b: Dict[int, Number] = {i: v for i, v in rhs.items() if v}
        for i, ops in self._ops:
            bi = b.get(i)
            if not bi:
                continue
            for r, factor in ops:
                nv = b.get(r, 0) - factor * bi
                if nv:
                    b[r] = nv
                else:
                    b.pop(r, None)
        return b

    def solve(self, rhs: Mapping[int, Number]) -> Optional[Dict[int, Number]]:
        """One solution of ``A x = rhs`` over the ring, or ``None``."""
        b = self._reduced_rhs(rhs)
        pivot_rows = {i for i, _, _, _ in self._pivots}
        residual = set(self._residual_rows)
        for i, v in b.items():
            if v and i not in pivot_rows and i not in residual:
                return None
        x: Dict[int, Number] = {}
        if self._snf is not None:
            diag, s, t = self._snf
            rb = [b.get(i, 0) for i in self._residual_rows]
            sb = [sum(s[a][k] * rb[k] for k in range(len(rb)) if s[a][k]) for a in range(len(s))]
            y = []
            for a, v in enumerate(sb):
                if a < len(diag):
                    if self.ring == "z" and v % diag[a]:
                        return None
                    y.append(v // diag[a] if self.ring == "z" else Fraction(v) / diag[a])
                elif v:
                    return None
            for k, c in enumerate(self._residual_cols):
                val = sum(t[k][a] * y[a] for a in range(len(y)) if t[k][a])
                if val:
                    x[c] = val
        elif self._residual_rows:
            raise AssertionError("residual without Smith form")
        return self._back_substitute(b, x)

    def _back_substitute(self, b: Mapping[int, Number], x: Dict[int, Number]) -> Dict[int, Number]:
        for i, j, p, row in reversed(self._pivots):
            acc = b.get(i, 0)
            for c, v in row.items():
                if c != j:
                    xc = x.get(c)
                    if xc:
                        acc -= v * xc
            if acc:
                if p == 1:
                    x[j] = acc
                elif p == -1:
                    x[j] = -acc
                else:
                    val = Fraction(acc) / p
                    x[j] = val.numerator if val.denominator == 1 else val
        return {c: v for c, v in x.items() if v}

    def kernel_basis(self) -> List[Dict[int, Number]]:
        """Null-space basis over Q (one vector per non-pivot column).

        Only available when elimination left no residual block, which is
        always the case over Q.
        """
        if self._residual_rows:
            raise ValueError("kernel_basis needs a full elimination (use ring='q')")
        pivot_cols = set(self.pivot_columns)
        basis = []
        for f in range(self.ncols):
            if f in pivot_cols:
                continue
            basis.append(self._back_substitute({}, {f: 1}))
        return basis


def exact_rank(columns: Sequence[Column], nrows: int, ring: str) -> int:
    if ring == "z2":
        return gf2_rank([[i for i, v in col.items() if v % 2] for col in columns], nrows)
    return ExactElimination(columns, nrows, "q" if ring == "q" else "z").rank
