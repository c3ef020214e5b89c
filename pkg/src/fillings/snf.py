"""Smith normal form of dense integer matrices with unimodular transforms."""

from __future__ import annotations

from typing import List, Sequence, Tuple

Matrix = List[List[int]]


def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(a: Sequence[Sequence[int]]) -> Tuple[Matrix, Matrix, Matrix]:
    """Return ``(D, S, T)`` with ``D == S @ A @ T``.

    ``S`` and ``T`` are unimodular, ``D`` is diagonal with nonnegative entries
    and each nonzero diagonal entry divides the next.  All arithmetic uses
    Python integers, so there is no overflow.
    """
    d = [list(map(int, row)) for row in a]
    m = len(d)
    n = len(d[0]) if m else 0
    s = _identity(m)
    t = _identity(n)

    def swap_rows(i: int, j: int) -> None:
        if i != j:
            d[i], d[j] = d[j], d[i]
            s[i], s[j] = s[j], s[i]

    def swap_cols(i: int, j: int) -> None:
        if i != j:
            for row in d:
                row[i], row[j] = row[j], row[i]
            for row in t:
                row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, q: int) -> None:
        # row_dst += q * row_src
        if q:
            rd, rs = d[dst], d[src]
            for k in range(n):
                if rs[k]:
                    rd[k] += q * rs[k]
            sd, ss = s[dst], s[src]
            for k in range(m):
                if ss[k]:
                    sd[k] += q * ss[k]

    def add_col(dst: int, src: int, q: int) -> None:
        if q:
            for row in d:
                if row[src]:
                    row[dst] += q * row[src]
            for row in t:
                if row[src]:
                    row[dst] += q * row[src]

    for k in range(min(m, n)):
        best = None
        for i in range(k, m):
            for j in range(k, n):
                v = d[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(k, best[1])
        swap_cols(k, best[2])
        while True:
            dirty = False
            for i in range(k + 1, m):
                if d[i][k]:
                    add_row(i, k, -(d[i][k] // d[k][k]))
                    if d[i][k]:
                        dirty = True
            for j in range(k + 1, n):
                if d[k][j]:
                    add_col(j, k, -(d[k][j] // d[k][k]))
                    if d[k][j]:
                        dirty = True
            if dirty:
                # a remainder smaller than the pivot survived; move it to (k, k)
                best = None
                for i in range(k, m):
                    if d[i][k] and (best is None or abs(d[i][k]) < best[0]):
                        best = (abs(d[i][k]), i, k)
                for j in range(k, n):
                    if d[k][j] and (best is None or abs(d[k][j]) < best[0]):
                        best = (abs(d[k][j]), k, j)
                swap_rows(k, best[1])
                swap_cols(k, best[2])
                continue
            piv = d[k][k]
            bad = None
            for i in range(k + 1, m):
                for j in range(k + 1, n):
                    if d[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(k, bad, 1)
        if d[k][k] < 0:
            d[k] = [-v for v in d[k]]
            s[k] = [-v for v in s[k]]
    return d, s, t


def invariant_factors(a: Sequence[Sequence[int]]) -> List[int]:
    """Nonzero diagonal of the Smith normal form, in divisibility order."""
    d, _, _ = smith_normal_form(a)
    out = []
    for k in range(min(len(d), len(d[0]) if d else 0)):
        if d[k][k] == 0:
            break
        out.append(d[k][k])
    return out
