"""Piecewise-linear metrics on complexes and finite metric spaces.

A metric on a complex is a positive length per edge; vertex distances are
shortest-path distances in the weighted 1-skeleton.  Lengths given as
``int``/``Fraction`` (or decimal strings) keep every derived distance exact;
any ``float`` length switches the whole computation to double precision.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Dict, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import shortest_path

from .complex import Simplex, SimplicialComplex, validate_complex
from .errors import (BadIndex, Disconnected, NonpositiveScale, UnsupportedDimension,
                     ValidationError)

FLOAT_RTOL = 1e-9


def parse_length(value):
    """Lengths from JSON: decimal strings become exact fractions."""
    if isinstance(value, str):
        return _normalize(Fraction(value))
    if isinstance(value, bool):
        raise ValidationError(f"bad length {value!r}")
    if isinstance(value, (int, Fraction)):
        return _normalize(Fraction(value))
    return float(value)


def _normalize(value):
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    return value


def is_exact(value) -> bool:
    return isinstance(value, Rational)


@dataclass(frozen=True, eq=False)
class MetricComplex:
    """A simplicial complex with a positive length on every edge."""

    complex: SimplicialComplex
    edge_lengths: Mapping[Simplex, object]

    def __post_init__(self):
        lengths = {}
        for e in self.complex.edges:
            if e not in self.edge_lengths:
                raise ValidationError(f"edge {e} has no length")
            ell = self.edge_lengths[e]
            ell = _normalize(ell) if is_exact(ell) else float(ell)
            if not ell > 0 or ell != ell or ell == float("inf"):
                raise ValidationError(f"edge {e} has non-positive or non-finite length {ell}")
            lengths[e] = ell
        extra = set(self.edge_lengths) - set(lengths)
        if extra:
            raise BadIndex(f"lengths given for non-edges {sorted(extra)[:3]}")
        object.__setattr__(self, "edge_lengths", lengths)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MetricComplex):
            return NotImplemented
        return self.complex == other.complex and self.edge_lengths == other.edge_lengths

    __hash__ = None

    @property
    def exact(self) -> bool:
        return all(is_exact(v) for v in self.edge_lengths.values())

    @property
    def dimension(self) -> int:
        return self.complex.dimension

    def length(self, a: int, b: int):
        return self.edge_lengths[(a, b) if a < b else (b, a)]

    def total_length(self):
        return sum(self.edge_lengths.values())

    @classmethod
    def uniform(cls, complex_: SimplicialComplex, length=1) -> "MetricComplex":
        return cls(complex_, {e: length for e in complex_.edges})


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """Labelled points with a symmetric distance matrix.

    Exact spaces hold an ``object`` array of ints/Fractions, float spaces a
    ``float64`` array.  Construction checks zero diagonal, symmetry,
    off-diagonal positivity and (unless ``check_triangle=False``) the
    triangle inequality: exactly for exact spaces, to 1e-9 relative for
    float spaces.
    """

    labels: Tuple
    distances: np.ndarray
    check_triangle: bool = True

    def __post_init__(self):
        d = self.distances
        if not isinstance(d, np.ndarray):
            d = np.asarray(d)
        exact = d.dtype == object or np.issubdtype(d.dtype, np.integer)
        d = d.astype(object) if exact else d.astype(float)
        n = len(self.labels)
        if d.shape != (n, n):
            raise ValidationError(f"distance matrix shape {d.shape} does not match {n} labels")
        if exact:
            d = np.vectorize(lambda v: _normalize(Fraction(v)), otypes=[object])(d) if n else d
            if any(d[i, i] != 0 for i in range(n)):
                raise ValidationError("nonzero diagonal")
            if not (d == d.T).all():
                raise ValidationError("distance matrix is not symmetric")
            off = d[~np.eye(n, dtype=bool)]
            if any(v <= 0 for v in off):
                raise ValidationError("distinct points at non-positive distance")
        else:
            scale = float(np.abs(d).max()) if n else 0.0
            tol = FLOAT_RTOL * max(scale, 1.0)
            if n and np.abs(np.diag(d)).max() > tol:
                raise ValidationError("nonzero diagonal")
            if n and np.abs(d - d.T).max() > tol:
                raise ValidationError("distance matrix is not symmetric")
            if n > 1 and d[~np.eye(n, dtype=bool)].min() <= 0:
                raise ValidationError("distinct points at non-positive distance")
        d.setflags(write=False)
        object.__setattr__(self, "distances", d)
        object.__setattr__(self, "labels", tuple(self.labels))
        if self.check_triangle and n > 2:
            violation = triangle_violation(d)
            bound = 0 if exact else FLOAT_RTOL * max(float(np.abs(d).max()), 1.0)
            if violation > bound:
                raise ValidationError(f"triangle inequality fails by {violation}")

    @property
    def exact(self) -> bool:
        return self.distances.dtype == object

    def __len__(self) -> int:
        return len(self.labels)

    def __getitem__(self, ij):
        return self.distances[ij]

    def diameter(self):
        return self.distances.max() if len(self) else 0

    def critical_scales(self) -> list:
        """Sorted distinct off-diagonal distances."""
        iu = np.triu_indices(len(self), 1)
        return sorted(set(self.distances[iu].tolist()))

    def scaled(self, lam) -> "FiniteMetricSpace":
        return FiniteMetricSpace(self.labels, self.distances * lam, check_triangle=False)

    def restrict(self, indices: Sequence[int]) -> "FiniteMetricSpace":
        idx = list(indices)
        return FiniteMetricSpace(tuple(self.labels[i] for i in idx),
                                 self.distances[np.ix_(idx, idx)], check_triangle=False)


def triangle_violation(d: np.ndarray):
    """Largest amount by which some d(i,k) exceeds d(i,j) + d(j,k)."""
    n = d.shape[0]
    worst = 0
    for j in range(n):
        via = d[:, j][:, None] + d[j, :][None, :]
        excess = (d - via).max()
        if excess > worst:
            worst = excess
    return worst


def path_metric(mc: MetricComplex) -> FiniteMetricSpace:
    """All-pairs shortest-path distances on the weighted 1-skeleton."""
    n = mc.complex.vertex_count
    labels = tuple(range(n))
    if n == 0:
        return FiniteMetricSpace(labels, np.zeros((0, 0)))
    if mc.exact:
        adj: Dict[int, list] = {v: [] for v in range(n)}
        for (a, b), ell in mc.edge_lengths.items():
            adj[a].append((b, ell))
            adj[b].append((a, ell))
        d = np.empty((n, n), dtype=object)
        for src in range(n):
            dist = _dijkstra(adj, src)
            if len(dist) != n:
                raise Disconnected(f"vertex {src} cannot reach every vertex")
            for v, val in dist.items():
                d[src, v] = val
        return FiniteMetricSpace(labels, d, check_triangle=False)
    rows, cols, vals = [], [], []
    for (a, b), ell in mc.edge_lengths.items():
        rows.append(a)
        cols.append(b)
        vals.append(float(ell))
    graph = coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    d = shortest_path(graph, method="D", directed=False)
    if not np.isfinite(d).all():
        raise Disconnected("the 1-skeleton is disconnected")
    return FiniteMetricSpace(labels, d, check_triangle=False)


def _dijkstra(adj, src: int) -> Dict[int, object]:
    dist = {src: 0}
    heap = [(0, src)]
    done = set()
    while heap:
        du, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, ell in adj[u]:
            nd = du + ell
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return {v: _normalize(Fraction(x)) if is_exact(x) else x for v, x in dist.items()}


def scale_metric(mc: MetricComplex, lam) -> MetricComplex:
    """Multiply every edge length by ``lam > 0``."""
    if not lam > 0:
        raise NonpositiveScale(f"scale must be positive, got {lam}")
    if is_exact(lam):
        lam = _normalize(Fraction(lam))
    return MetricComplex(mc.complex, {e: ell * lam for e, ell in mc.edge_lengths.items()})


def subdivide(mc: MetricComplex, rounds: int = 1) -> MetricComplex:
    """Edge-midpoint subdivision, repeated ``rounds`` times.

    Every edge is split in half.  In dimension 2 each triangle is cut into
    four; a new interior edge joins the midpoints of two sides and, in the
    flat triangle with the parent's edge lengths, is parallel to the third
    side with half its length.  Original vertices keep their indices and
    midpoints are appended in sorted-edge order.
    """
    if rounds < 0:
        raise ValidationError("rounds must be nonnegative")
    if mc.dimension >= 3:
        raise UnsupportedDimension("only complexes of dimension <= 2 are subdivided")
    half = Fraction(1, 2) if mc.exact else 0.5
    for _ in range(rounds):
        cx = mc.complex
        n = cx.vertex_count
        mid = {e: n + i for i, e in enumerate(cx.edges)}
        lengths: Dict[Simplex, object] = {}
        top = []
        for (a, b), ell in mc.edge_lengths.items():
            m = mid[(a, b)]
            lengths[(a, m)] = _normalize(ell * half) if mc.exact else ell * half
            lengths[(b, m)] = lengths[(a, m)]
            top += [(a, m), (b, m)]
        for a, b, c in cx.n_simplices(2):
            mab, mac, mbc = mid[(a, b)], mid[(a, c)], mid[(b, c)]
            for (p, q), opposite in (((mab, mac), (b, c)), ((mab, mbc), (a, c)), ((mac, mbc), (a, b))):
                key = (min(p, q), max(p, q))
                ell = mc.edge_lengths[opposite] * half
                lengths[key] = _normalize(ell) if mc.exact else ell
            top += [(a, mab, mac), (b, mab, mbc), (c, mac, mbc), (mab, mac, mbc)]
        top += [(v,) for v in range(n)]
        new = validate_complex({"vertex_count": n + len(cx.edges),
                                "simplices": [tuple(sorted(s)) for s in top]}, close=True)
        mc = MetricComplex(new, {tuple(sorted(e)): v for e, v in lengths.items()})
    return mc


@dataclass(frozen=True, eq=False)
class KuratowskiPoints:
    """Point ``w`` of the space sits at the vector ``d(w, .)``."""

    space: FiniteMetricSpace
    coordinates: np.ndarray

    def __len__(self) -> int:
        return self.coordinates.shape[0]


def sup_distances(points: np.ndarray) -> np.ndarray:
    """Pairwise sup-norm distances between the rows of ``points``."""
    n = points.shape[0]
    out = np.empty((n, n), dtype=points.dtype)
    for i in range(n):
        out[i] = np.abs(points - points[i]).max(axis=1) if points.shape[1] else 0
    return out


def kuratowski_embed(fms: FiniteMetricSpace, verify: bool = True) -> KuratowskiPoints:
    """Embed a finite metric space isometrically into sup-norm space."""
    coords = np.array(fms.distances, copy=True)
    if verify and len(fms):
        sup = sup_distances(coords)
        if fms.exact:
            ok = (sup == fms.distances).all()
        else:
            ok = np.allclose(sup, fms.distances, rtol=FLOAT_RTOL, atol=0)
        if not ok:
            raise ValidationError("Kuratowski embedding is not isometric; input is not a metric")
    return KuratowskiPoints(fms, coords)
