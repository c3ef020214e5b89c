"""Deterministic test complexes with metrics.

``sphere2`` and ``rp2`` carry great-circle edge lengths of the unit sphere,
so their path metrics approach the round metrics as the level grows.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Tuple

import numpy as np

from .complex import SimplicialComplex, validate_complex
from .errors import BadParams
from .metric import FiniteMetricSpace, MetricComplex, parse_length


def cycle(n: int, length=None) -> MetricComplex:
    """``n``-cycle with total length ``length`` split evenly (default ``n``)."""
    if n < 3:
        raise BadParams("a cycle needs at least 3 vertices")
    length = n if length is None else length
    if not length > 0:
        raise BadParams("total length must be positive")
    cx = SimplicialComplex.from_top(n, [tuple(sorted((i, (i + 1) % n))) for i in range(n)])
    step = Fraction(length) / n if isinstance(length, (int, Fraction)) else length / n
    if isinstance(step, Fraction) and step.denominator == 1:
        step = step.numerator
    return MetricComplex.uniform(cx, step)


def _icosahedron() -> Tuple[np.ndarray, List[Tuple[int, int, int]]]:
    phi = (1 + math.sqrt(5)) / 2
    pts = []
    for a in (-1, 1):
        for b in (-1, 1):
            pts += [(0, a, b * phi), (a, b * phi, 0), (b * phi, 0, a)]
    pts = np.array(pts, dtype=float)
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    # order so that antipodal pairs are (i, i + 6)
    order = []
    for i in range(len(pts)):
        if i in order:
            continue
        j = int(np.argmin(np.linalg.norm(pts + pts[i], axis=1)))
        order.append(i)
        order.append(j)
    pts = np.vstack([pts[order[0::2]], pts[order[1::2]]])
    dots = pts @ pts.T
    near = dots > 0.4
    tris = [t for t in combinations(range(12), 3)
            if near[t[0], t[1]] and near[t[0], t[2]] and near[t[1], t[2]]]
    return pts, tris


def _refine(pts: np.ndarray, tris: List[Tuple[int, int, int]]):
    pts = list(map(tuple, pts))
    mid: Dict[Tuple[int, int], int] = {}

    def midpoint(a: int, b: int) -> int:
        key = (min(a, b), max(a, b))
        if key not in mid:
            p = np.add(pts[a], pts[b])
            pts.append(tuple(p / np.linalg.norm(p)))
            mid[key] = len(pts) - 1
        return mid[key]

    edges = sorted({(min(a, b), max(a, b)) for t in tris for a, b in combinations(t, 2)})
    for a, b in edges:
        midpoint(a, b)
    out = []
    for a, b, c in tris:
        ab, ac, bc = midpoint(a, b), midpoint(a, c), midpoint(b, c)
        out += [(a, ab, ac), (b, ab, bc), (c, ac, bc), (ab, ac, bc)]
    return np.array(pts), [tuple(sorted(t)) for t in out]


def sphere_points(level: int) -> Tuple[np.ndarray, List[Tuple[int, int, int]]]:
    """Unit-sphere vertices and triangles of the level-``level`` icosphere."""
    if level < 0:
        raise BadParams("level must be nonnegative")
    pts, tris = _icosahedron()
    for _ in range(level):
        pts, tris = _refine(pts, tris)
    return pts, tris


def _great_circle(p, q) -> float:
    return float(math.acos(max(-1.0, min(1.0, float(np.dot(p, q))))))


def sphere2(level: int = 0) -> MetricComplex:
    """Icosphere with great-circle edge lengths on the unit sphere."""
    pts, tris = sphere_points(level)
    cx = SimplicialComplex.from_top(len(pts), tris)
    return MetricComplex(cx, {e: _great_circle(pts[e[0]], pts[e[1]]) for e in cx.edges})


def _antipodal_pairs(pts: np.ndarray) -> np.ndarray:
    n = len(pts)
    label = -np.ones(n, dtype=int)
    k = 0
    for i in range(n):
        if label[i] >= 0:
            continue
        j = int(np.argmin(np.linalg.norm(pts + pts[i], axis=1)))
        if np.linalg.norm(pts[j] + pts[i]) > 1e-9:
            raise BadParams("point set is not antipodally symmetric")
        label[i] = label[j] = k
        k += 1
    return label


def rp2(level: int = 0) -> MetricComplex:
    """Antipodal quotient of ``sphere2(level)``.

    Level 0 is the 6-vertex projective plane.  Edge lengths are the
    great-circle lengths of the covering edges, which equal the quotient
    distances ``min(angle, pi - angle)`` for these short edges.
    """
    pts, tris = sphere_points(level)
    label = _antipodal_pairs(pts)
    reps = {}
    for i in range(len(pts)):
        reps.setdefault(int(label[i]), i)
    top = sorted({tuple(sorted(int(label[v]) for v in t)) for t in tris})
    cx = validate_complex({"vertex_count": len(reps), "simplices": top}, close=True)
    if len(cx.n_simplices(2)) != len(tris) // 2:
        raise BadParams("antipodal quotient is not simplicial at this level")
    lengths = {}
    for a, b in cx.edges:
        ang = _great_circle(pts[reps[a]], pts[reps[b]])
        lengths[(a, b)] = min(ang, math.pi - ang)
    return MetricComplex(cx, lengths)


def rp2_quotient_distances(level: int = 0) -> np.ndarray:
    """Exact quotient distances ``min(angle, pi - angle)`` between the vertices of ``rp2``."""
    pts, _ = sphere_points(level)
    label = _antipodal_pairs(pts)
    reps = {}
    for i in range(len(pts)):
        reps.setdefault(int(label[i]), i)
    q = np.array([pts[reps[k]] for k in range(len(reps))])
    ang = np.arccos(np.clip(q @ q.T, -1.0, 1.0))
    out = np.minimum(ang, math.pi - ang)
    np.fill_diagonal(out, 0.0)
    return out


def sphere2_geodesic_distances(level: int = 0) -> np.ndarray:
    """Great-circle distances between all vertices of ``sphere2(level)``."""
    pts, _ = sphere_points(level)
    out = np.arccos(np.clip(pts @ pts.T, -1.0, 1.0))
    np.fill_diagonal(out, 0.0)
    return out


def geodesic_space(spec: str) -> Optional[FiniteMetricSpace]:
    """Round-metric vertex distances for ``sphere2:L`` and ``rp2:L`` fixtures.

    Returns ``None`` for fixtures whose intended metric is the path metric.
    """
    name, *args = spec.split(":")
    level = int(args[0]) if args else 0
    if name == "sphere2":
        d = sphere2_geodesic_distances(level)
    elif name == "rp2":
        d = rp2_quotient_distances(level)
    else:
        return None
    return FiniteMetricSpace(tuple(range(len(d))), d)


def torus_automorphism(m: int = 4, k: int = 4, seed: int = 0) -> List[int]:
    """Vertex map of a seeded orientation-preserving automorphism of ``torus(m, k)``.

    A random translation composed with a random power of the order-six
    lattice rotation ``(i, j) -> (i - j, i)``.  When ``m != k`` only the
    identity and the half turn are well defined.
    """
    rng = np.random.default_rng(seed)
    a, b = int(rng.integers(m)), int(rng.integers(k))
    powers = range(6) if m == k else (0, 3)
    r = int(rng.choice(list(powers)))
    out = []
    for v in range(m * k):
        i, j = divmod(v, k)
        for _ in range(r):
            i, j = i - j, i
        out.append(((i + a) % m) * k + (j + b) % k)
    return out


def torus(m: int = 4, k: int = 4) -> MetricComplex:
    """Flat ``m x k`` grid torus, each square cut along the same diagonal.

    Every triangle is equilateral with unit sides, i.e. the flat metric of
    the triangular lattice; six triangles meet at each vertex.
    """
    if m < 3 or k < 3:
        raise BadParams("torus needs m, k >= 3")

    def v(i: int, j: int) -> int:
        return (i % m) * k + (j % k)

    tris = []
    for i in range(m):
        for j in range(k):
            tris.append(tuple(sorted((v(i, j), v(i + 1, j), v(i + 1, j + 1)))))
            tris.append(tuple(sorted((v(i, j), v(i, j + 1), v(i + 1, j + 1)))))
    cx = SimplicialComplex.from_top(m * k, tris)
    return MetricComplex.uniform(cx, 1)


def klein_bottle(m: int = 4, k: int = 4) -> MetricComplex:
    """Grid Klein bottle: like ``torus`` but the last row glues back reflected."""
    if m < 4 or k < 4:
        raise BadParams("klein bottle needs m, k >= 4")

    def v(i: int, j: int) -> int:
        if j >= k:
            i, j = -i, j - k
        return (i % m) * k + j

    tris = []
    for i in range(m):
        for j in range(k):
            tris.append(tuple(sorted((v(i, j), v(i + 1, j), v(i + 1, j + 1)))))
            tris.append(tuple(sorted((v(i, j), v(i, j + 1), v(i + 1, j + 1)))))
    if len(set(tris)) != len(tris):
        raise BadParams("grid too small for a simplicial Klein bottle")
    cx = SimplicialComplex.from_top(m * k, tris)
    return MetricComplex.uniform(cx, 1)


def torus7() -> MetricComplex:
    """Seven-vertex (Moebius) torus with unit edges."""
    tris = []
    for i in range(7):
        tris.append(tuple(sorted((i, (i + 1) % 7, (i + 3) % 7))))
        tris.append(tuple(sorted((i, (i + 2) % 7, (i + 3) % 7))))
    return MetricComplex.uniform(SimplicialComplex.from_top(7, tris), 1)


def octahedron() -> MetricComplex:
    """Boundary of the octahedron; vertices 0..5 are +e1, -e1, +e2, -e2, +e3, -e3."""
    tris = [tuple(sorted((a, b, c))) for a in (0, 1) for b in (2, 3) for c in (4, 5)]
    return MetricComplex.uniform(SimplicialComplex.from_top(6, tris), 1)


OCTAHEDRON_COORDS = np.array([[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]])


def s3_boundary() -> MetricComplex:
    """Boundary of the 4-simplex (a 3-sphere) with unit edges."""
    cx = SimplicialComplex.from_top(5, list(combinations(range(5), 4)))
    return MetricComplex.uniform(cx, 1)


def boundary_of_simplex(dim: int) -> MetricComplex:
    cx = SimplicialComplex.from_top(dim + 2, list(combinations(range(dim + 2), dim + 1)))
    return MetricComplex.uniform(cx, 1)


def cone(mc: MetricComplex, height=1) -> MetricComplex:
    """Cone over a metric complex; the apex is the new last vertex."""
    cx = mc.complex
    apex = cx.vertex_count
    top = [s + (apex,) for level in cx.simplices for s in level]
    new = SimplicialComplex.from_top(apex + 1, top)
    lengths = dict(mc.edge_lengths)
    for v in range(apex):
        lengths[(v, apex)] = height
    return MetricComplex(new, lengths)


_GENERATORS = {
    "cycle": (cycle, (int, parse_length)),
    "sphere2": (sphere2, (int,)),
    "rp2": (rp2, (int,)),
    "torus": (torus, (int, int)),
    "s3_boundary": (s3_boundary, ()),
    "klein": (klein_bottle, (int, int)),
    "torus7": (torus7, ()),
    "octahedron": (octahedron, ()),
}


def generate_fixture(spec: str) -> MetricComplex:
    """Build a fixture from ``NAME:ARG:ARG...``, e.g. ``cycle:48:6.283185307``.

    Names: cycle(n, L), sphere2(level), rp2(level), torus(m, k), s3_boundary,
    klein(m, k), torus7, octahedron.
    """
    name, *args = spec.split(":")
    try:
        fn, types = _GENERATORS[name]
    except KeyError:
        raise BadParams(f"unknown fixture {name!r}; choose from {', '.join(_GENERATORS)}") from None
    if len(args) > len(types):
        raise BadParams(f"{name} takes at most {len(types)} arguments")
    try:
        parsed = [t(a) for t, a in zip(types, args)]
    except (ValueError, ZeroDivisionError) as exc:
        raise BadParams(f"bad fixture arguments {args}: {exc}") from None
    return fn(*parsed)
