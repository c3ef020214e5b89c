"""Simplicial maps, monotonicity, degree, and the two filling axioms.

The comparison harness checks ``FillRad(V, g1_t) >= FillRad(W, g2)`` for an
(n,1)-monotone map ``f: V -> W`` of unit degree, where ``g1_t`` is the
edgewise metric ``sqrt(g2(f e)^2 + t^2 g1(e)^2)``.  The extension harness
attaches cells of lower dimension through a long collar, cylinder and round
cap, checks that the inclusion is a strong isometry, and compares the
filling invariants before and after.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .complex import (ChainVector, Ring, Simplex, SimplicialComplex, fundamental_cycle,
                      pushforward_chain, pushforward_simplex, validate_complex)
from .errors import (BadAttachingCycle, DimOutOfRange, HypothesisFailed, NonpositiveT,
                     NotAMultiple, NotEuclideanRealizable, NotOrientable, NotSimplicial, RTooSmall,
                     ValidationError)
from .fillrad import filling_radius
from .fillvol import fillvol_upper
from .metric import FLOAT_RTOL, MetricComplex, _normalize, is_exact, path_metric


@dataclass(frozen=True, eq=False)
class SimplicialMap:
    source: SimplicialComplex
    target: SimplicialComplex
    vertex_map: Tuple[int, ...]

    def __post_init__(self):
        vm = tuple(int(v) for v in self.vertex_map)
        if len(vm) != self.source.vertex_count:
            raise NotSimplicial(f"vertex map has {len(vm)} entries for {self.source.vertex_count} vertices")
        if any(v < 0 or v >= self.target.vertex_count for v in vm):
            raise NotSimplicial("vertex map leaves the target vertex set")
        for level in self.source.simplices:
            for s in level:
                image = tuple(sorted({vm[v] for v in s}))
                if image not in self.target:
                    raise NotSimplicial(f"{s} maps to {image}, which is not a simplex of the target")
        object.__setattr__(self, "vertex_map", vm)

    def __call__(self, v: int) -> int:
        return self.vertex_map[v]

    def compose(self, inner: "SimplicialMap") -> "SimplicialMap":
        """``self after inner``."""
        return SimplicialMap(inner.source, self.target,
                             tuple(self.vertex_map[v] for v in inner.vertex_map))

    @classmethod
    def identity(cls, cx: SimplicialComplex) -> "SimplicialMap":
        return cls(cx, cx, tuple(range(cx.vertex_count)))


@dataclass
class MonotonicityReport:
    n: int
    d: int
    is_n1_monotone: bool
    is_nd_monotone: bool
    offending: List[Simplex]
    preimage_counts: Dict[Simplex, int]
    degree: Dict[str, object] = field(default_factory=dict)


def check_monotone(f: SimplicialMap, n: int, d: int = 1) -> MonotonicityReport:
    """Count nondegenerate ``n``-simplex preimages of each target ``n``-simplex.

    Collapsed simplices are not open ``n``-simplices and are ignored.
    ``offending`` lists the target simplices with more than ``d`` preimages.
    """
    if f.source.dimension != n or f.target.dimension != n:
        raise DimOutOfRange(f"source and target must both have dimension {n}")
    counts = {s: 0 for s in f.target.n_simplices(n)}
    for s in f.source.n_simplices(n):
        sign, image = pushforward_simplex(s, f.vertex_map)
        if sign:
            counts[image] += 1
    over = [s for s, c in counts.items() if c > d]
    report = MonotonicityReport(n, d, all(c <= 1 for c in counts.values()), not over,
                                over, counts)
    for ring in Ring:
        try:
            report.degree[ring.value] = degree(f, ring)
        except (NotOrientable, NotAMultiple):
            report.degree[ring.value] = None
    return report


def degree(f: SimplicialMap, ring: Ring | str = Ring.Z):
    """The scalar ``k`` with ``f_*[V] = k [W]`` over ``ring``."""
    ring = Ring.parse(ring)
    zv = fundamental_cycle(f.source, ring)
    zw = fundamental_cycle(f.target, ring)
    if zv is None or zw is None:
        raise NotOrientable(f"source or target has no fundamental class over {ring.name}")
    push = pushforward_chain(zv, f.vertex_map)
    if not push:
        return 0
    first = next(iter(zw.coefficients))
    k = push.coefficients.get(first, 0)
    if ring is Ring.Q:
        k = _normalize(Fraction(k) / Fraction(zw.coefficients[first]))
    else:
        # fundamental cycles over Z have a unit coefficient on every simplex
        k = k * zw.coefficients[first] if ring is Ring.Z else k
    if push != zw.scaled(k):
        raise NotAMultiple("pushforward of the fundamental cycle is not a multiple of the target class")
    return k


# --------------------------------------------------------------------------
# metrics and volumes


def _sqrt(q):
    """Square root, exact when ``q`` is the square of a rational."""
    if is_exact(q):
        q = Fraction(q)
        a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
        if a * a == q.numerator and b * b == q.denominator:
            return _normalize(Fraction(a, b))
    return math.sqrt(q)


def pullback_interp_metric(f: SimplicialMap, g2: MetricComplex, g1: MetricComplex, t) -> MetricComplex:
    """Edge lengths ``sqrt(l2(f e)^2 + t^2 l1(e)^2)`` on the source.

    A collapsed edge has ``l2(f e) = 0``.  Every edge is at least as long as
    its image, so ``f`` does not expand path distances.
    """
    if not t > 0:
        raise NonpositiveT(f"t must be positive, got {t}")
    if g1.complex != f.source or g2.complex != f.target:
        raise ValidationError("metrics must live on the source and target of the map")
    if is_exact(t):
        t = _normalize(Fraction(t))
    lengths = {}
    for (a, b), l1 in g1.edge_lengths.items():
        fa, fb = f(a), f(b)
        l2 = 0 if fa == fb else g2.length(fa, fb)
        new = _sqrt(l2 * l2 + t * t * l1 * l1)
        if new < l2:
            raise AssertionError("pulled-back edge shorter than its image")
        lengths[(a, b)] = new
    return MetricComplex(f.source, lengths)


def _det(m: List[List]) -> object:
    """Determinant by fraction-free Gaussian elimination (exact entries)."""
    a = [list(map(Fraction, row)) for row in m]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            if a[r][c]:
                f = a[r][c] / a[c][c]
                for k in range(c, n):
                    a[r][k] -= f * a[c][k]
    return det


def _cm_volume_squared(sq: List[List], exact: bool):
    k = len(sq) - 1
    cm = [[0] + [1] * (k + 1)] + [[1] + list(row) for row in sq]
    det = _det(cm) if exact else float(np.linalg.det(np.array(cm, dtype=float)))
    coeff = Fraction((-1) ** (k + 1), 2 ** k * math.factorial(k) ** 2)
    return det * coeff if exact else det * float(coeff)


def simplex_volume_from_lengths(lengths) -> object:
    """Volume of a Euclidean simplex with the given edge lengths (Cayley-Menger).

    ``lengths`` lists the ``k(k+1)/2`` edges in lexicographic order
    ``(0,1), (0,2), ..., (k-1,k)``, or is a symmetric ``(k+1) x (k+1)``
    matrix.  Every face of dimension >= 2 must have nonnegative squared
    volume; otherwise :class:`NotEuclideanRealizable` is raised.  Results are
    exact when the squared volume is the square of a rational.
    """
    arr = list(lengths)
    if arr and isinstance(arr[0], (list, tuple, np.ndarray)):
        mat = [list(r) for r in arr]
        k = len(mat) - 1
    else:
        m = len(arr)
        k = (math.isqrt(8 * m + 1) - 1) // 2
        if k * (k + 1) // 2 != m:
            raise ValidationError(f"{m} lengths do not describe a simplex")
        mat = [[0] * (k + 1) for _ in range(k + 1)]
        it = iter(arr)
        for i, j in combinations(range(k + 1), 2):
            mat[i][j] = mat[j][i] = next(it)
    if k == 0:
        return 1
    exact = all(is_exact(mat[i][j]) for i, j in combinations(range(k + 1), 2))
    for i, j in combinations(range(k + 1), 2):
        if not mat[i][j] > 0:
            raise ValidationError("edge lengths must be positive")
    sq = [[(Fraction(x) ** 2 if exact else float(x) ** 2) for x in row] for row in mat]
    scale = max(max(row) for row in sq)
    v2 = None
    for size in range(3, k + 2):
        for face in combinations(range(k + 1), size):
            sub = [[sq[a][b] for b in face] for a in face]
            v2 = _cm_volume_squared(sub, exact)
            tol = 0 if exact else 1e-9 * float(scale) ** (size - 1)
            if v2 < -tol:
                raise NotEuclideanRealizable(f"face {face} has negative squared volume {v2}")
    if k == 1:
        return mat[0][1]
    if exact:
        return _sqrt(max(v2, 0))
    return math.sqrt(max(float(v2), 0.0))


def total_volume(mc: MetricComplex, dim: Optional[int] = None):
    """Sum of Cayley-Menger volumes of the ``dim``-simplices (default top)."""
    dim = mc.dimension if dim is None else dim
    total = 0
    for s in mc.complex.n_simplices(dim):
        total = total + simplex_volume_from_lengths([mc.length(a, b) for a, b in combinations(s, 2)])
    return total


# --------------------------------------------------------------------------
# cell attachment


@dataclass(frozen=True)
class AttachedCell:
    k: int
    attaching: Tuple[int, ...]
    R: float
    new_vertices: Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class ExtensionComplex:
    base: MetricComplex
    attached_cells: Tuple[AttachedCell, ...]
    result: MetricComplex
    inclusion: SimplicialMap

    @property
    def strong_isometry_gap(self):
        """Largest ``|d_V'(a, b) - d_V(a, b)|`` over vertex pairs of ``V``."""
        return _isometry_gap(self.base, self.result)


def trivial_extension(V: MetricComplex) -> ExtensionComplex:
    return ExtensionComplex(V, (), V, SimplicialMap.identity(V.complex))


def _isometry_gap(V: MetricComplex, W: MetricComplex):
    n = V.complex.vertex_count
    dv = path_metric(V).distances
    dw = path_metric(W).distances[:n, :n]
    if dv.dtype == object and dw.dtype == object:
        return max((abs(dw[i, j] - dv[i, j]) for i in range(n) for j in range(n)), default=0)
    return float(np.abs(dw.astype(float) - dv.astype(float)).max()) if n else 0.0


class _Builder:
    def __init__(self, V: MetricComplex):
        self.n = V.complex.vertex_count
        self.count = self.n
        self.top: List[Simplex] = [s for level in V.complex.simplices for s in level]
        self.lengths: Dict[Simplex, object] = dict(V.edge_lengths)

    def vertex(self) -> int:
        self.count += 1
        return self.count - 1

    def edge(self, a: int, b: int, length) -> None:
        key = (min(a, b), max(a, b))
        self.lengths.setdefault(key, length)
        self.top.append(key)

    def triangle(self, a: int, b: int, c: int) -> None:
        self.top.append(tuple(sorted((a, b, c))))


def attach_cell(V: MetricComplex, k: int, attaching: Sequence[int], R, mesh: int = 2, *,
                cylinder_length=6, rung_factor=None, check: bool = True) -> ExtensionComplex:
    """Attach a ``k``-cell along ``attaching`` through collar, cylinder and cap.

    ``attaching`` is the pair ``(p, q)`` of endpoints for ``k = 1`` and the
    vertex cycle ``(v0, ..., v_{m-1})`` of an edge loop for ``k = 2``.  The
    collar runs over ``s`` in ``[-1, 0]``, the cylinder over ``[0,
    cylinder_length]``; both have rungs of length ``rung_factor * R * ds``
    (default ``pi``, and ``5 pi`` on the collar when ``k = 1``).  Collar
    cross-sections interpolate squared edge lengths linearly between the
    attaching loop and the round circle of radius ``R``; the cap is a
    triangulated round hemisphere of radius ``R``.  ``mesh`` is the number of
    layers per unit of ``s`` and of latitude rings on the cap.

    Raises :class:`RTooSmall` when the attaching map expands distances
    from the round sphere of radius ``R`` or the inclusion of ``V`` fails to
    be a strong isometry.
    """
    if k < 1 or k >= V.dimension:
        raise ValidationError(f"cell dimension must satisfy 1 <= k < {V.dimension}")
    if k > 2:
        raise ValidationError("only 1- and 2-cells are supported")
    if mesh < 1:
        raise ValidationError("mesh must be at least 1")
    if not R > 0:
        raise RTooSmall("R must be positive")
    pi_r = math.pi * float(R)
    rung = pi_r if rung_factor is None else float(rung_factor) * float(R)
    collar_rung = 5 * rung if (k == 1 and rung_factor is None) else rung
    b = _Builder(V)
    attaching = tuple(int(v) for v in attaching)
    if any(v < 0 or v >= b.n for v in attaching):
        raise BadAttachingCycle("attaching vertex outside V")
    if k == 1:
        if len(attaching) != 2 or attaching[0] == attaching[1]:
            raise BadAttachingCycle("a 1-cell attaches along two distinct vertices")
        dpq = path_metric(V).distances[attaching]
        total = 2 * collar_rung + 2 * cylinder_length * rung + pi_r
        if total < float(dpq):
            raise RTooSmall(f"attached arc of length {total:.6g} is shorter than d(p, q) = {dpq}")
        ends = []
        for p in attaching:
            prev = p
            for _ in range(mesh):
                v = b.vertex()
                b.edge(prev, v, collar_rung / mesh)
                prev = v
            for _ in range(int(round(cylinder_length * mesh))):
                v = b.vertex()
                b.edge(prev, v, rung / mesh)
                prev = v
            ends.append(prev)
        prev = ends[0]
        for _ in range(mesh - 1):
            v = b.vertex()
            b.edge(prev, v, pi_r / mesh)
            prev = v
        b.edge(prev, ends[1], pi_r / mesh)
    else:
        _attach_disk(V, b, attaching, float(R), mesh, cylinder_length, rung)
    new = tuple(range(V.complex.vertex_count, b.count))
    cx = validate_complex({"vertex_count": b.count, "simplices": sorted(set(b.top))}, close=True)
    result = MetricComplex(cx, {e: b.lengths[e] for e in cx.edges})
    inclusion = SimplicialMap(V.complex, cx, tuple(range(V.complex.vertex_count)))
    ext = ExtensionComplex(V, (AttachedCell(k, attaching, R, new),), result, inclusion)
    if check:
        gap = ext.strong_isometry_gap
        tol = 0 if V.exact and gap == 0 else FLOAT_RTOL * max(1.0, float(path_metric(V).diameter()))
        if gap > tol:
            raise RTooSmall(f"inclusion is not a strong isometry (a V-distance shrinks by {gap})")
    return ext


def _attach_disk(V, b: _Builder, loop, R: float, mesh: int, cylinder_length, rung) -> None:
    m = len(loop)
    if m < 3 or len(set(loop)) != m:
        raise BadAttachingCycle("a 2-cell attaches along a simple loop of at least 3 vertices")
    loop_len = []
    for i in range(m):
        a, c = loop[i], loop[(i + 1) % m]
        if (min(a, c), max(a, c)) not in V.edge_lengths:
            raise BadAttachingCycle(f"({a}, {c}) is not an edge of V")
        loop_len.append(float(V.length(a, c)))
    round_len = 2 * math.pi * R / m
    if any(ell > round_len * (1 + 1e-12) for ell in loop_len):
        raise RTooSmall(f"attaching loop edge longer than the round edge {round_len:.6g}")
    layer = list(loop)
    prev_sq = [ell * ell for ell in loop_len]

    def grow(layer, prev_sq, new_sq, step):
        nxt = [b.vertex() for _ in range(m)]
        for i in range(m):
            b.edge(nxt[i], nxt[(i + 1) % m], math.sqrt(new_sq[i]))
            b.edge(layer[i], nxt[i], step)
            # the diagonal of each strip is long enough to never be a shortcut
            diag = math.hypot(step, math.sqrt(max(prev_sq[i], new_sq[i])))
            b.edge(layer[i], nxt[(i + 1) % m], diag)
            b.triangle(layer[i], nxt[i], nxt[(i + 1) % m])
            b.triangle(layer[i], layer[(i + 1) % m], nxt[(i + 1) % m])
        return nxt

    for j in range(1, mesh + 1):
        s = -1 + j / mesh
        new_sq = [(-s) * ell * ell + (1 + s) * round_len ** 2 for ell in loop_len]
        layer = grow(layer, prev_sq, new_sq, rung / mesh)
        prev_sq = new_sq
    for _ in range(int(round(cylinder_length * mesh))):
        layer = grow(layer, prev_sq, prev_sq, rung / mesh)
    # cap: latitude rings of the hemisphere from the equator to the pole
    for j in range(1, mesh):
        phi = (math.pi / 2) * (1 - j / mesh)
        new_sq = [(2 * math.pi * R * math.sin(phi) / m) ** 2] * m
        layer = grow(layer, prev_sq, new_sq, (math.pi / 2) * R / mesh)
        prev_sq = new_sq
    pole = b.vertex()
    for i in range(m):
        b.edge(layer[i], pole, (math.pi / 2) * R / mesh)
        b.triangle(layer[i], layer[(i + 1) % m], pole)


# --------------------------------------------------------------------------
# experiments


REPORT_COLUMNS = ("t", "ring", "fillrad_V", "fillrad_W", "vol_V", "vol_W", "ok")


@dataclass
class ExperimentRow:
    t: object
    ring: str
    fillrad_V: object
    fillrad_W: object
    vol_V: object
    vol_W: object
    ok: bool
    fillvol_V: object = None
    fillvol_W: object = None

    @property
    def excess(self):
        return self.vol_V - self.vol_W


@dataclass
class ExperimentReport:
    rows: List[ExperimentRow]
    notes: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(REPORT_COLUMNS)
        for r in self.rows:
            w.writerow([_fmt(getattr(r, c)) if c != "ok" else int(r.ok) for c in REPORT_COLUMNS])
        return buf.getvalue()


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else str(v.numerator)
    return "" if v is None else str(v)


def _geq(a, b) -> bool:
    if is_exact(a) and is_exact(b):
        return a >= b
    return float(a) >= float(b) * (1 - FLOAT_RTOL)


def comparison_experiment(f: SimplicialMap, g2: MetricComplex, g1: MetricComplex,
                          t_values: Sequence, ring: Ring | str = Ring.Z2,
                          max_dim: Optional[int] = None, fillvol: bool = False) -> ExperimentReport:
    """Rows ``FillRad(V, g1_t)`` against ``FillRad(W, g2)`` for each ``t``.

    Requires ``f`` to be (n,1)-monotone and to map the fundamental class
    onto a generator (unit degree); raises :class:`HypothesisFailed`
    otherwise.  ``ok`` is the inequality ``FillRad(V, g1_t) >= FillRad(W, g2)``.
    """
    ring = Ring.parse(ring)
    n = f.target.dimension
    mono = check_monotone(f, n, 1)
    if not mono.is_n1_monotone:
        raise HypothesisFailed(f"map is not ({n},1)-monotone: {mono.offending[:3]}")
    try:
        deg = degree(f, ring)
    except (NotOrientable, NotAMultiple) as exc:
        raise HypothesisFailed(f"cannot check surjectivity on H_{n}: {exc}") from None
    unit = deg % 2 == 1 if ring is Ring.Z2 else (deg in (1, -1) if ring is Ring.Z else deg != 0)
    if not unit:
        raise HypothesisFailed(f"f_* is not onto H_{n}: degree {deg} over {ring.name}")
    rad_w = filling_radius(g2, ring, max_dim).radius
    vol_w = total_volume(g2)
    fv_w = fillvol_upper(g2, ring).value if fillvol else None
    rows = []
    for t in t_values:
        g1t = pullback_interp_metric(f, g2, g1, t)
        rad_v = filling_radius(g1t, ring, max_dim).radius
        vol_v = total_volume(g1t)
        fv_v = fillvol_upper(g1t, ring).value if fillvol else None
        rows.append(ExperimentRow(t, ring.value, rad_v, rad_w, vol_v, vol_w,
                                  _geq(rad_v, rad_w), fv_v, fv_w))
    return ExperimentReport(rows, [f"degree over {ring.name}: {deg}"])


@dataclass
class ExtensionReport:
    ring: str
    fillrad_V: object
    fillrad_Vprime: object
    fillvol_V: object
    fillvol_Vprime: object
    gap: object
    tolerance: object
    fillrad_equal: bool
    fillvol_equal: bool

    @property
    def ok(self) -> bool:
        return self.fillrad_equal and self.fillvol_equal

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cols = ("ring", "fillrad_V", "fillrad_Vprime", "fillvol_V", "fillvol_Vprime",
                "critical_gap", "fillrad_equal", "fillvol_equal")
        w.writerow(cols)
        w.writerow([self.ring, _fmt(self.fillrad_V), _fmt(self.fillrad_Vprime),
                    _fmt(self.fillvol_V), _fmt(self.fillvol_Vprime), _fmt(self.gap),
                    int(self.fillrad_equal), int(self.fillvol_equal)])
        return buf.getvalue()


def extension_experiment(ext: ExtensionComplex, ring: Ring | str = Ring.Z2,
                         max_dim: Optional[int] = None, fillvol_ring: Ring | str = Ring.Q,
                         fillvol: bool = True) -> ExtensionReport:
    """Filling radius and the filling-volume bound of ``V`` and ``V'``.

    The radii must agree within one critical-scale gap of the coarser
    filtration (the largest gap between consecutive critical distances
    next to either death scale).  The filling-volume bound of ``V'`` is
    computed on the distances of ``V'`` restricted to ``V``, which is the
    same certificate exactly when the inclusion is a strong isometry.
    """
    ring = Ring.parse(ring)
    V, W = ext.base, ext.result
    cert_v = filling_radius(V, ring, max_dim)
    zv = cert_v.cycle
    zw = zv if not ext.attached_cells else None
    cert_w = filling_radius(W, ring, max_dim, cycle=zw) if zw is not None else filling_radius(W, ring, max_dim)
    gap = max(_critical_gap(cert_v), _critical_gap(cert_w))
    diff = abs(cert_w.radius - cert_v.radius)
    radius_equal = diff <= gap / 2 if gap else diff == 0
    fv_v = fv_w = None
    fillvol_equal = True
    if fillvol:
        fvr = Ring.parse(fillvol_ring)
        n = V.complex.vertex_count
        fv_v = fillvol_upper(V, fvr).value
        restricted = path_metric(W).restrict(range(n))
        fv_w = fillvol_upper(V, fvr, distances=restricted).value
        fillvol_equal = fv_v == fv_w
    return ExtensionReport(ring.value, cert_v.radius, cert_w.radius, fv_v, fv_w, gap, gap / 2 if gap else 0,
                           radius_equal, fillvol_equal)


def _critical_gap(cert) -> object:
    """Distance from the death scale to the critical scale just below it."""
    if cert.previous_scale is None:
        return 0
    return cert.death_scale - cert.previous_scale
