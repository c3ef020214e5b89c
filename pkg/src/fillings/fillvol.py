"""Filling volumes: the optimal homologous chain problem and upper bounds.

Every value produced here is an upper bound for the filling volume of the
Kuratowski image: the chains live in a finite ambient complex (a cone or a
nerve) and each simplex is weighted by its Euclidean affine volume, which
dominates any volume the sup-norm metric can assign to it.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .complex import (ChainVector, Ring, Simplex, SimplicialComplex, _as_rhs, boundary_columns,
                      fundamental_cycle, solve_boundary)
from .errors import (Infeasible, NoFundamentalClass, SearchBudgetExceeded, ValidationError)
from .fillrad import cone_chain, nerve_complex
from .linalg import ExactElimination, gf2_kernel
from .lp import solve_lp
from .metric import FLOAT_RTOL, FiniteMetricSpace, KuratowskiPoints, MetricComplex, kuratowski_embed, path_metric

log = logging.getLogger(__name__)

EXHAUSTIVE_KERNEL_DIM = 25


class Mode(enum.Enum):
    UNIT_WEIGHTS = "UnitWeights"
    EUCLIDEAN_UPPER_BOUND = "EuclideanUpperBound"


def affine_simplex_volume(coords, dim: Optional[int] = None) -> float:
    """Euclidean volume of the affine simplex spanned by the rows of ``coords``.

    ``sqrt(det G) / dim!`` with ``G`` the Gram matrix of the edge vectors
    from the first vertex; degenerate simplices give 0.
    """
    pts = np.asarray(coords, dtype=float)
    if dim is None:
        dim = pts.shape[0] - 1
    if pts.shape[0] != dim + 1:
        raise ValidationError(f"a {dim}-simplex needs {dim + 1} vertices, got {pts.shape[0]}")
    if dim == 0:
        return 1.0
    edges = pts[1:] - pts[0]
    gram = edges @ edges.T
    det = float(np.linalg.det(gram))
    scale = float(np.prod(np.diag(gram))) if dim else 1.0
    if det <= 1e-12 * scale or det <= 0:
        return 0.0
    return math.sqrt(det) / math.factorial(dim)


WEIGHT_BITS = 34


def round_up_weight(w: float) -> float:
    """Round ``w >= 0`` up to ``WEIGHT_BITS`` significant bits.

    Simplices that are congruent in exact arithmetic get float volumes a few
    ulps apart; on the coarser grid they tie exactly, which keeps the exact
    LP from chasing rounding noise.  Rounding up keeps every weight an upper
    bound for the affine volume.
    """
    if w <= 0:
        return 0.0
    m, e = math.frexp(w)
    return math.ldexp(math.ceil(m * 2 ** WEIGHT_BITS), e - WEIGHT_BITS)


@dataclass(frozen=True, eq=False)
class WeightedComplex:
    """A complex with a nonnegative weight on every ``dim``-simplex."""

    complex: SimplicialComplex
    dim: int
    weights: Mapping[Simplex, object]
    realization: Optional[np.ndarray] = None

    def __post_init__(self):
        top = self.complex.n_simplices(self.dim)
        missing = [s for s in top if s not in self.weights]
        if missing:
            raise ValidationError(f"simplex {missing[0]} has no weight")
        if any(w < 0 for w in self.weights.values()):
            raise ValidationError("weights must be nonnegative")
        if self.realization is not None:
            pts = np.asarray(self.realization, dtype=float)
            for s in top:
                vol = affine_simplex_volume(pts[list(s)], self.dim)
                w = float(self.weights[s])
                if not (w >= vol and math.isclose(vol, w, rel_tol=1e-9, abs_tol=1e-12)):
                    raise ValidationError(f"weight of {s} differs from its affine volume")

    @classmethod
    def unit(cls, complex_: SimplicialComplex, dim: int) -> "WeightedComplex":
        return cls(complex_, dim, {s: 1 for s in complex_.n_simplices(dim)})

    @classmethod
    def realized(cls, complex_: SimplicialComplex, dim: int, coords) -> "WeightedComplex":
        pts = np.asarray(coords, dtype=float)
        weights = {s: round_up_weight(affine_simplex_volume(pts[list(s)], dim))
                   for s in complex_.n_simplices(dim)}
        return cls(complex_, dim, weights, pts)


@dataclass
class FillVolCertificate:
    value: object
    chain: ChainVector
    ring: Ring
    mode: Mode
    is_certified_optimal: bool = True
    lower_bound: object = None
    cycle: Optional[ChainVector] = None
    notes: List[str] = field(default_factory=list)

    def verify(self, weights: Mapping[Simplex, object]) -> bool:
        """Exact feasibility plus the value/weight bookkeeping."""
        if self.cycle is not None and self.chain.boundary() != self.cycle.with_ring(self.ring):
            return False
        return _same(chain_cost(self.chain, weights), self.value)

    def to_json(self) -> dict:
        return {
            "mode": self.mode.value,
            "ring": self.ring.value,
            "value": _jsonable(self.value),
            "is_certified_optimal": self.is_certified_optimal,
            "chain": [[list(s), _jsonable(v)] for s, v in self.chain.coefficients.items()],
        }


def _jsonable(v):
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else str(v)
    if isinstance(v, (np.floating, float)):
        return float(v)
    return int(v) if isinstance(v, (np.integer,)) else v


def _same(a, b) -> bool:
    if isinstance(a, float) or isinstance(b, float):
        return math.isclose(float(a), float(b), rel_tol=FLOAT_RTOL, abs_tol=1e-12)
    return a == b


def chain_cost(chain: ChainVector, weights: Mapping[Simplex, object]):
    """``sum |r_i| w_i``, where over Z/2 every nonzero coefficient counts once."""
    total = 0
    for s, v in chain.coefficients.items():
        total = total + abs(v) * weights[s]
    return total


def _exact(w):
    return w if isinstance(w, (int, Fraction)) else Fraction(float(w))


def _restore(value, weights_exact: bool):
    if weights_exact:
        return value.numerator if isinstance(value, Fraction) and value.denominator == 1 else value
    return float(value)


# --------------------------------------------------------------------------
# the optimal homologous chain problem


def _setup(z: ChainVector, wc: WeightedComplex, ring: Ring):
    if z.dim + 1 != wc.dim:
        raise ValidationError(f"weights are on {wc.dim}-simplices but z is a {z.dim}-cycle")
    z = z.with_ring(ring)
    z.check_in(wc.complex)
    c0 = solve_boundary(z, wc.complex, ring)
    if c0 is None:
        raise Infeasible(f"the cycle does not bound in this complex over {ring.name}")
    top = wc.complex.n_simplices(wc.dim)
    cols = boundary_columns(wc.complex, wc.dim) if top else []
    nrows = len(wc.complex.n_simplices(z.dim))
    return z, c0, top, cols, nrows


def optimal_chain(z: ChainVector, wc: WeightedComplex, ring: Ring | str = Ring.Q, *,
                  mode: Mode = Mode.UNIT_WEIGHTS, box: int = 2,
                  node_budget: int = 500_000) -> FillVolCertificate:
    """Minimum-weight chain ``c`` with ``boundary(c) == z`` over ``ring``.

    Q: exact LP with the coefficient split ``c = r+ - r-``.  Z/2: the coset
    ``c0 + ker`` is searched exhaustively for kernel dimension at most 25,
    by branch and bound above.  Z: best integral chain found by branch and
    bound over kernel-lattice combinations with coefficients in
    ``[-box, box]``, certified only when it meets the Q optimum.
    """
    ring = Ring.parse(ring)
    z, c0, top, cols, nrows = _setup(z, wc, ring)
    weights_exact = all(isinstance(w, (int, Fraction)) for w in wc.weights.values())
    if not z:
        return FillVolCertificate(0, c0, ring, mode, True, 0, z)
    w = [wc.weights[s] for s in top]
    if ring is Ring.Q:
        value, chain = _lp_optimum(z, wc, top, cols, nrows, w)
        return FillVolCertificate(_restore(value, weights_exact), chain, ring, mode, True,
                                  _restore(value, weights_exact), z)
    if ring is Ring.Z2:
        seeds = []
        if len(top) and len(cols) and _kernel_dim_z2(cols, nrows) > EXHAUSTIVE_KERNEL_DIM:
            # a rational filling of the same coefficients, when one exists, is a
            # good starting incumbent (its reduction mod 2 fills z)
            try:
                _, qchain = _lp_optimum(z.with_ring(Ring.Q), wc, top, cols, nrows, w)
            except Infeasible:
                qchain = None
            if qchain is not None and all(_is_integral(v) for v in qchain.coefficients.values()):
                seeds.append(qchain.with_ring(Ring.Z2))
        try:
            chain = _z2_optimum(c0, top, cols, nrows, w, node_budget, seeds)
        except SearchBudgetExceeded as exc:
            exc.certificate = FillVolCertificate(chain_cost(exc.best, wc.weights), exc.best, ring,
                                                 mode, False, None, z,
                                                 ["search budget exhausted: best chain found"])
            raise
        value = chain_cost(chain, wc.weights)
        return FillVolCertificate(value, chain, ring, mode, True, value, z)
    lower, qchain = _lp_optimum(z.with_ring(Ring.Q), wc, top, cols, nrows, w)
    if all(_is_integral(v) for v in qchain.coefficients.values()):
        chain = qchain.with_ring(Ring.Z)
    else:
        try:
            chain = _z_search(c0, top, cols, nrows, w, box, node_budget)
        except SearchBudgetExceeded as exc:
            exc.certificate = FillVolCertificate(chain_cost(exc.best, wc.weights), exc.best, ring,
                                                 mode, False, _restore(lower, weights_exact), z,
                                                 ["search budget exhausted: best chain found"])
            raise
    value = chain_cost(chain, wc.weights)
    certified = _exact(value) == lower if weights_exact else math.isclose(
        float(value), float(lower), rel_tol=1e-12)
    cert = FillVolCertificate(value, chain, ring, mode, certified,
                              _restore(lower, weights_exact), z)
    if not certified:
        cert.notes.append("integral optimum not certified: best found exceeds the rational lower bound")
    return cert


def _is_integral(v) -> bool:
    return isinstance(v, int) or v.denominator == 1


def _kernel_dim_z2(cols, nrows) -> int:
    from .linalg import gf2_rank
    return len(cols) - gf2_rank([[i for i, v in col.items() if v % 2] for col in cols], nrows)


def _lp_optimum(z, wc, top, cols, nrows, w) -> Tuple[Fraction, ChainVector]:
    rhs = _as_rhs(z, wc.complex)
    split = []
    for col in cols:
        split.append(col)
    for col in cols:
        split.append({i: -v for i, v in col.items()})
    cost = [_exact(x) for x in w] * 2
    res = solve_lp(cost, split, rhs, nrows)
    N = len(top)
    coeffs: Dict[Simplex, Fraction] = {}
    for j, v in res.x.items():
        s = top[j % N]
        coeffs[s] = coeffs.get(s, 0) + (v if j < N else -v)
    chain = ChainVector(wc.dim, Ring.Q, {s: (v.numerator if v.denominator == 1 else v)
                                         for s, v in coeffs.items()})
    # the dual certifies optimality: |delta y| <= w and y.z equals the cost
    y = res.dual
    for j, col in enumerate(cols):
        dy = sum((v * y.get(i, 0) for i, v in col.items()), Fraction(0))
        if abs(dy) > cost[j]:
            raise AssertionError("dual solution infeasible")
    zval = sum((Fraction(v) * y.get(i, 0) for i, v in rhs.items()), Fraction(0))
    if zval != res.objective:
        raise AssertionError("duality gap in exact LP")
    return res.objective, chain


def _bits(chain: ChainVector, index: Dict[Simplex, int]) -> int:
    out = 0
    for s in chain.coefficients:
        out |= 1 << index[s]
    return out


def _z2_optimum(c0, top, cols, nrows, w, node_budget, incumbents=()) -> ChainVector:
    index = {s: j for j, s in enumerate(top)}
    kernel = gf2_kernel([[i for i, v in col.items() if v % 2] for col in cols], nrows)
    base = _bits(c0, index)
    kbits = []
    for vec in kernel:
        b = 0
        for j in vec:
            b |= 1 << j
        kbits.append(b)
    dim = len(top[0]) - 1

    def as_chain(bits: int) -> ChainVector:
        return ChainVector(dim, Ring.Z2, {top[j]: 1 for j in range(len(top)) if bits >> j & 1})

    if len(kbits) <= EXHAUSTIVE_KERNEL_DIM:
        return as_chain(exhaustive_z2(base, kbits, w))
    starts = [base] + [_bits(c, index) for c in incumbents]
    starts.append(_milp_z2(cols, nrows, w, base))
    start = min((b for b in starts if b is not None), key=lambda b: (_exact_cost(b, w), b))
    try:
        return as_chain(_z2_branch_and_bound(base, kbits, w, node_budget, start))
    except SearchBudgetExceeded as exc:
        exc.best = as_chain(exc.best)
        raise


def _milp_z2(cols, nrows, w, base: int) -> Optional[int]:
    """A floating-point MILP incumbent: 0/1 chain with the right boundary mod 2."""
    from scipy.optimize import Bounds, LinearConstraint, milp
    from scipy.sparse import coo_matrix, hstack, identity

    n = len(cols)
    r, c = [], []
    for j, col in enumerate(cols):
        for i, v in col.items():
            if v % 2:
                r.append(i)
                c.append(j)
    A = coo_matrix((np.ones(len(r)), (r, c)), shape=(nrows, n))
    rhs = np.zeros(nrows)
    for j, col in enumerate(cols):
        if base >> j & 1:
            for i, v in col.items():
                rhs[i] += v % 2
    rhs %= 2
    # boundary(x) - 2 k = rhs, x binary, k integral
    M = hstack([A, -2 * identity(nrows)]).tocsr()
    cost = np.concatenate([[float(x) for x in w], np.zeros(nrows)])
    upper = np.concatenate([np.ones(n), np.asarray(np.abs(A).sum(axis=1)).ravel() / 2 + 1])
    res = milp(cost, constraints=LinearConstraint(M, rhs, rhs), integrality=np.ones(n + nrows),
               bounds=Bounds(np.zeros(n + nrows), upper), options={"time_limit": 60})
    if res.x is None:
        return None
    bits = 0
    for j in np.flatnonzero(res.x[:n] > 0.5):
        bits |= 1 << int(j)
    # keep it only if it is genuinely in the coset
    delta = bits ^ base
    check = [0] * nrows
    for j, col in enumerate(cols):
        if delta >> j & 1:
            for i, v in col.items():
                check[i] ^= v % 2
    return bits if not any(check) else None


def _bitmatrix(vectors: Sequence[int], n: int) -> np.ndarray:
    out = np.zeros((len(vectors), n), dtype=np.float64)
    for r, b in enumerate(vectors):
        j = 0
        while b:
            if b & 1:
                out[r, j] = 1.0
            b >>= 1
            j += 1
    return out


def _combos(kbits: Sequence[int], start: int = 0) -> List[int]:
    """All XOR combinations of ``kbits`` in binary counting order."""
    out = [start]
    for b in kbits:
        out += [c ^ b for c in out]
    return out


def _exact_cost(bits: int, w) -> object:
    total = 0
    j = 0
    while bits:
        if bits & 1:
            total = total + w[j]
        bits >>= 1
        j += 1
    return total


def exhaustive_z2(base: int, kbits: Sequence[int], w: Sequence, chunk: int = 1024) -> int:
    """Cheapest element of the coset ``base + span(kbits)`` over Z/2.

    Costs are evaluated for all ``2**k`` combinations as a matrix product
    (low half of the basis against the high half), then near-minimal
    candidates are re-scored exactly so ties break deterministically.
    """
    n = len(w)
    wf = np.array([float(x) for x in w])
    k = len(kbits)
    lo = _combos(kbits[: k // 2])
    hi = _combos(kbits[k // 2:], base)
    L = _bitmatrix(lo, n)
    Lcost = L @ wf
    best_val = math.inf
    cands: List[int] = []
    tol = 1e-9 * max(1.0, float(wf.sum()))
    for h0 in range(0, len(hi), chunk):
        H = _bitmatrix(hi[h0:h0 + chunk], n)
        Hcost = H @ wf
        # |a xor b| weighted = w.a + w.b - 2 w.(a and b)
        total = Lcost[:, None] + Hcost[None, :] - 2.0 * (L @ (H * wf).T)
        m = float(total.min())
        if m < best_val - tol:
            best_val = m
            cands = []
        if m <= best_val + tol:
            ii, jj = np.nonzero(total <= best_val + tol)
            cands += [lo[i] ^ hi[h0 + j] for i, j in zip(ii, jj)]
    return min(cands, key=lambda c: (_exact_cost(c, w), c))


def _z2_branch_and_bound(base: int, kbits: Sequence[int], w, node_budget: int,
                         incumbent: Optional[int] = None) -> int:
    """Depth-first search over the coset; a node is pruned when the bits no
    remaining basis vector can change already cost as much as the incumbent."""
    k = len(kbits)
    remaining = [0] * (k + 1)
    for i in range(k - 1, -1, -1):
        remaining[i] = remaining[i + 1] | kbits[i]
    best = incumbent if incumbent is not None else base
    best_cost = _exact_cost(best, w)
    nodes = 0
    stack = [(0, base)]
    while stack:
        i, cur = stack.pop()
        nodes += 1
        if nodes > node_budget:
            exc = SearchBudgetExceeded(f"Z/2 branch and bound exceeded {node_budget} nodes")
            exc.best = best
            raise exc
        fixed = _exact_cost(cur & ~remaining[i], w)
        if fixed >= best_cost:
            continue
        if i == k:
            best, best_cost = cur, fixed
            continue
        stack.append((i + 1, cur ^ kbits[i]))
        stack.append((i + 1, cur))
    return best


def _integral_kernel(cols, nrows) -> List[Dict[int, int]]:
    out = []
    for vec in ExactElimination(cols, nrows, "q").kernel_basis():
        den = 1
        for v in vec.values():
            den = den * Fraction(v).denominator // math.gcd(den, Fraction(v).denominator)
        ints = {j: int(Fraction(v) * den) for j, v in vec.items()}
        g = 0
        for v in ints.values():
            g = math.gcd(g, v)
        out.append({j: v // g for j, v in ints.items()})
    return out


def _z_search(c0, top, cols, nrows, w, box: int, node_budget: int) -> ChainVector:
    """Best ``c0 + sum l_i k_i`` with integers ``|l_i| <= box`` (branch and bound)."""
    index = {s: j for j, s in enumerate(top)}
    start = {index[s]: v for s, v in c0.coefficients.items()}
    kernel = _integral_kernel(cols, nrows)
    k = len(kernel)
    touched = [set() for _ in range(k + 1)]
    for i in range(k - 1, -1, -1):
        touched[i] = touched[i + 1] | set(kernel[i])

    def cost(vec: Dict[int, int], skip: set) -> object:
        return sum((abs(v) * w[j] for j, v in vec.items() if v and j not in skip), 0)

    def as_chain(vec: Dict[int, int]) -> ChainVector:
        return ChainVector(len(top[0]) - 1, Ring.Z, {top[j]: v for j, v in vec.items() if v})

    best, best_cost = dict(start), cost(start, set())
    nodes = 0
    order = sorted(range(-box, box + 1), key=lambda lam: (abs(lam), lam), reverse=True)
    stack = [(0, start)]
    while stack:
        i, cur = stack.pop()
        nodes += 1
        if nodes > node_budget:
            exc = SearchBudgetExceeded(f"Z branch and bound exceeded {node_budget} nodes")
            exc.best = as_chain(best)
            raise exc
        if cost(cur, touched[i]) >= best_cost:
            continue
        if i == k:
            best, best_cost = cur, cost(cur, set())
            continue
        for lam in order:
            nxt = dict(cur)
            for j, v in kernel[i].items():
                nxt[j] = nxt.get(j, 0) + lam * v
            stack.append((i + 1, nxt))
    return as_chain(best)


# --------------------------------------------------------------------------
# cone fillings and upper bounds


def box_center(points: np.ndarray) -> np.ndarray:
    """Coordinatewise midpoint of the bounding box."""
    pts = np.asarray(points, dtype=float)
    return (pts.min(axis=0) + pts.max(axis=0)) / 2


def _coords(realization) -> np.ndarray:
    if isinstance(realization, KuratowskiPoints):
        return np.asarray(realization.coordinates, dtype=float)
    return np.asarray(realization, dtype=float)


def cone_fill(z: ChainVector, realization, apex_rule="BoxCenter"
              ) -> Tuple[WeightedComplex, FillVolCertificate]:
    """The cone over ``z`` from an apex, weighted by affine volumes.

    ``apex_rule`` is ``"BoxCenter"`` (midpoint of the bounding box of the
    support of ``z``) or an explicit coordinate vector.  The apex becomes
    vertex ``len(realization)``.
    """
    pts = _coords(realization)
    n_pts = pts.shape[0]
    support = z.vertices()
    if isinstance(apex_rule, str):
        if apex_rule != "BoxCenter":
            raise ValidationError(f"unknown apex rule {apex_rule!r}")
        apex_pt = box_center(pts[support]) if support else np.zeros(pts.shape[1])
    else:
        apex_pt = np.asarray(apex_rule, dtype=float)
    allpts = np.vstack([pts, apex_pt[None, :]]) if pts.size else apex_pt[None, :]
    chain = cone_chain(z, n_pts)
    top = sorted(chain.coefficients) if chain else []
    cx = SimplicialComplex.from_top(n_pts + 1, top + [(n_pts,)])
    wc = WeightedComplex.realized(cx, z.dim + 1, allpts)
    if z and chain.boundary() != z:
        raise AssertionError("cone chain does not fill the cycle")
    cert = FillVolCertificate(chain_cost(chain, wc.weights), chain, z.ring,
                              Mode.EUCLIDEAN_UPPER_BOUND, False, None, z,
                              ["cone filling: an upper bound, not optimized"])
    return wc, cert


@dataclass(frozen=True)
class Cone:
    pass


@dataclass(frozen=True)
class NerveAtScale:
    scale: object


def fillvol_upper(mc: MetricComplex, ring: Ring | str = Ring.Q, ambient=Cone(), *,
                  cycle: Optional[ChainVector] = None, distances: Optional[FiniteMetricSpace] = None,
                  **search) -> FillVolCertificate:
    """Certified upper bound on the filling volume of a metric complex.

    The vertices are embedded in sup-norm space by the Kuratowski map, the
    chosen ambient complex (a cone over ``V`` or the nerve at a scale) is
    realized affinely on the embedded points, and the optimal chain in it is
    computed with Euclidean affine-volume weights.  ``distances`` replaces
    the path metric of ``mc`` on its vertices.
    """
    ring = Ring.parse(ring)
    cx = mc.complex
    z = cycle if cycle is not None else fundamental_cycle(cx, ring)
    if z is None:
        raise NoFundamentalClass(f"H_{cx.dimension} is not cyclic of rank one over {ring.name}")
    z = z.with_ring(ring)
    emb = kuratowski_embed(distances if distances is not None else path_metric(mc))
    pts = np.asarray(emb.coordinates, dtype=float)
    n = z.dim
    if isinstance(ambient, Cone):
        apex = len(pts)
        allpts = np.vstack([pts, box_center(pts)[None, :]])
        top = [s + (apex,) for s in cx.n_simplices(n)]
        amb = SimplicialComplex.from_top(apex + 1, top + list(cx.n_simplices(n)))
    elif isinstance(ambient, NerveAtScale):
        amb = nerve_complex(emb.space, ambient.scale, n + 1)
        allpts = pts
        if any(s not in amb for s in z.coefficients):
            raise Infeasible("the cycle is not a chain of the nerve at this scale")
    else:
        raise ValidationError(f"unknown ambient {ambient!r}")
    wc = WeightedComplex.realized(amb, n + 1, allpts)
    cert = optimal_chain(z, wc, ring, mode=Mode.EUCLIDEAN_UPPER_BOUND, **search)
    cert.notes.append("upper bound: finite ambient complex with Euclidean affine weights")
    return cert
