"""Filling radius through the nerve of sup-norm balls.

Balls of radius ``r`` in sup-norm space are axis-parallel boxes.  Boxes have
the Helly property coordinatewise, so a family of them has a common point
as soon as every pair meets, and two balls around Kuratowski images of
``v`` and ``w`` meet exactly when ``d(v, w) <= 2r``.  The nerve of the
``r``-balls is therefore the flag complex of the graph ``d <= 2r`` and,
since the balls are convex, it has the homotopy type of the
``r``-neighbourhood.  The filling radius is half the smallest pairwise
distance at which the fundamental cycle bounds in that flag complex.

Between two consecutive distances the flag complex does not change, so the
infimum over open neighbourhoods is attained at a critical distance.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .complex import (ChainVector, Ring, Simplex, SimplicialComplex, faces,
                      fundamental_cycle, solve_boundary)
from .errors import NeverDies, NoFundamentalClass, ValidationError
from .metric import FiniteMetricSpace, MetricComplex, path_metric

log = logging.getLogger(__name__)

MERGE_RTOL = 1e-12


def flag_simplices(adjacency: Sequence[int], max_dim: int) -> List[List[Simplex]]:
    """Cliques of a graph, grouped by dimension, each level in lex order.

    ``adjacency[v]`` is a bitset of the neighbours of ``v``.  Cliques with
    more than ``max_dim + 1`` vertices are not listed.
    """
    n = len(adjacency)
    levels: List[List[Simplex]] = [[] for _ in range(max_dim + 1)]
    if max_dim < 0:
        return levels
    higher = [adjacency[v] >> (v + 1) << (v + 1) for v in range(n)]

    def grow(clique: Tuple[int, ...], candidates: int) -> None:
        k = len(clique) - 1
        levels[k].append(clique)
        if k == max_dim:
            return
        while candidates:
            low = candidates & -candidates
            w = low.bit_length() - 1
            candidates ^= low
            grow(clique + (w,), candidates & higher[w])

    for v in range(n):
        grow((v,), higher[v])
    for level in levels:
        level.sort()
    while len(levels) > 1 and not levels[-1]:
        levels.pop()
    return levels


def clique_counts(adjacency: Sequence[int], max_dim: int) -> Tuple[int, ...]:
    """Number of cliques per dimension, without storing them."""
    n = len(adjacency)
    counts = [0] * (max_dim + 1)
    higher = [adjacency[v] >> (v + 1) << (v + 1) for v in range(n)]
    stack = [(0, higher[v]) for v in range(n)]
    while stack:
        k, cand = stack.pop()
        counts[k] += 1
        if k == max_dim:
            continue
        while cand:
            low = cand & -cand
            cand ^= low
            stack.append((k + 1, cand & higher[low.bit_length() - 1]))
    while len(counts) > 1 and not counts[-1]:
        counts.pop()
    return tuple(counts)


def _adjacency(fms: FiniteMetricSpace, scale) -> List[int]:
    close = fms.distances <= scale
    n = len(fms)
    out = []
    for v in range(n):
        bits = 0
        for w in np.flatnonzero(close[v]):
            if w != v:
                bits |= 1 << int(w)
        out.append(bits)
    return out


def nerve_complex(fms: FiniteMetricSpace, scale, max_dim: int) -> SimplicialComplex:
    """Flag complex of ``{d <= scale}`` truncated at ``max_dim``."""
    if scale < 0:
        raise ValidationError("scale must be nonnegative")
    levels = flag_simplices(_adjacency(fms, scale), max_dim)
    return SimplicialComplex(len(fms), tuple(tuple(level) for level in levels))


def boxes_meet(centers: np.ndarray, radius) -> bool:
    """Whether closed sup-norm balls of ``radius`` around ``centers`` share a point.

    Computed directly from the boxes (largest lower corner against smallest
    upper corner), independently of any distance test.
    """
    lo = (centers - radius).max(axis=0)
    hi = (centers + radius).min(axis=0)
    return bool((lo <= hi).all())


def box_nerve(points: np.ndarray, radius, max_dim: int) -> SimplicialComplex:
    """Nerve of sup-norm balls found by testing every vertex subset."""
    n = points.shape[0]
    levels = []
    for k in range(max_dim + 1):
        level = [s for s in combinations(range(n), k + 1) if boxes_meet(points[list(s)], radius)]
        if not level:
            break
        levels.append(tuple(level))
    return SimplicialComplex(n, tuple(levels))


def merge_scales(values: Sequence, rtol: float = MERGE_RTOL) -> List:
    """Sorted distinct values; float values closer than ``rtol`` merge into
    their group's maximum so thresholds include every member."""
    vals = sorted(set(values))
    if not vals or all(isinstance(v, (int, Fraction)) for v in vals):
        return vals
    out = []
    start = None
    for v in vals:
        if start is not None and v - start <= rtol * max(abs(v), 1e-300):
            out[-1] = v
        else:
            out.append(v)
            start = v
    return out


@dataclass
class ScaleFiltration:
    """The flag filtration of a finite metric space at its pairwise distances."""

    base: FiniteMetricSpace
    max_dim: int
    critical_scales: List = field(default_factory=list)

    def __post_init__(self):
        if not self.critical_scales:
            self.critical_scales = merge_scales(self.base.critical_scales())

    def nerve(self, scale) -> SimplicialComplex:
        return nerve_complex(self.base, scale, self.max_dim)


@dataclass
class Probe:
    scale: object
    counts: Tuple[int, ...]
    bounds: bool


@dataclass
class FillRadCertificate:
    radius: object
    death_scale: object
    witness: ChainVector
    ring: Ring
    cycle: ChainVector
    space: FiniteMetricSpace
    max_dim: int
    previous_scale: object = None
    probes: List[Probe] = field(default_factory=list)

    @property
    def nerve(self) -> SimplicialComplex:
        """The nerve at the death scale (built on demand; may be large)."""
        return nerve_complex(self.space, self.death_scale, self.max_dim)

    def verify(self) -> bool:
        """Exact check that the witness lies in the nerve and fills the cycle.

        Membership is tested as a clique condition on pairwise distances, so
        the nerve itself is never built.
        """
        D = self.space.distances
        for s in self.witness.coefficients:
            if len(s) > self.max_dim + 1:
                return False
            if any(D[a, b] > self.death_scale for a, b in combinations(s, 2)):
                return False
        return self.witness.boundary() == self.cycle

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["scale", "nerve_simplex_counts", "class_bounds", "radius", "witness_size"])
        for p in sorted(self.probes, key=lambda p: p.scale):
            w.writerow([_fmt(p.scale), ";".join(map(str, p.counts)), int(p.bounds), "", ""])
        final = next(p for p in self.probes if p.scale == self.death_scale)
        w.writerow([_fmt(self.death_scale), ";".join(map(str, final.counts)), 1,
                    _fmt(self.radius), len(self.witness)])
        return buf.getvalue()


def _fmt(value) -> str:
    if isinstance(value, Fraction):
        return f"{value} ({float(value):.12g})" if value.denominator != 1 else str(value.numerator)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def cone_chain(z: ChainVector, apex: int) -> ChainVector:
    """The cone ``apex * z``; its boundary is ``z`` when ``z`` is a cycle.

    Simplices already containing ``apex`` contribute nothing.
    """
    out: Dict[Simplex, object] = {}
    for s, v in z.coefficients.items():
        if apex in s:
            continue
        pos = sum(1 for u in s if u < apex)
        key = tuple(sorted(s + (apex,)))
        out[key] = out.get(key, 0) + (v if pos % 2 == 0 else -v)
    return ChainVector(z.dim + 1, z.ring, out)


def _half(value):
    if isinstance(value, (int, Fraction)):
        h = Fraction(value) / 2
        return h.numerator if h.denominator == 1 else h
    return value / 2


def class_bounds_at(fms: FiniteMetricSpace, z: ChainVector, scale, max_dim: int,
                    ring: Ring) -> Tuple[SimplicialComplex, Optional[ChainVector]]:
    """Nerve at ``scale`` and a filling of ``z`` in it (``None`` if none)."""
    nerve = nerve_complex(fms, scale, max_dim)
    if any(s not in nerve for s in z.coefficients):
        return nerve, None
    return nerve, solve_boundary(z, nerve, ring)


def filling_radius(mc: MetricComplex | FiniteMetricSpace, ring: Ring | str = Ring.Z2,
                   max_dim: Optional[int] = None, *, complex_: Optional[SimplicialComplex] = None,
                   cycle: Optional[ChainVector] = None) -> FillRadCertificate:
    """Filling radius of the Kuratowski embedding of a metric complex.

    Parameters
    ----------
    mc
        The metric complex.  A :class:`FiniteMetricSpace` on the vertex set
        may be passed instead, together with ``complex_``, to use distances
        other than the 1-skeleton path metric.
    ring
        Coefficient ring.
    max_dim
        Largest nerve simplex dimension; defaults to ``n + 1`` for an
        ``n``-dimensional complex.
    cycle
        Fundamental cycle to use; computed when omitted.

    Returns
    -------
    FillRadCertificate
        ``radius`` is half the first critical distance at which the
        fundamental cycle bounds; ``witness`` is a bounding chain there and
        ``previous_scale`` the critical distance just below, where no
        filling exists.
    """
    ring = Ring.parse(ring)
    if isinstance(mc, MetricComplex):
        cx, fms = mc.complex, path_metric(mc)
    else:
        if complex_ is None:
            raise ValidationError("a complex is needed alongside a bare metric space")
        cx, fms = complex_, mc
    if cx.dimension < 1:
        raise ValidationError("complex must have positive dimension")
    z = cycle if cycle is not None else fundamental_cycle(cx, ring)
    if z is None:
        raise NoFundamentalClass(f"H_{cx.dimension} is not cyclic of rank one over {ring.name}")
    z = z.with_ring(ring)
    n = z.dim
    if max_dim is None:
        max_dim = n + 1
    if max_dim < n + 1:
        raise NeverDies(f"no {n + 1}-simplices with max_dim={max_dim}; the class cannot bound")
    D = fms.distances
    support = z.vertices()
    birth = max((D[a, b] for s in z.coefficients for a, b in combinations(s, 2)), default=0)
    radii = [max(D[w, v] for v in support) for w in range(len(fms))]
    apex = min(range(len(fms)), key=lambda w: (radii[w], w))
    upper = max(radii[apex], birth)
    all_scales = merge_scales(fms.critical_scales())
    scales = [s for s in all_scales if birth <= s <= upper]
    # merged float thresholds may sit a hair above the exact birth/upper values
    if not scales or scales[-1] < upper:
        scales.append(upper)
    probes: Dict[int, Probe] = {}
    found: Dict[int, Tuple[SimplicialComplex, ChainVector]] = {}

    def probe(k: int) -> bool:
        if k in probes:
            return probes[k].bounds
        nerve, c = class_bounds_at(fms, z, scales[k], max_dim, ring)
        probes[k] = Probe(scales[k], tuple(nerve.f_vector()), c is not None)
        log.debug("scale %s: counts %s bounds %s", scales[k], probes[k].counts, c is not None)
        if c is not None:
            found[k] = (nerve, c)
        return c is not None

    hi = len(scales) - 1
    # the top scale bounds: the cone over ``apex`` is a chain of cliques there
    top_witness = cone_chain(z, apex)
    if top_witness.boundary() != z:
        raise AssertionError("cone chain does not fill the cycle")
    # exponential search upward from the birth scale keeps probed nerves small
    lo, step = 0, 1
    while lo < hi:
        k = min(lo + step - 1, hi - 1)
        if probe(k):
            hi = k
            break
        lo = k + 1
        step *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if probe(mid):
            hi = mid
        else:
            lo = mid + 1
    if lo > 0 and probe(lo - 1):
        raise AssertionError("filtration is not monotone")
    death = scales[lo]
    if lo in found:
        witness = found[lo][1]
    else:
        witness = top_witness
        probes[lo] = Probe(death, clique_counts(_adjacency(fms, death), max_dim), True)
    below = [s for s in all_scales if s < death]
    cert = FillRadCertificate(
        radius=_half(death), death_scale=death, witness=witness, ring=ring, cycle=z,
        space=fms, max_dim=max_dim, previous_scale=below[-1] if below else None,
        probes=[probes[k] for k in sorted(probes)])
    if not cert.verify():
        raise AssertionError("witness does not fill the fundamental cycle")
    return cert
