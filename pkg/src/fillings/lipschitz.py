"""Dilation and the per-point Lipschitz extension into sup-norm space.

For ``f: Y -> l^inf(V)`` defined on a subset ``Y`` of a finite metric space
``X``, the extension

    F_x(v) = min over y in Y of ( f_y(v) + dil(f, y) * d(x, y) )

agrees with ``f`` on ``Y``, has the same global dilation, and keeps the
dilation at every point of ``Y``.  Using the global constant ``dil(f)`` in
place of ``dil(f, y)`` (``coarse_extend``) also extends ``f`` with the same
global dilation but can increase the dilation at individual points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Sequence, Tuple

import numpy as np

from .errors import ValidationError, ZeroDistance
from .metric import FLOAT_RTOL, FiniteMetricSpace, sup_distances


@dataclass(frozen=True, eq=False)
class PartialMap:
    """Values ``values[k]`` at the points ``domain[k]`` of ``source``."""

    source: FiniteMetricSpace
    domain: Tuple[int, ...]
    values: np.ndarray

    def __post_init__(self):
        domain = tuple(int(y) for y in self.domain)
        if not domain:
            raise ValidationError("the domain subset must be nonempty")
        if len(set(domain)) != len(domain):
            raise ValidationError("repeated domain point")
        if any(y < 0 or y >= len(self.source) for y in domain):
            raise ValidationError("domain point outside the source space")
        values = np.asarray(self.values)
        if values.ndim != 2 or values.shape[0] != len(domain):
            raise ValidationError("values must be one coordinate vector per domain point")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class DilationProfile:
    global_: object
    per_point: Dict[int, object]


def _ratio(num, den, exact: bool):
    if exact:
        r = Fraction(num) / Fraction(den)
        return r.numerator if r.denominator == 1 else r
    return float(num) / float(den)


def _is_exact(arr: np.ndarray) -> bool:
    return arr.dtype == object or np.issubdtype(arr.dtype, np.integer)


def dilation_of(points: Sequence[int], images: np.ndarray, space: FiniteMetricSpace) -> DilationProfile:
    """Dilation profile of ``points[k] -> images[k]`` (sup-norm on images)."""
    exact = space.exact and _is_exact(images)
    img = sup_distances(images.astype(object) if exact else images.astype(float))
    per_point = {}
    for a, y in enumerate(points):
        best = 0
        for b, y2 in enumerate(points):
            if a == b:
                continue
            dist = space.distances[y, y2]
            if dist == 0:
                raise ZeroDistance(f"points {y} and {y2} are at distance zero")
            r = _ratio(img[a, b], dist, exact)
            if r > best:
                best = r
        per_point[y] = best
    return DilationProfile(max(per_point.values(), default=0), per_point)


def dilation(pm: PartialMap) -> DilationProfile:
    """Global and per-point dilation of a partial map.

    The per-point dilation at ``y`` is the largest ratio
    ``|f(y) - f(y')|_inf / d(y, y')`` over the other domain points; it is 0
    when the domain is a single point.
    """
    return dilation_of(pm.domain, pm.values, pm.source)


def _extend(pm: PartialMap, constants: Dict[int, object]) -> np.ndarray:
    X = pm.source
    exact = X.exact and _is_exact(pm.values)
    dtype = object if exact else float
    vals = pm.values.astype(dtype)
    n, m = len(X), vals.shape[1]
    out = np.empty((n, m), dtype=dtype)
    for x in range(n):
        cands = [vals[k] + constants[y] * X.distances[x, y] for k, y in enumerate(pm.domain)]
        best = cands[0].copy()
        for c in cands[1:]:
            best = np.minimum(best, c)
        out[x] = best
    return out


def mcshane_extend(pm: PartialMap) -> np.ndarray:
    """Extension to all of ``X`` with per-point constants ``dil(f, y)``.

    Returns an ``(len(X), m)`` array whose row ``x`` is ``F(x)``.
    """
    return _extend(pm, dilation(pm).per_point)


def coarse_extend(pm: PartialMap) -> np.ndarray:
    """Extension with the single global constant ``dil(f)`` at every point."""
    prof = dilation(pm)
    return _extend(pm, {y: prof.global_ for y in pm.domain})


def extension_report(pm: PartialMap) -> Dict[str, object]:
    """Dilation profile before and after extension, checked exhaustively.

    ``extends`` is the largest sup-distance between ``F(y)`` and ``f(y)``
    over the domain; the remaining keys compare dilations.
    """
    before = dilation(pm)
    F = mcshane_extend(pm)
    X = pm.source
    after = dilation_of(range(len(X)), F, X)
    rows = F[list(pm.domain)]
    gap = np.abs(rows - pm.values.astype(rows.dtype)).max() if rows.size else 0
    if rows.dtype == object:
        same = lambda a, b: a == b
    else:
        same = lambda a, b: math.isclose(a, b, rel_tol=FLOAT_RTOL, abs_tol=FLOAT_RTOL)
    return {
        "before": before,
        "after": after,
        "extends": gap,
        "global_equal": same(after.global_, before.global_),
        "per_point_equal": all(same(after.per_point[y], before.per_point[y]) for y in pm.domain),
    }
