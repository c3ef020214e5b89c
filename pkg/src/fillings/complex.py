"""Finite simplicial complexes, chains and exact homology.

Simplices are strictly increasing vertex tuples; the orientation of a simplex
is the one induced by that order.  Coefficients live in one of three rings:

* ``Ring.Z``  -- Python ints,
* ``Ring.Q``  -- ``fractions.Fraction`` (ints are accepted),
* ``Ring.Z2`` -- ints reduced mod 2.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import gcd
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import (BadIndex, DimOutOfRange, DuplicateSimplex, MissingFace,
                     NotACycle, NotPureDimensional)
from .linalg import ExactElimination, gf2_kernel, gf2_rank, gf2_solve

Simplex = Tuple[int, ...]


class Ring(enum.Enum):
    Z = "z"
    Q = "q"
    Z2 = "z2"

    @classmethod
    def parse(cls, value: "Ring | str") -> "Ring":
        if isinstance(value, Ring):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown ring {value!r}; expected one of z, q, z2") from None

    def reduce(self, value):
        """Normalize a coefficient into this ring's representation."""
        if self is Ring.Z2:
            return int(value) % 2
        if self is Ring.Z:
            if isinstance(value, Fraction):
                if value.denominator != 1:
                    raise ValueError(f"{value} is not an integer")
                return value.numerator
            return int(value)
        value = Fraction(value)
        return value.numerator if value.denominator == 1 else value

    @property
    def is_field(self) -> bool:
        return self is not Ring.Z


def faces(simplex: Simplex) -> List[Simplex]:
    """Codimension-one faces, the i-th face omitting vertex i."""
    return [simplex[:i] + simplex[i + 1:] for i in range(len(simplex))]


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    """An immutable finite simplicial complex.

    ``simplices[k]`` is the sorted tuple of k-simplices.  Build one with
    :func:`validate_complex` (or :meth:`from_top`) rather than directly.
    """

    vertex_count: int
    simplices: Tuple[Tuple[Simplex, ...], ...]
    inferred: Tuple[Simplex, ...] = field(default=(), compare=False)

    @classmethod
    def from_top(cls, vertex_count: int, maximal: Iterable[Sequence[int]]) -> "SimplicialComplex":
        """Close a list of maximal simplices under faces."""
        return validate_complex({"vertex_count": vertex_count,
                                 "simplices": list(maximal)}, close=True)

    @property
    def dimension(self) -> int:
        return len(self.simplices) - 1

    def __len__(self) -> int:
        return sum(len(s) for s in self.simplices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.vertex_count == other.vertex_count and self.simplices == other.simplices

    def __hash__(self) -> int:
        return hash((self.vertex_count, self.simplices))

    def __repr__(self) -> str:
        counts = [len(s) for s in self.simplices]
        return f"SimplicialComplex(vertex_count={self.vertex_count}, counts={counts})"

    def n_simplices(self, dim: int) -> Tuple[Simplex, ...]:
        if 0 <= dim <= self.dimension:
            return self.simplices[dim]
        return ()

    @cached_property
    def _index(self) -> Tuple[Dict[Simplex, int], ...]:
        return tuple({s: i for i, s in enumerate(level)} for level in self.simplices)

    def index(self, simplex: Simplex) -> int:
        return self._index[len(simplex) - 1][simplex]

    def __contains__(self, simplex) -> bool:
        simplex = tuple(simplex)
        k = len(simplex) - 1
        return 0 <= k <= self.dimension and simplex in self._index[k]

    @cached_property
    def edges(self) -> Tuple[Simplex, ...]:
        return self.n_simplices(1)

    @cached_property
    def is_connected(self) -> bool:
        if self.vertex_count == 0:
            return False
        parent = list(range(self.vertex_count))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for a, b in self.edges:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        return len({find(v) for v in range(self.vertex_count)}) == 1

    def f_vector(self) -> List[int]:
        return [len(level) for level in self.simplices]


def validate_complex(raw, close: bool = False) -> SimplicialComplex:
    """Check and normalize a raw complex description.

    ``raw`` is either a mapping with ``"vertex_count"`` and ``"simplices"``
    (a list of simplices, or a mapping from dimension to such a list, as in
    the JSON format), or a :class:`SimplicialComplex`.

    With ``close=False`` a simplex whose face is absent raises
    :class:`MissingFace`.  With ``close=True`` missing faces are added and
    recorded in ``inferred``.  Vertices named by ``vertex_count`` but lying on
    no simplex are added as 0-simplices either way.
    """
    if isinstance(raw, SimplicialComplex):
        raw = {"vertex_count": raw.vertex_count,
               "simplices": [s for level in raw.simplices for s in level]}
    try:
        n = int(raw["vertex_count"])
        listed = raw["simplices"]
    except (KeyError, TypeError) as exc:
        raise BadIndex(f"malformed complex description: {exc}") from None
    if n < 0:
        raise BadIndex("vertex_count must be nonnegative")
    if isinstance(listed, Mapping):
        items = []
        for key, level in listed.items():
            for s in level:
                if len(s) != int(key) + 1:
                    raise BadIndex(f"simplex {list(s)} listed under dimension {key}")
                items.append(s)
        listed = items
    given: Dict[Simplex, None] = {}
    for s in listed:
        s = tuple(int(v) for v in s)
        if not s:
            raise BadIndex("empty simplex")
        if any(v < 0 or v >= n for v in s):
            raise BadIndex(f"simplex {s} has a vertex outside 0..{n - 1}")
        if any(a >= b for a, b in zip(s, s[1:])):
            raise BadIndex(f"simplex {s} is not strictly increasing")
        if s in given:
            raise DuplicateSimplex(f"simplex {s} listed twice")
        given[s] = None
    allsimp = set(given)
    inferred = set()
    for s in sorted(given, key=len, reverse=True):
        for k in range(1, len(s)):
            for f in combinations(s, k):
                if f not in allsimp:
                    # vertices are always implicit; higher faces must be listed unless closing
                    if k > 1 and not close:
                        raise MissingFace(f"face {f} of {s} is missing")
                    allsimp.add(f)
                    if k > 1:
                        inferred.add(f)
    for v in range(n):
        if (v,) not in allsimp:
            allsimp.add((v,))
    top = max((len(s) for s in allsimp), default=0)
    levels = [[] for _ in range(top)]
    for s in allsimp:
        levels[len(s) - 1].append(s)
    return SimplicialComplex(n, tuple(tuple(sorted(level)) for level in levels),
                             tuple(sorted(inferred, key=lambda s: (len(s), s))))


# --------------------------------------------------------------------------
# chains


@dataclass(frozen=True, eq=False)
class ChainVector:
    """A finite formal combination of oriented ``dim``-simplices."""

    dim: int
    ring: Ring
    coefficients: Mapping[Simplex, object]

    def __post_init__(self):
        clean = {}
        for s, v in self.coefficients.items():
            s = tuple(s)
            if len(s) != self.dim + 1:
                raise DimOutOfRange(f"simplex {s} in a {self.dim}-chain")
            v = self.ring.reduce(v)
            if v:
                clean[s] = v
        object.__setattr__(self, "coefficients", dict(sorted(clean.items())))

    @classmethod
    def zero(cls, dim: int, ring: Ring) -> "ChainVector":
        return cls(dim, ring, {})

    def __bool__(self) -> bool:
        return bool(self.coefficients)

    def __len__(self) -> int:
        return len(self.coefficients)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainVector):
            return NotImplemented
        return (self.dim, self.ring, self.coefficients) == (other.dim, other.ring, other.coefficients)

    def __neg__(self) -> "ChainVector":
        return ChainVector(self.dim, self.ring, {s: -v for s, v in self.coefficients.items()})

    def __add__(self, other: "ChainVector") -> "ChainVector":
        if (self.dim, self.ring) != (other.dim, other.ring):
            raise ValueError("chains of different dimension or ring")
        out = dict(self.coefficients)
        for s, v in other.coefficients.items():
            out[s] = out.get(s, 0) + v
        return ChainVector(self.dim, self.ring, out)

    def __sub__(self, other: "ChainVector") -> "ChainVector":
        return self + (-other)

    def scaled(self, factor) -> "ChainVector":
        return ChainVector(self.dim, self.ring, {s: factor * v for s, v in self.coefficients.items()})

    def with_ring(self, ring: Ring) -> "ChainVector":
        return ChainVector(self.dim, ring, self.coefficients)

    def support(self) -> List[Simplex]:
        return list(self.coefficients)

    def vertices(self) -> List[int]:
        return sorted({v for s in self.coefficients for v in s})

    def check_in(self, complex_: SimplicialComplex) -> None:
        for s in self.coefficients:
            if s not in complex_:
                raise BadIndex(f"chain references {s}, which is not in the complex")

    def boundary(self) -> "ChainVector":
        if self.dim == 0:
            # no augmentation: the boundary of a 0-chain is the empty (-1)-chain
            return ChainVector(-1, self.ring, {})
        out: Dict[Simplex, object] = {}
        for s, v in self.coefficients.items():
            for i, f in enumerate(faces(s)):
                out[f] = out.get(f, 0) + (v if i % 2 == 0 else -v)
        return ChainVector(self.dim - 1, self.ring, out)


# --------------------------------------------------------------------------
# boundary matrices


def boundary_columns(complex_: SimplicialComplex, dim: int) -> List[Dict[int, int]]:
    """Sparse columns of the integral boundary map C_dim -> C_{dim-1}."""
    rows = complex_._index[dim - 1]
    cols = []
    for s in complex_.simplices[dim]:
        col = {}
        for i, f in enumerate(faces(s)):
            col[rows[f]] = 1 if i % 2 == 0 else -1
        cols.append(col)
    return cols


def boundary_matrix(complex_: SimplicialComplex, dim: int, ring: Ring | str = Ring.Z) -> List[List[int]]:
    """Dense exact boundary matrix.

    Columns are indexed by ``dim``-simplices and rows by ``(dim-1)``-simplices,
    both in the complex's sorted order.  Over Z2 entries are reduced mod 2.
    """
    ring = Ring.parse(ring)
    if not 1 <= dim <= complex_.dimension:
        raise DimOutOfRange(f"dim must lie in 1..{complex_.dimension}, got {dim}")
    nrows = len(complex_.simplices[dim - 1])
    cols = boundary_columns(complex_, dim)
    mat = [[0] * len(cols) for _ in range(nrows)]
    for j, col in enumerate(cols):
        for i, v in col.items():
            mat[i][j] = v % 2 if ring is Ring.Z2 else v
    return mat


# --------------------------------------------------------------------------
# homology


@dataclass(frozen=True)
class HomologySummary:
    ring: Ring
    betti: Tuple[int, ...]
    torsion: Tuple[Tuple[int, ...], ...]

    def __str__(self) -> str:
        parts = []
        for k, (b, t) in enumerate(zip(self.betti, self.torsion)):
            desc = " + ".join([f"{self.ring.name}^{b}"] * (b > 0) + [f"Z/{c}" for c in t]) or "0"
            parts.append(f"H{k} = {desc}")
        return ", ".join(parts)


def _rank_and_torsion(complex_: SimplicialComplex, dim: int, ring: Ring) -> Tuple[int, List[int]]:
    if dim < 1 or dim > complex_.dimension:
        return 0, []
    cols = boundary_columns(complex_, dim)
    nrows = len(complex_.simplices[dim - 1])
    if ring is Ring.Z2:
        return gf2_rank([list(c) for c in cols], nrows), []
    elim = ExactElimination(cols, nrows, ring.value)
    return elim.rank, elim.invariant_factors()


def homology_summary(complex_: SimplicialComplex, ring: Ring | str = Ring.Z) -> HomologySummary:
    """Betti numbers over the ring and, over Z, torsion coefficients."""
    ring = Ring.parse(ring)
    top = complex_.dimension
    ranks, torsions = [0] * (top + 2), [[] for _ in range(top + 2)]
    for k in range(1, top + 1):
        ranks[k], torsions[k] = _rank_and_torsion(complex_, k, ring)
    betti, torsion = [], []
    for k in range(top + 1):
        betti.append(len(complex_.simplices[k]) - ranks[k] - ranks[k + 1])
        torsion.append(tuple(torsions[k + 1]))
    return HomologySummary(ring, tuple(betti), tuple(torsion))


def _cycle_basis(complex_: SimplicialComplex, dim: int, ring: Ring) -> List[Dict[int, object]]:
    cols = boundary_columns(complex_, dim)
    nrows = len(complex_.simplices[dim - 1])
    if ring is Ring.Z2:
        return [{j: 1 for j in support} for support in gf2_kernel([list(c) for c in cols], nrows)]
    return ExactElimination(cols, nrows, "q").kernel_basis()


def _primitive(vec: Dict[int, object]) -> Dict[int, int]:
    den = 1
    for v in vec.values():
        f = Fraction(v)
        den = den * f.denominator // gcd(den, f.denominator)
    ints = {j: int(Fraction(v) * den) for j, v in vec.items()}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    return {j: v // g for j, v in ints.items()}


def fundamental_cycle(complex_: SimplicialComplex, ring: Ring | str = Ring.Z) -> Optional[ChainVector]:
    """A generating top-dimensional cycle when H_n(V; ring) is the ring itself.

    Over Q the cycle lies in the integral lattice with content one (it is the
    integral fundamental class, provided it exists over Z too).  The sign is
    normalized so the lexicographically smallest simplex of the support gets
    coefficient +1.  Returns ``None`` when the top homology is not cyclic of
    rank one, or over Z when it is, but only rationally.
    """
    ring = Ring.parse(ring)
    n = complex_.dimension
    if n < 0 or not complex_.simplices[n]:
        raise NotPureDimensional("complex has no top-dimensional simplices")
    if n == 0:
        if complex_.vertex_count != 1:
            return None
        return ChainVector(0, ring, {(0,): 1})
    top = complex_.simplices[n]
    basis = _cycle_basis(complex_, n, ring)
    if len(basis) != 1:
        return None
    vec = basis[0] if ring is Ring.Z2 else _primitive(basis[0])
    first = min(vec)
    if ring is not Ring.Z2 and vec[first] < 0:
        vec = {j: -v for j, v in vec.items()}
    return ChainVector(n, ring, {top[j]: v for j, v in vec.items()})


def _as_rhs(z: ChainVector, complex_: SimplicialComplex) -> Dict[int, object]:
    idx = complex_._index[z.dim]
    try:
        return {idx[s]: v for s, v in z.coefficients.items()}
    except KeyError as exc:
        raise BadIndex(f"chain references {exc.args[0]}, which is not in the complex") from None


def solve_boundary(z: ChainVector, complex_: SimplicialComplex,
                   ring: Ring | str | None = None) -> Optional[ChainVector]:
    """Some chain ``c`` in the complex with ``boundary(c) == z``, or ``None``.

    Over Z the solve honours divisibility (a cycle may bound rationally but
    not integrally).
    """
    ring = Ring.parse(ring) if ring is not None else z.ring
    z = z.with_ring(ring)
    z.check_in(complex_)
    if z.dim >= 1 and z.boundary():
        raise NotACycle("the chain has nonzero boundary")
    if not z:
        return ChainVector.zero(z.dim + 1, ring)
    d = z.dim + 1
    if d > complex_.dimension:
        return None
    cols = boundary_columns(complex_, d)
    nrows = len(complex_.simplices[d - 1])
    rhs = _as_rhs(z, complex_)
    upper = complex_.simplices[d]
    if ring is Ring.Z2:
        support = gf2_solve([list(c) for c in cols], nrows, list(rhs))
        if support is None:
            return None
        return ChainVector(d, ring, {upper[j]: 1 for j in support})
    sol = ExactElimination(cols, nrows, ring.value).solve(rhs)
    if sol is None:
        return None
    return ChainVector(d, ring, {upper[j]: v for j, v in sol.items()})


def pushforward_simplex(simplex: Simplex, vertex_map: Sequence[int]) -> Tuple[int, Optional[Simplex]]:
    """Image of an oriented simplex under a vertex map: ``(sign, sorted image)``.

    Degenerate images (a repeated vertex) give ``(0, None)``.
    """
    image = [vertex_map[v] for v in simplex]
    if len(set(image)) < len(image):
        return 0, None
    order = sorted(range(len(image)), key=image.__getitem__)
    sign = 1
    seen = [False] * len(order)
    for i in range(len(order)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign, tuple(sorted(image))


def pushforward_chain(chain: ChainVector, vertex_map: Sequence[int]) -> ChainVector:
    out: Dict[Simplex, object] = {}
    for s, v in chain.coefficients.items():
        sign, image = pushforward_simplex(s, vertex_map)
        if sign:
            out[image] = out.get(image, 0) + sign * v
    return ChainVector(chain.dim, chain.ring, out)


def include_chain(chain: ChainVector, complex_: SimplicialComplex) -> ChainVector:
    """The same chain viewed in a larger complex (validates membership)."""
    chain.check_in(complex_)
    return chain
