import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from fillings import fixtures as F
from fillings.complex import Ring, SimplicialComplex
from fillings.errors import (BadAttachingCycle, DimOutOfRange, HypothesisFailed, NonpositiveT,
                             NotEuclideanRealizable, NotOrientable, NotSimplicial, RTooSmall)
from fillings.fillvol import affine_simplex_volume
from fillings.maps import (REPORT_COLUMNS, SimplicialMap, attach_cell, check_monotone,
                           comparison_experiment, degree, extension_experiment,
                           pullback_interp_metric, simplex_volume_from_lengths, total_volume,
                           trivial_extension)
from fillings.metric import MetricComplex, path_metric


def cover(n, k):
    """The k-fold cover of a cycle on n // k vertices by the n-cycle."""
    return SimplicialMap(F.cycle(n).complex, F.cycle(n // k).complex,
                         tuple(i % (n // k) for i in range(n)))


def reflection(n):
    cx = F.cycle(n).complex
    return SimplicialMap(cx, cx, tuple((-i) % n for i in range(n)))


# SimplicialMap / check_monotone

def test_identity_on_torus_is_monotone():
    T = F.torus().complex
    rep = check_monotone(SimplicialMap.identity(T), 2, 1)
    assert rep.is_n1_monotone and not rep.offending
    assert rep.degree == {"z": 1, "q": 1, "z2": 1}


def test_double_cover_is_2_monotone_not_1():
    rep = check_monotone(cover(6, 2), 1, 2)
    assert rep.is_nd_monotone and not rep.is_n1_monotone
    assert set(rep.preimage_counts.values()) == {2}
    assert check_monotone(cover(6, 2), 1, 1).offending


def test_collapsed_triangle_is_ignored():
    # fold the two triangles of a square onto one: (0,1,2),(0,2,3) -> vertex 3 goes to 1
    src = SimplicialComplex.from_top(4, [(0, 1, 2), (0, 2, 3)])
    tgt = SimplicialComplex.from_top(4, [(0, 1, 2), (0, 2, 3)])
    f = SimplicialMap(src, tgt, (0, 1, 2, 2))
    rep = check_monotone(f, 2, 1)
    assert rep.preimage_counts == {(0, 1, 2): 1, (0, 2, 3): 0}
    assert rep.is_n1_monotone


def test_non_simplicial_map_rejected():
    src = F.cycle(4).complex
    with pytest.raises(NotSimplicial):
        SimplicialMap(src, src, (0, 2, 1, 3))
    with pytest.raises(DimOutOfRange):
        check_monotone(SimplicialMap.identity(src), 2)


# degree

def test_degree_examples():
    assert degree(SimplicialMap.identity(F.torus7().complex), "z") == 1
    assert degree(cover(6, 2), "z") == 2
    assert degree(cover(6, 2), "z2") == 0
    assert degree(reflection(5), "z") == -1
    assert degree(reflection(5), "z2") == 1
    with pytest.raises(NotOrientable):
        degree(SimplicialMap.identity(F.rp2(0).complex), "z")


@pytest.mark.parametrize("seed", range(8))
def test_degree_is_multiplicative_and_reduces_mod_two(seed):
    f = SimplicialMap(F.torus().complex, F.torus().complex, F.torus_automorphism(4, 4, seed))
    g = SimplicialMap(F.torus().complex, F.torus().complex, F.torus_automorphism(4, 4, seed + 100))
    assert degree(f.compose(g), "z") == degree(f, "z") * degree(g, "z")
    for h in (f, g, reflection(7), cover(9, 3)):
        assert degree(h, "z") % 2 == degree(h, "z2")


def test_composite_cover_degrees():
    f = cover(12, 2)
    g = SimplicialMap(F.cycle(24).complex, F.cycle(12).complex, tuple(i % 12 for i in range(24)))
    assert degree(f.compose(g), "z") == 4 == degree(f, "z") * degree(g, "z")


# pullback_interp_metric

def test_pullback_examples():
    mc = F.torus7()
    f = SimplicialMap.identity(mc.complex)
    g = pullback_interp_metric(f, mc, mc, 1)
    assert all(math.isclose(v, math.sqrt(2)) for v in g.edge_lengths.values())
    g = pullback_interp_metric(f, mc, mc, Fraction(1, 10 ** 6))
    assert all(abs(v - 1) < 1e-11 for v in g.edge_lengths.values())
    c = cover(6, 2)
    g3 = pullback_interp_metric(c, F.cycle(3), F.cycle(6, 6), Fraction(3, 4))
    assert g3.edge_lengths[(0, 1)] == Fraction(5, 4)  # sqrt(1 + 9/16), exactly
    with pytest.raises(NonpositiveT):
        pullback_interp_metric(f, mc, mc, 0)


def test_collapsed_edge_gets_t_times_length():
    src = SimplicialComplex.from_top(4, [(0, 1, 2), (0, 2, 3)])
    f = SimplicialMap(src, src, (0, 1, 2, 2))
    g1 = MetricComplex.uniform(src, 3)
    g = pullback_interp_metric(f, g1, g1, Fraction(1, 2))
    assert g.edge_lengths[(2, 3)] == Fraction(3, 2)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 50), st.fractions(min_value=Fraction(1, 16), max_value=4))
def test_pullback_makes_the_map_nonexpanding(seed, t):
    mc = F.torus()
    f = SimplicialMap(mc.complex, mc.complex, F.torus_automorphism(4, 4, seed))
    g = pullback_interp_metric(f, mc, mc, t)
    dv, dw = path_metric(g).distances, path_metric(mc).distances
    n = mc.complex.vertex_count
    assert all(dw[f(a), f(b)] <= dv[a, b] for a in range(n) for b in range(n))


# simplex_volume_from_lengths

def test_cayley_menger_examples():
    assert math.isclose(simplex_volume_from_lengths([1, 1, 1]), math.sqrt(3) / 4)
    assert simplex_volume_from_lengths([1, 1, 2]) == 0
    assert simplex_volume_from_lengths([3, 4, 5]) == 6
    with pytest.raises(NotEuclideanRealizable):
        simplex_volume_from_lengths([1, 1, 3])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=12, max_size=12))
def test_cayley_menger_matches_gram(xs):
    pts = np.array(xs, dtype=float).reshape(4, 3)
    d = [float(np.linalg.norm(pts[i] - pts[j])) for i in range(4) for j in range(i + 1, 4)]
    assume(min(d) > 0)  # lengths must be positive
    ref = affine_simplex_volume(pts)
    got = simplex_volume_from_lengths(d)
    assert math.isclose(float(got), ref, rel_tol=1e-6, abs_tol=1e-6)


def test_total_volume():
    assert math.isclose(total_volume(F.torus()), 32 * math.sqrt(3) / 4)
    assert total_volume(F.cycle(5, 7)) == 7


# attach_cell

def test_one_cell_on_torus_keeps_distances():
    V = F.torus()
    ext = attach_cell(V, 1, (0, 10), 1, mesh=2)
    assert ext.strong_isometry_gap == 0
    dv = path_metric(V).distances
    dw = path_metric(ext.result).distances[:16, :16]
    assert (dv == dw).all()
    assert ext.result.complex.vertex_count == 16 + 15 * 2 - 1
    assert ext.inclusion.vertex_map == tuple(range(16))


@pytest.mark.parametrize("mesh", [1, 2, 3])
def test_one_cell_vertex_count(mesh):
    ext = attach_cell(F.torus(), 1, (0, 5), 2, mesh=mesh)
    assert len(ext.attached_cells[0].new_vertices) == 15 * mesh - 1


def test_small_radius_is_rejected():
    with pytest.raises(RTooSmall):
        attach_cell(F.torus(), 1, (0, 10), Fraction(1, 100))
    with pytest.raises(RTooSmall):
        attach_cell(F.s3_boundary(), 2, (0, 1, 2), Fraction(1, 10), mesh=1)


def test_bad_attaching_data():
    with pytest.raises(BadAttachingCycle):
        attach_cell(F.torus(), 1, (3, 3), 1)
    with pytest.raises(BadAttachingCycle):
        attach_cell(F.s3_boundary(), 2, (0, 1), 1)


def test_two_cell_on_s3_boundary():
    ext = attach_cell(F.s3_boundary(), 2, (0, 1, 2), 1, mesh=1)
    assert ext.strong_isometry_gap <= 1e-9
    assert ext.result.complex.dimension == 3


# experiments

def test_identity_comparison_is_clean():
    mc = F.torus7()
    rep = comparison_experiment(SimplicialMap.identity(mc.complex), mc, mc, [1, Fraction(1, 2)])
    assert rep.ok
    assert rep.to_csv().splitlines()[0] == ",".join(REPORT_COLUMNS)
    assert all(r.excess > 0 for r in rep.rows)


def test_double_cover_is_rejected():
    with pytest.raises(HypothesisFailed):
        comparison_experiment(cover(6, 2), F.cycle(3), F.cycle(6), [1], ring="z")
    with pytest.raises(HypothesisFailed):
        comparison_experiment(cover(6, 2), F.cycle(3), F.cycle(6), [1], ring="z2")


def test_trivial_extension_is_equal():
    rep = extension_experiment(trivial_extension(F.cycle(6)))
    assert rep.ok and rep.fillrad_V == rep.fillrad_Vprime and rep.fillvol_V == rep.fillvol_Vprime
