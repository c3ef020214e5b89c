import math
from itertools import combinations

import numpy as np
import pytest

from fillings import fixtures as F
from fillings.complex import Ring, fundamental_cycle, validate_complex
from fillings.errors import BadParams
from fillings.maps import SimplicialMap, degree
from fillings.metric import path_metric


def test_cycle_4_4():
    mc = F.cycle(4, 4)
    assert mc.complex.f_vector() == [4, 4] and set(mc.edge_lengths.values()) == {1}


def test_icosahedron_edges():
    # 12 canonical vertices (0, +-1, +-phi) and cyclic shifts, normalized
    phi = (1 + 5 ** 0.5) / 2
    pts = []
    for a in (-1, 1):
        for b in (-phi, phi):
            pts += [(0, a, b), (a, b, 0), (b, 0, a)]
    pts = np.array(pts) / math.hypot(1, phi)
    dots = sorted({round(float(pts[i] @ pts[j]), 12) for i, j in combinations(range(12), 2)})
    nearest = max(dots)  # neighbors have the largest inner product
    edge = math.acos(nearest)
    assert math.isclose(edge, math.acos(5 ** -0.5), rel_tol=1e-12)
    mc = F.sphere2(0)
    assert mc.complex.f_vector() == [12, 30, 20]
    assert all(math.isclose(v, edge, rel_tol=1e-12) for v in mc.edge_lengths.values())


def test_s3_boundary_counts():
    assert F.s3_boundary().complex.f_vector() == [5, 10, 10, 5]


@pytest.mark.parametrize("level,verts", [(0, 12), (1, 42), (2, 162)])
def test_sphere_levels(level, verts):
    mc = F.sphere2(level)
    assert mc.complex.vertex_count == verts
    # great-circle edges are no longer than chord arcs between neighbors
    assert max(mc.edge_lengths.values()) < math.acos(5 ** -0.5) + 1e-12


def test_rp2_is_the_antipodal_quotient():
    for level in (0, 1):
        assert F.rp2(level).complex.vertex_count == F.sphere2(level).complex.vertex_count // 2
        d = F.rp2_quotient_distances(level)
        assert d.max() <= math.pi / 2 + 1e-12
        assert np.allclose(d, d.T)


def test_bad_params():
    for spec in ["cycle:2", "cycle:5:-1", "torus:2:4", "sphere2:-1", "nosuch", "cycle:x"]:
        with pytest.raises(BadParams):
            F.generate_fixture(spec)


ORIENTABILITY = {"sphere2:0": True, "sphere2:1": True, "torus:4:4": True, "torus:3:5": True,
                 "torus7": True, "octahedron": True, "s3_boundary": True, "cycle:6": True,
                 "rp2:0": False, "rp2:1": False, "klein:4:4": False}


@pytest.mark.parametrize("name", sorted(ORIENTABILITY))
def test_every_fixture_validates_with_expected_classes(name):
    mc = F.generate_fixture(name)
    assert validate_complex(mc.complex) == mc.complex
    assert mc.complex.is_connected
    path_metric(mc)
    for ring in (Ring.Z, Ring.Q):
        assert (fundamental_cycle(mc.complex, ring) is not None) == ORIENTABILITY[name]
    assert fundamental_cycle(mc.complex, Ring.Z2) is not None


@pytest.mark.parametrize("seed", range(8))
def test_torus_automorphisms_are_simplicial_with_unit_degree(seed):
    T = F.torus().complex
    vm = F.torus_automorphism(4, 4, seed)
    assert sorted(vm) == list(range(16))
    assert degree(SimplicialMap(T, T, vm), "z") in (1, -1)


def test_torus_metric_is_flat_triangular():
    mc = F.torus(4, 4)
    assert set(mc.edge_lengths.values()) == {1}
    assert path_metric(mc).diameter() == 2
