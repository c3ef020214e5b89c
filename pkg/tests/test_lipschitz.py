import random
from fractions import Fraction

import numpy as np
import pytest

from fillings import fixtures as F
from fillings.errors import ValidationError, ZeroDistance
from fillings.lipschitz import (PartialMap, coarse_extend, dilation, extension_report,
                                mcshane_extend)
from fillings.metric import FiniteMetricSpace, kuratowski_embed, path_metric

import oracles


def space(d):
    return FiniteMetricSpace(tuple(range(len(d))), np.array(d, dtype=object))


def test_kuratowski_restriction_has_unit_dilation():
    fms = path_metric(F.torus(3, 3))
    k = kuratowski_embed(fms).coordinates
    prof = dilation(PartialMap(fms, tuple(range(len(fms))), k))
    assert set(prof.per_point.values()) == {1} and prof.global_ == 1


def test_constant_map_and_doubling():
    fms = path_metric(F.cycle(5))
    const = PartialMap(fms, (0, 2, 3), np.array([[7, 1]] * 3, dtype=object))
    assert dilation(const).global_ == 0
    k = kuratowski_embed(fms).coordinates
    doubled = PartialMap(fms, tuple(range(5)), 2 * k)
    assert dilation(doubled).global_ == 2


def test_full_domain_extends_to_itself():
    fms = path_metric(F.cycle(6))
    k = kuratowski_embed(fms).coordinates
    pm = PartialMap(fms, tuple(range(6)), k)
    assert (mcshane_extend(pm) == k).all()


def test_singleton_domain_gives_constant_extension():
    fms = path_metric(F.cycle(6))
    pm = PartialMap(fms, (2,), np.array([[1, Fraction(1, 3)]], dtype=object))
    assert dilation(pm).per_point == {2: 0}
    F_ = mcshane_extend(pm)
    assert all(list(row) == [1, Fraction(1, 3)] for row in F_)


def test_four_cycle_two_adjacent_points():
    fms = path_metric(F.cycle(4))
    k = kuratowski_embed(fms).coordinates
    pm = PartialMap(fms, (0, 1), k[[0, 1]])
    F_ = mcshane_extend(pm)
    assert (F_[[0, 1]] == k[[0, 1]]).all()
    d = [[fms.distances[i, j] for j in range(4)] for i in range(4)]
    before = oracles.pointwise_dilations([0, 1], [list(k[0]), list(k[1])], d)
    after = oracles.pointwise_dilations(list(range(4)), [list(r) for r in F_], d)
    assert all(after[y] == before[y] for y in (0, 1))
    assert max(after.values()) == max(before.values())


def test_errors():
    fms = path_metric(F.cycle(4))
    with pytest.raises(ValidationError):
        PartialMap(fms, (), np.zeros((0, 2)))
    bad = FiniteMetricSpace((0, 1), np.array([[0, 1], [1, 0]]))
    pm = PartialMap(bad, (0, 1), np.array([[0], [1]]))
    assert dilation(pm).global_ == 1
    with pytest.raises(ValidationError):
        FiniteMetricSpace((0, 1), np.array([[0, 0], [0, 0]]))


@pytest.mark.parametrize("seed", range(25))
def test_extension_matches_formula_oracle(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 10)
    d = oracles.random_exact_space(rng, n)
    domain = sorted(rng.sample(range(n), rng.randint(1, n)))
    m = rng.randint(1, 4)
    values = [[Fraction(rng.randint(-9, 9), rng.randint(1, 3)) for _ in range(m)] for _ in domain]
    pm = PartialMap(space(d), tuple(domain), np.array(values, dtype=object))
    per = oracles.pointwise_dilations(domain, values, d)
    assert dilation(pm).per_point == per
    ref = oracles.mcshane(domain, values, d, per)
    got = mcshane_extend(pm)
    assert [list(r) for r in got] == ref
    # smaller constants give a smaller infimum: F <= F' pointwise, equal on Y
    coarse = coarse_extend(pm)
    g = max(per.values())
    assert [list(r) for r in coarse] == oracles.mcshane(domain, values, d, {y: g for y in domain})
    assert (got <= coarse).all()
    assert (coarse[domain] == got[domain]).all()
    rep = extension_report(pm)
    assert rep["extends"] == 0 and rep["global_equal"] and rep["per_point_equal"]


def test_float_mode_uses_tolerance():
    fms = path_metric(F.sphere2(0))
    k = kuratowski_embed(fms).coordinates
    pm = PartialMap(fms, (0, 3, 5), k[[0, 3, 5]])
    rep = extension_report(pm)
    assert rep["extends"] == 0 and rep["global_equal"] and rep["per_point_equal"]
