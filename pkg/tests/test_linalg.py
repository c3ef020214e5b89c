from fractions import Fraction
from itertools import product

import numpy as np
import sympy
from hypothesis import given, settings, strategies as st

from fillings.linalg import ExactElimination, gf2_kernel, gf2_rank, gf2_solve
from fillings.snf import invariant_factors, smith_normal_form

import oracles

small_int = st.integers(-4, 4)


@st.composite
def int_matrix(draw, max_rows=5, max_cols=5):
    m = draw(st.integers(1, max_rows))
    n = draw(st.integers(1, max_cols))
    return [[draw(small_int) for _ in range(n)] for _ in range(m)]


def columns_of(a):
    return [{i: a[i][j] for i in range(len(a)) if a[i][j]} for j in range(len(a[0]))]


def mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
            for i in range(len(a))]


@settings(max_examples=80, deadline=None)
@given(int_matrix())
def test_smith_normal_form_against_sympy(a):
    d, s, t = smith_normal_form(a)
    assert mul(mul(s, a), t) == d
    assert abs(sympy.Matrix(s).det()) == 1 and abs(sympy.Matrix(t).det()) == 1
    diag = [d[i][i] for i in range(min(len(d), len(d[0]))) if d[i][i]]
    assert all(b % a_ == 0 for a_, b in zip(diag, diag[1:]))
    assert diag == oracles.snf_diagonal(sympy.Matrix(a))
    assert invariant_factors(a) == diag


@settings(max_examples=80, deadline=None)
@given(int_matrix(6, 6))
def test_elimination_rank_and_torsion(a):
    cols = columns_of(a)
    m = sympy.Matrix(a)
    diag = oracles.snf_diagonal(m)
    ez = ExactElimination(cols, len(a), "z")
    eq = ExactElimination(cols, len(a), "q")
    assert ez.rank == eq.rank == m.rank()
    assert sorted(f for f in ez.invariant_factors() if f > 1) == [f for f in diag if f > 1]


@settings(max_examples=80, deadline=None)
@given(int_matrix(5, 6), st.lists(small_int, min_size=6, max_size=6))
def test_solve_over_q_and_z(a, xs):
    cols = columns_of(a)
    n = len(a[0])
    x = xs[:n]
    b = {i: sum(a[i][j] * x[j] for j in range(n)) for i in range(len(a))}
    b = {i: v for i, v in b.items() if v}
    for ring in ("q", "z"):
        sol = ExactElimination(cols, len(a), ring).solve(b)
        assert sol is not None
        if ring == "z":
            assert all(Fraction(v).denominator == 1 for v in sol.values())
        got = {i: sum(a[i][j] * sol.get(j, 0) for j in range(n)) for i in range(len(a))}
        assert {i: v for i, v in got.items() if v} == b


def test_z_solve_detects_divisibility():
    # 2 x = 1 has a rational but no integral solution
    assert ExactElimination([{0: 2}], 1, "z").solve({0: 1}) is None
    assert ExactElimination([{0: 2}], 1, "q").solve({0: 1}) == {0: Fraction(1, 2)}


@settings(max_examples=60, deadline=None)
@given(int_matrix(6, 6))
def test_kernel_basis_spans_nullspace(a):
    cols = columns_of(a)
    ker = ExactElimination(cols, len(a), "q").kernel_basis()
    assert len(ker) == len(a[0]) - sympy.Matrix(a).rank()
    for v in ker:
        for i in range(len(a)):
            assert sum(a[i][j] * v.get(j, 0) for j in range(len(a[0]))) == 0


@st.composite
def bit_matrix(draw):
    m = draw(st.integers(1, 6))
    n = draw(st.integers(1, 7))
    return m, [[i for i in range(m) if draw(st.booleans())] for _ in range(n)]


@settings(max_examples=80, deadline=None)
@given(bit_matrix(), st.lists(st.booleans(), min_size=6, max_size=6))
def test_gf2_against_brute_force(mat, rhs_bits):
    m, cols = mat
    rhs = [i for i in range(m) if rhs_bits[i]]
    images = {}
    for mask in product((0, 1), repeat=len(cols)):
        img = frozenset()
        for j, on in enumerate(mask):
            if on:
                img = img ^ frozenset(cols[j])
        images.setdefault(img, mask)
    assert gf2_rank(cols, m) == int(np.log2(len(images)))
    sol = gf2_solve(cols, m, rhs)
    if frozenset(rhs) in images:
        img = frozenset()
        for j in sol:
            img = img ^ frozenset(cols[j])
        assert img == frozenset(rhs)
    else:
        assert sol is None
    ker = gf2_kernel(cols, m)
    assert len(ker) == len(cols) - gf2_rank(cols, m)
    for v in ker:
        img = frozenset()
        for j in v:
            img = img ^ frozenset(cols[j])
        assert not img
