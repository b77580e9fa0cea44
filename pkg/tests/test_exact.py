from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from d4design.exact import (
    IntVector4,
    MultiPoly4,
    UniPoly,
    as_rational,
    monomial_sums,
    monomials,
    nullspace,
    rank,
    rref,
    solve_square,
)

small = st.integers(min_value=-6, max_value=6)
exps = st.tuples(*[st.integers(0, 3)] * 4)
polys = st.dictionaries(exps, small, max_size=5).map(MultiPoly4)
points = st.tuples(small, small, small, small)
unipolys = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7), max_size=5).map(UniPoly)


def test_as_rational_refuses_floats():
    assert as_rational("7/3") == Fraction(7, 3)
    with pytest.raises(TypeError):
        as_rational(0.5)


def test_intvector_basics():
    v = IntVector4(1, -1, 0, 2)
    assert v.norm() == 6
    assert v.inner((1, 1, 1, 1)) == 2
    assert -v == (-1, 1, 0, -2)


@given(polys, polys, polys)
@settings(max_examples=60, deadline=None)
def test_polynomial_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == MultiPoly4()


@given(polys, polys, points)
@settings(max_examples=60, deadline=None)
def test_evaluation_is_a_homomorphism(p, q, x):
    assert (p * q)(*x) == p(*x) * q(*x)
    assert (p + q)(*x) == p(*x) + q(*x)


def test_terms_are_canonical():
    p = MultiPoly4({(1, 0, 0, 0): 2, (0, 1, 0, 0): 0, (0, 0, 0, 2): Fraction(1, 2)})
    assert len(p) == 2
    assert p.coefficient((0, 1, 0, 0)) == 0
    assert p.degree() == 2 and not p.is_homogeneous()
    assert p == MultiPoly4({(0, 0, 0, 2): Fraction(1, 2), (1, 0, 0, 0): 2})


def test_primitive_normalisation():
    p = MultiPoly4({(2, 0, 0, 0): Fraction(-3, 4), (0, 2, 0, 0): Fraction(3, 2)})
    assert p.primitive() == MultiPoly4({(2, 0, 0, 0): 1, (0, 2, 0, 0): -2})


def test_partial_derivative():
    x1, x2 = MultiPoly4.variable(0), MultiPoly4.variable(1)
    assert (x1**3 * x2).partial(0) == 3 * x1**2 * x2


def test_monomials_count_and_order():
    ms = monomials(3)
    assert len(ms) == 20
    assert ms == sorted(ms, reverse=True)
    assert all(sum(e) == 3 for e in ms)


@given(unipolys, unipolys)
@settings(max_examples=60, deadline=None)
def test_unipoly_division(a, b):
    if b.is_zero():
        return
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.is_zero() or r.degree() < b.degree()


def test_rational_roots_with_multiplicity():
    half = Fraction(1, 2)
    p = UniPoly([0, 1]) ** 2 * UniPoly([-half, 1]) ** 3 * UniPoly([1, 0, 1])
    assert p.rational_roots() == {Fraction(0): 2, half: 3}


def test_even_part_in_u():
    p = UniPoly([13, 0, -28, 0, 16])
    assert p.even_part_in_u() == UniPoly([13, -28, 16])
    assert p.even_part_in_u().substitute_square() == p


def test_linear_algebra():
    m = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    assert rank(m) == 2
    rows, piv = rref(m)
    assert piv == [0, 1]
    for v in nullspace(m):
        assert all(sum(Fraction(a) * b for a, b in zip(row, v)) == 0 for row in m)
    assert solve_square([[2, 1], [1, 3]], [3, 5]) == [Fraction(4, 5), Fraction(7, 5)]
    with pytest.raises(ValueError):
        solve_square([[1, 2], [2, 4]], [1, 2])


def test_monomial_sums_match_python_and_survive_overflow():
    rng = np.random.default_rng(1)
    pts = rng.integers(-40, 41, size=(50, 4))
    exps_ = [(3, 1, 0, 2), (0, 0, 0, 0), (12, 0, 0, 0)]
    direct = {e: sum(int(a) ** e[0] * int(b) ** e[1] * int(c) ** e[2] * int(d) ** e[3] for a, b, c, d in pts) for e in exps_}
    assert monomial_sums(pts, exps_) == direct
    # 40^12 * 50 is far above int64: the guard must switch to exact objects
    assert direct[(12, 0, 0, 0)] > 2**63
