from fractions import Fraction

import pytest

from d4design.exact import UniPoly
from d4design.gegenbauer import (
    CertificateError,
    certify_code_bound,
    certify_design_bound,
    fisher_bound,
    gegenbauer_expand,
    gegenbauer_poly,
    gegenbauer_table,
    harm_dim,
)


def test_harm_dim_in_four_variables_is_square():
    assert [harm_dim(4, ell) for ell in range(8)] == [(ell + 1) ** 2 for ell in range(8)]
    assert harm_dim(3, 2) == 5


@pytest.mark.parametrize("d", [3, 4, 5, 8])
def test_gegenbauer_value_at_one_is_harmonic_dimension(d):
    for ell in range(12):
        assert gegenbauer_poly(d, ell)(1) == harm_dim(d, ell)


def test_gegenbauer_low_degrees_in_dimension_four():
    # by hand: Q_2 = 3(x Q_1 - Q_0), Q_3 = (8/3)(x Q_2 - (3/4) Q_1)
    assert gegenbauer_poly(4, 2) == UniPoly([-3, 0, 12])
    assert gegenbauer_poly(4, 3) == UniPoly([0, -16, 0, 32])


def test_gegenbauer_parity():
    for ell in range(10):
        q = gegenbauer_poly(4, ell)
        assert all(q.coefficient(k) == 0 for k in range(ell % 2 + 1, ell + 1, 2))


def test_gegenbauer_rejects_small_dimension():
    with pytest.raises(ValueError):
        gegenbauer_poly(2, 3)


def test_table_matches_single_polys():
    table = gegenbauer_table(4, 10)
    assert len(table) == 11
    assert table[10] == gegenbauer_poly(4, 10)


def test_expansion_roundtrip():
    F = UniPoly([Fraction(1, 3), 2, 0, -5, 7])
    e = gegenbauer_expand(4, F)
    assert e.polynomial() == F


def test_fisher_bound():
    # (4, 4): C(5, 2) + C(4, 1)
    assert fisher_bound(4, 4) == 14
    assert fisher_bound(4, 5) == 20
    assert fisher_bound(3, 3) == 6


def test_design_certificate():
    c = certify_design_bound()
    assert c.passed
    assert c.expansion.support() == {0: Fraction(3, 1024), 2: Fraction(1, 768), 4: Fraction(1, 2560), 10: Fraction(1, 11264)}
    assert c.value_at_one == Fraction(9, 256)
    assert c.discriminant == -48
    assert c.bound == 12


@pytest.mark.parametrize("a1", [Fraction(0), Fraction(1, 2), Fraction(1), Fraction(7, 3), Fraction(100)])
def test_code_certificate_bound_independent_of_a1(a1):
    c = certify_code_bound(a1)
    assert c.passed
    assert c.bound == 12
    assert c.value_at_one == 3 * (4 * a1 + 1) / 16


def test_code_certificate_value_at_zero():
    assert certify_code_bound(0).value_at_one == Fraction(3, 16)
    assert certify_code_bound("1/2").f0 == Fraction(3, 64)


def test_code_certificate_rejects_negative_a1():
    with pytest.raises(ValueError):
        certify_code_bound(Fraction(-1, 5))


def test_certificate_failure_names_identity():
    c = certify_design_bound()
    with pytest.raises(CertificateError, match="made-up identity"):
        c._require("made-up identity", False)


def _integrate(p: UniPoly) -> Fraction:
    return sum((p.coefficient(k) * Fraction(2, k + 1) for k in range(0, p.degree() + 1, 2)), Fraction(0))


@pytest.mark.parametrize("d", [3, 5, 7])
def test_orthogonality_under_polynomial_weight(d):
    # weight (1 - x^2)^((d-3)/2) is a polynomial for odd d
    w = UniPoly([1, 0, -1]) ** ((d - 3) // 2)
    for i in range(7):
        for j in range(i):
            assert _integrate(gegenbauer_poly(d, i) * gegenbauer_poly(d, j) * w) == 0
