"""Gegenbauer polynomials, harmonic dimensions and the two LP certificates.

Polynomials are normalised so that ``Q_{d,l}(1) = dim Harm_l(R^d)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, List, Tuple

from .exact import UniPoly, as_rational


class CertificateError(AssertionError):
    """An identity inside an LP certificate failed to re-verify."""


def _binom(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


def harm_dim(d: int, ell: int) -> int:
    """Dimension of the homogeneous harmonic polynomials of degree ``ell`` in ``d`` variables."""
    if d < 1 or ell < 0:
        raise ValueError("need d >= 1 and ell >= 0")
    return _binom(d + ell - 1, ell) - _binom(d + ell - 3, ell - 2)


def fisher_bound(d: int, t: int) -> int:
    """Fisher-type lower bound on the size of a spherical t-design on S^{d-1}."""
    if d < 2 or t < 1:
        raise ValueError("need d >= 2 and t >= 1")
    e, odd = divmod(t, 2)
    if odd:
        return 2 * _binom(d + e - 1, e)
    return _binom(d + e - 1, e) + _binom(d + e - 2, e - 1)


@lru_cache(maxsize=None)
def _gegenbauer(d: int, ell: int) -> UniPoly:
    if ell == 0:
        return UniPoly([1])
    if ell == 1:
        return UniPoly([0, d])
    lam = lambda k: Fraction(k, d + 2 * k - 2)  # noqa: E731
    prev, prev2 = _gegenbauer(d, ell - 1), _gegenbauer(d, ell - 2)
    return (UniPoly.x() * prev - prev2 * (1 - lam(ell - 2))) * (1 / lam(ell))


def gegenbauer_poly(d: int, ell: int) -> UniPoly:
    """Q_{d,ell} from the three-term recurrence with Q_0 = 1, Q_1 = d x."""
    if d < 3:
        raise ValueError(f"Gegenbauer polynomials need d >= 3, got {d}")
    if ell < 0:
        raise ValueError("degree must be nonnegative")
    for k in range(2, ell):
        _gegenbauer(d, k)
    return _gegenbauer(d, ell)


@dataclass(frozen=True)
class GegenbauerTable:
    d: int
    polys: Tuple[UniPoly, ...]

    def __getitem__(self, ell: int) -> UniPoly:
        return self.polys[ell]

    def __len__(self) -> int:
        return len(self.polys)


def gegenbauer_table(d: int, upto: int) -> GegenbauerTable:
    return GegenbauerTable(d, tuple(gegenbauer_poly(d, ell) for ell in range(upto + 1)))


@dataclass(frozen=True)
class GegenbauerExpansion:
    """F = sum_l coeffs[l] * Q_{d,l}."""

    d: int
    coeffs: Tuple[Fraction, ...]

    def coefficient(self, ell: int) -> Fraction:
        return self.coeffs[ell] if 0 <= ell < len(self.coeffs) else Fraction(0)

    def support(self) -> Dict[int, Fraction]:
        return {ell: c for ell, c in enumerate(self.coeffs) if c}

    def polynomial(self) -> UniPoly:
        total = UniPoly()
        for ell, c in enumerate(self.coeffs):
            if c:
                total = total + gegenbauer_poly(self.d, ell) * c
        return total


def gegenbauer_expand(d: int, F: UniPoly) -> GegenbauerExpansion:
    """Expand F in the Q_{d,l} basis by peeling off leading terms."""
    coeffs: List[Fraction] = [Fraction(0)] * (F.degree() + 1)
    rest = F
    while not rest.is_zero():
        ell = rest.degree()
        q = gegenbauer_poly(d, ell)
        c = rest.leading() / q.leading()
        coeffs[ell] = c
        rest = rest - q * c
    expansion = GegenbauerExpansion(d, tuple(coeffs))
    if expansion.polynomial() != F:
        raise CertificateError("Gegenbauer expansion does not reproduce the input")
    return expansion


# ---------------------------------------------------------------------------
# LP certificates
# ---------------------------------------------------------------------------


@dataclass
class LPCertificate:
    name: str
    polynomial: UniPoly
    expansion: GegenbauerExpansion
    square_factors: List[Tuple[UniPoly, int]]
    residual_factor: UniPoly
    discriminant: Fraction
    value_at_one: Fraction
    f0: Fraction
    bound: Fraction
    roots: Dict[Fraction, int]
    checks: Dict[str, bool] = field(default_factory=dict)

    def _require(self, name: str, ok: bool) -> None:
        self.checks[name] = bool(ok)
        if not ok:
            raise CertificateError(f"{self.name}: identity failed: {name}")

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def _lin(root: Fraction) -> UniPoly:
    return UniPoly([-root, 1])


def _quadratic_disc(q: UniPoly) -> Fraction:
    c, b, a = (q.coefficient(k) for k in range(3))
    return b * b - 4 * a * c


def design_test_polynomial() -> Tuple[UniPoly, Dict[int, Fraction]]:
    """The test function of the {10,4,2}-design bound, in factored and Gegenbauer form."""
    half = Fraction(1, 2)
    x = UniPoly.x()
    quartic = UniPoly([13, 0, -28, 0, 16])
    factored = UniPoly([Fraction(1, 16)]) * x**2 * _lin(-half) ** 2 * _lin(half) ** 2 * quartic
    reference = {0: Fraction(3, 1024), 2: Fraction(1, 768), 4: Fraction(1, 2560), 10: Fraction(1, 11264)}
    return factored, reference


def certify_design_bound() -> LPCertificate:
    """Certificate that an S^3 {10,4,2}-design has at least 12 points."""
    half = Fraction(1, 2)
    factored, reference = design_test_polynomial()
    quartic = UniPoly([13, 0, -28, 0, 16])
    from_gegenbauer = UniPoly()
    for ell, c in reference.items():
        from_gegenbauer = from_gegenbauer + gegenbauer_poly(4, ell) * c
    expansion = gegenbauer_expand(4, factored)
    in_u = quartic.even_part_in_u()
    disc = _quadratic_disc(in_u)
    f1 = factored(1)
    f0 = expansion.coefficient(0)
    cert = LPCertificate(
        name="design-bound",
        polynomial=factored,
        expansion=expansion,
        square_factors=[(UniPoly.x(), 2), (_lin(-half), 2), (_lin(half), 2)],
        residual_factor=quartic,
        discriminant=disc,
        value_at_one=f1,
        f0=f0,
        bound=f1 / f0 if f0 else Fraction(0),
        roots=factored.rational_roots(),
    )
    cert._require("gegenbauer form equals factored form", from_gegenbauer == factored)
    cert._require("expansion matches reference coefficients", expansion.support() == reference)
    cert._require("expansion support within {0} and {10,4,2}", set(expansion.support()) <= {0, 2, 4, 10})
    # squares are >= 0; the quartic in u = x^2 has no real root and positive lead
    cert._require("quartic discriminant is -48", disc == -48)
    cert._require("quartic positive definite", disc < 0 and in_u.leading() > 0)
    cert._require("nonnegative on [-1,1)", all(m % 2 == 0 for _, m in cert.square_factors))
    cert._require("F(1) = 9/256", f1 == Fraction(9, 256))
    cert._require("f0 > 0", f0 > 0)
    cert._require("bound = 12", cert.bound == 12)
    cert._require(
        "real root set is {-1/2, 0, 1/2}",
        cert.roots == {-half: 2, Fraction(0): 2, half: 2} and sum(cert.roots.values()) + quartic.degree() == factored.degree(),
    )
    return cert


def code_test_polynomial(a1: Fraction) -> Tuple[UniPoly, Dict[int, Fraction]]:
    half = Fraction(1, 2)
    x = UniPoly.x()
    sextic = UniPoly([a1, 0, Fraction(5, 4), 0, -2, 0, 1])
    factored = x**2 * _lin(-half) * _lin(half) * sextic
    reference = {
        0: (4 * a1 + 1) / 64,
        2: (64 * a1 + 15) / 1536,
        4: (64 * a1 + 15) / 5120,
        10: Fraction(1, 11264),
    }
    return factored, reference


def certify_code_bound(a1=0) -> LPCertificate:
    """Certificate that a (4, N, 1/2) code with inner products in [-1/2, 1/2] has N <= 12."""
    a1 = as_rational(a1)
    if a1 < 0:
        raise ValueError(f"a_1 must be nonnegative, got {a1}")
    half = Fraction(1, 2)
    factored, reference = code_test_polynomial(a1)
    sextic = UniPoly([a1, 0, Fraction(5, 4), 0, -2, 0, 1])
    from_gegenbauer = UniPoly()
    for ell, c in reference.items():
        from_gegenbauer = from_gegenbauer + gegenbauer_poly(4, ell) * c
    expansion = gegenbauer_expand(4, factored)
    quartic = UniPoly([Fraction(5, 4), 0, -2, 0, 1])
    square_part = UniPoly([-1, 0, 1]) ** 2
    gap = quartic - square_part
    f1 = factored(1)
    f0 = expansion.coefficient(0)
    cert = LPCertificate(
        name=f"code-bound(a1={a1})",
        polynomial=factored,
        expansion=expansion,
        square_factors=[(UniPoly.x(), 2), (UniPoly([-1, 0, 1]), 2)],
        residual_factor=sextic,
        discriminant=_quadratic_disc(quartic.even_part_in_u()),
        value_at_one=f1,
        f0=f0,
        bound=f1 / f0 if f0 else Fraction(0),
        roots=factored.rational_roots(),
    )
    cert._require("gegenbauer form equals factored form", from_gegenbauer == factored)
    cert._require("expansion matches reference coefficients", expansion.support() == {k: v for k, v in reference.items() if v})
    cert._require("f_l >= 0 for l >= 1", all(c >= 0 for c in expansion.coeffs[1:]))
    cert._require("x^4 - 2x^2 + 5/4 - (x^2-1)^2 = 1/4", gap == UniPoly([Fraction(1, 4)]))
    # sextic = x^2 * ((x^2-1)^2 + 1/4) + a1 >= a1 >= 0, and x^2 (x^2 - 1/4) <= 0 on [-1/2, 1/2]
    cert._require("sextic factor decomposes as x^2*((x^2-1)^2+1/4) + a1",
                  sextic == UniPoly.x() ** 2 * (square_part + Fraction(1, 4)) + a1)
    cert._require("x^2 (x^2 - 1/4) has roots only at 0, +-1/2",
                  (UniPoly.x() ** 2 * _lin(-half) * _lin(half)).rational_roots() == {-half: 1, Fraction(0): 2, half: 1})
    cert._require("F(1) = 3(4 a1 + 1)/16", f1 == 3 * (4 * a1 + 1) / 16)
    cert._require("f0 > 0", f0 > 0)
    cert._require("bound = 12", cert.bound == 12)
    return cert
