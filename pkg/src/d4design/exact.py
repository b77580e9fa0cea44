"""Exact scalars, integer 4-vectors and polynomial algebra.

Everything here is exact: rationals are :class:`fractions.Fraction` (always
in lowest terms), integers are Python ints, and the numpy helpers at the end
only use fixed-width integers after checking that no overflow can happen.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from itertools import combinations_with_replacement
from math import gcd, lcm
from typing import Dict, Iterable, Iterator, NamedTuple, Sequence, Tuple, Union

import numpy as np

BigRational = Fraction
Exponent = Tuple[int, int, int, int]
Scalar = Union[int, Fraction]

_INT64_SAFE = 2**62


def as_rational(value: Union[str, int, Fraction]) -> Fraction:
    """Parse ``"7/3"``, ``"2"``, ints or Fractions into a Fraction.

    Floats are refused: a float literal has already lost exactness.
    """
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass a string such as '7/3'")
    return Fraction(value)


class IntVector4(NamedTuple):
    """Integer point of R^4. Tuple ordering gives lexicographic comparison."""

    x1: int
    x2: int
    x3: int
    x4: int

    def norm(self) -> int:
        return self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3 + self.x4 * self.x4

    def inner(self, other: Sequence[int]) -> int:
        return vec_inner(self, other)

    def __neg__(self) -> "IntVector4":
        return IntVector4(-self.x1, -self.x2, -self.x3, -self.x4)


def vec_inner(x: Sequence[int], y: Sequence[int]) -> int:
    return x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3]


# ---------------------------------------------------------------------------
# Multivariate polynomials in four variables
# ---------------------------------------------------------------------------


def _grlex_key(exp: Exponent):
    return (sum(exp), exp)


class MultiPoly4:
    """Immutable polynomial in x1..x4 with rational coefficients.

    Terms are kept in descending graded-lexicographic order and zero
    coefficients are never stored.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Union[Dict[Exponent, Scalar], Iterable[Tuple[Exponent, Scalar]], None] = None):
        acc: Dict[Exponent, Fraction] = {}
        items = terms.items() if isinstance(terms, dict) else (terms or ())
        for exp, c in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != 4 or min(exp) < 0:
                raise ValueError(f"bad exponent {exp!r}")
            acc[exp] = acc.get(exp, 0) + Fraction(c)
        self._terms = tuple(
            sorted(((e, c) for e, c in acc.items() if c != 0), key=lambda t: _grlex_key(t[0]), reverse=True)
        )
        self._hash = None

    @classmethod
    def _from_clean(cls, acc: Dict[Exponent, Fraction]) -> "MultiPoly4":
        p = cls.__new__(cls)
        p._terms = tuple(
            sorted(((e, c) for e, c in acc.items() if c != 0), key=lambda t: _grlex_key(t[0]), reverse=True)
        )
        p._hash = None
        return p

    @classmethod
    def constant(cls, c: Scalar) -> "MultiPoly4":
        return cls({(0, 0, 0, 0): c})

    @classmethod
    def variable(cls, i: int) -> "MultiPoly4":
        """The coordinate function x_{i+1} (``i`` is 0-based)."""
        exp = [0, 0, 0, 0]
        exp[i] = 1
        return cls({tuple(exp): 1})

    @classmethod
    def monomial(cls, exp: Sequence[int], c: Scalar = 1) -> "MultiPoly4":
        return cls({tuple(exp): c})

    @property
    def terms(self) -> Tuple[Tuple[Exponent, Fraction], ...]:
        return self._terms

    def as_dict(self) -> Dict[Exponent, Fraction]:
        return dict(self._terms)

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self.as_dict().get(tuple(exp), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e, _ in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e, _ in self._terms}) <= 1

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MultiPoly4.constant(other)
        if not isinstance(other, MultiPoly4):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    def __repr__(self) -> str:
        if not self._terms:
            return "MultiPoly4(0)"
        parts = []
        for exp, c in self._terms:
            mono = "*".join(f"x{i + 1}^{e}" if e > 1 else f"x{i + 1}" for i, e in enumerate(exp) if e)
            parts.append(f"{c}*{mono}" if mono else str(c))
        return "MultiPoly4(" + " + ".join(parts) + ")"

    def _coerce(self, other) -> "MultiPoly4":
        if isinstance(other, MultiPoly4):
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly4.constant(other)
        return NotImplemented

    def __add__(self, other) -> "MultiPoly4":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self._terms)
        for e, c in other._terms:
            acc[e] = acc.get(e, 0) + c
        return MultiPoly4._from_clean(acc)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly4":
        return MultiPoly4._from_clean({e: -c for e, c in self._terms})

    def __sub__(self, other) -> "MultiPoly4":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "MultiPoly4":
        return (-self) + other

    def __mul__(self, other) -> "MultiPoly4":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return MultiPoly4()
            return MultiPoly4._from_clean({e: c * other for e, c in self._terms})
        if not isinstance(other, MultiPoly4):
            return NotImplemented
        acc: Dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3])
                acc[e] = acc.get(e, 0) + c1 * c2
        return MultiPoly4._from_clean(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly4":
        if n < 0:
            raise ValueError("negative power")
        result = MultiPoly4.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, *point) -> Fraction:
        if len(point) == 1 and not isinstance(point[0], (int, Fraction)):
            point = tuple(point[0])
        return poly_eval(self, point)

    def partial(self, i: int) -> "MultiPoly4":
        acc: Dict[Exponent, Fraction] = {}
        for e, c in self._terms:
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                acc[tuple(ne)] = acc.get(tuple(ne), 0) + c * e[i]
        return MultiPoly4._from_clean(acc)

    def primitive(self) -> "MultiPoly4":
        """Scale to integer coefficients with gcd 1 and positive leading term."""
        if not self._terms:
            return self
        den = reduce(lcm, (c.denominator for _, c in self._terms), 1)
        nums = [int(c * den) for _, c in self._terms]
        g = reduce(gcd, nums)
        if nums[0] < 0:
            g = -g
        return MultiPoly4._from_clean({e: Fraction(n, g) for (e, _), n in zip(self._terms, nums)})


# ---------------------------------------------------------------------------
# Univariate polynomials
# ---------------------------------------------------------------------------


class UniPoly:
    """Dense univariate polynomial, coefficients lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: Tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def x(cls) -> "UniPoly":
        return cls([0, 1])

    @classmethod
    def constant(cls, c: Scalar) -> "UniPoly":
        return cls([c])

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coefficient(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = UniPoly([other])
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "UniPoly(0)"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c:
                parts.append(f"{c}" + ("" if k == 0 else "*x" if k == 1 else f"*x^{k}"))
        return "UniPoly(" + " + ".join(parts) + ")"

    def _coerce(self, other):
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return UniPoly([other])
        return NotImplemented

    def __add__(self, other) -> "UniPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self.coefficient(k) + other.coefficient(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> "UniPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "UniPoly":
        return (-self) + other

    def __mul__(self, other) -> "UniPoly":
        if isinstance(other, (int, Fraction)):
            return UniPoly(c * other for c in self.coeffs)
        if not isinstance(other, UniPoly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "UniPoly":
        result = UniPoly([1])
        for _ in range(n):
            result = result * self
        return result

    def __call__(self, x: Scalar) -> Fraction:
        return poly_eval(self, x)

    def divmod(self, divisor: "UniPoly") -> Tuple["UniPoly", "UniPoly"]:
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dd = divisor.degree()
        lead = divisor.leading()
        quot = [Fraction(0)] * max(len(rem) - dd, 0)
        for k in range(len(rem) - 1, dd - 1, -1):
            q = rem[k] / lead
            quot[k - dd] = q
            if q:
                for i, c in enumerate(divisor.coeffs):
                    rem[k - dd + i] -= q * c
        return UniPoly(quot), UniPoly(rem[:dd])

    def derivative(self) -> "UniPoly":
        return UniPoly(k * c for k, c in enumerate(self.coeffs) if k)

    def substitute_square(self) -> "UniPoly":
        """p(x) -> p(x^2)."""
        out = [Fraction(0)] * (2 * len(self.coeffs))
        for k, c in enumerate(self.coeffs):
            out[2 * k] = c
        return UniPoly(out)

    def even_part_in_u(self) -> "UniPoly":
        """For an even polynomial p(x) = q(x^2), return q."""
        if any(c for c in self.coeffs[1::2]):
            raise ValueError("polynomial is not even")
        return UniPoly(self.coeffs[0::2])

    def rational_roots(self) -> Dict[Fraction, int]:
        """All rational roots with multiplicities (rational root theorem)."""
        if self.is_zero():
            raise ValueError("zero polynomial has every number as a root")
        roots: Dict[Fraction, int] = {}
        p = self
        while p.coefficient(0) == 0 and p.degree() > 0:
            p = UniPoly(p.coeffs[1:])
            roots[Fraction(0)] = roots.get(Fraction(0), 0) + 1
        changed = True
        while changed and p.degree() > 0:
            changed = False
            den = reduce(lcm, (c.denominator for c in p.coeffs), 1)
            ints = [int(c * den) for c in p.coeffs]
            for cand in _root_candidates(ints[0], ints[-1]):
                if p(cand) == 0:
                    p, r = p.divmod(UniPoly([-cand, 1]))
                    assert r.is_zero()
                    roots[cand] = roots.get(cand, 0) + 1
                    changed = True
                    break
        return dict(sorted(roots.items()))


def _divisors(n: int):
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _root_candidates(const: int, lead: int) -> Iterator[Fraction]:
    seen = set()
    for p in _divisors(const):
        for q in _divisors(lead):
            for s in (1, -1):
                r = Fraction(s * p, q)
                if r not in seen:
                    seen.add(r)
                    yield r


# ---------------------------------------------------------------------------
# Ring operations by name
# ---------------------------------------------------------------------------


def poly_add(p, q):
    return p + q


def poly_mul(p, q):
    return p * q


def poly_eval(p, args) -> Fraction:
    """Evaluate a UniPoly at a scalar or a MultiPoly4 at a 4-point, exactly."""
    if isinstance(p, UniPoly):
        x = Fraction(args)
        acc = Fraction(0)
        for c in reversed(p.coeffs):
            acc = acc * x + c
        return acc
    if isinstance(p, MultiPoly4):
        pt = [Fraction(a) for a in args]
        if len(pt) != 4:
            raise ValueError("MultiPoly4 needs a 4-point")
        total = Fraction(0)
        for (a, b, c, d), coeff in p.terms:
            total += coeff * pt[0] ** a * pt[1] ** b * pt[2] ** c * pt[3] ** d
        return total
    raise TypeError(f"cannot evaluate {type(p).__name__}")


def monomials(degree: int) -> list:
    """Exponent 4-tuples of total degree ``degree`` in descending lex order."""
    out = []
    for combo in combinations_with_replacement(range(4), degree):
        e = [0, 0, 0, 0]
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out, reverse=True)


# ---------------------------------------------------------------------------
# Exact linear algebra over Q
# ---------------------------------------------------------------------------


def rref(matrix: Sequence[Sequence[Scalar]]):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    rows = [[Fraction(v) for v in row] for row in matrix]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(matrix: Sequence[Sequence[Scalar]]) -> int:
    """Exact rank over Q (fraction-free Bareiss elimination on integers)."""
    rows = [list(r) for r in matrix]
    if not rows:
        return 0
    den = reduce(lcm, (Fraction(v).denominator for r in rows for v in r), 1)
    rows = [[int(Fraction(v) * den) for v in r] for r in rows]
    nrows, ncols = len(rows), len(rows[0])
    rk, prev = 0, 1
    for c in range(ncols):
        piv = next((i for i in range(rk, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        p = rows[rk][c]
        for i in range(rk + 1, nrows):
            f = rows[i][c]
            rows[i] = [(p * a - f * b) // prev for a, b in zip(rows[i], rows[rk])]
        prev = p
        rk += 1
        if rk == nrows:
            break
    return rk


def nullspace(matrix: Sequence[Sequence[Scalar]], ncols: int = None):
    """Basis of {v : M v = 0}, one vector per free column (free entry = 1)."""
    if ncols is None:
        ncols = len(matrix[0])
    rows, pivots = rref(matrix) if matrix else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(rows, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve_square(matrix: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar]):
    """Unique solution of a nonsingular square system; ValueError otherwise."""
    n = len(matrix)
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    rows, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("system is singular")
    return [rows[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# Overflow-checked monomial tables
# ---------------------------------------------------------------------------


def int_dtype_for(bound: int):
    """int64 if every intermediate stays below 2**62 in absolute value, else object."""
    return np.int64 if bound < _INT64_SAFE else object


def monomial_sums(points: np.ndarray, exponents: Sequence[Exponent]) -> Dict[Exponent, int]:
    """Exact sum over ``points`` (n x 4 integer array) of each monomial."""
    pts = np.asarray(points)
    if pts.size == 0:
        return {e: 0 for e in exponents}
    if not exponents:
        return {}
    deg = max(sum(e) for e in exponents)
    r = int(np.abs(pts).max()) if pts.size else 0
    dtype = int_dtype_for(max(r, 1) ** deg * len(pts))
    if dtype is object:
        cols = np.array([[int(v) for v in row] for row in pts], dtype=object)
    else:
        cols = pts.astype(np.int64)
    maxe = max(max(e) for e in exponents)
    powers = [[np.ones(len(pts), dtype=dtype)] for _ in range(4)]
    for i in range(4):
        for _ in range(maxe):
            powers[i].append(powers[i][-1] * cols[:, i])
    out = {}
    for e in exponents:
        v = powers[0][e[0]] * powers[1][e[1]] * powers[2][e[2]] * powers[3][e[3]]
        out[e] = int(v.sum())
    return out


def monomial_values(points: np.ndarray, exponents: Sequence[Exponent]) -> np.ndarray:
    """Matrix of exact monomial values, shape (len(points), len(exponents))."""
    pts = np.asarray(points)
    deg = max((sum(e) for e in exponents), default=0)
    r = int(np.abs(pts).max()) if pts.size else 0
    dtype = int_dtype_for(max(r, 1) ** deg)
    if dtype is object:
        cols = np.array([[int(v) for v in row] for row in pts], dtype=object)
    else:
        cols = pts.astype(np.int64)
    maxe = max((max(e) for e in exponents), default=0)
    powers = [[np.ones(len(pts), dtype=dtype)] for _ in range(4)]
    for i in range(4):
        for _ in range(maxe):
            powers[i].append(powers[i][-1] * cols[:, i])
    out = np.empty((len(pts), len(exponents)), dtype=dtype)
    for k, e in enumerate(exponents):
        out[:, k] = powers[0][e[0]] * powers[1][e[1]] * powers[2][e[2]] * powers[3][e[3]]
    return out
