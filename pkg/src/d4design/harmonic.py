"""Harmonic polynomials in four variables and finite orthogonal group actions."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import product
from math import lcm
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from . import config
from .exact import MultiPoly4, UniPoly, monomial_values, monomials, rank
from .gegenbauer import harm_dim

Matrix = Tuple[Tuple[Fraction, ...], ...]


def laplacian(P: MultiPoly4) -> MultiPoly4:
    acc: Dict[tuple, Fraction] = {}
    for e, c in P.terms:
        for i in range(4):
            if e[i] >= 2:
                ne = list(e)
                ne[i] -= 2
                ne = tuple(ne)
                acc[ne] = acc.get(ne, 0) + c * e[i] * (e[i] - 1)
    return MultiPoly4(acc)


def _laplacian_3(P: Dict[tuple, Fraction]) -> Dict[tuple, Fraction]:
    # Laplacian in x2, x3, x4 only
    acc: Dict[tuple, Fraction] = {}
    for e, c in P.items():
        for i in (1, 2, 3):
            if e[i] >= 2:
                ne = list(e)
                ne[i] -= 2
                ne = tuple(ne)
                acc[ne] = acc.get(ne, 0) + c * e[i] * (e[i] - 1)
    return {e: c for e, c in acc.items() if c}


def _harmonic_extension(free: tuple) -> MultiPoly4:
    """Unique harmonic polynomial whose part of x1-degree <= 1 is the monomial ``free``."""
    e1 = free[0]
    g = {free: Fraction(1)}
    total = dict(g)
    k = 0
    while g:
        lap = _laplacian_3(g)
        denom = (2 * k + e1 + 2) * (2 * k + e1 + 1)
        g = {(e[0] + 2,) + e[1:]: -c / denom for e, c in lap.items()}
        total.update(g)
        k += 1
    return MultiPoly4(total).primitive()


@dataclass(frozen=True)
class HarmonicBasis:
    degree: int
    polys: Tuple[MultiPoly4, ...]

    def __len__(self) -> int:
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def __getitem__(self, i: int) -> MultiPoly4:
        return self.polys[i]


@lru_cache(maxsize=None)
def harm_basis(ell: int) -> HarmonicBasis:
    """Basis of Harm_ell(R^4) with primitive integer coefficients.

    The kernel of the Laplacian on degree-ell forms is parametrised by the
    monomials of x1-degree 0 or 1 (the free columns of the Laplacian's
    coefficient matrix when monomials with higher x1-degree are pivots); each
    basis member is the harmonic completion of one such monomial.
    """
    config.check_cap("degree", ell, config.degree_cap(), "D4DESIGN_DEGREE_CAP")
    if ell < 0:
        raise ValueError("degree must be nonnegative")
    free = [e for e in monomials(ell) if e[0] <= 1]
    polys = tuple(_harmonic_extension(e) for e in free)
    assert len(polys) == harm_dim(4, ell)
    return HarmonicBasis(ell, polys)


def laplacian_matrix(ell: int) -> Tuple[List[List[int]], list, list]:
    """Coefficient matrix of the Laplacian from degree ell to degree ell-2 forms."""
    cols = monomials(ell)
    rows = monomials(ell - 2) if ell >= 2 else []
    index = {e: i for i, e in enumerate(rows)}
    mat = [[0] * len(cols) for _ in rows]
    for j, e in enumerate(cols):
        for i in range(4):
            if e[i] >= 2:
                ne = list(e)
                ne[i] -= 2
                mat[index[tuple(ne)]][j] += e[i] * (e[i] - 1)
    return mat, rows, cols


def p_power_sum(k: int, variables: Sequence[int]) -> MultiPoly4:
    return sum((MultiPoly4.variable(i) ** k for i in variables), MultiPoly4())


def p6() -> MultiPoly4:
    """The W(F4)-invariant harmonic sextic."""
    x1, x2, x3, x4 = (MultiPoly4.variable(i) for i in range(4))
    p = p_power_sum
    five = (
        x1**4 * p(2, (1, 2, 3))
        + x1**2 * p(4, (1, 2, 3))
        + (x2**4 + x3**2 * x4**2) * p(2, (2, 3))
        + x2**2 * p(4, (2, 3))
    )
    thirty = x1**2 * (x2**2 * x3**2 + x2**2 * x4**2 + x3**2 * x4**2) + x2**2 * x3**2 * x4**2
    return p(6, (0, 1, 2, 3)) - 5 * five + 30 * thirty


# ---------------------------------------------------------------------------
# Orthogonal matrices and groups
# ---------------------------------------------------------------------------


def _mat(rows: Iterable[Iterable]) -> Matrix:
    return tuple(tuple(Fraction(v) for v in row) for row in rows)


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(4)) for j in range(4)) for i in range(4))


def _transpose(a: Matrix) -> Matrix:
    return tuple(tuple(a[j][i] for j in range(4)) for i in range(4))


IDENTITY: Matrix = _mat([[int(i == j) for j in range(4)] for i in range(4)])


class NotOrthogonal(ValueError):
    pass


@dataclass(frozen=True, order=True)
class OrthogonalMatrix4:
    """4x4 rational matrix with M^T M = I, acting on column vectors."""

    rows: Matrix

    def __post_init__(self):
        rows = _mat(self.rows)
        if len(rows) != 4 or any(len(r) != 4 for r in rows):
            raise ValueError("need a 4x4 matrix")
        object.__setattr__(self, "rows", rows)
        if _matmul(_transpose(rows), rows) != IDENTITY:
            raise NotOrthogonal(f"matrix is not orthogonal: {rows}")

    @classmethod
    def identity(cls) -> "OrthogonalMatrix4":
        return cls(IDENTITY)

    def __matmul__(self, other: "OrthogonalMatrix4") -> "OrthogonalMatrix4":
        return OrthogonalMatrix4(_matmul(self.rows, other.rows))

    def __neg__(self) -> "OrthogonalMatrix4":
        return OrthogonalMatrix4(tuple(tuple(-v for v in r) for r in self.rows))

    def transpose(self) -> "OrthogonalMatrix4":
        return OrthogonalMatrix4(_transpose(self.rows))

    inverse = transpose

    def apply(self, v: Sequence) -> Tuple[Fraction, ...]:
        return tuple(sum(self.rows[i][j] * v[j] for j in range(4)) for i in range(4))

    def denominator(self) -> int:
        return reduce(lcm, (v.denominator for r in self.rows for v in r), 1)

    def det_one_minus_t(self) -> UniPoly:
        """det(I - t M) as a polynomial in t."""
        m = self.rows
        e = [Fraction(1)]
        for k in (1, 2, 3, 4):
            total = Fraction(0)
            for idx in _subsets4[k]:
                total += _det([[m[i][j] for j in idx] for i in idx])
            e.append(total)
        return UniPoly([(-1) ** k * e[k] for k in range(5)])


_subsets4 = {k: [tuple(i for i in range(4) if mask >> i & 1) for mask in range(16) if bin(mask).count("1") == k] for k in range(5)}


def _det(a: List[List[Fraction]]) -> Fraction:
    n = len(a)
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    return sum((-1) ** j * a[0][j] * _det([row[:j] + row[j + 1:] for row in a[1:]]) for j in range(n) if a[0][j])


@dataclass(frozen=True)
class MatrixGroup:
    """Finite group of orthogonal matrices in a deterministic (sorted) order."""

    elements: Tuple[OrthogonalMatrix4, ...]
    name: str = ""

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, m) -> bool:
        return m in set(self.elements)

    def verify(self) -> bool:
        """Closure under products and inverses, identity present."""
        elems = set(self.elements)
        if OrthogonalMatrix4.identity() not in elems:
            return False
        for a in self.elements:
            if a.inverse() not in elems:
                return False
            for b in self.elements:
                if a @ b not in elems:
                    return False
        return True


def make_group(matrices: Iterable, name: str = "") -> MatrixGroup:
    elems = sorted({m if isinstance(m, OrthogonalMatrix4) else OrthogonalMatrix4(m) for m in matrices})
    return MatrixGroup(tuple(elems), name)


def trivial_group() -> MatrixGroup:
    return make_group([OrthogonalMatrix4.identity()], "trivial")


def sign_group() -> MatrixGroup:
    return make_group([OrthogonalMatrix4.identity(), -OrthogonalMatrix4.identity()], "+-I")


def _dict_mul(a: Dict[tuple, int], b: Dict[tuple, int]) -> Dict[tuple, int]:
    out: Dict[tuple, int] = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3])
            out[e] = out.get(e, 0) + c1 * c2
    return out


def pullback(sigma: OrthogonalMatrix4, P: MultiPoly4) -> MultiPoly4:
    """(sigma* P)(x) = P(sigma x)."""
    # work with the integer matrix den * sigma; a degree-k term picks up den**-k
    den = sigma.denominator()
    forms = [
        {tuple(int(j == k) for k in range(4)): int(sigma.rows[i][j] * den) for j in range(4) if sigma.rows[i][j]}
        for i in range(4)
    ]
    powers = [[{(0, 0, 0, 0): 1}] for _ in range(4)]
    top = max(P.degree(), 0)
    common = reduce(lcm, (c.denominator for _, c in P.terms), 1)
    acc: Dict[tuple, int] = {}
    for e, c in P.terms:
        term = {(0, 0, 0, 0): 1}
        for i in range(4):
            while len(powers[i]) <= e[i]:
                powers[i].append(_dict_mul(powers[i][-1], forms[i]))
            if e[i]:
                term = _dict_mul(term, powers[i][e[i]])
        scale = int(c * common) * den ** (top - sum(e))
        for k, v in term.items():
            acc[k] = acc.get(k, 0) + scale * v
    total = common * den**top
    return MultiPoly4({k: Fraction(v, total) for k, v in acc.items() if v})


D4_SIMPLE_ROOTS = ((1, -1, 0, 0), (0, 1, -1, 0), (0, 0, 1, -1), (0, 0, 1, 1))


def root_points() -> List[Tuple[int, int, int, int]]:
    """The 24 permutations of (+-1, +-1, 0, 0), sorted."""
    pts = set()
    for i in range(4):
        for j in range(i + 1, 4):
            for si, sj in product((1, -1), repeat=2):
                v = [0, 0, 0, 0]
                v[i], v[j] = si, sj
                pts.add(tuple(v))
    return sorted(pts)


def _inverse4(a: List[List[Fraction]]) -> List[List[Fraction]]:
    n = 4
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        piv = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [v * inv for v in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


@lru_cache(maxsize=None)
def aut_group_of_root_system() -> MatrixGroup:
    """All orthogonal maps preserving the 24 D4 roots (the Weyl group W(F4))."""
    roots = root_points()
    root_set = set(roots)
    basis = D4_SIMPLE_ROOTS
    gram = [[sum(a * b for a, b in zip(u, v)) for v in basis] for u in basis]
    # sigma @ R = Y with R the basis as columns, so sigma = Y @ R^{-1}
    r_inv = _inverse4([[basis[j][i] for j in range(4)] for i in range(4)])
    found = []

    def extend(images: List[tuple]):
        k = len(images)
        if k == 4:
            y = [[images[j][i] for j in range(4)] for i in range(4)]
            sigma = [[sum(y[i][k2] * r_inv[k2][j] for k2 in range(4)) for j in range(4)] for i in range(4)]
            ok = True
            for r in roots:
                img = tuple(sum(sigma[i][j] * r[j] for j in range(4)) for i in range(4))
                if img not in root_set:
                    ok = False
                    break
            if ok:
                found.append(OrthogonalMatrix4(sigma))
            return
        for cand in roots:
            if all(sum(a * b for a, b in zip(cand, images[j])) == gram[k][j] for j in range(k)):
                extend(images + [cand])

    extend([])
    group = make_group(found, "W(F4)")
    if len(group) != 1152:
        raise AssertionError(f"automorphism group of the D4 roots has order {len(group)}, expected 1152")
    return group


# ---------------------------------------------------------------------------
# Invariant dimensions
# ---------------------------------------------------------------------------


def _series_inverse(den: UniPoly, order: int) -> List[Fraction]:
    c0 = den.coefficient(0)
    inv = [Fraction(0)] * (order + 1)
    inv[0] = 1 / c0
    for n in range(1, order + 1):
        s = sum(den.coefficient(k) * inv[n - k] for k in range(1, min(n, den.degree()) + 1))
        inv[n] = -s / c0
    return inv


def molien_harmonic_dims(G: MatrixGroup, L: int) -> List[int]:
    """dim Harm_l(R^4)^G for l = 0..L from the averaged harmonic Molien series."""
    classes = Counter(g.det_one_minus_t() for g in G)
    total = [Fraction(0)] * (L + 1)
    for den, count in classes.items():
        inv = _series_inverse(den, L)
        # multiply by (1 - t^2)
        for n in range(L + 1):
            total[n] += count * (inv[n] - (inv[n - 2] if n >= 2 else 0))
    dims = []
    for n, v in enumerate(total):
        v = v / len(G)
        if v.denominator != 1 or v < 0:
            raise ArithmeticError(f"Molien coefficient {n} is {v}, not a nonnegative integer")
        dims.append(int(v))
    return dims


def _sample_points(count: int, seed: int) -> List[Tuple[int, int, int, int]]:
    rng = random.Random(seed)
    return [tuple(rng.randint(-4, 4) for _ in range(4)) for _ in range(count)]


def invariant_dim_by_projection(G: MatrixGroup, ell: int) -> int:
    """Rank of P -> sum_g g*P on Harm_ell, measured through point evaluations.

    Polynomials are evaluated at sample points s; the averaged polynomial's
    value at s is sum_g P(g s). The evaluation map is checked to be injective
    on Harm_ell so that ranks transfer.
    """
    basis = harm_basis(ell)
    exps = monomials(ell)
    index = {e: k for k, e in enumerate(exps)}
    coeff = np.zeros((len(basis), len(exps)), dtype=object)
    for i, P in enumerate(basis):
        for e, c in P.terms:
            coeff[i, index[e]] = int(c)
    n = len(basis)
    seed = 0
    while True:
        samples = np.array(_sample_points(n + 8, seed), dtype=np.int64)
        direct = coeff.dot(monomial_values(samples, exps).astype(object).T)
        if rank(direct.tolist()) == n:
            break
        seed += 1
    den = reduce(lcm, (g.denominator() for g in G), 1)
    mats = np.array([[[int(v * den) for v in row] for row in g.rows] for g in G], dtype=np.int64)
    # images[g, s] = den * g @ s
    images = np.einsum("gij,sj->gsi", mats, samples).reshape(-1, 4)
    vals = monomial_values(images, exps).astype(object).reshape(len(G), len(samples), len(exps)).sum(axis=0)
    averaged = coeff.dot(vals.T)
    return rank(averaged.tolist())
