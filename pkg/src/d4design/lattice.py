"""Shells of D4, design tests, distance distributions and lattice level.

Design sums are taken over unnormalised integer points. A harmonic
polynomial of degree l is homogeneous, so its sum over the normalised shell
is (2m)^(-l/2) times the integer sum and both vanish together.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from math import isqrt, lcm
from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import config
from .exact import IntVector4, MultiPoly4, as_rational, monomial_sums, rank, solve_square, vec_inner
from .gegenbauer import gegenbauer_poly
from .harmonic import harm_basis, p6, root_points

Point = Sequence[int]

_PERMS = np.array(list(itertools.permutations(range(4))), dtype=np.intp)
_SIGNS = np.array(list(itertools.product((1, -1), repeat=4)), dtype=np.int64)


class DesignError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def _sorted_representatives(n: int) -> List[Tuple[int, int, int, int]]:
    """Solutions of a^2+b^2+c^2+d^2 = n with a >= b >= c >= d >= 0."""
    out = []
    for a in range(isqrt(n), -1, -1):
        r1 = n - a * a
        if 4 * a * a < n:
            break
        for b in range(min(a, isqrt(r1)), -1, -1):
            r2 = r1 - b * b
            if 3 * b * b < r2:
                break
            for c in range(min(b, isqrt(r2)), -1, -1):
                r3 = r2 - c * c
                if 2 * c * c < r3:
                    break
                d = isqrt(r3)
                if d * d == r3 and d <= c:
                    out.append((a, b, c, d))
    return out


def four_square_points(n: int) -> np.ndarray:
    """All integer x in Z^4 with |x|^2 = n, lexicographically sorted (k x 4 int64)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    reps = _sorted_representatives(n)
    if not reps:
        return np.zeros((0, 4), dtype=np.int64)
    R = np.array(reps, dtype=np.int64)
    images = (R[:, _PERMS][:, :, None, :] * _SIGNS[None, None, :, :]).reshape(-1, 4)
    r = isqrt(n)
    base = 2 * r + 1
    if base**4 >= 2**62:
        pts = sorted({tuple(int(v) for v in row) for row in images})
        return np.array(pts, dtype=np.int64)
    shifted = images + r
    key = ((shifted[:, 0] * base + shifted[:, 1]) * base + shifted[:, 2]) * base + shifted[:, 3]
    key = np.unique(key)
    out = np.empty((len(key), 4), dtype=np.int64)
    for i in range(3, -1, -1):
        out[:, i] = key % base - r
        key //= base
    return out


def odd_divisor_sum(n: int) -> int:
    while n % 2 == 0:
        n //= 2
    total, d = 0, 1
    while d * d <= n:
        if n % d == 0:
            total += d
            if d * d != n:
                total += n // d
        d += 1
    return total


def jacobi_count(m: int) -> int:
    """|(D4)_{2m}| by the four-square theorem: 24 times the odd-divisor sum of 2m."""
    if m < 1:
        raise ValueError("m must be positive")
    return 24 * odd_divisor_sum(2 * m)


@dataclass(frozen=True, eq=False)
class Shell:
    """All x in D4 with |x|^2 = 2m, lexicographically sorted."""

    m: int
    coords: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.coords)

    @property
    def norm(self) -> int:
        return 2 * self.m

    @property
    def points(self) -> List[IntVector4]:
        return [IntVector4(*row) for row in self.coords.tolist()]

    def __iter__(self):
        return iter(self.points)

    def validate(self) -> None:
        c = self.coords
        if np.any((c * c).sum(axis=1) != self.norm):
            raise DesignError("point with wrong norm in shell")
        if np.any(c.sum(axis=1) % 2):
            raise DesignError("point with odd coordinate sum in shell")
        as_set = set(map(tuple, c.tolist()))
        if any(tuple(-v for v in p) not in as_set for p in as_set):
            raise DesignError("shell is not antipodal")
        if c.tolist() != sorted(c.tolist()) or len(as_set) != len(c):
            raise DesignError("shell is not strictly sorted")

    def to_text(self) -> str:
        return "".join(f"{a} {b} {c} {d}\n" for a, b, c, d in self.coords.tolist())

    def export(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def from_text(cls, text: str) -> "Shell":
        rows = [tuple(int(v) for v in line.split()) for line in text.splitlines() if line.strip()]
        if not rows or any(len(r) != 4 for r in rows):
            raise ValueError("expected lines of four integers")
        norms = {sum(v * v for v in r) for r in rows}
        if len(norms) != 1 or next(iter(norms)) % 2:
            raise ValueError("points must share an even squared norm")
        shell = cls(next(iter(norms)) // 2, np.array(rows, dtype=np.int64))
        shell.validate()
        return shell


def enumerate_shell(m: int) -> Shell:
    if m < 1:
        raise ValueError("m must be positive")
    config.check_cap("m", m, config.shell_cap(), "D4DESIGN_SHELL_CAP")
    # every integer solution of |x|^2 = 2m has even coordinate sum (x^2 = x mod 2)
    return Shell(m, four_square_points(2 * m))


# ---------------------------------------------------------------------------
# Design sums
# ---------------------------------------------------------------------------


def _as_array(points) -> np.ndarray:
    if isinstance(points, Shell):
        return points.coords
    arr = np.array([tuple(int(v) for v in p) for p in points], dtype=np.int64)
    return arr.reshape(-1, 4)


def poly_sums(polys: Sequence[MultiPoly4], points) -> List[Fraction]:
    """Exact sum of each polynomial over the points."""
    arr = _as_array(points)
    exps = sorted({e for P in polys for e, _ in P.terms})
    sums = monomial_sums(arr, exps)
    out = []
    for P in polys:
        total = sum((c * sums[e] for e, c in P.terms), Fraction(0))
        out.append(total)
    return out


def point_deficit(points, ell: int) -> List[int]:
    """(sum_x P_i(x))_i over the integer basis of Harm_ell."""
    return [int(v) for v in poly_sums(harm_basis(ell).polys, points)]


def design_deficit(shell: Shell, ell: int) -> List[int]:
    """All zero iff the normalised shell is a spherical {ell}-design."""
    return point_deficit(shell, ell)


def p6_sum(points) -> int:
    """sum_x P6(x); equals -192 tau2(m) on the 2m-shell."""
    return int(poly_sums([p6()], points)[0])


def harmonic_strength(shell: Shell, L: int) -> FrozenSet[int]:
    """Even degrees 2..L at which the shell is a design.

    Odd degrees always hold for an antipodal set and are not listed.
    """
    config.check_cap("degree", L, config.degree_cap(), "D4DESIGN_DEGREE_CAP")
    return frozenset(ell for ell in range(2, L + 1, 2) if not any(design_deficit(shell, ell)))


# ---------------------------------------------------------------------------
# Gram profiles and the Gegenbauer design test
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GramProfile:
    """Multiset of normalised inner products over ordered pairs, self-pairs included."""

    counts: Dict[Fraction, int]
    size: int

    def values(self) -> FrozenSet[Fraction]:
        """Inner products between distinct points."""
        vals = set(self.counts)
        if self.counts.get(Fraction(1), 0) == self.size:
            vals.discard(Fraction(1))
        return frozenset(vals)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GramProfile):
            return NotImplemented
        return self.size == other.size and {k: v for k, v in self.counts.items() if v} == {
            k: v for k, v in other.counts.items() if v
        }


def gram_matrix(points, norm: Optional[int] = None) -> List[List[Fraction]]:
    """Normalised Gram matrix of integer points of a common norm, in any dimension."""
    pts = [tuple(int(v) for v in p) for p in points]

    def dot(p, q):
        return sum(a * b for a, b in zip(p, q))

    norms = {dot(p, p) for p in pts}
    if len(norms) > 1:
        raise DesignError(f"points have mixed norms {sorted(norms)}")
    if norm is None:
        norm = norms.pop() if norms else 1
    return [[Fraction(dot(p, q), norm) for q in pts] for p in pts]


def gram_profile(points, norm: Optional[int] = None) -> GramProfile:
    """Normalised inner products of all ordered pairs of a common-norm point set."""
    if isinstance(points, Shell):
        arr = points.coords
        norm = points.norm if norm is None else norm
        pts = arr
    else:
        pts = _as_array(points)
    if len(pts) == 0:
        return GramProfile({}, 0)
    norms = set(((pts * pts).sum(axis=1)).tolist())
    if len(norms) > 1:
        raise DesignError(f"points have mixed norms {sorted(norms)}")
    if norm is None:
        norm = norms.pop()
    raw = Counter((pts @ pts.T).ravel().tolist())
    counts: Dict[Fraction, int] = {}
    for v, c in raw.items():
        key = Fraction(v, norm)
        counts[key] = counts.get(key, 0) + c
    return GramProfile(dict(sorted(counts.items())), len(pts))


def gegenbauer_design_test(profile: GramProfile, d: int, ell: int) -> Fraction:
    """sum over ordered pairs of Q_{d,ell}(<x,y>); zero iff the set is an {ell}-design."""
    q = gegenbauer_poly(d, ell)
    return sum((c * q(alpha) for alpha, c in profile.counts.items()), Fraction(0))


# ---------------------------------------------------------------------------
# Distance distributions
# ---------------------------------------------------------------------------


def moments(d: int, k: int) -> Fraction:
    """Spherical moment a_k: (k-1)!!/(d(d+2)...(d+k-2)) for even k, 0 for odd k."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k % 2:
        return Fraction(0)
    num, den = 1, 1
    for i in range(k // 2):
        num *= 2 * i + 1
        den *= d + 2 * i
    return Fraction(num, den)


@dataclass(frozen=True)
class DistanceDistribution:
    base: str
    counts: Dict[Fraction, int]

    def total(self) -> int:
        return sum(self.counts.values())


class NotCombinatorial(ValueError):
    """The moment system has a negative or fractional solution."""


class Underdetermined(ValueError):
    pass


def solve_distance_distribution(d: int, N: int, t: int, values, base_in_set: bool = False, base: str = "y") -> DistanceDistribution:
    """Solve sum_alpha A_alpha alpha^j = a_j N for the counts A_alpha."""
    vals = sorted({as_rational(v) for v in values})
    if len(vals) != len(list(values)):
        raise ValueError("values must be distinct")
    fixed: Dict[Fraction, int] = {}
    unknowns = vals
    if base_in_set:
        if Fraction(1) not in vals:
            raise ValueError("base point in the set requires 1 among the values")
        fixed[Fraction(1)] = 1
        unknowns = [v for v in vals if v != 1]
    n = len(unknowns)
    if n > t + 1:
        raise Underdetermined(f"{n} unknowns but a {t}-design only fixes {t + 1} moments")
    matrix = [[a**j for a in unknowns] for j in range(n)]
    rhs = [moments(d, j) * N - sum(c * a**j for a, c in fixed.items()) for j in range(n)]
    sol = solve_square(matrix, rhs)
    counts = dict(fixed)
    for a, s in zip(unknowns, sol):
        if s.denominator != 1 or s < 0:
            raise NotCombinatorial(f"A_{a} = {s}")
        counts[a] = int(s)
    return DistanceDistribution(base, dict(sorted(counts.items())))


def distance_distribution(points, base: Point, norm: Optional[int] = None) -> DistanceDistribution:
    """Directly counted distribution of normalised inner products with ``base``."""
    pts = _as_array(points)
    b = np.array([int(v) for v in base], dtype=np.int64)
    if norm is None:
        norm = int(b @ b)
    counts = Counter((pts @ b).tolist())
    return DistanceDistribution(str(tuple(int(v) for v in base)), {Fraction(k, norm): c for k, c in sorted(counts.items())})


# ---------------------------------------------------------------------------
# Derived codes, at the level of inner products
# ---------------------------------------------------------------------------


def derived_inner(beta: Fraction, alpha: Fraction, gamma: Optional[Fraction] = None) -> Fraction:
    """Inner product of two derived-code points.

    ``beta`` is the original inner product of x, x' and ``alpha``/``gamma``
    their inner products with the base point. Only alpha == gamma stays
    rational in general, which is the case needed here.
    """
    if gamma is not None and gamma != alpha:
        raise ValueError("mixed layers have irrational derived inner products in general")
    return (beta - alpha * alpha) / (1 - alpha * alpha)


def derived_code_gram(points, base: Point, alpha, norm: Optional[int] = None) -> List[List[Fraction]]:
    alpha = as_rational(alpha)
    if abs(alpha) == 1:
        raise ValueError("alpha = +-1 has no derived code")
    pts = [tuple(int(v) for v in p) for p in _as_array(points).tolist()]
    if norm is None:
        norm = vec_inner(base, base)
    layer = [p for p in pts if Fraction(vec_inner(p, base), norm) == alpha]
    return [[derived_inner(Fraction(vec_inner(p, q), norm), alpha) for q in layer] for p in layer]


def derived_code_profile(points, base: Point, alpha, norm: Optional[int] = None) -> GramProfile:
    """Gram profile of the derived code X_alpha on S^2, from rational inner products only."""
    gram = derived_code_gram(points, base, alpha, norm)
    counts = Counter(v for row in gram for v in row)
    return GramProfile(dict(sorted(counts.items())), len(gram))


def profile_from_gram(gram: Sequence[Sequence[Fraction]]) -> GramProfile:
    counts = Counter(v for row in gram for v in row)
    return GramProfile(dict(sorted(counts.items())), len(gram))


# ---------------------------------------------------------------------------
# Gram equivalence and the reconstruction of the root system
# ---------------------------------------------------------------------------


def _row_signature(gram, i):
    return tuple(sorted(gram[i]))


def gram_equivalent(g1: Sequence[Sequence[Fraction]], g2: Sequence[Sequence[Fraction]]) -> Optional[List[int]]:
    """A relabelling pi with g1[i][j] == g2[pi[i]][pi[j]], or None."""
    n = len(g1)
    if n != len(g2):
        return None
    sig1 = [_row_signature(g1, i) for i in range(n)]
    sig2 = [_row_signature(g2, i) for i in range(n)]
    if sorted(sig1) != sorted(sig2):
        return None
    perm: List[int] = []
    used = [False] * n

    def search(i: int) -> bool:
        if i == n:
            return True
        for k in range(n):
            if used[k] or sig2[k] != sig1[i]:
                continue
            if all(g1[i][j] == g2[k][perm[j]] for j in range(i)) and g1[i][i] == g2[k][k]:
                used[k] = True
                perm.append(k)
                if search(i + 1):
                    return True
                perm.pop()
                used[k] = False
        return False

    return list(perm) if search(0) else None


def _rational_sqrt(q: Fraction) -> Optional[Fraction]:
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def octahedron() -> List[Tuple[int, int, int]]:
    return [v for i in range(3) for s in (1, -1) for v in [tuple(s if k == i else 0 for k in range(3))]]


def cube() -> List[Tuple[int, int, int]]:
    """Directions of the cube vertices (+-1, +-1, +-1); unit length after dividing by sqrt 3."""
    return list(itertools.product((1, -1), repeat=3))


def lift(direction: Sequence[int], alpha: Fraction) -> Tuple[Fraction, ...]:
    """q_alpha of the unit vector along ``direction``: (sqrt(1-alpha^2) u, alpha).

    The combined scale sqrt((1-alpha^2)/|direction|^2) must be rational.
    """
    n2 = sum(v * v for v in direction)
    scale = _rational_sqrt((1 - alpha * alpha) / n2)
    if scale is None:
        raise ValueError(f"lift of {direction} at {alpha} is irrational")
    return tuple(scale * v for v in direction) + (alpha,)


class ReconstructionError(AssertionError):
    pass


def assembled_root_set() -> List[Tuple[Fraction, ...]]:
    """{+-e} with q_0(C6) and q_{+-1/2}(C8), all with rational coordinates."""
    half = Fraction(1, 2)
    e = (Fraction(0),) * 3 + (Fraction(1),)
    pts = [e, tuple(-v for v in e)]
    pts += [lift(c, Fraction(0)) for c in octahedron()]
    pts += [lift(c, half) for c in cube()]
    pts += [lift(c, -half) for c in cube()]
    return pts


def reconstruction_check() -> bool:
    """The assembled 24-point set is Gram-equivalent to the normalised root system."""
    assembled = assembled_root_set()
    if len(assembled) != 24:
        raise ReconstructionError(f"assembled set has {len(assembled)} points")
    g1 = [[sum(a * b for a, b in zip(p, q)) for q in assembled] for p in assembled]
    g2 = gram_matrix(root_points())
    for i in range(24):
        if g1[i][i] != 1:
            raise ReconstructionError(f"assembled point {i} is not a unit vector")
    if sorted(map(tuple, map(sorted, g1))) != sorted(map(tuple, map(sorted, g2))):
        for i in range(24):
            if sorted(g1[i]) not in [sorted(r) for r in g2]:
                raise ReconstructionError(f"row {i} of the assembled Gram matrix has no match: {sorted(g1[i])}")
    perm = gram_equivalent(g1, g2)
    if perm is None:
        raise ReconstructionError("no relabelling matches the Gram matrices")
    for i in range(24):
        for j in range(24):
            if g1[i][j] != g2[perm[i]][perm[j]]:
                raise ReconstructionError(f"Gram mismatch at ({i}, {j})")
    return True


# ---------------------------------------------------------------------------
# Half sets
# ---------------------------------------------------------------------------


def half_set(points) -> List[IntVector4]:
    """Points whose first nonzero coordinate is positive."""
    pts = [IntVector4(*p) for p in _as_array(points).tolist()]
    as_set = set(pts)
    if any(-p not in as_set for p in pts):
        raise DesignError("half set needs an antipodal set")
    return [p for p in pts if next(v for v in p if v) > 0]


# ---------------------------------------------------------------------------
# Lattices given by a Gram matrix
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LatticeDescription:
    """Lattice Z^4 with the quadratic form m -> m^T G m."""

    gram: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        g = tuple(tuple(as_rational(v) for v in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        if len(g) != 4 or any(len(r) != 4 for r in g):
            raise ValueError("need a 4x4 Gram matrix")
        if any(g[i][j] != g[j][i] for i in range(4) for j in range(4)):
            raise ValueError("Gram matrix is not symmetric")
        if rank(g) != 4:
            raise ValueError("Gram matrix is singular")

    @classmethod
    def from_basis(cls, basis: Sequence[Sequence]) -> "LatticeDescription":
        b = [[as_rational(v) for v in row] for row in basis]
        return cls(tuple(tuple(sum(x * y for x, y in zip(b[i], b[j])) for j in range(4)) for i in range(4)))

    def form(self, m: Sequence[int]) -> Fraction:
        g = self.gram
        return sum(m[i] * m[j] * g[i][j] for i in range(4) for j in range(4))

    def bilinear(self, m: Sequence[int], n: Sequence[int]) -> Fraction:
        g = self.gram
        return sum(m[i] * n[j] * g[i][j] for i in range(4) for j in range(4))


D4_SIMPLE_BASIS = ((1, -1, 0, 0), (0, 1, -1, 0), (0, 0, 1, -1), (0, 0, 1, 1))


def d4_lattice() -> LatticeDescription:
    return LatticeDescription.from_basis(D4_SIMPLE_BASIS)


def scaled_identity_lattice(k: int = 2) -> LatticeDescription:
    return LatticeDescription(tuple(tuple(k if i == j else 0 for j in range(4)) for i in range(4)))


@dataclass
class LatticeAnalysis:
    integral: bool
    even: bool
    level: Optional[int]
    dual_gram: List[List[Fraction]]
    shell_sizes: Dict[int, int]
    roots_match_d4: Optional[bool] = None


def _inverse(mat) -> List[List[Fraction]]:
    n = len(mat)
    cols = [solve_square(mat, [Fraction(int(i == j)) for i in range(n)]) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def lattice_vectors(L: LatticeDescription, norm) -> List[Tuple[int, ...]]:
    """Coefficient vectors m with m^T G m equal to ``norm``, sorted."""
    norm = as_rational(norm)
    dual = _inverse(L.gram)
    # m_i^2 <= norm * (G^-1)_ii for any vector of that norm
    bounds = []
    for i in range(4):
        lim = norm * dual[i][i]
        bounds.append(isqrt(lim.numerator // lim.denominator) + 1)
    den = reduce(lcm, [v.denominator for row in L.gram for v in row] + [norm.denominator], 1)
    G = np.array([[int(v * den) for v in row] for row in L.gram], dtype=object)
    grid = np.array(list(itertools.product(*(range(-b, b + 1) for b in bounds))), dtype=object).reshape(-1, 4)
    forms = np.einsum("ni,ij,nj->n", grid, G, grid)
    hits = grid[forms == int(norm * den)]
    return [tuple(int(v) for v in row) for row in hits]


def lattice_level(L: LatticeDescription) -> Optional[int]:
    """Least N with N <y,y> in 2Z for every dual vector y; None unless L is even."""
    g = L.gram
    if not all(v.denominator == 1 for row in g for v in row) or any(g[i][i] % 2 for i in range(4)):
        return None
    dual = _inverse(g)
    # N D has even diagonal and integral off-diagonal entries, D = G^-1
    dens = [(dual[i][i] / 2).denominator for i in range(4)]
    dens += [dual[i][j].denominator for i in range(4) for j in range(4) if i != j]
    return reduce(lcm, dens, 1)


def analyze_lattice(L: LatticeDescription, max_norm: int = 6) -> LatticeAnalysis:
    g = L.gram
    integral = all(v.denominator == 1 for row in g for v in row)
    even = integral and all(g[i][i] % 2 == 0 for i in range(4))
    sizes = {n: len(lattice_vectors(L, n)) for n in range(1, max_norm + 1)}
    roots_match = None
    if even:
        roots = lattice_vectors(L, 2)
        roots_match = False
        if len(roots) == 24:
            gram = [[L.bilinear(p, q) / 2 for q in roots] for p in roots]
            roots_match = gram_equivalent(gram, gram_matrix(root_points())) is not None
    return LatticeAnalysis(integral, even, lattice_level(L), _inverse(g), sizes, roots_match)
