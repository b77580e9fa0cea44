"""Hurwitz quaternions, their unit group, and the orbit decomposition of D4 shells.

A quaternion x1 + x2 i + x3 j + x4 k is stored by its doubled coordinates so
that the half-integer elements of the Hurwitz order stay integral.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, List, Sequence, Tuple

import numpy as np

from .harmonic import MatrixGroup, OrthogonalMatrix4, make_group
from .lattice import GramProfile, Shell, enumerate_shell, four_square_points, gram_profile, jacobi_count, odd_divisor_sum


class NotHurwitz(ValueError):
    pass


def _hamilton(a: Sequence[int], b: Sequence[int]) -> Tuple[int, int, int, int]:
    a1, a2, a3, a4 = a
    b1, b2, b3, b4 = b
    return (
        a1 * b1 - a2 * b2 - a3 * b3 - a4 * b4,
        a1 * b2 + a2 * b1 + a3 * b4 - a4 * b3,
        a1 * b3 - a2 * b4 + a3 * b1 + a4 * b2,
        a1 * b4 + a2 * b3 - a3 * b2 + a4 * b1,
    )


@dataclass(frozen=True, order=True)
class HurwitzQuaternion:
    doubled: Tuple[int, int, int, int]

    def __post_init__(self):
        d = tuple(int(v) for v in self.doubled)
        if len(d) != 4:
            raise ValueError("need four coordinates")
        if len({v % 2 for v in d}) != 1:
            raise NotHurwitz(f"doubled coordinates {d} mix parities")
        object.__setattr__(self, "doubled", d)

    @classmethod
    def from_coords(cls, *coords) -> "HurwitzQuaternion":
        doubled = []
        for c in coords:
            c2 = 2 * Fraction(c)
            if c2.denominator != 1:
                raise NotHurwitz(f"coordinate {c} is not in Z/2")
            doubled.append(int(c2))
        return cls(tuple(doubled))

    @classmethod
    def one(cls) -> "HurwitzQuaternion":
        return cls((2, 0, 0, 0))

    @property
    def coords(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(v, 2) for v in self.doubled)

    @property
    def is_integral(self) -> bool:
        return self.doubled[0] % 2 == 0

    def __mul__(self, other: "HurwitzQuaternion") -> "HurwitzQuaternion":
        prod = _hamilton(self.doubled, other.doubled)
        # 2(ab) = (2a)(2b)/2; the order is closed so the halving is exact
        if any(v % 2 for v in prod):
            raise ArithmeticError("Hurwitz product left the order")
        return HurwitzQuaternion(tuple(v // 2 for v in prod))

    def __neg__(self) -> "HurwitzQuaternion":
        return HurwitzQuaternion(tuple(-v for v in self.doubled))

    def conj(self) -> "HurwitzQuaternion":
        a, b, c, d = self.doubled
        return HurwitzQuaternion((a, -b, -c, -d))

    def norm(self) -> int:
        # a sum of four odd squares is 4 mod 8, so the norm is always an integer
        return sum(v * v for v in self.doubled) // 4

    def __repr__(self) -> str:
        return "H(" + ", ".join(str(c) for c in self.coords) + ")"


def quat_mul(q: HurwitzQuaternion, r: HurwitzQuaternion) -> HurwitzQuaternion:
    return q * r


def quat_conj(q: HurwitzQuaternion) -> HurwitzQuaternion:
    return q.conj()


def quat_norm(q: HurwitzQuaternion) -> int:
    return q.norm()


def hurwitz_elements_of_norm(n: int) -> List[HurwitzQuaternion]:
    """All Hurwitz quaternions of norm n, sorted by doubled coordinates."""
    doubled = four_square_points(4 * n)
    parity = doubled % 2
    same = (parity == parity[:, :1]).all(axis=1)
    return [HurwitzQuaternion(tuple(row)) for row in doubled[same].tolist()]


@dataclass(frozen=True)
class UnitGroup:
    elements: Tuple[HurwitzQuaternion, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[HurwitzQuaternion]:
        return iter(self.elements)

    def __contains__(self, q) -> bool:
        return q in self.elements

    def verify(self) -> bool:
        elems = set(self.elements)
        if len(elems) != 24 or HurwitzQuaternion.one() not in elems or -HurwitzQuaternion.one() not in elems:
            return False
        if any(q.norm() != 1 for q in elems):
            return False
        return all(a * b in elems for a in elems for b in elems) and all(a.conj() in elems for a in elems)


@lru_cache(maxsize=None)
def hurwitz_units() -> UnitGroup:
    """The 24 units: +-1, +-i, +-j, +-k and (+-1 +-i +-j +-k)/2."""
    group = UnitGroup(tuple(hurwitz_elements_of_norm(1)))
    if not group.verify():
        raise AssertionError("Hurwitz units fail the group axioms")
    return group


def right_mult_matrix(u: HurwitzQuaternion) -> OrthogonalMatrix4:
    """Matrix M with M x = x u for column vectors x."""
    cols = []
    for j in range(4):
        e = [0, 0, 0, 0]
        e[j] = 2
        cols.append(HurwitzQuaternion(tuple(e)) * u)
    return OrthogonalMatrix4(tuple(tuple(cols[j].coords[i] for j in range(4)) for i in range(4)))


@lru_cache(maxsize=None)
def subgroup_N_matrices() -> MatrixGroup:
    """Right multiplication by the 24 Hurwitz units, a subgroup of Aut(D4 roots)."""
    group = make_group((right_mult_matrix(u) for u in hurwitz_units()), "N")
    if len(group) != 24 or not group.verify():
        raise AssertionError("right multiplications by units do not form a group of order 24")
    return group


# ---------------------------------------------------------------------------
# Orbits on shells
# ---------------------------------------------------------------------------


def _doubled_right_mult(units: UnitGroup) -> np.ndarray:
    """(24, 4, 4) integer array of 2 * right multiplication matrices."""
    out = np.empty((len(units), 4, 4), dtype=np.int64)
    for k, u in enumerate(units):
        M = right_mult_matrix(u)
        out[k] = [[int(2 * v) for v in row] for row in M.rows]
    return out


def _keys(points: np.ndarray, r: int) -> np.ndarray:
    base = 2 * r + 1
    s = points + r
    return ((s[..., 0] * base + s[..., 1]) * base + s[..., 2]) * base + s[..., 3]


class OrbitError(AssertionError):
    pass


@dataclass(frozen=True)
class OrbitDecomposition:
    m: int
    orbits: Tuple[np.ndarray, ...]

    @property
    def representatives(self) -> List[Tuple[int, int, int, int]]:
        return [tuple(o[0].tolist()) for o in self.orbits]

    def __len__(self) -> int:
        return len(self.orbits)


def orbit_decomposition(shell: Shell) -> OrbitDecomposition:
    """Partition the shell into right unit cosets x H^x.

    Each orbit is returned sorted, so its first row is its lexicographically
    smallest member; orbits are ordered by that representative.
    """
    m = shell.m
    pts = shell.coords
    r = int(np.abs(pts).max())
    if (2 * r + 1) ** 4 >= 2**62:
        raise OverflowError("shell too large for packed keys")
    mats = _doubled_right_mult(hurwitz_units())
    images2 = np.einsum("uij,nj->uni", mats, pts)
    if np.any(images2 % 2):
        raise OrbitError("right multiplication left the integer lattice")
    images = images2 // 2
    keys = _keys(pts, r)
    image_keys = _keys(images, r)
    idx = np.searchsorted(keys, image_keys)
    idx = np.minimum(idx, len(keys) - 1)
    if np.any(keys[idx] != image_keys):
        raise OrbitError("right multiplication left the shell")
    labels = idx.min(axis=0)
    reps, counts = np.unique(labels, return_counts=True)
    bad = counts != 24
    if np.any(bad):
        raise OrbitError(f"orbit of {tuple(pts[reps[bad][0]].tolist())} has {counts[bad][0]} points, not 24")
    distinct = np.sort(idx, axis=0)
    if np.any(distinct[1:] == distinct[:-1]):
        raise OrbitError("a point has a nontrivial stabiliser")
    order = np.argsort(labels, kind="stable")
    grouped = pts[order].reshape(len(reps), 24, 4)
    return OrbitDecomposition(m, tuple(grouped))


@lru_cache(maxsize=1)
def _root_profile() -> GramProfile:
    return gram_profile(enumerate_shell(1))


def certify_orbit_is_root_copy(orbit, m: int) -> bool:
    """The orbit is antipodal and has the normalised Gram profile of the root system."""
    pts = np.asarray(orbit, dtype=np.int64).reshape(-1, 4)
    norms = set((pts * pts).sum(axis=1).tolist())
    if norms != {2 * m}:
        raise OrbitError(f"orbit norms {sorted(norms)} differ from {2 * m}")
    as_set = set(map(tuple, pts.tolist()))
    if any(tuple(-v for v in p) not in as_set for p in as_set):
        raise OrbitError("orbit is not antipodal")
    profile = gram_profile(pts, 2 * m)
    target = _root_profile()
    if profile != target:
        extra = {a: c for a, c in profile.counts.items() if target.counts.get(a) != c}
        raise OrbitError(f"Gram profile mismatch, offending values {extra}")
    return True


def decompose_and_certify(m: int) -> OrbitDecomposition:
    dec = orbit_decomposition(enumerate_shell(m))
    if len(dec) != odd_divisor_sum(2 * m) or 24 * len(dec) != jacobi_count(m):
        raise OrbitError(f"m={m}: {len(dec)} orbits, expected {odd_divisor_sum(2 * m)}")
    for orbit in dec.orbits:
        certify_orbit_is_root_copy(orbit, m)
    return dec


def integral_hurwitz_shell(m: int) -> List[Tuple[int, int, int, int]]:
    """Integer-coordinate Hurwitz quaternions of norm 2m, as plain coordinates."""
    out = []
    for q in hurwitz_elements_of_norm(2 * m):
        if not q.is_integral:
            raise AssertionError(f"half-integral element {q} of even norm {2 * m}")
        out.append(tuple(v // 2 for v in q.doubled))
    return out


__all__ = [
    "HurwitzQuaternion",
    "UnitGroup",
    "quat_mul",
    "quat_conj",
    "quat_norm",
    "hurwitz_units",
    "hurwitz_elements_of_norm",
    "right_mult_matrix",
    "subgroup_N_matrices",
    "orbit_decomposition",
    "certify_orbit_is_root_copy",
    "decompose_and_certify",
    "integral_hurwitz_shell",
]
