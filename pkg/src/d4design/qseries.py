"""Truncated integer q-series: eta quotients, E2, theta series and tau2 scans.

The coefficients of eta(z)^8 eta(2z)^8 = sum tau2(m) q^m are computed by
multiplying a dense series by the sparse pentagonal series of
prod (1 - q^n), once per eta power.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import config
from .exact import MultiPoly4
from .lattice import enumerate_shell, jacobi_count, poly_sums

TAU2_PAIRS = ((1, 8), (2, 8))

# CRT primes below 2^31 so that residues times +-1 plus a residue stay in int64
_CRT_PRIMES = (2147483647, 2147483629, 2147483587, 2147483579, 2147483563, 2147483549, 2147483543, 2147483497)


class SeriesMismatch(AssertionError):
    def __init__(self, what: str, index: int, left, right):
        super().__init__(f"{what}: coefficient {index} differs ({left} != {right})")
        self.index = index


@dataclass(frozen=True)
class IntegerSeries:
    """c_0 + c_1 q + ... + c_M q^M with the remaining terms unknown."""

    coeffs: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if not self.coeffs:
            raise ValueError("a series needs at least the constant term")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n: int) -> int:
        if isinstance(n, slice):
            return self.coeffs[n]
        if not 0 <= n <= self.order:
            raise IndexError(f"coefficient {n} is beyond the truncation order {self.order}")
        return self.coeffs[n]

    def _align(self, other: "IntegerSeries"):
        M = min(self.order, other.order)
        return self.coeffs[: M + 1], other.coeffs[: M + 1]

    def __add__(self, other: "IntegerSeries") -> "IntegerSeries":
        a, b = self._align(other)
        return IntegerSeries(tuple(x + y for x, y in zip(a, b)))

    def __sub__(self, other: "IntegerSeries") -> "IntegerSeries":
        a, b = self._align(other)
        return IntegerSeries(tuple(x - y for x, y in zip(a, b)))

    def __neg__(self) -> "IntegerSeries":
        return IntegerSeries(tuple(-c for c in self.coeffs))

    def scale(self, k: int) -> "IntegerSeries":
        return IntegerSeries(tuple(k * c for c in self.coeffs))

    def __mul__(self, other) -> "IntegerSeries":
        if isinstance(other, int):
            return self.scale(other)
        a, b = self._align(other)
        M = len(a) - 1
        out = np.zeros(M + 1, dtype=object)
        bb = np.array(b, dtype=object)
        for i, c in enumerate(a):
            if c:
                out[i:] += c * bb[: M + 1 - i]
        return IntegerSeries(tuple(out.tolist()))

    __rmul__ = scale

    def truncate(self, M: int) -> "IntegerSeries":
        if M > self.order:
            raise IndexError(f"cannot extend a series of order {self.order} to {M}")
        return IntegerSeries(self.coeffs[: M + 1])

    def substitute_power(self, a: int) -> "IntegerSeries":
        """f(q^a), truncated to the same order."""
        out = [0] * (self.order + 1)
        for n in range(0, self.order // a + 1):
            out[a * n] = self.coeffs[n]
        return IntegerSeries(tuple(out))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def first_difference(self, other: "IntegerSeries") -> Optional[int]:
        a, b = self._align(other)
        for n, (x, y) in enumerate(zip(a, b)):
            if x != y:
                return n
        return None


# ---------------------------------------------------------------------------
# Eta quotients
# ---------------------------------------------------------------------------


def pentagonal_terms(M: int, step: int = 1) -> List[Tuple[int, int]]:
    """Nonzero terms (exponent, sign) of prod_{n>=1} (1 - q^(step n)) up to q^M."""
    terms = [(0, 1)]
    k = 1
    while True:
        sign = -1 if k % 2 else 1
        e1 = step * k * (3 * k - 1) // 2
        if e1 > M:
            break
        terms.append((e1, sign))
        e2 = step * k * (3 * k + 1) // 2
        if e2 <= M:
            terms.append((e2, sign))
        k += 1
    return sorted(terms)


def _multiply_sparse(f: np.ndarray, terms, modulus: Optional[int]) -> np.ndarray:
    g = f.copy()
    n = len(f)
    for e, s in terms:
        if e == 0:
            continue
        if s > 0:
            g[e:] += f[: n - e]
        else:
            g[e:] -= f[: n - e]
    if modulus is not None:
        g %= modulus
    return g


def _divide_sparse(f: np.ndarray, terms, modulus: Optional[int]) -> np.ndarray:
    # solve g * S = f with S = 1 + (higher terms), coefficient by coefficient
    g = f.copy()
    rest = [(e, s) for e, s in terms if e]
    for n in range(len(g)):
        acc = g[n]
        for e, s in rest:
            if e > n:
                break
            acc -= s * g[n - e]
        g[n] = acc % modulus if modulus is not None else acc
    return g


def _prefactor(pairs: Sequence[Tuple[int, int]]) -> int:
    shift = Fraction(sum(a * e for a, e in pairs), 24)
    if shift.denominator != 1:
        raise ValueError(f"q-prefactor q^{shift} is not integral")
    if shift < 0:
        raise ValueError(f"q-prefactor q^{shift} is negative")
    return int(shift)


def _eta_body(pairs, M: int, modulus: Optional[int]) -> np.ndarray:
    """prod_(a,e) prod_n (1 - q^(a n))^e to order M, exact or mod ``modulus``."""
    f = np.zeros(M + 1, dtype=object if modulus is None else np.int64)
    f[0] = 1
    for a, e in pairs:
        terms = pentagonal_terms(M, a)
        for _ in range(abs(e)):
            f = _multiply_sparse(f, terms, modulus) if e > 0 else _divide_sparse(f, terms, modulus)
    return f


def _crt(residues: List[np.ndarray], primes: Sequence[int], bound: int) -> List[int]:
    P = prod(primes)
    if P <= 2 * bound:
        raise ValueError("not enough CRT primes for the coefficient bound")
    total = np.zeros(len(residues[0]), dtype=object)
    for r, p in zip(residues, primes):
        Mi = P // p
        total = total + r.astype(object) * (Mi * pow(Mi, -1, p))
    out = []
    for v in (total % P).tolist():
        out.append(v - P if v > P // 2 else v)
    return out


def eta_quotient_coefficients(pairs: Sequence[Tuple[int, int]], M: int, method: str = "exact", coefficient_bound: Optional[int] = None) -> IntegerSeries:
    """Coefficients c_0..c_M of prod eta(a z)^e over the (a, e) pairs.

    ``method="modular"`` works modulo several primes and reconstructs by
    CRT; it needs a proven ``coefficient_bound`` on |c_n| for n <= M.
    """
    if M < 0:
        raise ValueError("order must be nonnegative")
    config.check_cap("series order", M, config.series_cap(), "D4DESIGN_SERIES_CAP")
    if any(a < 1 for a, _ in pairs):
        raise ValueError("eta arguments must be positive multiples of z")
    shift = _prefactor(pairs)
    body_order = M - shift
    if body_order < 0:
        return IntegerSeries((0,) * (M + 1))
    if method == "exact":
        body = _eta_body(pairs, body_order, None).tolist()
    elif method == "modular":
        if coefficient_bound is None:
            raise ValueError("modular mode needs a coefficient bound")
        primes = []
        for p in _CRT_PRIMES:
            primes.append(p)
            if prod(primes) > 2 * coefficient_bound:
                break
        else:
            raise ValueError("coefficient bound too large for the available CRT primes")
        body = _crt([_eta_body(pairs, body_order, p) for p in primes], primes, coefficient_bound)
    else:
        raise ValueError(f"unknown method {method!r}")
    return IntegerSeries((0,) * shift + tuple(body))


def eta_product_naive(pairs: Sequence[Tuple[int, int]], M: int) -> IntegerSeries:
    """Direct truncated expansion of prod (1 - q^(a n))^e, for cross-checks at small M."""
    shift = _prefactor(pairs)
    N = M - shift
    if N < 0:
        return IntegerSeries((0,) * (M + 1))
    f = [0] * (N + 1)
    f[0] = 1
    for a, e in pairs:
        if e < 0:
            raise ValueError("the naive oracle only handles positive powers")
        for _ in range(e):
            for n in range(1, N // a + 1):
                step = a * n
                # multiply by (1 - q^step) in place, high to low
                for i in range(N, step - 1, -1):
                    f[i] -= f[i - step]
    return IntegerSeries((0,) * shift + tuple(f))


def deligne_coefficient_bound(M: int) -> int:
    """Bound on |tau2(n)| for n <= M: d(n) n^(7/2) <= 2 sqrt(n) n^(7/2) = 2 n^4."""
    return 2 * max(M, 1) ** 4


@dataclass(frozen=True)
class Tau2Table:
    """tau2(1), ..., tau2(M)."""

    values: Tuple[int, ...]

    @property
    def bound(self) -> int:
        return len(self.values)

    def __getitem__(self, m: int) -> int:
        if not 1 <= m <= len(self.values):
            raise IndexError(f"tau2({m}) is outside the table 1..{len(self.values)}")
        return self.values[m - 1]

    def series(self) -> IntegerSeries:
        return IntegerSeries((0,) + self.values)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "tau2"])
        for m, v in enumerate(self.values, start=1):
            w.writerow([m, v])
        return buf.getvalue()

    def export(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.to_csv())

    @classmethod
    def from_csv(cls, text: str) -> "Tau2Table":
        rows = list(csv.reader(io.StringIO(text)))
        if rows[0] != ["m", "tau2"]:
            raise ValueError("expected header m,tau2")
        vals = []
        for k, (m, v) in enumerate(rows[1:], start=1):
            if int(m) != k:
                raise ValueError(f"row {k} has index {m}")
            vals.append(int(v))
        return cls(tuple(vals))


def tau2_table(M: int, method: str = "exact") -> Tau2Table:
    if M < 1:
        raise ValueError("need M >= 1")
    series = eta_quotient_coefficients(TAU2_PAIRS, M, method, deligne_coefficient_bound(M) if method == "modular" else None)
    if series[1] != 1:
        raise AssertionError("tau2(1) != 1")
    return Tau2Table(series.coeffs[1:])


def hecke_crosscheck(table: Tau2Table) -> Dict[str, bool]:
    """Multiplicativity and the prime-square recursion at small indices."""
    return {
        "tau2(6) = tau2(2) tau2(3)": table[6] == table[2] * table[3],
        "tau2(9) = tau2(3)^2 - 3^7": table[9] == table[3] ** 2 - 3**7,
        "tau2(15) = tau2(3) tau2(5)": table[15] == table[3] * table[5],
    }


# ---------------------------------------------------------------------------
# E2 and theta series
# ---------------------------------------------------------------------------


def divisor_sums(M: int) -> np.ndarray:
    """sigma(n) for n = 0..M (sigma(0) = 0)."""
    s = np.zeros(M + 1, dtype=np.int64)
    for d in range(1, M + 1):
        s[d::d] += d
    return s


def e2_series(M: int) -> IntegerSeries:
    """E2 = 1 - 24 sum sigma(m) q^m."""
    s = divisor_sums(M)
    return IntegerSeries((1,) + tuple((-24 * s[1:]).tolist()))


def theta_scalar(M: int) -> IntegerSeries:
    """Shell sizes of D4 by norm 2m, checked against 2 E2(2z) - E2(z)."""
    theta = IntegerSeries((1,) + tuple(jacobi_count(m) for m in range(1, M + 1)))
    e2 = e2_series(M)
    target = e2.substitute_power(2).scale(2) - e2
    n = theta.first_difference(target)
    if n is not None:
        raise SeriesMismatch("theta_D4 vs 2E2(2z) - E2(z)", n, theta[n], target[n])
    return theta


def theta_scalar_from_shells(M: int) -> IntegerSeries:
    return IntegerSeries((1,) + tuple(len(enumerate_shell(m)) for m in range(1, M + 1)))


def theta_weighted(P: MultiPoly4, M: Optional[int] = None) -> IntegerSeries:
    """Coefficient m is sum of P over the 2m-shell (the origin for m = 0)."""
    if M is None:
        M = config.theta_budget()
    if not P.is_homogeneous():
        raise ValueError("weight polynomial must be homogeneous")
    config.check_cap("m", M, config.shell_cap(), "D4DESIGN_SHELL_CAP")
    coeffs = [P(0, 0, 0, 0)]
    for m in range(1, M + 1):
        coeffs.append(poly_sums([P], enumerate_shell(m))[0])
    if any(c.denominator != 1 for c in map(Fraction, coeffs)):
        raise ValueError("weight polynomial must have integer sums; scale it first")
    return IntegerSeries(tuple(int(c) for c in coeffs))


# ---------------------------------------------------------------------------
# Scans
# ---------------------------------------------------------------------------


def primes_up_to(B: int) -> List[int]:
    if B < 2:
        return []
    sieve = np.ones(B + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(B**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).tolist()


@dataclass
class ScanReport:
    name: str
    checked: int
    violations: List[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def congruence_scan(table: Tau2Table, B: int) -> ScanReport:
    """tau2(p) = p(p+1) mod 3 and mod 5 for primes 3 <= p <= B."""
    _need(table, B)
    report = ScanReport("congruence mod 3 and 5", 0)
    for p in primes_up_to(B):
        if p < 3:
            continue
        report.checked += 1
        t, target = table[p], p * (p + 1)
        if (t - target) % 3 or (t - target) % 5:
            report.violations.append(p)
    return report


def nonvanishing_scan(table: Tau2Table, M: int) -> Optional[int]:
    """First m <= M with tau2(m) = 0, or None."""
    _need(table, M)
    vals = table.values[:M]
    for m, v in enumerate(vals, start=1):
        if v == 0:
            return m
    return None


def prime_nonvanishing_and_deligne_check(table: Tau2Table, B: int) -> Tuple[ScanReport, ScanReport]:
    """Nonvanishing at primes p != 14 mod 15, and tau2(p)^2 <= 4 p^7, for p <= B."""
    _need(table, B)
    cor = ScanReport("tau2(p) != 0 for p != -1 mod 15", 0)
    deligne = ScanReport("tau2(p)^2 <= 4 p^7", 0)
    for p in primes_up_to(B):
        t = table[p]
        if p % 15 != 14:
            cor.checked += 1
            if t == 0:
                cor.violations.append(p)
        deligne.checked += 1
        if t * t > 4 * p**7:
            deligne.violations.append(p)
    return cor, deligne


def _need(table: Tau2Table, B: int) -> None:
    if B > table.bound:
        raise IndexError(f"table covers m <= {table.bound}, scan needs {B}")
