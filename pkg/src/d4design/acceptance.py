"""Acceptance checks shared by ``verify-all`` and the test suite.

Each criterion returns a list of :class:`Check` with exact values rendered
as decimal strings.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

from .gegenbauer import certify_code_bound, certify_design_bound
from .harmonic import aut_group_of_root_system, molien_harmonic_dims, p6
from .lattice import (
    analyze_lattice,
    cube,
    d4_lattice,
    derived_code_profile,
    design_deficit,
    enumerate_shell,
    gegenbauer_design_test,
    gram_matrix,
    jacobi_count,
    octahedron,
    p6_sum,
    profile_from_gram,
    reconstruction_check,
    scaled_identity_lattice,
    solve_distance_distribution,
)
from .quaternion import decompose_and_certify, subgroup_N_matrices
from .qseries import (
    congruence_scan,
    prime_nonvanishing_and_deligne_check,
    nonvanishing_scan,
    tau2_table,
    theta_scalar,
    theta_weighted,
)

# reference data
WF4_HARMONIC_MOLIEN = (1, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 2, 0, 1, 0, 1, 0, 2)
N_HARMONIC_MOLIEN = {0: 1, 2: 0, 4: 0, 6: 7, 8: 9, 10: 0, 12: 26}
TAU2_FIRST = (1, -8, 12, 64, -210)
DESIGN_TEST_COEFFS = {0: Fraction(3, 1024), 2: Fraction(1, 768), 4: Fraction(1, 2560), 10: Fraction(1, 11264)}
CODE_BOUND_A1 = (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(7, 3))
HALF = Fraction(1, 2)
ROOT_VALUES = (-1, -HALF, 0, HALF, 1)

PROFILES = ("quick", "full")


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    value: str

    def as_json(self) -> dict:
        return {"name": self.name, "pass": self.passed, "value": self.value}


def _fmt(v) -> str:
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def shell_counts(profile: str) -> List[Check]:
    bad = [m for m in range(1, 2001) if len(enumerate_shell(m)) != jacobi_count(m)]
    return [Check("|shell(m)| = 24 * odd divisor sum of 2m, m <= 2000", not bad, f"mismatches={_fmt(bad[:5])}")]


def design_strength(profile: str) -> List[Check]:
    table = tau2_table(100)
    bad_design, bad_p6 = [], []
    for m in range(1, 101):
        shell = enumerate_shell(m)
        if any(any(design_deficit(shell, ell)) for ell in (2, 4, 10)):
            bad_design.append(m)
        if p6_sum(shell) != -192 * table[m]:
            bad_p6.append(m)
    return [
        Check("deficits vanish at l = 2, 4, 10 for m <= 100", not bad_design, f"failures={_fmt(bad_design)}"),
        Check("P6 shell sum = -192 tau2(m) for m <= 100", not bad_p6, f"failures={_fmt(bad_p6)}"),
    ]


def lp_certificates(profile: str) -> List[Check]:
    out = []
    cert = certify_design_bound()
    support = cert.expansion.support()
    out.append(Check("design test polynomial Gegenbauer coefficients", support == DESIGN_TEST_COEFFS, _fmt([f"{k}:{v}" for k, v in support.items()])))
    out.append(Check("design test polynomial F(1) = 9/256", cert.value_at_one == Fraction(9, 256), str(cert.value_at_one)))
    out.append(Check("design bound = 12", cert.bound == 12, str(cert.bound)))
    for a1 in CODE_BOUND_A1:
        c = certify_code_bound(a1)
        out.append(Check(f"code bound = 12 at a1 = {a1}", c.bound == 12 and c.passed, str(c.bound)))
    return out


def molien_fixtures(profile: str) -> List[Check]:
    W = aut_group_of_root_system()
    dims = molien_harmonic_dims(W, 18)
    N = subgroup_N_matrices()
    ndims = molien_harmonic_dims(N, 12)
    n_sel = {ell: ndims[ell] for ell in N_HARMONIC_MOLIEN}
    return [
        Check("|W(F4)| = 1152", len(W) == 1152, str(len(W))),
        Check("W(F4) invariant harmonic dims l = 0..18", tuple(dims) == WF4_HARMONIC_MOLIEN, _fmt(dims)),
        Check("N invariant harmonic dims 7, 9, 26 at l = 6, 8, 12", n_sel == N_HARMONIC_MOLIEN, _fmt([n_sel[k] for k in sorted(n_sel)])),
    ]


def distance_distributions(profile: str) -> List[Check]:
    roots = solve_distance_distribution(4, 24, 5, ROOT_VALUES, base_in_set=True)
    cube_vals = (-1, Fraction(-1, 3), Fraction(1, 3), 1)
    cube_dd = solve_distance_distribution(3, 8, 3, cube_vals, base_in_set=True)
    octa_dd = solve_distance_distribution(3, 6, 3, ROOT_VALUES, base_in_set=True)

    def seq(dd, vals):
        return tuple(dd.counts.get(Fraction(v), 0) for v in vals)

    return [
        Check("root system distribution (1, 8, 6, 8, 1)", seq(roots, ROOT_VALUES) == (1, 8, 6, 8, 1), _fmt(seq(roots, ROOT_VALUES))),
        Check("derived code at +-1/2 distribution (1, 3, 3, 1)", seq(cube_dd, cube_vals) == (1, 3, 3, 1), _fmt(seq(cube_dd, cube_vals))),
        Check("derived code at 0 distribution (1, 0, 4, 0, 1)", seq(octa_dd, ROOT_VALUES) == (1, 0, 4, 0, 1), _fmt(seq(octa_dd, ROOT_VALUES))),
    ]


def derived_codes(profile: str) -> List[Check]:
    roots = enumerate_shell(1)
    base = (1, 1, 0, 0)
    expected = {
        Fraction(0): profile_from_gram(gram_matrix(octahedron())),
        HALF: profile_from_gram(gram_matrix(cube())),
        -HALF: profile_from_gram(gram_matrix(cube())),
    }
    out = []
    for alpha, target in expected.items():
        prof = derived_code_profile(roots, base, alpha)
        tests = [gegenbauer_design_test(prof, 3, ell) for ell in (1, 2, 3)]
        out.append(Check(f"derived code at {alpha} matches {'octahedron' if alpha == 0 else 'cube'}", prof == target, _fmt(sorted(prof.counts.items()))))
        out.append(Check(f"derived code at {alpha} is a 3-design", not any(tests), _fmt(tests)))
    try:
        ok = reconstruction_check()
        detail = "relabelling found"
    except AssertionError as exc:
        ok, detail = False, str(exc)
    out.append(Check("reconstruction of the root system from derived codes", ok, detail))
    return out


def orbit_decomposition_check(profile: str) -> List[Check]:
    M = 200 if profile == "full" else 50
    failures = []
    for m in range(1, M + 1):
        try:
            decompose_and_certify(m)
        except AssertionError as exc:
            failures.append(f"{m}: {exc}")
    return [Check(f"orbits of shells m <= {M}: count, size 24, root-system copies", not failures, _fmt(failures[:3]))]


def qseries_identities(profile: str) -> List[Check]:
    table = tau2_table(200)
    first = table.values[:5]
    try:
        theta_scalar(2000)
        scalar_ok, scalar_detail = True, "order 2000"
    except AssertionError as exc:
        scalar_ok, scalar_detail = False, str(exc)
    weighted = theta_weighted(p6(), 200)
    diff = weighted + table.series().scale(192)
    return [
        Check("tau2(1..5) = 1, -8, 12, 64, -210", first == TAU2_FIRST, _fmt(first)),
        Check("theta_D4 = 2 E2(2z) - E2(z) to order 2000", scalar_ok, scalar_detail),
        Check("theta_D4,P6 = -192 eta^8 eta(2.)^8 to order 200", diff.is_zero(), f"first nonzero difference at {next((n for n, c in enumerate(diff.coeffs) if c), None)}"),
    ]


def tau2_arithmetic(profile: str) -> List[Check]:
    method = "exact" if profile == "full" else "modular"
    table = tau2_table(10**5, method)
    cong = congruence_scan(table, 10**4)
    zero = nonvanishing_scan(table, 10**5)
    cor, deligne = prime_nonvanishing_and_deligne_check(table, 10**4)
    return [
        Check(f"tau2(p) = p(p+1) mod 3 and 5 for 3 <= p <= 10^4 ({method})", cong.passed, f"checked={cong.checked} violations={_fmt(cong.violations)}"),
        Check(f"tau2(m) != 0 for m <= 10^5 ({method})", zero is None, f"first zero={zero}"),
        Check("tau2(p) != 0 for p != -1 mod 15, p <= 10^4", cor.passed, f"checked={cor.checked}"),
        Check("tau2(p)^2 <= 4 p^7 for p <= 10^4", deligne.passed, f"checked={deligne.checked}"),
    ]


def level_analysis(profile: str) -> List[Check]:
    d4 = analyze_lattice(d4_lattice())
    ctrl = analyze_lattice(scaled_identity_lattice(2))
    return [
        Check("D4 is even of level 2", d4.even and d4.level == 2, f"even={d4.even} level={d4.level}"),
        Check("Gram 2I is even of level 4", ctrl.even and ctrl.level == 4, f"even={ctrl.even} level={ctrl.level}"),
    ]


CRITERIA: Dict[int, Tuple[str, Callable[[str], List[Check]]]] = {
    1: ("shell counts", shell_counts),
    2: ("design strength", design_strength),
    3: ("LP certificates", lp_certificates),
    4: ("Molien fixtures", molien_fixtures),
    5: ("distance distributions", distance_distributions),
    6: ("derived codes and reconstruction", derived_codes),
    7: ("orbit decomposition", orbit_decomposition_check),
    8: ("q-series identities", qseries_identities),
    9: ("arithmetic of tau2", tau2_arithmetic),
    10: ("level analysis", level_analysis),
}


def run_criterion(number: int, profile: str) -> Tuple[int, List[Check], int]:
    title, fn = CRITERIA[number]
    start = time.perf_counter()
    try:
        checks = fn(profile)
    except Exception as exc:  # a crash is a failed criterion, not a crashed run
        checks = [Check(f"{title} raised", False, f"{type(exc).__name__}: {exc}")]
    return number, checks, int((time.perf_counter() - start) * 1000)


def verify_all(profile: str = "quick", threads: int = 0) -> List[Tuple[int, List[Check], int]]:
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}")
    numbers = sorted(CRITERIA)
    workers = threads or os.cpu_count() or 1
    if workers == 1:
        results = [run_criterion(n, profile) for n in numbers]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(numbers))) as pool:
            results = list(pool.map(run_criterion, numbers, [profile] * len(numbers)))
    return sorted(results, key=lambda r: r[0])
