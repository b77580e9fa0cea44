import itertools
from fractions import Fraction

import numpy as np
import pytest

from d4design.config import CapExceeded
from d4design.lattice import (
    DesignError,
    GramProfile,
    NotCombinatorial,
    Shell,
    Underdetermined,
    analyze_lattice,
    cube,
    d4_lattice,
    derived_code_profile,
    design_deficit,
    distance_distribution,
    enumerate_shell,
    gegenbauer_design_test,
    gram_equivalent,
    gram_matrix,
    gram_profile,
    half_set,
    harmonic_strength,
    jacobi_count,
    lattice_level,
    LatticeDescription,
    moments,
    octahedron,
    p6_sum,
    point_deficit,
    profile_from_gram,
    reconstruction_check,
    scaled_identity_lattice,
    solve_distance_distribution,
)
from d4design.qseries import tau2_table

HALF = Fraction(1, 2)


def _brute_shell(m):
    r = int((2 * m) ** 0.5) + 1
    return sorted(
        p for p in itertools.product(range(-r, r + 1), repeat=4) if sum(v * v for v in p) == 2 * m and sum(p) % 2 == 0
    )


@pytest.mark.parametrize("m", [1, 2, 3, 5, 6, 12])
def test_shell_matches_brute_force(m):
    assert [tuple(p) for p in enumerate_shell(m).coords.tolist()] == _brute_shell(m)


def test_small_shell_sizes():
    assert [len(enumerate_shell(m)) for m in (1, 2, 3, 4)] == [24, 24, 96, 24]
    assert jacobi_count(3) == 96
    assert jacobi_count(25) == 24 * 31


def test_shell_rejects_nonpositive_m():
    with pytest.raises(ValueError):
        enumerate_shell(0)


def test_shell_cap(monkeypatch):
    monkeypatch.setenv("D4DESIGN_SHELL_CAP", "10")
    with pytest.raises(CapExceeded):
        enumerate_shell(11)


def test_root_shell_is_the_root_system():
    pts = set(map(tuple, enumerate_shell(1).coords.tolist()))
    expected = {p for p in itertools.product((-1, 0, 1), repeat=4) if sum(map(abs, p)) == 2}
    assert pts == expected


def test_shell_export_roundtrip(tmp_path):
    s = enumerate_shell(3)
    s.validate()
    path = tmp_path / "shell.txt"
    s.export(path)
    back = Shell.from_text(path.read_text())
    assert back.m == 3 and np.array_equal(back.coords, s.coords)


def test_shell_import_rejects_bad_sets():
    with pytest.raises(ValueError):
        Shell.from_text("1 1 0 0\n1 0 0 0\n")
    with pytest.raises(DesignError):
        Shell.from_text("1 1 0 0\n")


def test_design_deficits_at_strength_degrees():
    table = tau2_table(30)
    for m in range(1, 31):
        s = enumerate_shell(m)
        for ell in (2, 4, 10):
            assert not any(design_deficit(s, ell))
        assert p6_sum(s) == -192 * table[m]
        assert any(design_deficit(s, 6))
        assert any(design_deficit(s, 8))


def test_odd_degrees_vanish_for_antipodal_sets():
    s = enumerate_shell(2)
    for ell in (1, 3, 5):
        assert not any(design_deficit(s, ell))


def test_harmonic_strength():
    assert harmonic_strength(enumerate_shell(1), 12) == {2, 4, 10}
    assert harmonic_strength(enumerate_shell(2), 12) == {2, 4, 10}
    assert harmonic_strength(enumerate_shell(1), 2) == {2}


def test_point_deficit_detects_non_designs():
    assert any(point_deficit([(1, 1, 0, 0), (-1, -1, 0, 0)], 2))


def test_gram_profile_of_roots():
    prof = gram_profile(enumerate_shell(1))
    assert prof.counts == {Fraction(-1): 24, -HALF: 192, Fraction(0): 144, HALF: 192, Fraction(1): 24}
    assert prof.values() == {Fraction(-1), -HALF, Fraction(0), HALF}


def test_gram_profile_rejects_mixed_norms():
    with pytest.raises(DesignError):
        gram_profile([(1, 1, 0, 0), (2, 0, 0, 0)])


def test_gegenbauer_test_agrees_with_deficits():
    prof = gram_profile(enumerate_shell(1))
    for ell in range(1, 13):
        vanishes = gegenbauer_design_test(prof, 4, ell) == 0
        assert vanishes == (ell % 2 == 1 or ell in (2, 4, 10))


def test_moments():
    assert [moments(4, k) for k in range(7)] == [1, 0, Fraction(1, 4), 0, Fraction(1, 8), 0, Fraction(5, 64)]


def test_root_distance_distribution_solver_and_direct_count():
    vals = (-1, -HALF, 0, HALF, 1)
    solved = solve_distance_distribution(4, 24, 5, vals, base_in_set=True)
    direct = distance_distribution(enumerate_shell(1), (1, 1, 0, 0))
    assert solved.counts == direct.counts
    assert [solved.counts[Fraction(v)] for v in vals] == [1, 8, 6, 8, 1]


def test_derived_code_distributions():
    cube_dd = solve_distance_distribution(3, 8, 3, (-1, Fraction(-1, 3), Fraction(1, 3), 1), base_in_set=True)
    assert list(cube_dd.counts.values()) == [1, 3, 3, 1]
    octa = solve_distance_distribution(3, 6, 3, (-1, -HALF, 0, HALF, 1), base_in_set=True)
    assert [octa.counts[Fraction(v)] for v in (-1, -HALF, 0, HALF, 1)] == [1, 0, 4, 0, 1]


def test_solver_rejects_underdetermined_and_non_combinatorial():
    vals = [Fraction(k, 8) for k in range(-8, 9)]
    with pytest.raises(Underdetermined):
        solve_distance_distribution(4, 96, 5, vals, base_in_set=True)
    with pytest.raises(NotCombinatorial):
        solve_distance_distribution(4, 25, 5, (-1, -HALF, 0, HALF, 1), base_in_set=True)


def test_derived_profiles_are_octahedron_and_cube():
    roots = enumerate_shell(1)
    assert derived_code_profile(roots, (1, 1, 0, 0), 0) == profile_from_gram(gram_matrix(octahedron()))
    for a in (HALF, -HALF):
        prof = derived_code_profile(roots, (1, 1, 0, 0), a)
        assert prof == profile_from_gram(gram_matrix(cube()))
        assert all(gegenbauer_design_test(prof, 3, ell) == 0 for ell in (1, 2, 3))
        assert gegenbauer_design_test(prof, 3, 4) != 0
    with pytest.raises(ValueError):
        derived_code_profile(roots, (1, 1, 0, 0), 1)


def test_reconstruction():
    assert reconstruction_check()


def test_gram_equivalence_finds_and_refuses():
    g = gram_matrix(enumerate_shell(1).coords.tolist())
    perm = list(range(24))[::-1]
    shuffled = [[g[perm[i]][perm[j]] for j in range(24)] for i in range(24)]
    assert gram_equivalent(shuffled, g) is not None
    other = gram_matrix(list(itertools.product((1, -1), repeat=4)))
    assert gram_equivalent(other, gram_matrix(enumerate_shell(1).coords.tolist()[:16])) is None


def test_half_set():
    h = half_set(enumerate_shell(1))
    assert len(h) == 12
    assert all(next(v for v in p if v) > 0 for p in h)


def test_lattice_levels():
    d4 = analyze_lattice(d4_lattice())
    assert d4.even and d4.level == 2 and d4.roots_match_d4
    assert d4.shell_sizes[2] == 24 and d4.shell_sizes[6] == 96
    ctrl = analyze_lattice(scaled_identity_lattice(2))
    assert ctrl.even and ctrl.level == 4 and not ctrl.roots_match_d4
    assert lattice_level(scaled_identity_lattice(1)) is None


def test_lattice_from_basis_validates():
    with pytest.raises(ValueError):
        LatticeDescription.from_basis([(1, 0, 0, 0), (2, 0, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)])
    # half-integer bases are accepted
    L = LatticeDescription.from_basis([(HALF, HALF, HALF, HALF), (1, -1, 0, 0), (0, 1, -1, 0), (0, 0, 1, -1)])
    assert L.gram[0][0] == 1
