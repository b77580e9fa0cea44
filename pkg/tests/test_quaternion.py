from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from d4design.harmonic import OrthogonalMatrix4, aut_group_of_root_system, molien_harmonic_dims
from d4design.lattice import enumerate_shell, jacobi_count, odd_divisor_sum
from d4design.quaternion import (
    HurwitzQuaternion,
    NotHurwitz,
    OrbitError,
    certify_orbit_is_root_copy,
    decompose_and_certify,
    hurwitz_units,
    integral_hurwitz_shell,
    orbit_decomposition,
    quat_conj,
    quat_mul,
    quat_norm,
    right_mult_matrix,
    subgroup_N_matrices,
)

Q = HurwitzQuaternion.from_coords
one, i, j, k = Q(1, 0, 0, 0), Q(0, 1, 0, 0), Q(0, 0, 1, 0), Q(0, 0, 0, 1)

hurwitz = st.tuples(st.booleans(), st.tuples(*[st.integers(-20, 20)] * 4)).map(
    lambda t: HurwitzQuaternion(tuple(2 * v + (1 if t[0] else 0) for v in t[1]))
)


def test_hamilton_relations():
    assert i * j == k and j * i == -k
    assert j * k == i and k * i == j
    assert i * i == -one
    assert quat_mul(Q(3, -1, 2, 5), one) == Q(3, -1, 2, 5)


def test_half_integer_element():
    w = Q(HALF, HALF, HALF, HALF)
    assert quat_norm(w) == 1
    assert w * w * w == -one
    with pytest.raises(NotHurwitz):
        Q(HALF, 0, 0, 0)


HALF = Fraction(1, 2)


@given(hurwitz, hurwitz)
@settings(max_examples=100, deadline=None)
def test_norm_is_multiplicative(q, r):
    assert quat_norm(q * r) == quat_norm(q) * quat_norm(r)
    assert q * quat_conj(q) == HurwitzQuaternion((2 * quat_norm(q), 0, 0, 0))


@given(hurwitz, hurwitz, hurwitz)
@settings(max_examples=50, deadline=None)
def test_multiplication_is_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


def test_unit_group():
    U = hurwitz_units()
    assert len(U) == 24
    assert -one in U
    assert U.verify()
    assert sum(1 for u in U if not u.is_integral) == 16


def test_right_mult_matrix_is_orthogonal_and_correct():
    for u in hurwitz_units():
        M = right_mult_matrix(u)
        x = Q(3, -1, 4, 1)
        assert M.apply(x.coords) == (x * u).coords


def test_subgroup_n():
    N = subgroup_N_matrices()
    assert len(N) == 24
    assert -OrthogonalMatrix4.identity() in N
    assert N.verify()
    dims = molien_harmonic_dims(N, 12)
    assert (dims[6], dims[8], dims[12]) == (7, 9, 26)
    W = set(aut_group_of_root_system())
    assert all(g in W for g in N)


@pytest.mark.parametrize("m,count", [(1, 1), (2, 1), (3, 4), (25, 31)])
def test_orbit_counts(m, count):
    dec = orbit_decomposition(enumerate_shell(m))
    assert len(dec) == count
    assert all(len(o) == 24 for o in dec.orbits)


def test_orbits_partition_the_shell():
    s = enumerate_shell(15)
    dec = orbit_decomposition(s)
    stacked = np.concatenate(dec.orbits)
    assert sorted(map(tuple, stacked.tolist())) == sorted(map(tuple, s.coords.tolist()))
    reps = dec.representatives
    assert reps == sorted(reps)
    assert all(tuple(o[0].tolist()) == min(map(tuple, o.tolist())) for o in dec.orbits)


def test_orbit_certification():
    for orbit in orbit_decomposition(enumerate_shell(3)).orbits:
        assert certify_orbit_is_root_copy(orbit, 3)
    dec = decompose_and_certify(1)
    assert len(dec) == 1


def test_orbit_certification_rejects_non_copies():
    s = enumerate_shell(3).coords
    with pytest.raises(OrbitError):
        certify_orbit_is_root_copy(s[:24], 3)


def test_orbit_scan_to_moderate_m():
    for m in range(1, 61):
        dec = decompose_and_certify(m)
        assert 24 * len(dec) == jacobi_count(m)
        assert len(dec) == odd_divisor_sum(2 * m)


def test_hurwitz_shell_equals_d4_shell():
    for m in range(1, 51):
        assert integral_hurwitz_shell(m) == [tuple(p) for p in enumerate_shell(m).coords.tolist()]
