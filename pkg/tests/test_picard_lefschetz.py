from __future__ import annotations

import json
import random

import pytest

from twistlab import linalg
from twistlab.errors import DimensionMismatch, InputError
from twistlab.picard_lefschetz import (
    HomologyModel,
    SphereClass,
    TwistLattice,
    dehn_twist_matrix,
    epsilon,
    growth_profile,
    lefschetz_number,
    preserves_pairing,
    standard_pair_lattice,
    twist_power,
    twist_word_action,
)

from oracles import numeric_growth, numeric_twist, random_lattice


def test_epsilon_values():
    assert [epsilon(s) for s in range(8)] == [1, 1, -1, -1, 1, 1, -1, -1]


def test_pairing_symmetry_enforced():
    with pytest.raises(InputError):
        TwistLattice(1, [[0, 1], [1, 0]])
    with pytest.raises(InputError):
        TwistLattice(2, [[0, 1], [-1, 0]])


def test_odd_twist_is_unipotent():
    lat = TwistLattice(3, [[0, 1], [-1, 0]])
    T = dehn_twist_matrix(lat, SphereClass((1, 0)))
    assert linalg.trace(T) == 2
    assert T[1][1] == 1 and T[0][0] == 1 and T[1][0] == 0 and abs(T[0][1]) == 1


def test_zero_class_twist_is_identity():
    lat = TwistLattice(3, [[0, 1], [-1, 0]])
    assert linalg.is_identity(dehn_twist_matrix(lat, SphereClass((0, 0))))


def test_even_twist_negates_sphere():
    lat, L1, _ = standard_pair_lattice(2)
    assert linalg.matvec(dehn_twist_matrix(lat, L1), L1.vector) == [-x for x in L1.vector]


def test_dimension_mismatch():
    lat = TwistLattice(1, [[0, 1], [-1, 0]])
    with pytest.raises(DimensionMismatch):
        dehn_twist_matrix(lat, SphereClass((1, 0, 0)))


@pytest.mark.parametrize("orientation", [1, -1])
def test_word_power_matrix(orientation):
    lat, L1, _ = standard_pair_lattice(3, orientation)
    for k in (1, 2, 5):
        T = twist_word_action(lat, [(L1, 2 * k)])
        assert T[0][0] == 1 and T[1][1] == 1 and T[1][0] == 0 and abs(T[0][1]) == 2 * k


def test_empty_word_and_inverse():
    lat, L1, L2 = standard_pair_lattice(1)
    assert linalg.is_identity(twist_word_action(lat, []))
    assert linalg.is_identity(twist_word_action(lat, [(L1, 1), (L1, -1)]))
    assert linalg.is_identity(twist_word_action(lat, [(L2, -3), (L2, 3)]))


def test_lefschetz_identity_word_is_euler_characteristic():
    lat, L1, L2 = standard_pair_lattice(3)
    model = HomologyModel(lat, 5, (("L1", L1), ("L2", L2)))
    assert lefschetz_number(model, []) == model.euler_characteristic() == 5 - 2


@pytest.mark.parametrize("s", [1, 3, 5])
@pytest.mark.parametrize("orientation", [1, -1])
def test_odd_growth_law_matches_matrix_oracle(s, orientation):
    lat, L1, L2 = standard_pair_lattice(s, orientation)
    model = HomologyModel(lat, 7, (("L1", L1), ("L2", L2)))
    rows = growth_profile(model, L1, L2, 12)
    for r in rows:
        assert r.middle_supertrace == numeric_growth(s, orientation, r.k)
        # the computed law: middle supertrace 4k^2 - 2, Lefschetz number c + 4k^2 with c = off - 2
        assert r.middle_supertrace == 4 * r.k**2 - 2
        assert r.lefschetz == (7 - 2) + 4 * r.k**2


def test_trace_of_single_product_has_order_six():
    # tau_a tau_b in SL2(Z) for s = 1 has trace 1, hence finite order 6
    lat, L1, L2 = standard_pair_lattice(1)
    T = twist_word_action(lat, [(L1, 1), (L2, 1)])
    assert linalg.trace(T) == 1
    assert linalg.is_identity(linalg.matpow(T, 6))


@pytest.mark.parametrize("orientation", [1, -1])
def test_even_growth_constant(orientation):
    lat, L1, L2 = standard_pair_lattice(2, orientation)
    model = HomologyModel(lat, 0, (("L1", L1), ("L2", L2)))
    rows = growth_profile(model, L1, L2, 20)
    assert {r.middle_supertrace for r in rows} == {2}
    assert len({r.lefschetz for r in rows}) == 1


def test_growth_orientation_independent():
    for s in (1, 2, 3, 4):
        a = growth_profile(HomologyModel(standard_pair_lattice(s, 1)[0], 0), *standard_pair_lattice(s, 1)[1:], 6)
        b = growth_profile(HomologyModel(standard_pair_lattice(s, -1)[0], 0), *standard_pair_lattice(s, -1)[1:], 6)
        assert [r.middle_supertrace for r in a] == [r.middle_supertrace for r in b]


@pytest.mark.parametrize("seed", range(60))
def test_random_lattices_preserve_pairing(seed):
    rng = random.Random(seed)
    s = rng.randint(0, 7)
    lat, L = random_lattice(rng, s)
    T = dehn_twist_matrix(lat, L)
    assert preserves_pairing(lat, T)
    assert T == [list(r) for r in numeric_twist(lat.pairing, L.vector, lat.epsilon)]


@pytest.mark.parametrize("seed", range(40))
def test_even_involution_criterion(seed):
    rng = random.Random(seed)
    s = 2 * rng.randint(0, 3)
    n = rng.randint(1, 5)
    P = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            P[i][j] = P[j][i] = rng.randint(-3, 3)
    lat = TwistLattice(s, P)
    L = SphereClass([rng.randint(-2, 2) for _ in range(n)])
    T2 = linalg.matpow(dehn_twist_matrix(lat, L), 2)
    LL = lat.dot(L.vector, L.vector)
    # tau^2 A = A + (L.A)(L.L - 2 eps) L
    for j in range(n):
        e = [int(i == j) for i in range(n)]
        la = lat.dot(L.vector, e)
        assert [T2[i][j] for i in range(n)] == [e[i] + la * (LL - 2 * lat.epsilon) * L.vector[i] for i in range(n)]
    nonzero_pairing = any(lat.dot(L.vector, [int(i == j) for i in range(n)]) for j in range(n))
    if nonzero_pairing:
        assert linalg.is_identity(T2) == (LL == 2 * lat.epsilon)


def test_odd_twist_infinite_order_linear_growth():
    lat, L1, _ = standard_pair_lattice(3)
    T = dehn_twist_matrix(lat, L1)
    P = linalg.identity(2)
    for k in range(1, 101):
        P = linalg.matmul(P, T)
        assert max(abs(x) for row in P for x in row) == k


def test_large_k_no_overflow():
    lat, L1, L2 = standard_pair_lattice(3)
    T = twist_word_action(lat, [(L1, 2 * 10_000), (L2, 2 * 10_000)])
    assert (-1) ** 3 * linalg.trace(T) == 4 * 10_000**2 - 2
    assert twist_power(lat, L1, -3) == linalg.matpow(twist_power(lat, L1, -1), 3)


def test_model_json_round_trip():
    lat, L1, L2 = standard_pair_lattice(3)
    model = HomologyModel(lat, 4, (("L1", L1), ("L2", L2)))
    again = HomologyModel.from_json(json.dumps(model.to_json()))
    assert again == model
    with pytest.raises(InputError):
        HomologyModel.from_json({"pairing": [[0]]})
