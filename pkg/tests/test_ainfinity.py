from __future__ import annotations

import itertools
from fractions import Fraction as F

import pytest

from twistlab.ainfinity import (
    AInfinityAlgebra,
    AInfinityModule,
    algebra_from_json,
    associative_algebra,
    build_model,
    check_ainf_relations,
    corrupted_unit_module,
    module_from_json,
    module_vanishing_audit,
    parse_signs,
    rank_one_module,
    unit_family_witness,
)

SIGNS = [(1, 1), (1, -1), (-1, 1), (-1, -1)]


@pytest.mark.parametrize("x2", [0, 1])
def test_model_algebras_pass(x2):
    assert check_ainf_relations(associative_algebra(x2), 8).passed


@pytest.mark.parametrize("model", ["formal", "deformed"])
@pytest.mark.parametrize("signs", SIGNS)
def test_model_modules_pass(model, signs):
    A, M, N = build_model(model, *signs)
    for obj in (A, M, N):
        assert check_ainf_relations(obj, 8).passed


def test_deformed_structure_constants():
    A, M, N = build_model("deformed", 1, -1)
    assert M.mu((0, 1)) == {0: 1}
    assert N.mu((1, 0)) == {0: -1}
    assert A.mu((1, 1)) == {A.unit: 1}


def test_formal_module_actions_vanish():
    A, M, N = build_model("formal", 1, -1)
    assert M.mu((0, 1)) == {} and N.mu((1, 0)) == {}
    assert A.mu((1, 1)) == {}


def test_non_associative_product_fails():
    A = associative_algebra(1)
    bad = AInfinityAlgebra(A.degrees, A.unit, {2: {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (1, 1): {1: 1}}}, A.names)
    # x.x = x is associative; flip one sign to break it
    bad2 = AInfinityAlgebra(A.degrees, A.unit, {2: {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: -1}, (1, 1): {0: 1}}}, A.names)
    assert check_ainf_relations(bad, 4).passed
    assert not check_ainf_relations(bad2, 4).passed


def test_module_with_wrong_action_fails():
    A = associative_algebra(1)
    # mu^2(m, x) = 2m is incompatible with x^2 = 1
    M = AInfinityModule(A, "right", (0,), {2: {(0, 0): {0: 1}, (0, 1): {0: 2}}}, ("m",))
    rep = check_ainf_relations(M, 4)
    assert not rep.passed
    assert rep.violations[0].inputs == (("m", 0), ("a", 1), ("a", 1))


@pytest.mark.parametrize("eps_m", [1, -1])
@pytest.mark.parametrize("first", [0, 1])
@pytest.mark.parametrize("coeff", [1, -1, 2, F(1, 2)])
def test_corrupted_unit_witness(eps_m, first, coeff):
    M = corrupted_unit_module(eps_m, first, coeff)
    assert not check_ainf_relations(M, 8).passed
    w = unit_family_witness(M)
    assert w is not None
    assert w.inputs[0] == ("m", 0) and w.inputs[-1] == ("a", 0)
    assert all(l == ("a", 1) for l in w.inputs[1:-1]) and len(w.inputs) >= 3


def test_vanishing_audit_on_models():
    for model in ("formal", "deformed"):
        for signs in SIGNS:
            _, M, N = build_model(model, *signs)
            assert module_vanishing_audit(M).vanishing
            assert module_vanishing_audit(N).vanishing


def test_injected_mu3_on_rank_one():
    A, M, _ = build_model("deformed", 1, -1)
    ops = {q: {k: dict(v) for k, v in t.items()} for q, t in M.ops.items()}
    ops[3] = {(0, 1, 1): {0: F(1)}}
    audit = module_vanishing_audit(AInfinityModule(A, "right", M.degrees, ops, M.names))
    assert not audit.vanishing and audit.minimal_j == 3
    assert not audit.relations_hold
    # unit-terminated tuples are unaffected by strict unitality; the first violated relation has four x's
    assert audit.witness.inputs == (("m", 0),) + (("a", 1),) * 4


def _rank_two(mu3: dict) -> AInfinityModule:
    A = associative_algebra(1)
    mu2 = {(i, 0): {i: 1} for i in range(2)}
    mu2.update({(i, 1): {i: 1} for i in range(2)})
    ops = {2: mu2}
    if mu3:
        ops[3] = mu3
    return AInfinityModule(A, "right", (0, 1), ops, ("m0", "m1"))


def test_rank_two_enumeration():
    """Small integer mu^3 on a rank-2 module with x acting as the identity.

    Every draw that satisfies the relations is recorded; some have mu^3 != 0.
    """
    valid_nonformal = []
    for a, b in itertools.product((0, 1, -1), repeat=2):
        mu3 = {}
        if a:
            mu3[(0, 1, 1)] = {1: a}
        if b:
            mu3[(1, 1, 1)] = {0: b}
        audit = module_vanishing_audit(_rank_two(mu3), 8)
        if audit.relations_hold and not audit.vanishing:
            valid_nonformal.append((a, b))
    assert (1, 0) in valid_nonformal and (0, 1) in valid_nonformal
    assert (1, 1) not in valid_nonformal


def test_rank_one_admits_no_degree_consistent_mu3():
    A = associative_algebra(1)
    for inputs in itertools.product(range(2), repeat=2):
        ops = {2: rank_one_module(A, "right", 1).ops[2], 3: {(0,) + inputs: {0: F(1)}}}
        M = AInfinityModule(A, "right", (0,), ops, ("m",))
        assert not check_ainf_relations(M, 6).passed


def test_json_round_trip():
    A, M, N = build_model("deformed", -1, 1)
    A2 = algebra_from_json(A.to_json())
    assert A2.ops == A.ops and A2.degrees == A.degrees
    M2 = module_from_json(M.to_json(), A2)
    assert M2.ops == M.ops and M2.side == "right"


def test_parse_signs():
    assert parse_signs("+-") == (1, -1)
    with pytest.raises(ValueError):
        parse_signs("+")
