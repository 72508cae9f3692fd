from __future__ import annotations


import numpy as np
import pytest

from twistlab import linalg
from twistlab.ainfinity import AInfinityModule, associative_algebra, build_model, rank_one_module
from twistlab.bar import (
    bar_homology,
    build_truncated_bar,
    closed_form_differential,
    closed_form_homology,
    match_up_to_signs,
    model_bar_table,
    with_acyclic_summand,
)
from twistlab.errors import RelationCheckFailed
from twistlab.homology import homology_dims

SIGNS = [(1, 1), (1, -1), (-1, 1), (-1, -1)]


def numeric_homology(D) -> int:
    a = np.array(D, dtype=float)
    return a.shape[0] - 2 * (np.linalg.matrix_rank(a) if a.size else 0)


def test_formal_k5():
    A, M, N = build_model("formal")
    b = build_truncated_bar(M, A, N, 5)
    assert b.dim == 5 and linalg.is_zero(b.differential)
    assert bar_homology(b) == 5


def test_k1_single_generator():
    A, M, N = build_model("deformed", 1, 1)
    b = build_truncated_bar(M, A, N, 1)
    assert b.generators == [(0, (), 0)] and b.differential == [[0]]


def test_deformed_alternating():
    A, M, N = build_model("deformed", 1, -1)
    assert bar_homology(build_truncated_bar(M, A, N, 4)) == 0
    assert bar_homology(build_truncated_bar(M, A, N, 5)) == 1


@pytest.mark.parametrize("signs", SIGNS)
def test_generic_builder_matches_closed_form(signs):
    A, M, N = build_model("deformed", *signs)
    for k in range(1, 9):
        b = build_truncated_bar(M, A, N, k)
        C = closed_form_differential("deformed", *signs, k)
        assert match_up_to_signs(b.differential, C) is not None
        assert bar_homology(b) == closed_form_homology("deformed", *signs, k) == numeric_homology(b.differential)
        assert bar_homology(b) <= 2


def test_same_signs_differ_from_zero_or_one():
    rows = model_bar_table("deformed", 1, 1, range(1, 5))
    assert [r.dim for r in rows] == [1, 2, 1, 2]


def test_closed_form_coefficient():
    C = closed_form_differential("deformed", 1, -1, 4)
    assert [C[j - 1][j] for j in range(1, 4)] == [2, 0, 2]


def test_match_up_to_signs_detects_mismatch():
    assert match_up_to_signs([[0, 1], [0, 0]], [[0, -1], [0, 0]]) is not None
    assert match_up_to_signs([[0, 2], [0, 0]], [[0, 1], [0, 0]]) is None
    assert match_up_to_signs([[1, 1], [1, 1]], [[1, 1], [1, -1]]) is None


def test_chain_complex_view():
    A, M, N = build_model("deformed", -1, 1)
    b = build_truncated_bar(M, A, N, 6)
    assert sum(homology_dims(b.as_chain_complex())) == bar_homology(b)


def test_odd_degree_module_gives_complex():
    A = associative_algebra(1)
    M = rank_one_module(A, "right", 1, degree=1)
    N = rank_one_module(A, "left", -1, degree=1)
    for k in range(1, 7):
        b = build_truncated_bar(M, A, N, k)
        assert bar_homology(b) <= 2


@pytest.mark.parametrize("signs", SIGNS)
def test_acyclic_summand_invariance(signs):
    A, M, N = build_model("deformed", *signs)
    M2 = with_acyclic_summand(M)
    for k in range(1, 6):
        assert bar_homology(build_truncated_bar(M2, A, N, k)) == bar_homology(build_truncated_bar(M, A, N, k))


def test_unverified_input_rejected():
    A = associative_algebra(1)
    M = AInfinityModule(A, "right", (0,), {2: {(0, 0): {0: 1}, (0, 1): {0: 2}}}, ("m",))
    N = rank_one_module(A, "left", 1)
    with pytest.raises(RelationCheckFailed):
        build_truncated_bar(M, A, N, 3)
