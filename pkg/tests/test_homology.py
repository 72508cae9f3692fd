from __future__ import annotations

import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from twistlab import linalg
from twistlab.ainfinity import build_model
from twistlab.bar import build_truncated_bar
from twistlab.errors import NotAComplex
from twistlab.homology import ChainComplexData, homology_dims, rank_exact, total_homology_dim

small_ints = st.integers(-4, 4)


def int_matrix(r, c):
    return st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r)


def test_rank_examples():
    assert rank_exact([[0] * 3 for _ in range(3)]) == 0
    assert rank_exact(linalg.identity(5)) == 5
    assert rank_exact([[1, 2], [2, 4]]) == 1


def test_rank_with_fractions():
    assert rank_exact([[F(1, 2), F(1, 3)], [F(3, 2), 1]]) == 1


@settings(max_examples=300)
@given(st.integers(1, 6), st.integers(1, 6), st.data())
def test_rank_against_numpy(r, c, data):
    m = data.draw(int_matrix(r, c))
    assert rank_exact(m) == np.linalg.matrix_rank(np.array(m, dtype=float))


@settings(max_examples=200)
@given(st.integers(1, 5), st.data())
def test_det_against_numpy(n, data):
    m = data.draw(int_matrix(n, n))
    assert abs(float(linalg.det_exact(m)) - np.linalg.det(np.array(m, dtype=float))) < 1e-6


def test_zero_differential():
    c = ChainComplexData((2, 2), (None, [[0, 0], [0, 0]]))
    assert homology_dims(c) == [2, 2]


def test_rank_one_differential():
    c = ChainComplexData((2, 2), (None, [[0, 1], [0, 0]]))
    assert homology_dims(c) == [1, 1]


def test_deformed_bar_k5_total_dim():
    A, M, N = build_model("deformed", 1, -1)
    b = build_truncated_bar(M, A, N, 5)
    assert total_homology_dim(b.differential) == 1
    assert sum(homology_dims(b.as_chain_complex())) == 1


def test_non_complex_rejected():
    with pytest.raises(NotAComplex):
        ChainComplexData((1, 1, 1), (None, [[1]], [[1]]))
    with pytest.raises(NotAComplex):
        total_homology_dim([[1, 1], [0, 1]])


def random_complex(rng: random.Random, dims):
    """Basis-adapted complex: d_i kills the first r_{i+1} vectors of C_i (the boundaries)
    and sends its last r_i vectors onto the first r_i vectors of C_{i-1}."""
    n = len(dims)
    ranks = [0] * (n + 1)
    for i in range(1, n):
        ranks[i] = rng.randint(0, min(dims[i - 1] - ranks[i - 1], dims[i]))
    diffs = [None]
    for i in range(1, n):
        d = linalg.zeros(dims[i - 1], dims[i])
        for j in range(ranks[i]):
            d[j][dims[i] - ranks[i] + j] = 1
        diffs.append(d)
    # the first r_{i+1} vectors of C_i must not meet the last r_i ones
    ok = all(ranks[i] + ranks[i + 1] <= dims[i] for i in range(n))
    return diffs, ranks, ok


def change_basis(rng, diffs, dims):
    gs, ginvs = [], []
    for n in dims:
        g = linalg.identity(n, F(1), F(0))
        for _ in range(3 * n):
            if n < 2:
                break
            a, b = rng.sample(range(n), 2)
            e = linalg.identity(n, F(1), F(0))
            e[a][b] = F(rng.choice([-2, -1, 1, 2]))
            g = linalg.matmul(e, g, F(0))
        gs.append(g)
        ginvs.append(linalg.inverse_exact(g))
    out = [None]
    for i in range(1, len(dims)):
        if dims[i - 1] == 0 or dims[i] == 0:
            out.append(diffs[i])
            continue
        out.append(linalg.matmul(linalg.matmul(gs[i - 1], diffs[i], F(0)), ginvs[i], F(0)))
    return out


@pytest.mark.parametrize("seed", range(25))
def test_euler_characteristic_and_basis_invariance(seed):
    rng = random.Random(seed)
    dims = [rng.randint(0, 4) for _ in range(rng.randint(2, 5))]
    diffs, ranks, ok = random_complex(rng, dims)
    if not ok:
        pytest.skip("ranks do not fit")
    c = ChainComplexData(tuple(dims), tuple(diffs))
    h = homology_dims(c)
    assert h == [dims[i] - ranks[i] - ranks[i + 1] for i in range(len(dims))]
    assert sum((-1) ** i * x for i, x in enumerate(h)) == c.euler_characteristic()
    c2 = ChainComplexData(tuple(dims), tuple(change_basis(rng, diffs, dims)))
    assert homology_dims(c2) == h
