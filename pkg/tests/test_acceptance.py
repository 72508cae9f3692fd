"""Acceptance suite: one test per criterion, each at its stated tolerance and time budget."""

from __future__ import annotations

import random
import time
from fractions import Fraction as F

import pytest

from twistlab import linalg, pipeline
from twistlab.ainfinity import associative_algebra, build_model, check_ainf_relations, corrupted_unit_module, unit_family_witness
from twistlab.bar import (
    bar_homology,
    build_truncated_bar,
    closed_form_differential,
    match_up_to_signs,
)
from twistlab.cyclotomic import to_complex
from twistlab.errors import HypothesisFailure
from twistlab.graded import finite_order_supertrace_audit, random_finite_order_map
from twistlab.grassmann import DivisorSpec, involution_search, wplus_fano_check
from twistlab.picard_lefschetz import (
    HomologyModel,
    SphereClass,
    TwistLattice,
    dehn_twist_matrix,
    growth_profile,
    preserves_pairing,
    standard_pair_lattice,
)
from twistlab.spectral_flow import verify

from oracles import numeric_growth, numeric_twist, random_lattice

SIGNS = [(1, 1), (1, -1), (-1, 1), (-1, -1)]


def test_criterion_1_growth_law():
    start = time.perf_counter()
    odd = {}
    for s in (1, 3):
        for orientation in (1, -1):
            lat, L1, L2 = standard_pair_lattice(s, orientation)
            rows = growth_profile(HomologyModel(lat, 0, (("L1", L1), ("L2", L2))), L1, L2, 100)
            odd[(s, orientation)] = [r.middle_supertrace for r in rows]
    lat, L1, L2 = standard_pair_lattice(2)
    even = [r.middle_supertrace for r in growth_profile(HomologyModel(lat, 0, (("L1", L1), ("L2", L2))), L1, L2, 100)]
    elapsed = time.perf_counter() - start

    # independent oracle: plain integer matrix powers
    for k in (1, 2, 50, 100):
        assert odd[(1, 1)][k - 1] == numeric_growth(1, 1, k)
    assert even == [2] * 100
    assert elapsed < 1.0
    mismatches = [
        (key, k, got) for key, vals in odd.items() for k, got in enumerate(vals, 1) if got != -4 * k * k - 2
    ]
    assert not mismatches, (
        f"{len(mismatches)} odd-s values differ from -4k^2-2; first: {mismatches[0]} (computed law is 4k^2-2)"
    )


def test_criterion_2_picard_lefschetz_structure():
    rng = random.Random(2)
    for _ in range(500):
        lat, L = random_lattice(rng, rng.randint(0, 7))
        T = dehn_twist_matrix(lat, L)
        assert preserves_pairing(lat, T)
        assert T == [list(r) for r in numeric_twist(lat.pairing, L.vector, lat.epsilon)]

    for _ in range(200):
        s = 2 * rng.randint(0, 3)
        n = rng.randint(1, 5)
        P = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                P[i][j] = P[j][i] = rng.randint(-3, 3)
        lat = TwistLattice(s, P)
        L = SphereClass([rng.randint(-2, 2) for _ in range(n)])
        if not any(lat.dot(L.vector, [int(i == j) for i in range(n)]) for j in range(n)):
            continue
        T2 = linalg.matpow(dehn_twist_matrix(lat, L), 2)
        assert linalg.is_identity(T2) == (lat.dot(L.vector, L.vector) == 2 * lat.epsilon)

    for _ in range(50):
        lat, L = random_lattice(rng, 2 * rng.randint(0, 3) + 1)
        T = dehn_twist_matrix(lat, L)
        if linalg.is_identity(T):
            continue  # L.A = 0 for every A
        N = [[T[i][j] - int(i == j) for j in range(len(T))] for i in range(len(T))]
        P = linalg.identity(len(T))
        for k in range(1, 101):
            P = linalg.matmul(P, T)
            assert P == [[int(i == j) + k * N[i][j] for j in range(len(T))] for i in range(len(T))]


def test_criterion_3_bar_homology():
    start = time.perf_counter()
    A, M, N = build_model("formal")
    assert [bar_homology(build_truncated_bar(M, A, N, k)) for k in range(1, 65)] == list(range(1, 65))
    A, M, N = build_model("deformed", 1, -1)
    assert [bar_homology(build_truncated_bar(M, A, N, k)) for k in range(1, 65)] == [k % 2 for k in range(1, 65)]
    for signs in SIGNS:
        A, M, N = build_model("deformed", *signs)
        for k in range(1, 65):
            b = build_truncated_bar(M, A, N, k)
            assert bar_homology(b) <= 2
            if k <= 16:
                assert match_up_to_signs(b.differential, closed_form_differential("deformed", *signs, k)) is not None
    assert time.perf_counter() - start < 10.0


def test_criterion_4_ainfinity_audits():
    for x2 in (0, 1):
        assert check_ainf_relations(associative_algebra(x2), 8).passed
    for model in ("formal", "deformed"):
        for signs in SIGNS:
            for obj in build_model(model, *signs):
                assert check_ainf_relations(obj, 8).passed
    for eps_m in (1, -1):
        for first in (0, 1):
            for coeff in (1, -1, 2, -2, F(1, 2)):
                M = corrupted_unit_module(eps_m, first, coeff)
                assert not check_ainf_relations(M, 8).passed
                w = unit_family_witness(M)
                assert w is not None
                assert w.inputs[0] == ("m", 0) and w.inputs[-1] == ("a", 0)
                assert all(x == ("a", 1) for x in w.inputs[1:-1])


def test_criterion_5_grassmann_sweep():
    start = time.perf_counter()
    count = 0
    for q in range(1, 16):
        for p in range(0, q):
            if not 2 * p + 1 < 2 * q:
                continue
            rep = involution_search(p, q)
            count += 1
            if q % 2:
                assert rep.l == 0 and rep.violating_t is None
                assert all(c.excess < 0 and c.dim % 2 == 0 and c.parity == (q - 1) % 2 for c in rep.components)
            else:
                assert rep.l == 1 and rep.violating_t == p + 1
                assert all(c.parity == q % 2 == 0 for c in rep.components)
                assert all(c.excess < 0 for c in rep.components if c.t != p + 1)
            assert rep.passed
    assert count == sum(q for q in range(1, 16))
    assert time.perf_counter() - start < 1.0


def test_criterion_6_wplus_fano_table():
    cases = [(k, n, d) for n in range(3, 8) for k in range(1, 3) for d in (1, 2, 3, 5, 9)][:50]
    assert len(cases) == 50
    for k, n, d in cases:
        w = wplus_fano_check(DivisorSpec(k, n, d))
        assert w.wplus == (d <= n or d >= k * (n - k) + n - 2)
        assert w.fano == (d < n)
        assert w.below_threshold == (d < 3)
    cubic = wplus_fano_check(DivisorSpec(1, 4, 3))
    assert cubic.wplus and cubic.fano and not cubic.below_threshold
    assert wplus_fano_check(DivisorSpec(1, 4, 2)).below_threshold


def test_criterion_7_finite_order_supertrace():
    rng = random.Random(7)
    for _ in range(500):
        k = rng.randint(1, 6)
        d0 = rng.randint(0, 4)
        m, diag, _, _ = random_finite_order_map(rng, k, d0, rng.randint(0, 4))
        rep = finite_order_supertrace_audit(m, k)
        assert rep.passed and rep.abs_value <= rep.dim + 1e-9
        oracle = sum(to_complex(diag.block0[i][i].coefficient(0)) for i in range(diag.space.dim0)) - sum(
            to_complex(diag.block1[i][i].coefficient(0)) for i in range(diag.space.dim1)
        )
        assert abs(to_complex(rep.str_value.coefficient(0)) - oracle) < 1e-9


def test_criterion_8_spectral_flow():
    start = time.perf_counter()
    rep = verify(200, seed=0)
    elapsed = time.perf_counter() - start
    assert rep["closed_form"]["max_error"] < 1e-8 and rep["closed_form"]["fourth_order"]
    assert rep["kernel_dims"] == {"zero": 2, "identity": 0, "log_rotation": 2}
    assert rep["agreements"] == 200 and all(r["dim"] <= 6 for r in rep["results"])
    assert elapsed < 60.0


def test_criterion_9_pipeline():
    def run() -> str:
        cert = pipeline.certificate(pipeline.c_zero_model(), 5)
        assert [r["bound"] for r in cert.rows] == [4, 16, 36, 64, 100]
        growth = pipeline.ring_classification(DivisorSpec(1, 4, 3))
        grading = pipeline.ring_classification(DivisorSpec(1, 6, 3))
        assert (growth.path, growth.verdict) == ("growth", "C[x]/x^2")
        assert (grading.path, grading.verdict) == ("grading", "C[x]/x^2")
        with pytest.raises(HypothesisFailure):
            pipeline.ring_classification(DivisorSpec(1, 4, 2))
        sf = verify(5, seed=11)
        return "\n".join(pipeline.dumps(r) for r in (cert.to_json(), growth.to_json(), grading.to_json(), sf))

    assert run() == run()
