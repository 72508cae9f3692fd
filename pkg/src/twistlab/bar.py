"""The k-truncated bar complex  sum_{j<k} M (x) Abar^{(x) j} (x) N  and its homology."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .ainfinity import (
    Q_MAX,
    AInfinityAlgebra,
    AInfinityModule,
    _Context,
    build_model,
    check_ainf_relations,
)
from .errors import NotAComplex, RelationCheckFailed
from .homology import ChainComplexData, total_homology_dim

Generator = tuple[int, tuple[int, ...], int]  # (m index, word in Abar, n index)


@dataclass
class BarComplexInstance:
    k: int
    generators: list[Generator]
    differential: list[list[Fraction]]  # column = source generator

    @property
    def dim(self) -> int:
        return len(self.generators)

    def word_length(self, g: int) -> int:
        return len(self.generators[g][1])

    def as_chain_complex(self) -> ChainComplexData:
        """Grade by word length; valid when the differential lowers it by exactly one."""
        by_len: dict[int, list[int]] = {}
        for i, g in enumerate(self.generators):
            by_len.setdefault(len(g[1]), []).append(i)
        levels = [by_len.get(j, []) for j in range(self.k)]
        for col in range(self.dim):
            for row in range(self.dim):
                if self.differential[row][col] != 0 and self.word_length(row) != self.word_length(col) - 1:
                    raise ValueError("differential does not lower word length by one")
        diffs = [None]
        for j in range(1, self.k):
            diffs.append([[self.differential[r][c] for c in levels[j]] for r in levels[j - 1]])
        return ChainComplexData(tuple(len(l) for l in levels), tuple(diffs))


def _ensure_verified(obj, q_max: int) -> None:
    if obj._verified_to >= q_max:
        return
    report = check_ainf_relations(obj, q_max, stop_at_first=True)
    if not report.passed:
        v = report.violations[0]
        raise RelationCheckFailed(f"{type(obj).__name__} fails the {v.kind} check at {v.describe()}")


def build_truncated_bar(
    M: AInfinityModule,
    A: AInfinityAlgebra,
    N: AInfinityModule,
    k: int,
    q_max: int = Q_MAX,
    verify: bool = True,
) -> BarComplexInstance:
    """Generators m (x) a_1..a_j (x) n for j < k and the exact bar differential.

    On a block ``Id^p (x) mu^q (x) Id^r`` the sign is ``(-1)^clubs (-1)^r`` with
    ``clubs`` the degree sum of the r inputs right of the block (the final
    module element included).  Algebra outputs are projected to Abar.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if M.side != "right" or N.side != "left":
        raise ValueError("M must be a right module and N a left module")
    if M.algebra is not A or N.algebra is not A:
        raise ValueError("modules must be over the given algebra")
    if verify:
        for obj in (A, M, N):
            _ensure_verified(obj, q_max)

    abar = A.reduced_basis
    gens: list[Generator] = []
    for j in range(k):
        for m in range(M.dim):
            for word in itertools.product(abar, repeat=j):
                for n in range(N.dim):
                    gens.append((m, word, n))
    index = {g: i for i, g in enumerate(gens)}
    size = len(gens)
    D = [[Fraction(0)] * size for _ in range(size)]
    ctx = _Context(A, right=M, left=N)
    caps = {"m": M.max_arity, "a": A.max_arity, "n": N.max_arity}

    for col, (m, word, n) in enumerate(gens):
        labels = (("m", m),) + tuple(("a", a) for a in word) + (("n", n),)
        L = len(labels)
        blocks = [(0, q) for q in range(1, min(caps["m"], L - 1) + 1)]
        for p in range(1, L):
            blocks.extend((p, q) for q in range(1, min(caps["a"], L - p - 1) + 1))
            if L - p <= caps["n"]:
                blocks.append((p, L - p))
        for p, q in blocks:
            end = p + q
            inner = ctx.mu(labels[p:end])
            if not inner:
                continue
            r = L - end
            clubs = sum(ctx.degree(l) for l in labels[end:])
            sign = -1 if (clubs + r) % 2 else 1
            for (okind, oidx), c in inner.items():
                if okind == "a" and oidx == A.unit:
                    continue  # projection A -> Abar
                new = labels[:p] + ((okind, oidx),) + labels[end:]
                target = (new[0][1], tuple(i for _, i in new[1:-1]), new[-1][1])
                row = index.get(target)
                if row is None:
                    continue  # only reachable with mu^1 raising length, which never happens
                D[row][col] += sign * c
    bar = BarComplexInstance(k, gens, D)
    if not linalg.product_is_zero(D, D):
        raise NotAComplex("bar differential does not square to zero")
    return bar


def bar_homology(b: BarComplexInstance) -> int:
    """Total homology dimension."""
    return total_homology_dim(b.differential, b.dim)


# -- closed form for the rank-one associative models -----------------------------

def closed_form_differential(model: str, eps_m: int, eps_n: int, k: int) -> list[list[int]]:
    """d(m x^j n) = ((-1)^j eps_n + eps_m) m x^{j-1} n for the deformed model, zero for the formal one."""
    D = [[0] * k for _ in range(k)]
    if model.startswith("formal"):
        return D
    for j in range(1, k):
        D[j - 1][j] = (-1) ** j * eps_n + eps_m
    return D


def closed_form_homology(model: str, eps_m: int, eps_n: int, k: int) -> int:
    D = closed_form_differential(model, eps_m, eps_n, k)
    return k - 2 * sum(1 for j in range(1, k) if D[j - 1][j] != 0)


def match_up_to_signs(D, C) -> list[int] | None:
    """Signs s with s_i s_j D_ij = C_ij for all i, j, or None if no such rescaling exists."""
    n = len(D)
    if len(C) != n:
        return None
    adj: dict[int, list[tuple[int, int]]] = {i: [] for i in range(n)}
    for i in range(n):
        for j in range(n):
            d, c = D[i][j], C[i][j]
            if (d == 0) != (c == 0):
                return None
            if d == 0:
                continue
            if abs(d) != abs(c):
                return None
            rel = 1 if d == c else -1
            adj[i].append((j, rel))
            adj[j].append((i, rel))
    signs: list[int | None] = [None] * n
    for start in range(n):
        if signs[start] is not None:
            continue
        signs[start] = 1
        stack = [start]
        while stack:
            i = stack.pop()
            for j, rel in adj[i]:
                want = signs[i] * rel
                if signs[j] is None:
                    signs[j] = want
                    stack.append(j)
                elif signs[j] != want:
                    return None
    return [int(s) for s in signs]  # type: ignore[arg-type]


@dataclass
class BarRow:
    k: int
    dim: int
    closed_form_dim: int
    matches_closed_form: bool

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "dim": self.dim,
            "closed_form_dim": self.closed_form_dim,
            "matches_closed_form": self.matches_closed_form,
        }


def model_bar_table(model: str, eps_m: int, eps_n: int, k_values) -> list[BarRow]:
    A, M, N = build_model(model, eps_m, eps_n)
    rows = []
    for k in k_values:
        b = build_truncated_bar(M, A, N, k)
        C = closed_form_differential(model, eps_m, eps_n, k)
        matches = match_up_to_signs(b.differential, C) is not None
        rows.append(BarRow(k, bar_homology(b), closed_form_homology(model, eps_m, eps_n, k), matches))
    return rows


def with_acyclic_summand(M: AInfinityModule) -> AInfinityModule:
    """M plus the cone of the identity on M: copies u_i (deg d_i), v_i (deg d_i + 1), mu^1(u_i) = v_i.

    Higher operations are copied onto both summands; the sign on the shifted
    copy is whichever one satisfies the relations.
    """
    n = M.dim
    u = lambda i: n + i
    v = lambda i: 2 * n + i
    for sign in (1, -1):
        ops: dict = {1: {k: dict(val) for k, val in M.ops.get(1, {}).items()}}
        for i in range(n):
            ops[1][(u(i),)] = {v(i): Fraction(1)}
        for q, tbl in M.ops.items():
            if q == 1:
                continue
            new = ops.setdefault(q, {})
            for inputs, out in tbl.items():
                new[inputs] = dict(out)
                pos = 0 if M.side == "right" else len(inputs) - 1
                for shift, c in ((u, 1), (v, sign)):
                    moved = list(inputs)
                    moved[pos] = shift(inputs[pos])
                    new[tuple(moved)] = {shift(o): c * val for o, val in out.items()}
        degrees = M.degrees + M.degrees + tuple((d + 1) % 2 for d in M.degrees)
        names = M.names + tuple(f"u{i}" for i in range(n)) + tuple(f"v{i}" for i in range(n))
        cand = AInfinityModule(M.algebra, M.side, degrees, ops, names)
        if check_ainf_relations(cand, Q_MAX, stop_at_first=True).passed:
            return cand
    raise RelationCheckFailed("no sign makes the cone of the identity a module")
