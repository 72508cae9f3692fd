"""Dehn-twist actions on a middle-homology lattice via the Picard-Lefschetz formula.

A twist about a sphere class ``L`` acts by ``A -> A - eps (L.A) L`` with
``eps = (-1)^(s(s-1)/2)``; homology outside the middle degree is fixed, so a
:class:`HomologyModel` only records its signed Euler number.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .errors import DimensionMismatch, InputError

Word = Sequence[tuple["SphereClass", int]]


def epsilon(s: int) -> int:
    return -1 if (s * (s - 1) // 2) % 2 else 1


@dataclass(frozen=True)
class SphereClass:
    vector: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vector", tuple(int(x) for x in self.vector))

    def __len__(self) -> int:
        return len(self.vector)


@dataclass(frozen=True)
class TwistLattice:
    s: int
    pairing: tuple[tuple[int, ...], ...]
    epsilon: int = field(init=False)

    def __post_init__(self):
        if self.s < 0:
            raise InputError("s must be non-negative")
        p = tuple(tuple(int(x) for x in row) for row in self.pairing)
        n = len(p)
        if n == 0 or any(len(row) != n for row in p):
            raise DimensionMismatch("pairing must be a nonempty square matrix")
        sym = 1 if self.s % 2 == 0 else -1
        for i in range(n):
            for j in range(n):
                if p[i][j] != sym * p[j][i]:
                    kind = "symmetric" if sym == 1 else "antisymmetric"
                    raise InputError(f"pairing must be {kind} for s={self.s}")
        object.__setattr__(self, "pairing", p)
        object.__setattr__(self, "epsilon", epsilon(self.s))

    @property
    def rank(self) -> int:
        return len(self.pairing)

    def dot(self, a: Sequence[int], b: Sequence[int]) -> int:
        """Intersection number a.b = a^T P b."""
        self._check(a)
        self._check(b)
        return sum(a[i] * self.pairing[i][j] * b[j] for i in range(self.rank) for j in range(self.rank))

    def _check(self, v: Sequence) -> None:
        if len(v) != self.rank:
            raise DimensionMismatch(f"vector of length {len(v)} in a rank-{self.rank} lattice")

    def is_consistent(self, L: SphereClass) -> bool:
        """For s even a Lagrangian sphere has L.L = 2 eps; this is what makes tau_L an involution."""
        return self.s % 2 == 1 or self.dot(L.vector, L.vector) == 2 * self.epsilon


def dehn_twist_matrix(lat: TwistLattice, L: SphereClass) -> list[list[int]]:
    """Matrix (columns = images of basis vectors) of A -> A - eps (L.A) L."""
    lat._check(L.vector)
    n = lat.rank
    row = [sum(L.vector[a] * lat.pairing[a][j] for a in range(n)) for j in range(n)]  # L.e_j
    eps = lat.epsilon
    return [[(1 if i == j else 0) - eps * row[j] * L.vector[i] for j in range(n)] for i in range(n)]


def _inverse_twist(lat: TwistLattice, L: SphereClass) -> list[list]:
    # rank-one update: (I - eps L w^T)^-1 = I + c L w^T with c = eps / (1 - eps L.L)
    n = lat.rank
    denom = 1 - lat.epsilon * lat.dot(L.vector, L.vector)
    if denom == 0:
        raise InputError("twist matrix is singular (eps * L.L = 1)")
    c = Fraction(lat.epsilon, denom)
    row = [sum(L.vector[a] * lat.pairing[a][j] for a in range(n)) for j in range(n)]
    out = [[(1 if i == j else 0) + c * row[j] * L.vector[i] for j in range(n)] for i in range(n)]
    if all(x.denominator == 1 for r in out for x in (Fraction(y) for y in r)):
        return [[int(x) for x in r] for r in out]
    return out


def twist_power(lat: TwistLattice, L: SphereClass, k: int) -> list[list]:
    base = dehn_twist_matrix(lat, L) if k >= 0 else _inverse_twist(lat, L)
    return linalg.matpow(base, abs(k))


def twist_word_action(lat: TwistLattice, word: Word) -> list[list]:
    """Ordered product T_{L_1}^{k_1} T_{L_2}^{k_2} ... of twist powers."""
    result = linalg.identity(lat.rank)
    for L, k in word:
        result = linalg.matmul(result, twist_power(lat, L, k))
    return result


def preserves_pairing(lat: TwistLattice, T: Sequence[Sequence]) -> bool:
    P = [list(r) for r in lat.pairing]
    return linalg.matmul(linalg.matmul(linalg.transpose(T), P), T) == P


@dataclass(frozen=True)
class HomologyModel:
    middle: TwistLattice
    off_middle_signed_euler: int
    classes: tuple[tuple[str, SphereClass], ...] = ()

    @property
    def s(self) -> int:
        return self.middle.s

    def euler_characteristic(self) -> int:
        return self.off_middle_signed_euler + (-1) ** self.s * self.middle.rank

    def cls(self, name: str) -> SphereClass:
        for key, value in self.classes:
            if key == name:
                return value
        raise KeyError(name)

    @classmethod
    def from_json(cls, data: dict | str) -> "HomologyModel":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            lat = TwistLattice(int(data["s"]), data["pairing"])
            classes = tuple(
                (name, SphereClass(vec)) for name, vec in sorted(data.get("classes", {}).items())
            )
            model = cls(lat, int(data.get("off_middle_signed_euler", 0)), classes)
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed lattice spec: {exc}") from exc
        for _, L in classes:
            lat._check(L.vector)
        return model

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "pairing": [list(r) for r in self.middle.pairing],
            "classes": {name: list(L.vector) for name, L in self.classes},
            "off_middle_signed_euler": self.off_middle_signed_euler,
        }


def lefschetz_number(model: HomologyModel, word: Word) -> int:
    """Off-middle signed Euler number plus (-1)^s times the middle trace."""
    tr = linalg.trace(twist_word_action(model.middle, word))
    return int(model.off_middle_signed_euler + (-1) ** model.s * tr)


def _restrict(lat: TwistLattice, T, basis: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    """Matrix of T on span(basis), which must be T-invariant."""
    cols = [list(b) for b in basis]
    B = linalg.transpose(cols)  # n x r
    out_cols = []
    for b in cols:
        image = linalg.matvec(T, b)
        coords = _solve_in_span(B, image)
        if coords is None:
            raise InputError("span is not invariant under the word")
        out_cols.append(coords)
    return linalg.transpose(out_cols)


def _solve_in_span(B, v) -> list[Fraction] | None:
    n = len(B)
    r = len(B[0]) if B else 0
    aug = [[Fraction(x) for x in B[i]] + [Fraction(v[i])] for i in range(n)]
    piv_cols = []
    row = 0
    for c in range(r):
        piv = next((i for i in range(row, n) if aug[i][c] != 0), None)
        if piv is None:
            return None
        aug[row], aug[piv] = aug[piv], aug[row]
        p = aug[row][c]
        aug[row] = [x / p for x in aug[row]]
        for i in range(n):
            if i != row and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[row])]
        piv_cols.append(c)
        row += 1
    if any(aug[i][r] != 0 for i in range(row, n)):
        return None
    return [aug[i][r] for i in range(r)]


def span_supertrace(lat: TwistLattice, word: Word, basis: Sequence[SphereClass]) -> Fraction:
    """(-1)^s times the trace of the word restricted to span(basis)."""
    T = twist_word_action(lat, word)
    R = _restrict(lat, T, [b.vector for b in basis])
    return (-1) ** lat.s * linalg.trace(R, Fraction(0))


@dataclass(frozen=True)
class GrowthRow:
    k: int
    lefschetz: int
    middle_supertrace: int


def growth_word(L1: SphereClass, L2: SphereClass, k: int) -> list[tuple[SphereClass, int]]:
    return [(L1, 2 * k), (L2, 2 * k)]


def growth_profile(model: HomologyModel, L1: SphereClass, L2: SphereClass, k_max: int) -> list[GrowthRow]:
    """Lefschetz numbers and span supertraces of tau_1^{2k} tau_2^{2k} for k = 1..k_max."""
    lat = model.middle
    if abs(lat.dot(L1.vector, L2.vector)) != 1:
        raise InputError("growth profile needs L1.L2 = +-1")
    rows = []
    for k in range(1, k_max + 1):
        word = growth_word(L1, L2, k)
        T = twist_word_action(lat, word)
        R = _restrict(lat, T, [L1.vector, L2.vector])
        lef = model.off_middle_signed_euler + (-1) ** lat.s * linalg.trace(T)
        st = (-1) ** lat.s * linalg.trace(R, Fraction(0))
        rows.append(GrowthRow(k, int(lef), int(st)))
    return rows


def standard_pair_lattice(s: int, orientation: int = 1) -> tuple[TwistLattice, SphereClass, SphereClass]:
    """Rank-2 lattice spanned by two spheres meeting once, L1.L2 = orientation.

    Self-intersections are 0 for s odd and 2 eps for s even (spheres in
    middle dimension).
    """
    if orientation not in (1, -1):
        raise InputError("orientation must be +-1")
    eps = epsilon(s)
    if s % 2:
        P = ((0, orientation), (-orientation, 0))
    else:
        P = ((2 * eps, orientation), (orientation, 2 * eps))
    return TwistLattice(s, P), SphereClass((1, 0)), SphereClass((0, 1))
