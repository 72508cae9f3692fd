"""Z/2-graded spaces, degree-0 maps and their supertraces."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .cyclotomic import to_complex
from .errors import DegenerateFixedPoint, DimensionMismatch, NotFiniteOrder
from .novikov import NovikovScalar, format_novikov, parse_novikov

ABS_TOL = 1e-9


@dataclass(frozen=True)
class GradedSpace:
    dim0: int
    dim1: int

    def __post_init__(self):
        if self.dim0 < 0 or self.dim1 < 0:
            raise ValueError("dimensions must be non-negative")

    @property
    def dim(self) -> int:
        return self.dim0 + self.dim1


def _check_square(block, n=None):
    rows, cols = linalg.shape(block)
    if block and rows != cols:
        raise DimensionMismatch(f"block is {rows}x{cols}, not square")
    if n is not None and rows != n:
        raise DimensionMismatch(f"block has size {rows}, expected {n}")


@dataclass(frozen=True)
class GradedMap:
    """A degree-0 map, stored as its even and odd diagonal blocks."""

    block0: tuple
    block1: tuple
    space: GradedSpace = field(init=False)

    def __post_init__(self):
        b0 = tuple(tuple(r) for r in self.block0)
        b1 = tuple(tuple(r) for r in self.block1)
        _check_square(b0)
        _check_square(b1)
        object.__setattr__(self, "block0", b0)
        object.__setattr__(self, "block1", b1)
        object.__setattr__(self, "space", GradedSpace(len(b0), len(b1)))

    @classmethod
    def from_matrix(cls, m: Sequence[Sequence], dim0: int, dim1: int) -> "GradedMap":
        """Split a full matrix on V0 + V1; odd (off-diagonal) parts must vanish."""
        n = dim0 + dim1
        _check_square(m, n)
        for i in range(n):
            for j in range(n):
                if (i < dim0) != (j < dim0) and m[i][j] != 0:
                    raise ValueError("map has a nonzero odd component; only degree-0 maps are allowed")
        b0 = [row[:dim0] for row in m[:dim0]]
        b1 = [row[dim0:] for row in m[dim0:]]
        return cls(b0, b1)

    @classmethod
    def identity(cls, dim0: int, dim1: int, one=Fraction(1), zero=Fraction(0)) -> "GradedMap":
        return cls(linalg.identity(dim0, one, zero), linalg.identity(dim1, one, zero))

    def full_matrix(self, zero=Fraction(0)) -> list[list]:
        return linalg.block_diag([list(r) for r in self.block0], [list(r) for r in self.block1], zero)

    def compose(self, other: "GradedMap") -> "GradedMap":
        if self.space != other.space:
            raise DimensionMismatch("graded dimensions differ")
        return GradedMap(
            linalg.matmul(self.block0, other.block0, Fraction(0)),
            linalg.matmul(self.block1, other.block1, Fraction(0)),
        )

    def __matmul__(self, other: "GradedMap") -> "GradedMap":
        return self.compose(other)

    def power(self, k: int) -> "GradedMap":
        return GradedMap(
            linalg.matpow(self.block0, k, Fraction(1), Fraction(0)),
            linalg.matpow(self.block1, k, Fraction(1), Fraction(0)),
        )

    def is_identity(self) -> bool:
        return linalg.is_identity(self.block0) and linalg.is_identity(self.block1)

    def direct_sum(self, other: "GradedMap") -> "GradedMap":
        return GradedMap(
            linalg.block_diag(self.block0, other.block0, Fraction(0)),
            linalg.block_diag(self.block1, other.block1, Fraction(0)),
        )

    def tensor(self, other: "GradedMap") -> "GradedMap":
        # (V (x) W)^0 = V0 W0 + V1 W1,  (V (x) W)^1 = V0 W1 + V1 W0
        even = linalg.block_diag(
            linalg.kron(self.block0, other.block0), linalg.kron(self.block1, other.block1), Fraction(0)
        )
        odd = linalg.block_diag(
            linalg.kron(self.block0, other.block1), linalg.kron(self.block1, other.block0), Fraction(0)
        )
        return GradedMap(even, odd)

    def conjugate(self, g: "GradedMap", g_inv: "GradedMap") -> "GradedMap":
        """``g m g^-1`` with the inverse supplied by the caller."""
        return g.compose(self).compose(g_inv)

    def to_json(self) -> dict:
        def enc(block):
            return [[format_novikov(NovikovScalar.coerce(x)) for x in row] for row in block]

        return {
            "dim0": self.space.dim0,
            "dim1": self.space.dim1,
            "block0": enc(self.block0),
            "block1": enc(self.block1),
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "GradedMap":
        if isinstance(data, str):
            data = json.loads(data)

        def dec(block):
            return [[parse_novikov(str(x)) for x in row] for row in block]

        m = cls(dec(data.get("block0", [])), dec(data.get("block1", [])))
        if m.space != GradedSpace(int(data["dim0"]), int(data["dim1"])):
            raise DimensionMismatch("declared dims do not match block sizes")
        return m


def supertrace(m: GradedMap):
    """Tr on the even block minus Tr on the odd block."""
    return linalg.trace(m.block0, Fraction(0)) - linalg.trace(m.block1, Fraction(0))


def fixed_point_degree(M: Sequence[Sequence]) -> int:
    """Floer degree of a nondegenerate fixed point with linearization M: 0 iff det(Id - M) > 0."""
    n = len(M)
    d = linalg.det_exact(linalg.sub(linalg.identity(n), M))
    if d == 0:
        raise DegenerateFixedPoint("det(Id - M) = 0")
    return 0 if d > 0 else 1


@dataclass
class AuditReport:
    is_order_k: bool
    str_value: NovikovScalar
    support_is_q0: bool
    abs_bound_ok: bool
    abs_value: float
    dim: int

    @property
    def passed(self) -> bool:
        return self.is_order_k and self.support_is_q0 and self.abs_bound_ok

    def to_json(self) -> dict:
        return {
            "is_order_k": self.is_order_k,
            "str_value": format_novikov(self.str_value),
            "support_is_q0": self.support_is_q0,
            "abs_bound_ok": self.abs_bound_ok,
            "abs_value": self.abs_value,
            "dim": self.dim,
        }


def finite_order_supertrace_audit(m: GradedMap, k: int) -> AuditReport:
    if k < 1:
        raise ValueError("order must be positive")
    if not m.power(k).is_identity():
        raise NotFiniteOrder(f"m^{k} is not the identity")
    value = NovikovScalar.coerce(supertrace(m))
    support_ok = all(e == 0 for e in value.support())
    a = value.coefficient(0)
    abs_a = abs(to_complex(a))
    return AuditReport(
        is_order_k=True,
        str_value=value,
        support_is_q0=support_ok,
        abs_bound_ok=abs_a <= m.space.dim + ABS_TOL,
        abs_value=abs_a,
        dim=m.space.dim,
    )


@dataclass(frozen=True)
class FixedComponentData:
    normal_sign: int
    euler_char: int

    def __post_init__(self):
        if self.normal_sign not in (1, -1):
            raise ValueError("normal_sign must be +1 or -1")


def signed_lefschetz(components: Iterable[FixedComponentData]) -> int:
    return sum(c.normal_sign * c.euler_char for c in components)


# -- random finite-order maps over the Novikov field ---------------------------

def random_invertible_conjugator(rng, n: int, moves: int = 4, exponents=(0, Fraction(1, 2), 1)):
    """A random invertible Novikov matrix with invertible q^0 part and its exact inverse.

    Built from elementary moves ``Id + c q^w E_ij`` (inverse ``Id - c q^w E_ij``),
    nonzero rational diagonal scalings and row swaps, so both factors have
    finite support.
    """
    one, zero = NovikovScalar.coerce(1), NovikovScalar()
    g = linalg.identity(n, one, zero)
    g_inv = linalg.identity(n, one, zero)
    if n == 0:
        return g, g_inv
    for _ in range(moves):
        kind = rng.choice(("elem", "elem", "scale", "swap")) if n > 1 else "scale"
        if kind == "elem":
            i, j = rng.sample(range(n), 2)
            c = Fraction(rng.choice((-2, -1, 1, 2, 3)), rng.choice((1, 2)))
            w = rng.choice(exponents)
            e = linalg.identity(n, one, zero)
            e_inv = linalg.identity(n, one, zero)
            e[i][j] = NovikovScalar.monomial(c, w)
            e_inv[i][j] = NovikovScalar.monomial(-c, w)
        elif kind == "scale":
            i = rng.randrange(n)
            c = Fraction(rng.choice((-3, -2, -1, 1, 2, 3)), rng.choice((1, 2, 5)))
            e = linalg.identity(n, one, zero)
            e_inv = linalg.identity(n, one, zero)
            e[i][i] = NovikovScalar.monomial(c)
            e_inv[i][i] = NovikovScalar.monomial(1 / c)
        else:
            i, j = rng.sample(range(n), 2)
            e = linalg.identity(n, one, zero)
            e[i][i] = e[j][j] = zero
            e[i][j] = e[j][i] = one
            e_inv = e
        g = linalg.matmul(e, g, zero)
        g_inv = linalg.matmul(g_inv, e_inv, zero)
    return g, g_inv


def random_finite_order_map(rng, k: int, dim0: int, dim1: int, moves: int = 4):
    """Diagonal map with k-th roots of unity as eigenvalues, conjugated over the Novikov field.

    Returns ``(m, diag, g, g_inv)`` where ``m = g diag g^-1`` exactly.
    """
    from .cyclotomic import Cyclotomic

    def roots(d):
        return [NovikovScalar.coerce(Cyclotomic.zeta(k, rng.randrange(k))) for _ in range(d)]

    zero = NovikovScalar()
    d0 = linalg.identity(dim0, zero, zero)
    for i, r in enumerate(roots(dim0)):
        d0[i][i] = r
    d1 = linalg.identity(dim1, zero, zero)
    for i, r in enumerate(roots(dim1)):
        d1[i][i] = r
    diag = GradedMap(d0, d1)
    g0, g0_inv = random_invertible_conjugator(rng, dim0, moves)
    g1, g1_inv = random_invertible_conjugator(rng, dim1, moves)
    g, g_inv = GradedMap(g0, g1), GradedMap(g0_inv, g1_inv)
    return diag.conjugate(g, g_inv), diag, g, g_inv
