"""Combinatorics of divisors in Grassmannians and of involutions on Gr(2p+1, 2q)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import HypothesisFailure, InputError, InvalidComponent

# below this degree a divisor is a hyperplane or a quadric and its twist has order 1 or 2
MIN_DEGREE = 3


@dataclass(frozen=True)
class DivisorSpec:
    k: int
    n: int
    d: int

    def __post_init__(self):
        if not (1 <= self.k < self.n):
            raise InputError(f"need 1 <= k < n, got k={self.k}, n={self.n}")
        if self.d < 1:
            raise InputError(f"divisor degree must be positive, got {self.d}")

    @property
    def grassmannian_dim(self) -> int:
        return self.k * (self.n - self.k)

    @property
    def dim_x(self) -> int:
        return self.grassmannian_dim - 1

    def to_json(self) -> dict:
        return {"k": self.k, "n": self.n, "d": self.d}


@dataclass(frozen=True)
class WPlusReport:
    wplus: bool
    fano: bool
    dim_even: bool
    dim_x: int
    below_threshold: bool

    def to_json(self) -> dict:
        return {
            "wplus": self.wplus,
            "fano": self.fano,
            "dim_even": self.dim_even,
            "dim_x": self.dim_x,
            "below_threshold": self.below_threshold,
        }


def wplus_fano_check(spec: DivisorSpec) -> WPlusReport:
    k, n, d = spec.k, spec.n, spec.d
    return WPlusReport(
        wplus=d <= n or d >= k * (n - k) + n - 2,
        fano=d < n,
        dim_even=spec.dim_x % 2 == 0,
        dim_x=spec.dim_x,
        below_threshold=d < MIN_DEGREE,
    )


# -- involutions with eigenvalue split (q + l, q - l) ---------------------------

@dataclass(frozen=True)
class InvolutionSpec:
    p: int
    q: int
    l: int
    t: int

    def __post_init__(self):
        p, q, l, t = self.p, self.q, self.l, self.t
        k = 2 * p + 1
        if p < 0 or q - abs(l) < 0:
            raise InvalidComponent(f"bad parameters p={p}, q={q}, l={l}")
        if not (0 <= t <= k and t <= q + l and k - t <= q - l):
            raise InvalidComponent(f"t={t} is not an admissible component for p={p}, q={q}, l={l}")

    @property
    def plus_part(self) -> tuple[int, int]:
        """Gr(t, q + l)."""
        return self.t, self.q + self.l

    @property
    def minus_part(self) -> tuple[int, int]:
        """Gr(2p + 1 - t, q - l)."""
        return 2 * self.p + 1 - self.t, self.q - self.l


def _gr_dim(a: int, b: int) -> int:
    return a * (b - a)


def component_dim(inv: InvolutionSpec) -> int:
    return _gr_dim(*inv.plus_part) + _gr_dim(*inv.minus_part)


def fixed_component_excess(inv: InvolutionSpec) -> Fraction:
    """Closed form -(1 + 2p - 2t)(1 + 2p + 2l - 2t)/2 for dim(component) - dim Gr / 2."""
    p, l, t = inv.p, inv.l, inv.t
    return Fraction(-(1 + 2 * p - 2 * t) * (1 + 2 * p + 2 * l - 2 * t), 2)


def excess_by_dimensions(inv: InvolutionSpec) -> Fraction:
    """The same quantity computed from the dimensions directly."""
    return component_dim(inv) - Fraction(_gr_dim(2 * inv.p + 1, 2 * inv.q), 2)


def component_dim_parity(inv: InvolutionSpec) -> int:
    return component_dim(inv) % 2


def expected_parity(q: int, l: int) -> int:
    """q - 1 mod 2 for l = 0 and q mod 2 for l = 1, independent of t."""
    if l == 0:
        return (q - 1) % 2
    if l == 1:
        return q % 2
    raise InputError("closed-form parity is only stated for l in {0, 1}")


def plucker_sign(inv: InvolutionSpec) -> int:
    """Eigenvalue of the induced involution on the Pluecker coordinates of the component."""
    return -1 if (2 * inv.p + 1 - inv.t) % 2 else 1


@dataclass(frozen=True)
class ComponentRow:
    t: int
    dim: int
    parity: int
    excess: Fraction
    plucker_sign: int

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "dim": self.dim,
            "parity": self.parity,
            "excess": str(self.excess),
            "plucker_sign": self.plucker_sign,
        }


@dataclass(frozen=True)
class InvolutionReport:
    p: int
    q: int
    l: int
    violating_t: int | None
    sign_choice: str
    components: tuple[ComponentRow, ...]
    parity_matches: bool
    all_even: bool
    excess_negative_elsewhere: bool

    @property
    def passed(self) -> bool:
        ok_violation = self.violating_t is None if self.l == 0 else self.violating_t == self.p + 1
        return self.parity_matches and self.all_even and self.excess_negative_elsewhere and ok_violation

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "k": 2 * self.p + 1,
            "n": 2 * self.q,
            "l": self.l,
            "violating_t": self.violating_t,
            "sign_choice": self.sign_choice,
            "components": [c.to_json() for c in self.components],
            "parity_matches": self.parity_matches,
            "all_even": self.all_even,
            "excess_negative_elsewhere": self.excess_negative_elsewhere,
            "passed": self.passed,
            "imported_assumptions": [
                "existence of a smooth invariant divisor in the chosen eigen-linear system",
                "the fixed-locus criterion that turns an even-dimensional component into an infinite-order twist",
            ],
        }


def admissible_ts(p: int, q: int, l: int) -> list[int]:
    k = 2 * p + 1
    return [t for t in range(k + 1) if t <= q + l and k - t <= q - l]


def involution_search(p: int, q: int) -> InvolutionReport:
    """l = 0 for q odd, l = 1 for q even, with every component of the fixed locus tabulated."""
    if p < 0 or q < 1 or not 2 * p + 1 < 2 * q:
        raise InputError(f"need 0 <= p and 2p+1 < 2q, got p={p}, q={q}")
    l = 0 if q % 2 else 1
    rows = []
    for t in admissible_ts(p, q, l):
        inv = InvolutionSpec(p, q, l, t)
        ex = fixed_component_excess(inv)
        if ex != excess_by_dimensions(inv):
            raise AssertionError("closed-form excess disagrees with the dimension count")
        rows.append(ComponentRow(t, component_dim(inv), component_dim_parity(inv), ex, plucker_sign(inv)))
    bad = [r.t for r in rows if r.excess >= 0]
    violating = bad[0] if len(bad) == 1 else None
    if len(bad) > 1:
        raise AssertionError(f"several components with nonnegative excess: {bad}")
    # the chosen symbol eps is the one whose opposite eigenspace Pi_{-eps} misses the
    # violating component, i.e. eps is the Pluecker sign of that component
    if violating is None:
        sign_choice = "any"
    else:
        vsign = next(r.plucker_sign for r in rows if r.t == violating)
        sign_choice = "+" if vsign == 1 else "-"
    exp = expected_parity(q, l)
    return InvolutionReport(
        p=p,
        q=q,
        l=l,
        violating_t=violating,
        sign_choice=sign_choice,
        components=tuple(rows),
        parity_matches=all(r.parity == exp for r in rows),
        all_even=all(r.parity == 0 for r in rows),
        excess_negative_elsewhere=all(r.excess < 0 for r in rows if r.t != violating),
    )


# -- grading shortcut ---------------------------------------------------------

@dataclass(frozen=True)
class GradingReport:
    grading_forces_x2_zero: bool
    N: int
    dim_x: int

    def to_json(self) -> dict:
        return {"grading_forces_x2_zero": self.grading_forces_x2_zero, "N": self.N, "dim_x": self.dim_x}


def minimal_chern_grading(spec: DivisorSpec) -> GradingReport:
    """N = n - d; true iff dim X is even and not divisible by N."""
    w = wplus_fano_check(spec)
    if not w.wplus:
        raise HypothesisFailure("wplus", f"{spec.to_json()} fails the W+ condition")
    if not w.fano:
        raise HypothesisFailure("fano", f"grading argument needs d < n, got d={spec.d}, n={spec.n}")
    N = spec.n - spec.d
    forced = w.dim_even and spec.dim_x % N != 0
    return GradingReport(forced, N, spec.dim_x)
