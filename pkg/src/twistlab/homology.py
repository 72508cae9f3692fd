"""Ranks and homology of finite chain complexes over exact fields."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import linalg
from .errors import DimensionMismatch, NotAComplex
from .linalg import rank_exact

__all__ = ["ChainComplexData", "rank_exact", "homology_dims", "total_homology_dim"]


@dataclass(frozen=True)
class ChainComplexData:
    """Levels ``C_0 .. C_top`` with ``differentials[i]: C_i -> C_{i-1}`` for i >= 1.

    ``differentials[i]`` is a ``dims[i-1] x dims[i]`` matrix; ``differentials[0]``
    is ignored (the map to zero).  ``d_{i-1} d_i = 0`` is verified on construction.
    """

    dims: tuple[int, ...]
    differentials: tuple

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        diffs = list(self.differentials)
        if len(diffs) == len(dims) - 1:
            diffs = [None] + diffs
        if len(diffs) != len(dims):
            raise DimensionMismatch("need one differential per positive level")
        norm = [None]
        for i in range(1, len(dims)):
            d = diffs[i]
            if d is None:
                d = linalg.zeros(dims[i - 1], dims[i])
            d = [list(r) for r in d]
            rows = len(d)
            cols = len(d[0]) if d else dims[i]
            if rows != dims[i - 1] or (rows and cols != dims[i]):
                raise DimensionMismatch(f"d_{i} should be {dims[i-1]}x{dims[i]}")
            norm.append(d)
        for i in range(2, len(dims)):
            if dims[i - 2] and dims[i] and not linalg.product_is_zero(norm[i - 1], norm[i]):
                raise NotAComplex(f"d_{i-1} d_{i} != 0")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "differentials", tuple(norm))

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * d for i, d in enumerate(self.dims))


def _rank(d, rows: int, cols: int) -> int:
    if d is None or rows == 0 or cols == 0:
        return 0
    return rank_exact(d)


def homology_dims(c: ChainComplexData) -> list[int]:
    """dim H_i = dim ker d_i - rank d_{i+1}."""
    n = len(c.dims)
    ranks = [0] * (n + 1)
    for i in range(1, n):
        ranks[i] = _rank(c.differentials[i], c.dims[i - 1], c.dims[i])
    return [c.dims[i] - ranks[i] - ranks[i + 1] for i in range(n)]


def total_homology_dim(d: Sequence[Sequence], dim: int | None = None) -> int:
    """Homology of a single square differential with d^2 = 0 (Z/2-graded complexes)."""
    n = len(d) if dim is None else dim
    if n == 0:
        return 0
    if not linalg.product_is_zero(d, d):
        raise NotAComplex("d^2 != 0")
    return n - 2 * rank_exact(d)
