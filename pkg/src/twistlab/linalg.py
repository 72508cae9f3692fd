"""Small exact linear algebra over Python number-like scalars.

Matrices are lists of row lists.  Everything here is generic over any
scalar type with ``+ - *`` (ints, Fractions, cyclotomic and Novikov
elements); rank and determinant have a fraction-free integer path.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from numbers import Rational
from typing import Callable, Sequence

Matrix = list[list]


class DimensionMismatch(ValueError):
    pass


def shape(m: Sequence[Sequence]) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def identity(n: int, one=1, zero=0) -> Matrix:
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def zeros(r: int, c: int, zero=0) -> Matrix:
    return [[zero] * c for _ in range(r)]


def transpose(m: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence], zero=0) -> Matrix:
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ca != rb:
        raise DimensionMismatch(f"cannot multiply {ra}x{ca} by {rb}x{cb}")
    bt = transpose(b) if b else []
    out = []
    for row in a:
        new_row = []
        for col in bt:
            acc = zero
            for x, y in zip(row, col):
                if x == 0 or y == 0:
                    continue
                acc = acc + x * y
            new_row.append(acc)
        out.append(new_row)
    return out


def matvec(a: Sequence[Sequence], v: Sequence, zero=0) -> list:
    return [sum((x * y for x, y in zip(row, v)), zero) for row in a]


def matpow(m: Sequence[Sequence], n: int, one=1, zero=0) -> Matrix:
    if n < 0:
        raise ValueError("negative power; invert first")
    result = identity(len(m), one, zero)
    base = [list(r) for r in m]
    while n:
        if n & 1:
            result = matmul(result, base, zero)
        base = matmul(base, base, zero)
        n >>= 1
    return result


def add(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    if shape(a) != shape(b):
        raise DimensionMismatch("shapes differ")
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def sub(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    if shape(a) != shape(b):
        raise DimensionMismatch("shapes differ")
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(c, a: Sequence[Sequence]) -> Matrix:
    return [[c * x for x in row] for row in a]


def product_is_zero(a: Sequence[Sequence], b: Sequence[Sequence]) -> bool:
    """``a @ b == 0`` computed sparsely."""
    if shape(a)[1] != shape(b)[0]:
        raise DimensionMismatch("inner dimensions differ")
    b_rows = [[(j, y) for j, y in enumerate(row) if y != 0] for row in b]
    for row in a:
        acc: dict[int, object] = {}
        for t, x in enumerate(row):
            if x == 0:
                continue
            for j, y in b_rows[t]:
                acc[j] = acc.get(j, 0) + x * y
        if any(v != 0 for v in acc.values()):
            return False
    return True


def trace(m: Sequence[Sequence], zero=0):
    return sum((m[i][i] for i in range(len(m))), zero)


def is_zero(m: Sequence[Sequence]) -> bool:
    return all(x == 0 for row in m for x in row)


def is_identity(m: Sequence[Sequence]) -> bool:
    return all((x == 1) if i == j else (x == 0) for i, row in enumerate(m) for j, x in enumerate(row))


def block_diag(a: Sequence[Sequence], b: Sequence[Sequence], zero=0) -> Matrix:
    na, nb = len(a), len(b)
    out = zeros(na + nb, na + nb, zero)
    for i in range(na):
        for j in range(na):
            out[i][j] = a[i][j]
    for i in range(nb):
        for j in range(nb):
            out[na + i][na + j] = b[i][j]
    return out


def kron(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    ra, ca = shape(a)
    rb, cb = shape(b)
    return [
        [a[i // rb][j // cb] * b[i % rb][j % cb] for j in range(ca * cb)]
        for i in range(ra * rb)
    ]


# -- fraction-free elimination -------------------------------------------------

def _is_rational_matrix(m: Sequence[Sequence]) -> bool:
    return all(isinstance(x, (int, Rational)) for row in m for x in row)


def _integer_rows(m: Sequence[Sequence]) -> list[list[int]]:
    rows = []
    for row in m:
        fr = [Fraction(x) for x in row]
        den = lcm(*(x.denominator for x in fr)) if fr else 1
        rows.append([int(x * den) for x in fr])
    return rows


def _bareiss(rows: list[list[int]]) -> tuple[int, int]:
    """In-place Bareiss elimination; returns (rank, sign * last pivot)."""
    nr, nc = shape(rows)
    prev = 1
    sign = 1
    r = 0
    for c in range(nc):
        if r == nr:
            break
        piv = next((i for i in range(r, nr) if rows[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            sign = -sign
        p = rows[r][c]
        for i in range(r + 1, nr):
            f = rows[i][c]
            ri = rows[i]
            if f == 0 and not any(ri[c + 1 :]):
                continue  # zero row stays zero
            rr = rows[r]
            for j in range(c + 1, nc):
                ri[j] = (p * ri[j] - f * rr[j]) // prev
            ri[c] = 0
        prev = p
        r += 1
    return r, sign * prev


def _rank_field(m: Sequence[Sequence]) -> int:
    rows = [list(r) for r in m]
    nr, nc = shape(rows)
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        for i in range(r + 1, nr):
            f = rows[i][c]
            if f == 0:
                continue
            f = f * inv
            rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == nr:
            break
    return r


def rank_exact(m: Sequence[Sequence]) -> int:
    """Exact rank; integer/rational input goes through Bareiss elimination."""
    if not m or not m[0]:
        return 0
    if _is_rational_matrix(m):
        return _bareiss(_integer_rows(m))[0]
    return _rank_field(m)


def det_exact(m: Sequence[Sequence]):
    n, c = shape(m)
    if n != c:
        raise DimensionMismatch("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    if not _is_rational_matrix(m):
        raise TypeError("det_exact handles rational matrices only")
    rows = [[Fraction(x) for x in row] for row in m]
    scale_den = 1
    int_rows = []
    for row in rows:
        den = lcm(*(x.denominator for x in row))
        scale_den *= den
        int_rows.append([int(x * den) for x in row])
    r, last = _bareiss(int_rows)
    if r < n:
        return Fraction(0)
    return Fraction(last, scale_den)


def inverse_exact(
    m: Sequence[Sequence],
    inv: Callable = lambda x: 1 / Fraction(x),
    one=Fraction(1),
    zero=Fraction(0),
    pivot_key: Callable | None = None,
) -> Matrix:
    """Gauss-Jordan inverse with a pluggable scalar inverse.

    ``pivot_key`` ranks candidate pivots (smallest wins); the Novikov inverse
    uses the valuation so pivots are units of the valuation ring.
    """
    n, c = shape(m)
    if n != c:
        raise DimensionMismatch("inverse of a non-square matrix")
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        cands = [i for i in range(col, n) if aug[i][col] != 0]
        if not cands:
            raise ZeroDivisionError("singular matrix")
        piv = min(cands, key=(lambda i: pivot_key(aug[i][col]))) if pivot_key else cands[0]
        aug[col], aug[piv] = aug[piv], aug[col]
        p_inv = inv(aug[col][col])
        aug[col] = [x * p_inv for x in aug[col]]
        for i in range(n):
            if i == col:
                continue
            f = aug[i][col]
            if f == 0:
                continue
            aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    return [row[n:] for row in aug]
