"""Exact square integer matrices, reduction mod 2**n and the chain symplectic form.

Matrices are tuples of row tuples of Python ints, so they are hashable and
never overflow.  A ``None`` modulus means exact arithmetic over the integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

Matrix = tuple[tuple[int, ...], ...]

MAX_LEVEL = 6


class NotSymplecticError(ValueError):
    pass


@dataclass(frozen=True)
class Modulus:
    """The modulus 2**n, 1 <= n <= MAX_LEVEL."""

    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or not 1 <= self.n <= MAX_LEVEL:
            raise ValueError(f"level must be an integer in [1, {MAX_LEVEL}], got {self.n!r}")

    @property
    def value(self) -> int:
        return 1 << self.n

    def __str__(self) -> str:
        return f"2^{self.n}"


def as_matrix(rows: Iterable[Iterable[int]]) -> Matrix:
    m = tuple(tuple(int(x) for x in row) for row in rows)
    if any(len(row) != len(m) for row in m):
        raise ValueError("matrix must be square")
    return m


def identity(size: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(size)) for i in range(size))


def reduce(a: Matrix, m: Modulus | None) -> Matrix:
    if m is None:
        return a
    q = m.value
    return tuple(tuple(x % q for x in row) for row in a)


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def mat_mul(a: Matrix, b: Matrix, m: Modulus | None = None) -> Matrix:
    if len(a) != len(b):
        raise ValueError(f"size mismatch: {len(a)} vs {len(b)}")
    cols = tuple(zip(*b))
    prod = tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)
    return reduce(prod, m)


def mat_pow(a: Matrix, k: int, m: Modulus | None = None) -> Matrix:
    if k < 0:
        raise ValueError("negative exponent")
    result = identity(len(a))
    base = a
    while k:
        if k & 1:
            result = mat_mul(result, base, m)
        base = mat_mul(base, base, m)
        k >>= 1
    return result


def chain_form(g: int) -> Matrix:
    """The 2g x 2g intersection form of a chain of cycles c_1, ..., c_2g."""
    if g < 1:
        raise ValueError("genus must be positive")
    d = 2 * g
    rows = [[0] * d for _ in range(d)]
    for i in range(d - 1):
        rows[i][i + 1] = 1
        rows[i + 1][i] = -1
    return as_matrix(rows)


def standard_form(g: int) -> Matrix:
    """The block form [[0, I], [-I, 0]]."""
    d = 2 * g
    rows = [[0] * d for _ in range(d)]
    for i in range(g):
        rows[i][g + i] = 1
        rows[g + i][i] = -1
    return as_matrix(rows)


def determinant(a: Matrix) -> int:
    # fraction-free Bareiss elimination
    n = len(a)
    if n == 0:
        return 1
    rows = [list(r) for r in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            for r in range(k + 1, n):
                if rows[r][k] != 0:
                    rows[k], rows[r] = rows[r], rows[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = rows[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                rows[i][j] = (rows[i][j] * pivot - rows[i][k] * rows[k][j]) // prev
        prev = pivot
    return sign * rows[n - 1][n - 1]


@lru_cache(maxsize=None)
def _integer_inverse(e: Matrix) -> Matrix:
    n = len(e)
    if abs(determinant(e)) != 1:
        raise ValueError("form is not unimodular")
    # Gauss-Jordan over the rationals; the result is integral for unimodular input
    from fractions import Fraction

    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(e)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    inv = [[x for x in row[n:]] for row in aug]
    assert all(x.denominator == 1 for row in inv for x in row)
    return as_matrix([[int(x) for x in row] for row in inv])


def is_symplectic(a: Matrix, e: Matrix, m: Modulus | None = None) -> bool:
    if len(a) != len(e):
        raise ValueError(f"size mismatch: {len(a)} vs {len(e)}")
    lhs = mat_mul(mat_mul(transpose(a), e), a, m)
    return lhs == reduce(e, m)


def symplectic_inverse(a: Matrix, e: Matrix, m: Modulus | None = None) -> Matrix:
    """Inverse of an e-symplectic matrix, computed as e^-1 a^T e."""
    if not is_symplectic(a, e, m):
        raise NotSymplecticError("matrix does not preserve the form")
    return mat_mul(mat_mul(_integer_inverse(e), transpose(a)), e, m)


def congruence_level(a: Matrix, m: Modulus) -> int:
    """Largest k <= n with a == I mod 2**k (0 when a is not I mod 2)."""
    diffs = [x - int(i == j) for i, row in enumerate(a) for j, x in enumerate(row)]
    level = 0
    for k in range(1, m.n + 1):
        q = 1 << k
        if any(x % q for x in diffs):
            break
        level = k
    return level


def sp_group_order(g: int, n: int) -> int:
    """|Sp(2g, Z/2^n)|."""
    if g < 1 or n < 1:
        raise ValueError("genus and level must be positive")
    order = 2 ** (g * g)
    for i in range(1, g + 1):
        order *= 2 ** (2 * i) - 1
    return order * gamma_quotient_order(g, n)


def gamma_quotient_order(g: int, n: int) -> int:
    """|Gamma(2) / Gamma(2^n)| = 2^((n-1) g (2g+1))."""
    if g < 1 or n < 1:
        raise ValueError("genus and level must be positive")
    return 2 ** ((n - 1) * g * (2 * g + 1))


def encode(a: Matrix, m: Modulus) -> bytes:
    """Row-major, n bits per entry, little-endian bit packing.

    Entry k (row-major) occupies bits k*n .. k*n + n - 1 of a little-endian
    integer of ceil(d*d*n / 8) bytes.
    """
    n = m.n
    q = m.value
    packed = 0
    shift = 0
    for row in a:
        for x in row:
            if not 0 <= x < q:
                raise ValueError(f"entry {x} not reduced mod {q}")
            packed |= x << shift
            shift += n
    return packed.to_bytes((shift + 7) // 8, "little")


def decode(data: bytes, size: int, m: Modulus) -> Matrix:
    n = m.n
    mask = m.value - 1
    expected = (size * size * n + 7) // 8
    if len(data) != expected:
        raise ValueError(f"expected {expected} bytes, got {len(data)}")
    packed = int.from_bytes(data, "little")
    flat = [(packed >> (k * n)) & mask for k in range(size * size)]
    return tuple(tuple(flat[r * size:(r + 1) * size]) for r in range(size))


def symplectic_basis_change(e: Matrix) -> Matrix:
    """Integer P with P^T e P = standard_form(g).

    Columns of P are a_1..a_g, b_1..b_g with <a_k, b_k> = 1 and all other
    pairings zero (symplectic Gram-Schmidt; needs a unit pairing at each step).
    """
    d = len(e)
    if d % 2:
        raise ValueError("form size must be even")

    def pair(x: Sequence[int], y: Sequence[int]) -> int:
        return sum(x[i] * e[i][j] * y[j] for i in range(d) for j in range(d) if e[i][j])

    pool = [list(row) for row in identity(d)]
    a_vecs: list[list[int]] = []
    b_vecs: list[list[int]] = []
    while pool:
        x = pool.pop(0)
        for idx, y in enumerate(pool):
            p = pair(x, y)
            if p in (1, -1):
                break
        else:
            raise ValueError("no unimodular symplectic basis found")
        y = pool.pop(idx)
        if p == -1:
            y = [-t for t in y]
        a_vecs.append(x)
        b_vecs.append(y)
        projected = []
        for v in pool:
            va, vb = pair(v, x), pair(v, y)
            projected.append([vi + va * yi - vb * xi for vi, xi, yi in zip(v, x, y)])
        pool = projected
    cols = a_vecs + b_vecs
    return as_matrix([[cols[c][r] for c in range(d)] for r in range(d)])


def brute_force_sp_count(g: int, e: Matrix | None = None) -> int:
    """Count 2g x 2g matrices over F_2 preserving e by exhaustive enumeration."""
    d = 2 * g
    if d * d > 24:
        raise ValueError("exhaustive enumeration only supported for 2g*2g <= 24 bits")
    form = np.array(chain_form(g) if e is None else e, dtype=np.int64) % 2
    total = 1 << (d * d)
    count = 0
    step = 1 << 16
    bits = np.arange(d * d, dtype=np.int64)
    for start in range(0, total, step):
        idx = np.arange(start, min(total, start + step), dtype=np.int64)
        mats = ((idx[:, None] >> bits) & 1).reshape(-1, d, d)
        lhs = np.einsum("nji,jk,nkl->nil", mats, form, mats) % 2
        count += int(np.all(lhs == form, axis=(1, 2)).sum())
    return count
