"""Breadth-first closure of matrix groups mod 2**n and the finite-level checks
built on it (image of the pure braid group, the mod-2 quotient, the
Gamma(2)/Gamma(4) log map).

Elements are stored as packed uint64 keys.  Generators are always closed
under inversion, so the Cayley graph is undirected and the neighbours of BFS
layer k lie in layers k-1, k, k+1: new elements are found by removing only
the previous and current layer, never a global visited set.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .braid import pure_braid_generators
from .homology import generator_matrices, rep_word
from .modring import (
    Matrix,
    Modulus,
    as_matrix,
    chain_form,
    identity,
    is_symplectic,
    reduce,
    sp_group_order,
    gamma_quotient_order,
    symplectic_inverse,
    NotSymplecticError,
)
from .report import VerificationReport, stopwatch

DEFAULT_MAX_ELEMENTS = 4_000_000
ENV_MAX_ELEMENTS = "HYPERJAC_MAX_ELEMENTS"

# keys are assembled with a float64 matmul, exact below 2**53
_BITS_PER_WORD = 52
# float32 products of entries < 64 stay exact for sizes <= 8
_MAX_SIZE = 8


class ClosureLimitError(RuntimeError):
    def __init__(self, limit: int, reached: int):
        super().__init__(f"limit reached: more than {limit} elements (stopped at {reached})")
        self.limit = limit
        self.reached = reached


def default_limit() -> int:
    raw = os.environ.get(ENV_MAX_ELEMENTS)
    if raw:
        return int(raw)
    return DEFAULT_MAX_ELEMENTS


class _Packer:
    def __init__(self, size: int, n: int):
        self.size = size
        self.n = n
        self.cells = size * size
        self.per_word = _BITS_PER_WORD // n
        self.words = -(-self.cells // self.per_word)
        self.nbytes = (self.cells * n + 7) // 8
        w = np.zeros((self.cells, self.words), dtype=np.float64)
        for k in range(self.cells):
            w[k, k // self.per_word] = float(1 << (n * (k % self.per_word)))
        self.weights = w

    def keys(self, entries: np.ndarray) -> np.ndarray:
        return (entries.astype(np.float64) @ self.weights).astype(np.uint64)

    def unpack(self, keys: np.ndarray) -> np.ndarray:
        out = np.empty((len(keys), self.cells), dtype=np.int64)
        mask = np.uint64((1 << self.n) - 1)
        for k in range(self.cells):
            shift = np.uint64(self.n * (k % self.per_word))
            out[:, k] = (keys[:, k // self.per_word] >> shift) & mask
        return out

    def canonical_bytes(self, entries: np.ndarray) -> np.ndarray:
        """Rows of the little-endian packed encoding of ``modring.encode``."""
        bits = (entries[:, :, None] >> np.arange(self.n)) & 1
        bits = bits.reshape(len(entries), self.cells * self.n).astype(np.uint8)
        return np.packbits(bits, axis=1, bitorder="little")


def _sort_order(keys: np.ndarray) -> np.ndarray:
    if keys.shape[1] == 1:
        return np.argsort(keys[:, 0], kind="stable")
    return np.lexsort(keys.T[::-1])


def _unique_rows(keys: np.ndarray) -> np.ndarray:
    if len(keys) == 0:
        return keys
    if keys.shape[1] == 1:
        return np.unique(keys[:, 0])[:, None]
    s = keys[_sort_order(keys)]
    keep = np.ones(len(s), dtype=bool)
    keep[1:] = np.any(s[1:] != s[:-1], axis=1)
    return s[keep]


def _member_rows(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Mask of rows of ``a`` present in ``b``; both hold unique rows."""
    if len(a) == 0 or len(b) == 0:
        return np.zeros(len(a), dtype=bool)
    if a.shape[1] == 1:
        return np.isin(a[:, 0], b[:, 0], assume_unique=True)
    both = np.concatenate([a, b])
    order = _sort_order(both)
    s = both[order]
    eq = np.all(s[1:] == s[:-1], axis=1)
    hit = np.zeros(len(both), dtype=bool)
    hit[order[:-1][eq]] = True
    hit[order[1:][eq]] = True
    return hit[: len(a)]


@dataclass(eq=False)
class GroupClosure:
    genus: int
    level: int
    generators: tuple[Matrix, ...]
    keys: np.ndarray = field(repr=False)
    _packer: _Packer = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.keys)

    @property
    def size(self) -> int:
        return 2 * self.genus

    def _key_of(self, a: Matrix) -> np.ndarray:
        q = 1 << self.level
        entries = np.array([[x % q for row in a for x in row]], dtype=np.int64)
        return self._packer.keys(entries)

    def __contains__(self, a: Matrix) -> bool:
        return bool(_member_rows(self._key_of(a), self.keys)[0])

    def iter_matrices(self, chunk: int = 1 << 16) -> Iterator[np.ndarray]:
        d = self.size
        for start in range(0, len(self.keys), chunk):
            yield self._packer.unpack(self.keys[start:start + chunk]).reshape(-1, d, d)

    def min_congruence_level(self) -> int:
        """Smallest congruence level over all elements."""
        d = self.size
        eye = np.eye(d, dtype=np.int64)
        level = self.level
        for mats in self.iter_matrices():
            diff = (mats - eye) % (1 << self.level)
            for k in range(1, level + 1):
                if np.any(diff % (1 << k)):
                    level = k - 1
                    break
            if level == 0:
                break
        return level

    def hex_lines(self) -> list[str]:
        """Sorted hex of the canonical encoding of every element."""
        rows = [self._packer.canonical_bytes(m.reshape(len(m), -1)) for m in self.iter_matrices()]
        packed = np.concatenate(rows) if rows else np.zeros((0, self._packer.nbytes), np.uint8)
        packed = packed[np.lexsort(packed.T[::-1])]
        width = 2 * self._packer.nbytes
        blob = packed.tobytes().hex()
        return [blob[i:i + width] for i in range(0, len(blob), width)]

    def encodings(self) -> Iterator[bytes]:
        for line in self.hex_lines():
            yield bytes.fromhex(line)

    def dump(self, path: str | os.PathLike) -> None:
        Path(path).write_text("".join(line + "\n" for line in self.hex_lines()))


def closure(gens: Sequence[Matrix], m: Modulus, limit: int | None = None) -> GroupClosure:
    """Group generated by ``gens`` (and their inverses) inside Sp(2g, Z/2^n)."""
    if not gens:
        raise ValueError("need at least one generator")
    d = len(gens[0])
    if d % 2 or d > _MAX_SIZE or any(len(a) != d for a in gens):
        raise ValueError(f"generators must share an even size <= {_MAX_SIZE}")
    limit = default_limit() if limit is None else limit
    g = d // 2
    e = chain_form(g)
    q = m.value
    full: list[Matrix] = []
    for a in gens:
        a = reduce(as_matrix(a), m)
        if not is_symplectic(a, e, m):
            raise NotSymplecticError(f"generator {a} is not symplectic mod {q}")
        full.append(a)
        full.append(symplectic_inverse(a, e, m))

    packer = _Packer(d, m.n)
    gen_entries = np.array([[x for row in a for x in row] for a in full], dtype=np.int64)
    _, first = np.unique(packer.keys(gen_entries), axis=0, return_index=True)
    gen_arr = gen_entries[np.sort(first)].reshape(-1, d, d).astype(np.float32)
    k = len(gen_arr)
    stacked = gen_arr.reshape(k * d, d)
    chunk = max(1, (1 << 22) // (k * d * d))
    mask = q - 1

    eye_key = packer.keys(np.eye(d, dtype=np.int64).reshape(1, -1))
    prev = np.zeros((0, packer.words), dtype=np.uint64)
    cur = eye_key
    layers = [cur]
    total = 1
    while len(cur):
        found = []
        for start in range(0, len(cur), chunk):
            mats = packer.unpack(cur[start:start + chunk]).reshape(-1, d, d).astype(np.float32)
            f = len(mats)
            right = mats.transpose(1, 0, 2).reshape(d, f * d)
            prod = (stacked @ right).reshape(k, d, f, d).transpose(0, 2, 1, 3)
            entries = prod.astype(np.int64).reshape(k * f, d * d) & mask
            found.append(_unique_rows(packer.keys(entries)))
        cand = _unique_rows(np.concatenate(found))
        seen = np.concatenate([prev, cur])
        new = cand[~_member_rows(cand, seen)]
        total += len(new)
        if total > limit:
            raise ClosureLimitError(limit, total)
        layers.append(new)
        prev, cur = cur, new

    keys = np.concatenate(layers)
    keys = keys[_sort_order(keys)]
    return GroupClosure(genus=g, level=m.n, generators=tuple(full[::2]), keys=keys, _packer=packer)


def _bump(a: Matrix, m: Modulus | None) -> Matrix:
    rows = [list(r) for r in a]
    rows[0][1] += 1
    return reduce(as_matrix(rows), m)


def pure_generator_images(g: int, m: Modulus | None = None) -> dict[tuple[int, int], Matrix]:
    return {ij: rep_word(w, g, m) for ij, w in pure_braid_generators(2 * g + 1).items()}


def _closure_report(command: str, g: int, n: int, gens: list[Matrix], expected: int,
                    limit: int | None, extra_ok=None) -> VerificationReport:
    m = Modulus(n)
    details: list[str] = []
    with stopwatch() as ms:
        try:
            cl = closure(gens, m, limit)
        except NotSymplecticError as exc:
            return VerificationReport(command, g, n, expected, None, False, 0, [f"generator rejected: {exc}"])
        order = cl.order
        ok = order == expected
        total = sp_group_order(g, n)
        lagrange = total % order == 0
        details.append(f"closure order {order}; |Sp(2g, Z/2^n)| = {total}; divides: {lagrange}")
        ok = ok and lagrange
        if extra_ok is not None:
            ok = extra_ok(cl, details) and ok
    return VerificationReport(command, g, n, expected, order, ok, ms[0], details)


def verify_theorem_level(g: int, n: int, limit: int | None = None, fault: bool = False,
                         dump: str | os.PathLike | None = None,
                         shuffle_seed: int | None = None) -> VerificationReport:
    """Closure of the pure generators mod 2**n against |Gamma(2)/Gamma(2**n)|."""
    if n < 2:
        raise ValueError("theorem check needs level n >= 2")
    m = Modulus(n)
    gens = list(pure_generator_images(g, m).values())
    if shuffle_seed is not None:
        import random

        random.Random(shuffle_seed).shuffle(gens)
    if fault:
        gens[0] = _bump(gens[0], m)

    def in_gamma2(cl: GroupClosure, details: list[str]) -> bool:
        lvl = cl.min_congruence_level()
        details.append(f"minimum congruence level over the closure: {lvl}")
        if dump is not None:
            cl.dump(dump)
            details.append(f"closure dumped to {dump}")
        return lvl >= 1

    return _closure_report("theorem", g, n, gens, gamma_quotient_order(g, n), limit, in_gamma2)


def verify_mod2_quotient(g: int, limit: int | None = None, fault: bool = False) -> VerificationReport:
    m = Modulus(1)
    gens = [generator_matrices(g, m)[k] for k in range(1, 2 * g + 1)]
    if fault:
        gens[0] = _bump(gens[0], m)
    expected = math.factorial(2 * g + 1)

    def full_sp_note(cl: GroupClosure, details: list[str]) -> bool:
        sp = sp_group_order(g, 1)
        if g == 1:
            details.append(f"equals |Sp(2, F_2)| = {sp}: {cl.order == sp}")
            return cl.order == sp
        details.append(f"proper subgroup of Sp(2g, F_2) of order {sp}")
        return True

    return _closure_report("mod2-quotient", g, 1, gens, expected, limit, full_sp_note)


def verify_g1_full_sp(n: int, limit: int | None = None, fault: bool = False) -> VerificationReport:
    m = Modulus(n)
    gens = [generator_matrices(1, m)[1], generator_matrices(1, m)[2]]
    if fault:
        gens[0] = _bump(gens[0], m)
    return _closure_report("full-sp-g1", 1, n, gens, sp_group_order(1, n), limit)


# --- Gamma(2)/Gamma(4) ---------------------------------------------------------


def log_map(a: Matrix) -> Matrix:
    """I + 2A (mod 4) -> A mod 2."""
    flat = [(x - int(i == j)) % 4 for i, row in enumerate(a) for j, x in enumerate(row)]
    if any(x % 2 for x in flat):
        raise ValueError("matrix is not congruent to I mod 2")
    d = len(a)
    return tuple(tuple(flat[r * d + c] // 2 for c in range(d)) for r in range(d))


def is_lie_algebra_element(a: Matrix, g: int) -> bool:
    """A^T E + E A == 0 over F_2."""
    e = chain_form(g)
    d = 2 * g
    for i in range(d):
        for j in range(d):
            s = sum(a[k][i] * e[k][j] + e[i][k] * a[k][j] for k in range(d))
            if s % 2:
                return False
    return True


def _flatten_bits(a: Matrix) -> int:
    bits = 0
    for k, x in enumerate(x for row in a for x in row):
        if x % 2:
            bits |= 1 << k
    return bits


def f2_rank(vectors: Sequence[int]) -> int:
    """Rank over F_2 of bit-vectors given as ints."""
    pivots: dict[int, int] = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top in pivots:
                v ^= pivots[top]
            else:
                pivots[top] = v
                break
    return len(pivots)


def lie_algebra_dimension(g: int) -> int:
    """dim over F_2 of {A : A^T E + E A = 0}, by elimination on the linear map."""
    d = 2 * g
    e = chain_form(g)
    # column (p, q) of the map: image of the elementary matrix with a 1 at (p, q)
    rows = [0] * (d * d)
    for p in range(d):
        for q in range(d):
            var = p * d + q
            for i in range(d):
                for j in range(d):
                    # (A^T E)_{ij} = sum_k A_{ki} E_{kj}; (E A)_{ij} = sum_k E_{ik} A_{kj}
                    coeff = (e[p][j] if q == i else 0) + (e[i][p] if q == j else 0)
                    if coeff % 2:
                        rows[i * d + j] ^= 1 << var
    return d * d - f2_rank(rows)


def gamma2mod4_rank(g: int, fault: bool = False) -> int:
    m = Modulus(2)
    images = list(pure_generator_images(g, m).values())
    if fault:
        images[0] = _bump(_bump(images[0], m), m)
    return f2_rank([_flatten_bits(log_map(a)) for a in images])


def verify_mod4_rank(g: int, fault: bool = False) -> VerificationReport:
    expected = 2 * g * g + g
    with stopwatch() as ms:
        rank = gamma2mod4_rank(g, fault)
        dim = lie_algebra_dimension(g)
        images = pure_generator_images(g, Modulus(2))
        in_algebra = all(is_lie_algebra_element(log_map(a), g) for a in images.values())
    details = [
        f"F_2-rank of log-mapped pure generators: {rank}",
        f"dimension of {{A : A^T E + E A = 0}} over F_2: {dim}",
        f"all log images satisfy A^T E + E A = 0: {in_algebra}",
    ]
    return VerificationReport(
        command="mod4-rank",
        genus=g,
        level=2,
        expected=expected,
        computed=rank,
        passed=rank == expected and dim == expected and in_algebra,
        elapsed_ms=ms[0],
        details=details,
    )
