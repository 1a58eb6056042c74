"""The integral symplectic representation of B_{2g+1} by transvections.

sigma_i acts on H_1 (chain basis c_1..c_2g) as the transvection
T_i(x) = x + <x, c_i> c_i, where <,> is the chain form of
``modring.chain_form``.
"""

from __future__ import annotations

import random
from functools import lru_cache
from typing import Mapping, Sequence

from .braid import BraidWord, is_pure, random_pure_word, random_word
from .modring import (
    Matrix,
    Modulus,
    as_matrix,
    chain_form,
    congruence_level,
    identity,
    is_symplectic,
    mat_mul,
    reduce,
    symplectic_inverse,
)
from .report import VerificationReport, stopwatch

Vector = tuple[int, ...]


def cycle(i: int, g: int) -> Vector:
    """The chain basis vector c_i (1-based)."""
    if not 1 <= i <= 2 * g:
        raise ValueError(f"cycle index {i} out of range for genus {g}")
    return tuple(int(k == i - 1) for k in range(2 * g))


def pairing(x: Sequence[int], y: Sequence[int], e: Matrix) -> int:
    if not len(x) == len(y) == len(e):
        raise ValueError("length mismatch")
    return sum(x[i] * e[i][j] * y[j] for i in range(len(e)) for j in range(len(e)) if e[i][j])


def transvection_matrix(v: Sequence[int], e: Matrix) -> Matrix:
    """Matrix of x -> x + <x, v> v, i.e. I + v (e v)^T."""
    if not any(v):
        raise ValueError("transvection along the zero vector")
    d = len(e)
    ev = [sum(e[r][c] * v[c] for c in range(d)) for r in range(d)]
    return as_matrix([[int(r == c) + v[r] * ev[c] for c in range(d)] for r in range(d)])


@lru_cache(maxsize=None)
def generator_matrices(g: int, m: Modulus | None = None) -> dict[int, Matrix]:
    """R(sigma_k) for k = +-1..+-2g."""
    e = chain_form(g)
    out: dict[int, Matrix] = {}
    for k in range(1, 2 * g + 1):
        t = transvection_matrix(cycle(k, g), e)
        out[k] = reduce(t, m)
        out[-k] = symplectic_inverse(t, e, m)
    return out


def _check_word(w: BraidWord, g: int) -> None:
    if w.strands != 2 * g + 1:
        raise ValueError(f"word on {w.strands} strands, expected {2 * g + 1} for genus {g}")


def rep_word(w: BraidWord, g: int, m: Modulus | None = None) -> Matrix:
    """R(w) as an exact integer matrix, or reduced mod 2**n."""
    _check_word(w, g)
    d = 2 * g
    q = m.value if m is not None else None
    rows = [list(r) for r in identity(d)]
    # right-multiplying by I +- c_i (e c_i)^T only touches columns i-1 and i+1
    for k in w.letters:
        i = abs(k) - 1
        s = 1 if k > 0 else -1
        for row in rows:
            c = row[i]
            if not c:
                continue
            if i >= 1:
                row[i - 1] += s * c
            if i + 1 < d:
                row[i + 1] -= s * c
            if q is not None:
                if i >= 1:
                    row[i - 1] %= q
                if i + 1 < d:
                    row[i + 1] %= q
    return as_matrix(rows)


def rep_word_by_products(
    w: BraidWord, g: int, m: Modulus | None = None, generators: Mapping[int, Matrix] | None = None
) -> Matrix:
    """Reference evaluation: the plain product of generator matrices."""
    _check_word(w, g)
    gens = generator_matrices(g, m) if generators is None else generators
    out = identity(2 * g)
    for k in w.letters:
        out = mat_mul(out, gens[k], m)
    return out


def faulted_generators(g: int, m: Modulus | None = None) -> dict[int, Matrix]:
    """Generators with entry (0, 0) of R(sigma_1) bumped by one (det becomes 2)."""
    gens = dict(generator_matrices(g, m))
    rows = [list(r) for r in gens[1]]
    rows[0][0] += 1
    gens[1] = reduce(as_matrix(rows), m)
    return gens


def braid_relations(g: int) -> list[tuple[str, BraidWord, BraidWord]]:
    """Defining relations of B_{2g+1}: braid relations for adjacent generators,
    commutation for |i - j| >= 2."""
    strands = 2 * g + 1
    rels = []
    for i in range(1, 2 * g):
        lhs = BraidWord(strands, (i, i + 1, i))
        rhs = BraidWord(strands, (i + 1, i, i + 1))
        rels.append((f"s{i} s{i + 1} s{i} = s{i + 1} s{i} s{i + 1}", lhs, rhs))
    for i in range(1, 2 * g + 1):
        for j in range(i + 2, 2 * g + 1):
            rels.append((f"s{i} s{j} = s{j} s{i}", BraidWord(strands, (i, j)), BraidWord(strands, (j, i))))
    return rels


def verify_braid_relations(g: int, fault: bool = False) -> VerificationReport:
    gens = faulted_generators(g) if fault else generator_matrices(g)
    details = []
    failed = 0
    with stopwatch() as ms:
        rels = braid_relations(g)
        for name, lhs, rhs in rels:
            ok = rep_word_by_products(lhs, g, generators=gens) == rep_word_by_products(rhs, g, generators=gens)
            failed += not ok
            details.append(f"{'pass' if ok else 'FAIL'}: {name}")
    return VerificationReport(
        command="braid-relations",
        genus=g,
        level=None,
        expected=len(rels),
        computed=len(rels) - failed,
        passed=failed == 0,
        elapsed_ms=ms[0],
        details=details,
    )


def purity_mod2_property(g: int, sample_count: int, seed: int, fault: bool = False) -> VerificationReport:
    """Check is_pure(w) <=> R(w) == I mod 2 on seeded random words.

    Uniform random words are almost never pure, so a further quarter of
    ``sample_count`` words is drawn as products of conjugated pure generators.
    """
    rng = random.Random(seed)
    strands = 2 * g + 1
    mod2 = Modulus(1)
    gens = faulted_generators(g, mod2) if fault else None
    counterexamples: list[str] = []
    pure_seen = 0
    total = 0
    with stopwatch() as ms:
        words = [random_word(rng, strands) for _ in range(sample_count)]
        words += [random_pure_word(rng, strands) for _ in range(sample_count // 4)]
        for w in words:
            if gens is None:
                mat = rep_word(w, g, mod2)
            else:
                mat = rep_word_by_products(w, g, mod2, generators=gens)
            pure = is_pure(w)
            trivial = congruence_level(mat, mod2) >= 1
            pure_seen += pure
            total += 1
            if pure != trivial:
                counterexamples.append(str(w))
    details = [f"words checked: {total} (pure: {pure_seen})"]
    details += [f"counterexample: {w}" for w in counterexamples[:10]]
    return VerificationReport(
        command="purity",
        genus=g,
        level=1,
        expected=0,
        computed=len(counterexamples),
        passed=not counterexamples,
        elapsed_ms=ms[0],
        details=details,
        seed=seed,
    )


def symplecticity_property(g: int, sample_count: int, seed: int, fault: bool = False) -> VerificationReport:
    """R(w)^T E R(w) == E over the integers for seeded random words."""
    rng = random.Random(seed)
    strands = 2 * g + 1
    e = chain_form(g)
    gens = faulted_generators(g) if fault else None
    bad: list[str] = []
    with stopwatch() as ms:
        for _ in range(sample_count):
            w = random_word(rng, strands)
            mat = rep_word(w, g) if gens is None else rep_word_by_products(w, g, generators=gens)
            if not is_symplectic(mat, e):
                bad.append(str(w))
    details = [f"words checked: {sample_count}"]
    details += [f"form not preserved by: {w}" for w in bad[:10]]
    return VerificationReport(
        command="symplecticity",
        genus=g,
        level=None,
        expected=0,
        computed=len(bad),
        passed=not bad,
        elapsed_ms=ms[0],
        details=details,
        seed=seed,
    )
