"""Braid words on 2g+1 strands and their image in the symmetric group."""

from __future__ import annotations

import random
from dataclasses import dataclass


@dataclass(frozen=True)
class Permutation:
    """Bijection of {1..k}; ``images[i - 1]`` is the image of i."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"not a permutation: {self.images}")

    @classmethod
    def identity(cls, k: int) -> Permutation:
        return cls(tuple(range(1, k + 1)))

    @classmethod
    def transposition(cls, k: int, i: int, j: int) -> Permutation:
        images = list(range(1, k + 1))
        images[i - 1], images[j - 1] = j, i
        return cls(tuple(images))

    def __call__(self, x: int) -> int:
        return self.images[x - 1]

    def compose(self, other: Permutation) -> Permutation:
        """self o other (apply other first)."""
        return Permutation(tuple(self(other(x)) for x in range(1, len(self.images) + 1)))

    def is_identity(self) -> bool:
        return all(x == i for i, x in enumerate(self.images, 1))

    def cycles(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for start in range(1, len(self.images) + 1):
            if start in seen or self(start) == start:
                continue
            cyc = [start]
            seen.add(start)
            x = self(start)
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self(x)
            out.append(tuple(cyc))
        return out

    def __str__(self) -> str:
        cyc = self.cycles()
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"


@dataclass(frozen=True)
class BraidWord:
    """A word in sigma_1..sigma_{strands-1}; letter -k stands for sigma_k^-1."""

    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.strands < 2:
            raise ValueError("need at least two strands")
        object.__setattr__(self, "letters", tuple(int(k) for k in self.letters))
        for k in self.letters:
            if k == 0 or abs(k) >= self.strands:
                raise ValueError(f"letter {k} out of range for {self.strands} strands")

    @classmethod
    def parse(cls, text: str, strands: int) -> BraidWord:
        text = text.strip()
        if not text:
            return cls(strands)
        try:
            letters = tuple(int(tok) for tok in text.split(","))
        except ValueError:
            raise ValueError(f"malformed braid word {text!r}") from None
        return cls(strands, letters)

    def __str__(self) -> str:
        return ",".join(map(str, self.letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: BraidWord) -> BraidWord:
        if self.strands != other.strands:
            raise ValueError("strand counts differ")
        return BraidWord(self.strands, self.letters + other.letters)

    def inverse(self) -> BraidWord:
        return BraidWord(self.strands, tuple(-k for k in reversed(self.letters)))

    def conjugate(self, by: BraidWord) -> BraidWord:
        """by * self * by^-1"""
        return by * self * by.inverse()


def free_reduce(w: BraidWord) -> BraidWord:
    out: list[int] = []
    for k in w.letters:
        if out and out[-1] == -k:
            out.pop()
        else:
            out.append(k)
    return BraidWord(w.strands, tuple(out))


def permutation_of(w: BraidWord) -> Permutation:
    # images of sigma_{k1} sigma_{k2} ...: apply the rightmost letter first
    images = list(range(1, w.strands + 1))
    for k in reversed(w.letters):
        a = abs(k)
        images = [a + 1 if x == a else a if x == a + 1 else x for x in images]
    return Permutation(tuple(images))


def is_pure(w: BraidWord) -> bool:
    return permutation_of(w).is_identity()


def pure_braid_generator(i: int, j: int, strands: int) -> BraidWord:
    """A_ij = s_{j-1} ... s_{i+1} s_i^2 s_{i+1}^-1 ... s_{j-1}^-1."""
    if not 1 <= i < j <= strands:
        raise ValueError(f"need 1 <= i < j <= {strands}, got ({i}, {j})")
    conj = tuple(range(j - 1, i, -1))
    return BraidWord(strands, conj + (i, i) + tuple(-k for k in reversed(conj)))


def pure_braid_generators(strands: int) -> dict[tuple[int, int], BraidWord]:
    return {
        (i, j): pure_braid_generator(i, j, strands)
        for i in range(1, strands + 1)
        for j in range(i + 1, strands + 1)
    }


def random_word(rng: random.Random, strands: int, max_length: int = 40) -> BraidWord:
    length = rng.randint(1, max_length)
    letters = [rng.randint(1, strands - 1) * rng.choice((1, -1)) for _ in range(length)]
    return BraidWord(strands, tuple(letters))


def random_pure_word(rng: random.Random, strands: int, factors: int = 4, max_length: int = 12) -> BraidWord:
    """Product of random conjugates of pure generators (always pure)."""
    gens = list(pure_braid_generators(strands).values())
    w = BraidWord(strands)
    for _ in range(rng.randint(1, factors)):
        a = rng.choice(gens)
        if rng.random() < 0.5:
            a = a.inverse()
        w = w * a.conjugate(random_word(rng, strands, max_length))
    return w

