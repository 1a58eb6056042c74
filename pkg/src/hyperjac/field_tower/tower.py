"""Multi-quadratic towers F(r_1, ..., r_k) with r_j^2 = d_j in a base field F.

An element is a map from subsets of the radicals (bit masks) to base-field
coefficients, i.e. sum_S c_S * prod_{j in S} r_j.  The base field only has to
support + - * / and equality with 0, so the same code runs over Q(a1..ak)
and over Q.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

from ._parse import evaluate
from .ratfunc import RationalField, rational_function_field


class TowerConsistencyError(ArithmeticError):
    """A nonzero element behaved like a zero divisor."""


class RadicalTower:
    def __init__(self, base: Any, names: Sequence[str], squares: Sequence[Any]):
        if len(names) != len(squares):
            raise ValueError("one square per radical")
        if len(set(names)) != len(names):
            raise ValueError("radical names must be distinct")
        self.base = base
        self.names = tuple(names)
        self.squares = tuple(base.coerce(s) for s in squares)
        self._square_products: dict[int, Any] = {0: base.one}
        self.zero = TowerElement(self, {})
        self.one = TowerElement(self, {0: base.one})

    @property
    def rank(self) -> int:
        return len(self.names)

    @property
    def degree(self) -> int:
        return 1 << self.rank

    def _key(self) -> tuple:
        return (self.base, self.names, self.squares)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return isinstance(other, RadicalTower) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"RadicalTower({', '.join(self.names)} over {self.base!r})"

    def square_product(self, mask: int) -> Any:
        """prod of d_j over the radicals in ``mask``."""
        cached = self._square_products.get(mask)
        if cached is None:
            low = mask & -mask
            cached = self.square_product(mask ^ low) * self.squares[low.bit_length() - 1]
            self._square_products[mask] = cached
        return cached

    def mask_of(self, names: Iterable[str]) -> int:
        mask = 0
        for name in names:
            if name not in self.names:
                raise ValueError(f"unknown radical {name!r}")
            mask |= 1 << self.names.index(name)
        return mask

    def const(self, c: Any) -> TowerElement:
        return TowerElement(self, {0: self.base.coerce(c)})

    def radical(self, name: str | int) -> TowerElement:
        idx = self.names.index(name) if isinstance(name, str) else name
        return TowerElement(self, {1 << idx: self.base.one})

    def element(self, coeffs: Mapping[int | Iterable[str], Any]) -> TowerElement:
        out: dict[int, Any] = {}
        for key, c in coeffs.items():
            mask = key if isinstance(key, int) else self.mask_of(key)
            out[mask] = out.get(mask, self.base.zero) + self.base.coerce(c)
        return TowerElement(self, out)

    def subtower(self, names: Iterable[str]) -> RadicalTower:
        keep = [n for n in self.names if n in set(names)]
        return RadicalTower(self.base, keep, [self.squares[self.names.index(n)] for n in keep])

    def monomial_name(self, mask: int) -> str:
        return "*".join(n for j, n in enumerate(self.names) if mask >> j & 1)

    def symbols(self) -> dict[str, Any]:
        out: dict[str, Any] = {n: self.radical(n) for n in self.names}
        for name, x in zip(getattr(self.base, "names", ()), getattr(self.base, "gens", lambda: ())()):
            out[name] = self.const(x)
        return out

    def parse(self, text: str) -> TowerElement:
        return evaluate(text, self.symbols(), self.const)

    def format(self, x: TowerElement) -> str:
        return str(x)


class TowerElement:
    __slots__ = ("tower", "coeffs", "_hash")

    def __init__(self, tower: RadicalTower, coeffs: Mapping[int, Any]):
        self.tower = tower
        self.coeffs = {m: c for m, c in coeffs.items() if c != 0}
        self._hash = None

    def _lift(self, other: object) -> TowerElement | None:
        if isinstance(other, TowerElement):
            if other.tower is not self.tower and other.tower != self.tower:
                raise ValueError("elements of different radical towers")
            return other
        try:
            return self.tower.const(other)
        except TypeError:
            return None

    def __add__(self, other: object) -> TowerElement:
        b = self._lift(other)
        if b is None:
            return NotImplemented
        out = dict(self.coeffs)
        for m, c in b.coeffs.items():
            out[m] = out[m] + c if m in out else c
        return TowerElement(self.tower, out)

    __radd__ = __add__

    def __neg__(self) -> TowerElement:
        return TowerElement(self.tower, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other: object) -> TowerElement:
        b = self._lift(other)
        if b is None:
            return NotImplemented
        return self + (-b)

    def __rsub__(self, other: object) -> TowerElement:
        return (-self) + other

    def __mul__(self, other: object) -> TowerElement:
        b = self._lift(other)
        if b is None:
            return NotImplemented
        return tower_mul(self, b)

    __rmul__ = __mul__

    def inverse(self) -> TowerElement:
        return tower_inverse(self)

    def __truediv__(self, other: object) -> TowerElement:
        b = self._lift(other)
        if b is None:
            return NotImplemented
        return self * tower_inverse(b)

    def __rtruediv__(self, other: object) -> TowerElement:
        return tower_inverse(self) * other

    def __pow__(self, k: int) -> TowerElement:
        if k < 0:
            return tower_inverse(self) ** (-k)
        result, base = self.tower.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other: object) -> bool:
        try:
            b = self._lift(other)
        except ValueError:
            return False
        if b is None:
            return NotImplemented
        return self.coeffs == b.coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.coeffs.items()))
        return self._hash

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.coeffs)

    def coefficient(self, mask: int | Iterable[str]) -> Any:
        if not isinstance(mask, int):
            mask = self.tower.mask_of(mask)
        return self.coeffs.get(mask, self.tower.base.zero)

    def in_base(self) -> bool:
        return set(self.coeffs) <= {0}

    def base_value(self) -> Any:
        if not self.in_base():
            raise ValueError("element is not in the base field")
        return self.coefficient(0)

    def conjugate(self, radical: int) -> TowerElement:
        """Image under r_radical -> -r_radical."""
        bit = 1 << radical
        return TowerElement(self.tower, {m: (-c if m & bit else c) for m, c in self.coeffs.items()})

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        base = self.tower.base
        terms = []
        for mask in sorted(self.coeffs, key=lambda m: (-bin(m).count("1"), -m)):
            c = self.coeffs[mask]
            mono = self.tower.monomial_name(mask)
            if not mono:
                terms.append(base.format(c) if not base.is_compound(c) else f"({base.format(c)})")
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append(f"-{mono}")
            elif base.is_compound(c):
                terms.append(f"({base.format(c)})*{mono}")
            else:
                terms.append(f"{base.format(c)}*{mono}")
        out = terms[0]
        for t in terms[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out

    def __repr__(self) -> str:
        return f"TowerElement({self})"


def tower_mul(a: TowerElement, b: TowerElement) -> TowerElement:
    if a.tower is not b.tower and a.tower != b.tower:
        raise ValueError("elements of different radical towers")
    tower = a.tower
    out: dict[int, Any] = {}
    for ma, ca in a.coeffs.items():
        for mb, cb in b.coeffs.items():
            common = ma & mb
            term = ca * cb
            if common:
                term = term * tower.square_product(common)
            m = ma ^ mb
            out[m] = out[m] + term if m in out else term
    return TowerElement(tower, out)


def tower_inverse(a: TowerElement) -> TowerElement:
    """Inverse by conjugating away the highest radical present, then recursing
    on the norm, which lives one level lower."""
    if not a.coeffs:
        raise ZeroDivisionError("inverse of zero in radical tower")
    top = max(a.coeffs).bit_length() - 1
    if top < 0:
        return a.tower.const(a.tower.base.one / a.coeffs[0])
    conj = a.conjugate(top)
    norm = a * conj
    if not norm.coeffs:
        raise TowerConsistencyError(f"norm of nonzero element {a} vanished")
    if max(norm.coeffs) >> top:
        raise TowerConsistencyError("norm did not descend in the tower")
    return conj * tower_inverse(norm)


def subtower_membership(a: TowerElement, names: Iterable[str]) -> TowerElement | None:
    """``a`` rewritten over the subtower generated by ``names``, or None."""
    names = list(names)
    tower = a.tower
    allowed = tower.mask_of(names)
    if any(m & ~allowed for m in a.coeffs):
        return None
    sub = tower.subtower(names)
    remap = {}
    for m in a.coeffs:
        new = 0
        for j, name in enumerate(tower.names):
            if m >> j & 1:
                new |= 1 << sub.names.index(name)
        remap[m] = new
    return TowerElement(sub, {remap[m]: c for m, c in a.coeffs.items()})


def radical_names(g: int) -> list[str]:
    roots = 2 * g + 1
    if roots > 9:
        raise ValueError("radical names assume at most 9 roots")
    return ["i"] + [f"s{i}{j}" for i in range(1, roots + 1) for j in range(i + 1, roots + 1)]


class HyperellipticTower(RadicalTower):
    """F(i, s_ij : i < j) with i^2 = -1 and s_ij^2 = a_i - a_j.

    Symbolic over Q(a1..a_{2g+1}) by default; over Q when ``values`` gives a
    rational specialization of the roots.
    """

    def __init__(self, g: int, values: Sequence[int | Fraction] | None = None):
        roots = 2 * g + 1
        if values is None:
            base: Any = rational_function_field(roots)
            alphas = list(base.gens())
        else:
            if len(values) != roots or len(set(values)) != roots:
                raise ValueError(f"need {roots} distinct root values")
            base = RationalField()
            alphas = [Fraction(v) for v in values]
        names = radical_names(g)
        squares = [base.coerce(-1)] + [alphas[i] - alphas[j] for i in range(roots) for j in range(i + 1, roots)]
        super().__init__(base, names, squares)
        self.genus = g
        self.values = None if values is None else tuple(Fraction(v) for v in values)
        self.alphas = tuple(self.const(a) for a in alphas)

    @property
    def iota(self) -> TowerElement:
        return self.radical("i")

    def s(self, i: int, j: int) -> TowerElement:
        return self.radical(f"s{i}{j}")

    def sqrt_difference(self, a: int, b: int) -> TowerElement:
        """The chosen square root of a_a - a_b: s_ab, or i*s_ba when a > b."""
        if a == b:
            raise ValueError("indices must differ")
        return self.s(a, b) if a < b else self.iota * self.s(b, a)

    def specialize(self, x: TowerElement, target: HyperellipticTower) -> TowerElement:
        """Evaluate every coefficient of a symbolic element at target.values."""
        if target.values is None or target.names != self.names:
            raise ValueError("target must be a rational specialization with the same radicals")
        return TowerElement(target, {m: c.evaluate(target.values) for m, c in x.coeffs.items()})
