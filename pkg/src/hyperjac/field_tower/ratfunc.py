"""Exact rational functions over Q in a1, ..., ak.

Numerator and denominator are sparse flint polynomials.  Every value is
kept reduced (gcd 1) with a monic denominator under the graded lexicographic
order a1 > a2 > ... , which makes equality a comparison of canonical forms.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

import flint

from ._parse import evaluate

Scalar = Union[int, Fraction]


def _fmpq_to_fraction(c: flint.fmpq) -> Fraction:
    return Fraction(int(c.p), int(c.q))


def is_rational_square(c: Fraction) -> bool:
    if c < 0:
        return False
    p, q = c.numerator, c.denominator
    return math.isqrt(p) ** 2 == p and math.isqrt(q) ** 2 == q


def format_poly(p: flint.fmpq_mpoly, names: Sequence[str]) -> str:
    parts: list[str] = []
    for exps, c in p.terms():
        c = _fmpq_to_fraction(c)
        mono = "*".join(
            name if e == 1 else f"{name}^{e}" for name, e in zip(names, exps) if e
        )
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts) or "0"


class RationalFunction:
    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field: RationalFunctionField, num: flint.fmpq_mpoly, den: flint.fmpq_mpoly, *, reduced: bool = False):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not reduced:
            if num.is_zero():
                den = field.ctx.constant(1)
            else:
                g = num.gcd(den)
                if not g.is_one():
                    num, den = num / g, den / g
                lc = den.leading_coefficient()
                if lc != 1:
                    num, den = num / lc, den / lc
        self.field = field
        self.num = num
        self.den = den
        self._hash = None

    # -- arithmetic ---------------------------------------------------------
    def _lift(self, other: object) -> RationalFunction | None:
        if isinstance(other, RationalFunction):
            if other.field is not self.field:
                raise ValueError("rational functions from different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.coerce(other)
        return None

    def __add__(self, other: object) -> RationalFunction:
        b = self._lift(other)
        if b is None:
            return NotImplemented
        if self.den.is_one() and b.den.is_one():
            return RationalFunction(self.field, self.num + b.num, self.den, reduced=True)
        if self.den == b.den:
            return RationalFunction(self.field, self.num + b.num, self.den)
        return RationalFunction(self.field, self.num * b.den + b.num * self.den, self.den * b.den)

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction(self.field, -self.num, self.den, reduced=True)

    def __sub__(self, other: object) -> RationalFunction:
        b = self._lift(other)
        if b is None:
            return NotImplemented
        return self + (-b)

    def __rsub__(self, other: object) -> RationalFunction:
        return (-self) + other

    def __mul__(self, other: object) -> RationalFunction:
        b = self._lift(other)
        if b is None:
            return NotImplemented
        if self.den.is_one() and b.den.is_one():
            return RationalFunction(self.field, self.num * b.num, self.den, reduced=True)
        # cross-cancel before multiplying to keep gcds small
        g1 = self.num.gcd(b.den)
        g2 = b.num.gcd(self.den)
        n1, d2 = (self.num / g1, b.den / g1) if not g1.is_one() else (self.num, b.den)
        n2, d1 = (b.num / g2, self.den / g2) if not g2.is_one() else (b.num, self.den)
        num, den = n1 * n2, d1 * d2
        lc = den.leading_coefficient()
        if lc != 1:
            num, den = num / lc, den / lc
        return RationalFunction(self.field, num, den, reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> RationalFunction:
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalFunction(self.field, self.den, self.num)

    def __truediv__(self, other: object) -> RationalFunction:
        b = self._lift(other)
        if b is None:
            return NotImplemented
        return self * b.inverse()

    def __rtruediv__(self, other: object) -> RationalFunction:
        return self.inverse() * other

    def __pow__(self, k: int) -> RationalFunction:
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction(self.field, self.num ** k, self.den ** k, reduced=True)

    # -- comparison ---------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other: object) -> bool:
        b = self._lift(other) if isinstance(other, (RationalFunction, int, Fraction)) else None
        if b is None:
            return NotImplemented
        return self.num == b.num and self.den == b.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((tuple(self.num.terms()), tuple(self.den.terms())))
        return self._hash

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    # -- inspection ---------------------------------------------------------
    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_one()

    def __str__(self) -> str:
        num = format_poly(self.num, self.field.names)
        if self.den.is_one():
            return num
        den = format_poly(self.den, self.field.names)
        if len(self.num) > 1:
            num = f"({num})"
        return f"{num}/({den})"

    def __repr__(self) -> str:
        return f"RationalFunction({self})"

    def evaluate(self, values: Sequence[Scalar]) -> Fraction:
        """Exact value at a rational point, summed term by term."""
        num = _eval_poly(self.num, values)
        den = _eval_poly(self.den, values)
        if den == 0:
            raise ZeroDivisionError(f"denominator vanishes at {tuple(values)}")
        return num / den

    def is_square(self) -> bool:
        """Whether self is a square in Q(a1..ak), via squarefree decomposition
        of numerator * denominator."""
        if self.num.is_zero():
            return True
        const, factors = (self.num * self.den).factor_squarefree()
        if not is_rational_square(_fmpq_to_fraction(const)):
            return False
        return all(mult % 2 == 0 for _, mult in factors)


def _eval_poly(p: flint.fmpq_mpoly, values: Sequence[Scalar]) -> Fraction:
    total = Fraction(0)
    for exps, c in p.terms():
        term = _fmpq_to_fraction(c)
        for v, e in zip(values, exps):
            if e:
                term *= Fraction(v) ** int(e)
        total += term
    return total


class RationalFunctionField:
    """Q(a1, ..., ak); obtain instances through ``rational_function_field``."""

    def __init__(self, nvars: int):
        if nvars < 1:
            raise ValueError("need at least one variable")
        self.nvars = nvars
        self.names = tuple(f"a{i}" for i in range(1, nvars + 1))
        self.ctx = flint.fmpq_mpoly_ctx.get(self.names, "deglex")
        one = self.ctx.constant(1)
        self.zero = RationalFunction(self, self.ctx.constant(0), one, reduced=True)
        self.one = RationalFunction(self, one, one, reduced=True)
        self._gens = tuple(RationalFunction(self, x, one, reduced=True) for x in self.ctx.gens())

    def __repr__(self) -> str:
        return f"RationalFunctionField({', '.join(self.names)})"

    def gen(self, i: int) -> RationalFunction:
        """a_i, 1-based."""
        return self._gens[i - 1]

    def gens(self) -> tuple[RationalFunction, ...]:
        return self._gens

    def coerce(self, x: object) -> RationalFunction:
        if isinstance(x, RationalFunction):
            if x.field is not self:
                raise ValueError("rational function from a different field")
            return x
        if isinstance(x, (int, Fraction)):
            x = Fraction(x)
            return RationalFunction(
                self, self.ctx.constant(flint.fmpq(x.numerator, x.denominator)), self.ctx.constant(1), reduced=True
            )
        raise TypeError(f"cannot coerce {type(x).__name__} into {self!r}")

    def from_dict(self, num: dict, den: dict | None = None) -> RationalFunction:
        def poly(d: dict) -> flint.fmpq_mpoly:
            return self.ctx.from_dict({k: flint.fmpq(Fraction(v).numerator, Fraction(v).denominator) for k, v in d.items()})

        return RationalFunction(self, poly(num), poly(den) if den is not None else self.ctx.constant(1))

    def parse(self, text: str) -> RationalFunction:
        return evaluate(text, dict(zip(self.names, self._gens)), self.coerce)

    def format(self, x: RationalFunction) -> str:
        return str(x)

    def is_compound(self, x: RationalFunction) -> bool:
        return not x.den.is_one() or len(x.num) > 1 or (
            len(x.num) == 1 and not x.num.is_constant() and x.num.leading_coefficient() != 1
        )

    def evaluate(self, x: RationalFunction, values: Sequence[Scalar]) -> Fraction:
        return x.evaluate(values)

    def is_square(self, x: RationalFunction) -> bool:
        return x.is_square()


@lru_cache(maxsize=None)
def rational_function_field(nvars: int) -> RationalFunctionField:
    return RationalFunctionField(nvars)


class RationalField:
    """Q, with the interface of RationalFunctionField (used for specializations)."""

    names: tuple[str, ...] = ()
    zero = Fraction(0)
    one = Fraction(1)

    def __repr__(self) -> str:
        return "RationalField()"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash(RationalField)

    def coerce(self, x: object) -> Fraction:
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into Q")

    def parse(self, text: str) -> Fraction:
        return evaluate(text, {}, Fraction)

    def format(self, x: Fraction) -> str:
        return str(x)

    def is_compound(self, x: Fraction) -> bool:
        return x.denominator != 1

    def is_square(self, x: Fraction) -> bool:
        return is_rational_square(x)
