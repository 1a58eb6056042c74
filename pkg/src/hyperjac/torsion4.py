"""Genus-one 4-torsion of y^2 = (x - a1)(x - a2)(x - a3) inside the radical tower
Q(a1, a2, a3)(i, s12, s13, s23).

The halves of a 2-torsion point (a_a, 0) are written down in closed form,
x = a_a + e*u*v with u = sqrt(a_a - a_b), v = sqrt(a_a - a_c), e = +-1, and
y = +-u*v*(u + e*v); every one of them is then checked by doubling.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Sequence

from .field_tower import HyperellipticTower, TowerConsistencyError, TowerElement, subtower_membership
from .report import VerificationReport, stopwatch


class TorsionConstructionError(ArithmeticError):
    pass


@dataclass(frozen=True)
class EllipticPoint:
    x: TowerElement | None = None
    y: TowerElement | None = None

    @property
    def at_infinity(self) -> bool:
        return self.x is None

    def __str__(self) -> str:
        return "O" if self.at_infinity else f"({self.x}, {self.y})"


INFINITY = EllipticPoint()


class Curve:
    """y^2 = (x - a1)(x - a2)(x - a3) over a genus-one hyperelliptic tower."""

    def __init__(self, tower: HyperellipticTower):
        if tower.genus != 1:
            raise ValueError("4-torsion is only implemented in genus 1")
        self.tower = tower
        self.roots = tower.alphas
        self.e1 = self.roots[0] + self.roots[1] + self.roots[2]

    def f(self, x: TowerElement) -> TowerElement:
        a1, a2, a3 = self.roots
        return (x - a1) * (x - a2) * (x - a3)

    def f_prime(self, x: TowerElement) -> TowerElement:
        a1, a2, a3 = self.roots
        return (x - a2) * (x - a3) + (x - a1) * (x - a3) + (x - a1) * (x - a2)

    def contains(self, p: EllipticPoint) -> bool:
        return p.at_infinity or p.y * p.y == self.f(p.x)

    def two_torsion(self, a: int) -> EllipticPoint:
        return EllipticPoint(self.roots[a - 1], self.tower.zero)


def ec_neg(p: EllipticPoint) -> EllipticPoint:
    return p if p.at_infinity else EllipticPoint(p.x, -p.y)


def ec_double(curve: Curve, p: EllipticPoint) -> EllipticPoint:
    if p.at_infinity or p.y.is_zero():
        return INFINITY
    lam = curve.f_prime(p.x) / (2 * p.y)
    x3 = lam * lam + curve.e1 - 2 * p.x
    return EllipticPoint(x3, lam * (p.x - x3) - p.y)


def ec_add(curve: Curve, p: EllipticPoint, q: EllipticPoint) -> EllipticPoint:
    if p.at_infinity:
        return q
    if q.at_infinity:
        return p
    if p.x == q.x:
        if p.y == -q.y:
            return INFINITY
        if p.y == q.y:
            return ec_double(curve, p)
        raise ValueError("points with equal x and unrelated y are not both on the curve")
    lam = (q.y - p.y) / (q.x - p.x)
    x3 = lam * lam + curve.e1 - p.x - q.x
    return EllipticPoint(x3, lam * (p.x - x3) - p.y)


@dataclass(frozen=True)
class TorsionPoint:
    label: str
    point: EllipticPoint
    order: int
    halved_from: int | None = None

    def to_dict(self) -> dict:
        p = self.point
        return {
            "label": self.label,
            "x": None if p.at_infinity else str(p.x),
            "y": None if p.at_infinity else str(p.y),
            "order": self.order,
            "halved_from": self.halved_from,
        }


def _others(a: int) -> tuple[int, int]:
    b, c = (k for k in (1, 2, 3) if k != a)
    return b, c


def halve_two_torsion(curve: Curve, a: int) -> list[TorsionPoint]:
    """The four Q with 2Q = (a_a, 0), labelled Q{a}{e}{y-sign}."""
    if a not in (1, 2, 3):
        raise ValueError("root index must be 1, 2 or 3")
    t = curve.tower
    b, c = _others(a)
    u, v = t.sqrt_difference(a, b), t.sqrt_difference(a, c)
    alpha = curve.roots[a - 1]
    target = curve.two_torsion(a)
    out = []
    for e, es in ((1, "+"), (-1, "-")):
        x = alpha + e * u * v
        y0 = u * v * (u + e * v)
        if y0 * y0 != curve.f(x):
            raise TorsionConstructionError(f"no square root of f(x) in the tower for root {a}, branch {es}")
        for sign, ys in ((1, "+"), (-1, "-")):
            q = EllipticPoint(x, sign * y0)
            if ec_double(curve, q) != target:
                raise TorsionConstructionError(f"2*Q{a}{es}{ys} != (a{a}, 0)")
            out.append(TorsionPoint(f"Q{a}{es}{ys}", q, 4, a))
    return out


def enumerate_4_torsion(curve: Curve) -> list[TorsionPoint]:
    pts = [TorsionPoint("O", INFINITY, 1)]
    pts += [TorsionPoint(f"T{a}", curve.two_torsion(a), 2) for a in (1, 2, 3)]
    for a in (1, 2, 3):
        pts += halve_two_torsion(curve, a)
    return pts


def point_orders_ok(curve: Curve, pts: Sequence[TorsionPoint]) -> bool:
    """Distinctness, and 2Q is a nonzero 2-torsion point for each proper Q."""
    if len({p.point for p in pts}) != len(pts):
        return False
    two = {curve.two_torsion(a) for a in (1, 2, 3)}
    for p in pts:
        if p.order == 4:
            d = ec_double(curve, p.point)
            if d.at_infinity or d not in two:
                return False
        elif p.order == 2:
            if not ec_double(curve, p.point).at_infinity:
                return False
    return True


def addition_table(curve: Curve, pts: Sequence[TorsionPoint]) -> list[list[int]]:
    """table[i][j] = index of pts[i] + pts[j]; raises if a sum leaves the set."""
    index = {p.point: k for k, p in enumerate(pts)}
    table = [[0] * len(pts) for _ in pts]
    for i, p in enumerate(pts):
        for j in range(i, len(pts)):
            s = ec_add(curve, p.point, pts[j].point)
            if s not in index:
                raise ArithmeticError(f"{p.label} + {pts[j].label} is not among the 4-torsion points")
            table[i][j] = table[j][i] = index[s]
    return table


# --- generation of the tower by torsion coordinates -----------------------------


def _coords(pts: Sequence[TorsionPoint]) -> dict[str, TowerElement]:
    out = {}
    for p in pts:
        if p.order == 4:
            out[f"x({p.label})"] = p.point.x
            out[f"y({p.label})"] = p.point.y
    return out


# each entry: radical, printable identity, evaluator on (coordinates, roots)
Identity = tuple[str, str, Callable[[dict, Sequence[TowerElement]], TowerElement]]


def _ratio(c: dict, label: str, root: TowerElement) -> TowerElement:
    return c[f"y({label})"] / (c[f"x({label})"] - root)


CANDIDATE_IDENTITIES: list[Identity] = [
    ("s12", "(y(Q1++)/(x(Q1++)-a1) - y(Q1-+)/(x(Q1-+)-a1))/2",
     lambda c, a: (_ratio(c, "Q1++", a[0]) - _ratio(c, "Q1-+", a[0])) / 2),
    ("s13", "(y(Q1++)/(x(Q1++)-a1) + y(Q1-+)/(x(Q1-+)-a1))/2",
     lambda c, a: (_ratio(c, "Q1++", a[0]) + _ratio(c, "Q1-+", a[0])) / 2),
    ("s23", "(y(Q2++)/(x(Q2++)-a2) + y(Q2-+)/(x(Q2-+)-a2))/2",
     lambda c, a: (_ratio(c, "Q2++", a[1]) + _ratio(c, "Q2-+", a[1])) / 2),
    ("i", "(x(Q2++)-a2)*(a1-a3)/((x(Q1++)-a1)*(x(Q3-+)-a3))",
     lambda c, a: (c["x(Q2++)"] - a[1]) * (a[0] - a[2]) / ((c["x(Q1++)"] - a[0]) * (c["x(Q3-+)"] - a[2]))),
]


def search_expression(tower: HyperellipticTower, coords: dict[str, TowerElement], target: TowerElement,
                      max_degree: int = 3) -> list[tuple[object, str]] | None:
    """Write ``target`` as a base-field combination of products of at most
    ``max_degree`` coordinates, by incremental elimination on coefficient
    vectors.  Returns [(coefficient, product label)] or None."""
    names = list(coords)
    base = tower.base
    # echelon rows: (pivot mask, vector, combination {label: coeff})
    rows: list[tuple[int, dict[int, object], dict[str, object]]] = []

    def reduce(vec: dict[int, object], comb: dict[str, object]):
        vec, comb = dict(vec), dict(comb)
        for pivot, rvec, rcomb in rows:
            c = vec.get(pivot)
            if c is None or c == 0:
                continue
            for m, x in rvec.items():
                vec[m] = vec.get(m, base.zero) - c * x
            for lab, x in rcomb.items():
                comb[lab] = comb.get(lab, base.zero) - c * x
            vec = {m: x for m, x in vec.items() if x != 0}
        return vec, comb

    def solve() -> list[tuple[object, str]] | None:
        vec, comb = reduce(target.coeffs, {})
        if vec:
            return None
        return [(-c, lab) for lab, c in comb.items() if c != 0]

    for degree in range(max_degree + 1):
        for combo in combinations_with_replacement(range(len(names)), degree):
            value = tower.one
            for k in combo:
                value = value * coords[names[k]]
            label = "*".join(names[k] for k in combo) or "1"
            vec, comb = reduce(value.coeffs, {label: base.one})
            if not vec:
                continue
            pivot = max(vec)
            inv = base.one / vec[pivot]
            vec = {m: x * inv for m, x in vec.items()}
            comb = {lab: x * inv for lab, x in comb.items()}
            rows.append((pivot, vec, comb))
            if len(rows) == tower.degree:
                return solve()
        found = solve()
        if found is not None:
            return found
    return None


@dataclass
class GenerationResult:
    radical: str
    method: str
    expression: str
    verified: bool


def field_generation(curve: Curve, pts: Sequence[TorsionPoint], use_candidates: bool = True,
                     max_degree: int = 3) -> list[GenerationResult]:
    tower = curve.tower
    coords = _coords(pts)
    results = []
    for name in tower.names:
        target = tower.radical(name)
        found = None
        if use_candidates:
            for rad, text, fn in CANDIDATE_IDENTITIES:
                if rad == name and fn(coords, curve.roots) == target:
                    found = GenerationResult(name, "identity", text, True)
                    break
        if found is None:
            combo = search_expression(tower, coords, target, max_degree)
            if combo is None:
                found = GenerationResult(name, "search", "not found", False)
            else:
                value = tower.zero
                for c, lab in combo:
                    term = tower.const(c)
                    if lab != "1":
                        for factor in lab.split("*"):
                            term = term * coords[factor]
                    value = value + term
                text = " + ".join(f"({c})*{lab}" for c, lab in combo)
                found = GenerationResult(name, "search", text, value == target)
        results.append(found)
    return results


def minimality(curve: Curve, pts: Sequence[TorsionPoint]) -> dict[str, str | None]:
    """For each radical, a coordinate that leaves the subtower without it."""
    coords = _coords(pts)
    names = curve.tower.names
    out: dict[str, str | None] = {}
    for r in names:
        rest = [n for n in names if n != r]
        out[r] = next((lab for lab, v in coords.items() if subtower_membership(v, rest) is None), None)
    return out


# --- rational specializations ----------------------------------------------------


def is_generic_specialization(values: Sequence[int | Fraction]) -> bool:
    """Whether -1, a1-a2, a1-a3, a2-a3 are independent modulo rational squares,
    i.e. the specialized tower is a field of degree 16."""
    from .field_tower.ratfunc import is_rational_square

    a = [Fraction(v) for v in values]
    if len(set(a)) != 3:
        return False
    radicands = [Fraction(-1), a[0] - a[1], a[0] - a[2], a[1] - a[2]]
    for mask in range(1, 16):
        prod = Fraction(1)
        for k in range(4):
            if mask >> k & 1:
                prod *= radicands[k]
        if is_rational_square(prod):
            return False
    return True


def random_specialization(rng: random.Random, bound: int = 60) -> tuple[Fraction, Fraction, Fraction]:
    while True:
        vals = tuple(Fraction(rng.randint(-bound, bound), rng.randint(1, 6)) for _ in range(3))
        if is_generic_specialization(vals):
            return vals


def check_specialization(symbolic: Curve, pts: Sequence[TorsionPoint],
                         values: Sequence[int | Fraction]) -> list[str]:
    """Re-check the symbolic torsion identities at a rational point; returns failures."""
    sym_tower = symbolic.tower
    target = HyperellipticTower(1, values)
    curve = Curve(target)
    failures = []
    spec_pts = []
    for p in pts:
        if p.point.at_infinity:
            spec_pts.append(p)
            continue
        q = EllipticPoint(sym_tower.specialize(p.point.x, target), sym_tower.specialize(p.point.y, target))
        spec_pts.append(TorsionPoint(p.label, q, p.order, p.halved_from))
        if not curve.contains(q):
            failures.append(f"{p.label} leaves the specialized curve")
        if p.halved_from is not None and ec_double(curve, q) != curve.two_torsion(p.halved_from):
            failures.append(f"2*{p.label} != T{p.halved_from} after specialization")
    direct = [p.point for p in enumerate_4_torsion(curve)]
    if [p.point for p in spec_pts] != direct:
        failures.append("specialized points differ from the points built over Q")
    coords = _coords(spec_pts)
    for rad, text, fn in CANDIDATE_IDENTITIES:
        if fn(coords, curve.roots) != target.radical(rad):
            failures.append(f"identity for {rad} fails after specialization")
    return failures


def verify_torsion4(seed: int = 0, specializations: int = 10, values: Sequence[Fraction] | None = None,
                    table: bool = False, fault: bool = False) -> VerificationReport:
    """Construct the twelve proper 4-torsion points and certify the field they generate."""
    details: list[str] = []
    data: dict = {}
    with stopwatch() as ms:
        tower = HyperellipticTower(1)
        curve = Curve(tower)
        try:
            pts = enumerate_4_torsion(curve)
        except TorsionConstructionError as exc:
            pts, ok_construct = [], False
            details.append(f"construction failed: {exc}")
        else:
            ok_construct = True
        if fault and pts:
            p = pts[4]
            pts[4] = TorsionPoint(p.label, EllipticPoint(p.point.x + 1, p.point.y), p.order, p.halved_from)
        proper = [p for p in pts if p.order == 4]
        on_curve = all(curve.contains(p.point) for p in pts)
        doubling = all(
            ec_double(curve, p.point) == curve.two_torsion(p.halved_from) for p in proper
        )
        orders = point_orders_ok(curve, pts) if pts else False
        contained = all(
            v.tower == tower and all(m < tower.degree for m in v.coeffs) for v in _coords(pts).values()
        )
        details.append(f"proper 4-torsion points: {len(proper)}; on curve: {on_curve}; 2Q = parent: {doubling}")
        details.append(f"pairwise distinct with exact orders: {orders}")
        details.append(f"coordinates in Q(a1,a2,a3)(i, s12, s13, s23): {contained}")

        gen = field_generation(curve, pts) if ok_construct else []
        generated = bool(gen) and all(r.verified for r in gen)
        for r in gen:
            details.append(f"generation {r.radical} = {r.expression} [{r.method}, {'ok' if r.verified else 'FAILED'}]")

        minimal = minimality(curve, pts) if pts else {}
        needed = bool(minimal) and all(v is not None for v in minimal.values())
        for r, lab in minimal.items():
            details.append(f"radical {r} required by {lab}")

        table_ok = True
        if table and ok_construct:
            try:
                tab = addition_table(curve, pts)
            except ArithmeticError as exc:
                table_ok = False
                details.append(f"addition table: {exc}")
            else:
                n = len(pts)
                table_ok = all(tab[tab[i][j]][k] == tab[i][tab[j][k]] for i in range(n) for j in range(n) for k in range(n))
                details.append(f"16-point subgroup closed and associative: {table_ok}")

        rng = random.Random(seed)
        spec_values = [tuple(Fraction(v) for v in values)] if values is not None else [
            random_specialization(rng) for _ in range(specializations)
        ]
        spec_ok = True
        for vals in spec_values:
            shown = ",".join(str(v) for v in vals)
            if not is_generic_specialization(vals):
                details.append(f"specialization ({shown}) is degenerate: some radical product is a rational square")
            try:
                failures = check_specialization(curve, pts, vals)
            except (TowerConsistencyError, ZeroDivisionError, TorsionConstructionError) as exc:
                failures = [f"arithmetic failure: {exc}"]
            spec_ok = spec_ok and not failures
            details.append(f"specialization ({shown}): {'ok' if not failures else '; '.join(failures)}")

        data["points"] = [p.to_dict() for p in pts]
        passed = all([ok_construct, len(proper) == 12, on_curve, doubling, orders, contained,
                      generated, needed, table_ok, spec_ok])
    return VerificationReport(
        command="torsion4",
        genus=1,
        level=2,
        expected=12,
        computed=len(proper),
        passed=passed,
        elapsed_ms=ms[0],
        details=details,
        seed=seed if values is None else None,
        data=data,
    )
