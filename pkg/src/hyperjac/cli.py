"""hyperjac command line: run verifications, print reports, exit with a status.

Exit codes: 0 every check passed, 1 some check failed, 2 a resource cap was
hit, 3 usage error.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction
from typing import Callable, Sequence

from . import group_enum, homology, torsion4
from .field_tower import verify_radical_independence
from .group_enum import ClosureLimitError, default_limit
from .modring import MAX_LEVEL, brute_force_sp_count, gamma_quotient_order, sp_group_order
from .report import VerificationReport, stopwatch

EXIT_OK, EXIT_FAIL, EXIT_CAP, EXIT_USAGE = 0, 1, 2, 3
MAX_GENUS = 4
DEFAULT_SAMPLES = 1000
DEFAULT_SEED = 0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _bounded(name: str, lo: int, hi: int) -> Callable[[str], int]:
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer, got {text!r}")
        if not lo <= value <= hi:
            raise argparse.ArgumentTypeError(f"{name} must lie in [{lo}, {hi}], got {value}")
        return value

    return parse


def _positive(text: str) -> int:
    return _bounded("value", 1, 10**12)(text)


def _root_values(text: str) -> tuple[Fraction, ...]:
    try:
        values = tuple(Fraction(part.strip()) for part in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"cannot read rational values from {text!r}")
    if len(values) != 3 or len(set(values)) != 3:
        raise argparse.ArgumentTypeError("need three distinct rational values a1,a2,a3")
    return values


# --- individual checks ------------------------------------------------------------


def orders_report(g: int, n: int, fault: bool = False) -> VerificationReport:
    """Closed-form group orders against an independent count."""
    details = []
    with stopwatch() as ms:
        expected = sp_group_order(g, n)
        quotient = gamma_quotient_order(g, n)
        if n == 1 and g <= 2:
            computed = brute_force_sp_count(g)
            details.append(f"|Sp({2 * g}, F_2)| by exhaustive enumeration: {computed}")
        else:
            # symplectic bases over F_2, times the kernel of reduction mod 2
            bases = 1
            for i in range(1, g + 1):
                bases *= (4**i - 1) * 2 ** (2 * i - 1)
            dim = group_enum.lie_algebra_dimension(g)
            computed = bases * 2 ** ((n - 1) * dim)
            details.append(f"symplectic bases over F_2: {bases}; kernel of reduction: 2^{(n - 1) * dim}")
        if fault:
            computed += 1
        details.append(f"|Gamma(2)/Gamma(2^{n})| = {quotient}")
    return VerificationReport("orders", g, n, expected, computed, expected == computed, ms[0], details,
                              data={"sp_order": expected, "gamma_quotient_order": quotient})


def _cap_report(command: str, g: int, n: int | None, expected: int | None,
                exc: ClosureLimitError) -> VerificationReport:
    return VerificationReport(command, g, n, expected, None, False, 0, [f"aborted: {exc}"], data={"aborted": True})


class _Plan:
    """Checks for one invocation, in output order."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.fault = args.inject_fault
        self.limit = args.max_elements if args.max_elements is not None else default_limit()
        self.steps: list[tuple[str, int, int | None, int | None, Callable[[], VerificationReport]]] = []

    def add(self, command: str, g: int, n: int | None, fn: Callable[[], VerificationReport],
            expected: int | None = None) -> None:
        self.steps.append((command, g, n, expected, fn))

    def run(self) -> Sequence[VerificationReport]:
        out = []
        for command, g, n, expected, fn in self.steps:
            try:
                out.append(fn())
            except ClosureLimitError as exc:
                out.append(_cap_report(command, g, n, expected, exc))
        return out


def _add_orders(p: _Plan, g: int, n: int) -> None:
    p.add("orders", g, n, lambda: orders_report(g, n, p.fault))


def _add_braid(p: _Plan, g: int) -> None:
    p.add("braid-relations", g, None, lambda: homology.verify_braid_relations(g, p.fault))


def _add_purity(p: _Plan, g: int, samples: int, seed: int) -> None:
    p.add("symplecticity", g, None, lambda: homology.symplecticity_property(g, samples, seed, p.fault))
    p.add("purity", g, 1, lambda: homology.purity_mod2_property(g, samples, seed, p.fault))


def _add_mod2(p: _Plan, g: int) -> None:
    p.add("mod2-quotient", g, 1, lambda: group_enum.verify_mod2_quotient(g, p.limit, p.fault),
          math.factorial(2 * g + 1))


def _add_full_sp(p: _Plan, n: int) -> None:
    p.add("full-sp-g1", 1, n, lambda: group_enum.verify_g1_full_sp(n, p.limit, p.fault), sp_group_order(1, n))


def _add_theorem(p: _Plan, g: int, n: int, dump: str | None = None) -> None:
    p.add("theorem", g, n, lambda: group_enum.verify_theorem_level(g, n, p.limit, p.fault, dump),
          gamma_quotient_order(g, n))


def _add_mod4(p: _Plan, g: int) -> None:
    p.add("mod4-rank", g, 2, lambda: group_enum.verify_mod4_rank(g, p.fault))


def _add_independence(p: _Plan, g: int) -> None:
    p.add("radical-independence", g, None, lambda: verify_radical_independence(g, p.fault))


def _add_torsion(p: _Plan, seed: int, values: Sequence[Fraction] | None) -> None:
    p.add("torsion4", 1, 2, lambda: torsion4.verify_torsion4(seed=seed, values=values, fault=p.fault))


def build_plan(args: argparse.Namespace) -> _Plan:
    p = _Plan(args)
    cmd = args.command
    if cmd == "orders":
        _add_orders(p, args.genus, args.level)
    elif cmd == "braid-relations":
        _add_braid(p, args.genus)
    elif cmd == "purity":
        _add_purity(p, args.genus, args.samples, args.seed)
    elif cmd == "mod2-quotient":
        _add_mod2(p, args.genus)
    elif cmd == "full-sp-g1":
        _add_full_sp(p, args.level)
    elif cmd == "theorem":
        if args.level < 2:
            raise UsageError("theorem needs --level >= 2")
        _add_theorem(p, args.genus, args.level, args.dump)
    elif cmd == "mod4-rank":
        _add_mod4(p, args.genus)
    elif cmd == "radical-independence":
        _add_independence(p, args.genus)
    elif cmd == "torsion4":
        _add_torsion(p, args.seed, args.specialize)
    elif cmd == "all":
        g, n = args.genus, args.level
        _add_orders(p, g, n)
        _add_braid(p, g)
        _add_purity(p, g, args.samples, args.seed)
        _add_mod2(p, g)
        _add_full_sp(p, n)
        if n >= 2:
            _add_theorem(p, g, n)
        _add_mod4(p, g)
        _add_independence(p, g)
        _add_torsion(p, args.seed, None)
    return p


def make_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON object per check")
    common.add_argument("-v", "--verbose", action="store_true", help="print report details")
    common.add_argument("--max-elements", type=_positive, default=None,
                        help="closure size cap (overrides HYPERJAC_MAX_ELEMENTS)")
    common.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)

    genus = _bounded("genus", 1, MAX_GENUS)
    level = _bounded("level", 1, MAX_LEVEL)

    parser = _Parser(prog="hyperjac", description="Exact verification of hyperelliptic monodromy and torsion fields.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_text, description=help_text)

    c = cmd("orders", "closed-form |Sp(2g, Z/2^n)| and |Gamma(2)/Gamma(2^n)|")
    c.add_argument("--genus", type=genus, required=True)
    c.add_argument("--level", type=level, required=True)

    c = cmd("braid-relations", "braid group relations hold under the transvection representation")
    c.add_argument("--genus", type=genus, required=True)

    c = cmd("purity", "R(w) = I mod 2 exactly for pure braids, and R(w) preserves the form")
    c.add_argument("--genus", type=genus, required=True)
    c.add_argument("--samples", type=_positive, default=DEFAULT_SAMPLES)
    c.add_argument("--seed", type=int, default=DEFAULT_SEED)

    c = cmd("mod2-quotient", "image of the braid group mod 2 has order (2g+1)!")
    c.add_argument("--genus", type=genus, required=True)

    c = cmd("full-sp-g1", "genus-1 image mod 2^n is all of SL(2, Z/2^n)")
    c.add_argument("--level", type=level, required=True)

    c = cmd("theorem", "pure braid image mod 2^n has order |Gamma(2)/Gamma(2^n)|")
    c.add_argument("--genus", type=genus, required=True)
    c.add_argument("--level", type=level, required=True)
    c.add_argument("--dump", metavar="PATH", default=None, help="write the sorted hex closure dump")

    c = cmd("mod4-rank", "Gamma(2)/Gamma(4) rank against the symplectic Lie algebra over F_2")
    c.add_argument("--genus", type=genus, required=True)

    c = cmd("radical-independence", "the a_i - a_j are independent modulo squares")
    c.add_argument("--genus", type=genus, required=True)

    c = cmd("torsion4", "genus-1 4-torsion points and the field they generate")
    c.add_argument("--specialize", type=_root_values, default=None, metavar="a1,a2,a3",
                   help="check at these rational roots instead of random ones")
    c.add_argument("--seed", type=int, default=DEFAULT_SEED)

    c = cmd("all", "run the whole suite for one genus and level")
    c.add_argument("--genus", type=genus, required=True)
    c.add_argument("--level", type=level, required=True)
    c.add_argument("--samples", type=_positive, default=DEFAULT_SAMPLES)
    c.add_argument("--seed", type=int, default=DEFAULT_SEED)
    return parser


def exit_code(reports: Sequence[VerificationReport]) -> int:
    if any(isinstance(r.data, dict) and r.data.get("aborted") for r in reports):
        return EXIT_CAP
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def main(argv: Sequence[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        plan = build_plan(args)
    except UsageError as exc:
        print(f"hyperjac: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    reports = []
    for report in plan.run():
        reports.append(report)
        if args.json:
            print(report.to_json(), flush=True)
        else:
            print(report.summary(), flush=True)
            if args.verbose or not report.passed:
                for line in report.details:
                    print(f"    {line}")
    return exit_code(reports)


if __name__ == "__main__":
    sys.exit(main())
