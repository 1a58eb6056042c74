"""Acceptance criteria, each checked at its stated bound."""

import math
import random
import re
import resource
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from conftest import record_criterion
from hyperjac.braid import random_word
from hyperjac.field_tower import HyperellipticTower, verify_radical_independence
from hyperjac.group_enum import (
    closure,
    gamma2mod4_rank,
    lie_algebra_dimension,
    pure_generator_images,
    verify_g1_full_sp,
    verify_mod2_quotient,
    verify_theorem_level,
)
from hyperjac.homology import braid_relations, rep_word, rep_word_by_products
from hyperjac.modring import Modulus, brute_force_sp_count, chain_form, is_symplectic, sp_group_order
from hyperjac.torsion4 import (
    Curve,
    check_specialization,
    ec_double,
    enumerate_4_torsion,
    field_generation,
    minimality,
    random_specialization,
)


def peak_rss_bytes() -> int:
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024


def test_criterion_1_braid_relations():
    start = time.perf_counter()
    ok = True
    for g in (1, 2, 3, 4):
        for _, lhs, rhs in braid_relations(g):
            ok &= rep_word_by_products(lhs, g) == rep_word_by_products(rhs, g)
            ok &= rep_word(lhs, g) == rep_word(rhs, g)
    elapsed = time.perf_counter() - start
    record_criterion(1, "braid relations exact for g = 1..4", ok and elapsed < 1, f"{elapsed:.3f} s")
    assert ok
    assert elapsed < 1


def test_criterion_2_symplecticity():
    ok = True
    for g in (1, 2, 3):
        rng = random.Random(1000 + g)
        e = chain_form(g)
        for _ in range(10_000):
            ok &= is_symplectic(rep_word(random_word(rng, 2 * g + 1), g), e)
    record_criterion(2, "R(w) preserves E for 10^4 random words per genus, g <= 3", ok)
    assert ok


def test_criterion_3_mod2_and_full_sp():
    start = time.perf_counter()
    orders = [verify_mod2_quotient(g).computed for g in (1, 2, 3)]
    full = [verify_g1_full_sp(n).computed for n in (1, 2, 3)]
    elapsed = time.perf_counter() - start
    ok = orders == [6, 120, 5040] and orders[0] == sp_group_order(1, 1) and full[1:] == [48, 384]
    ok = ok and [math.factorial(2 * g + 1) for g in (1, 2, 3)] == orders
    record_criterion(3, "mod 2 images of orders 6, 120, 5040; genus 1 mod 4, mod 8 = 48, 384",
                     ok and elapsed < 10, f"{elapsed:.2f} s")
    assert ok
    assert elapsed < 10


def _theorem_case(g: int, n: int) -> tuple[int, int]:
    m = Modulus(n)
    cl = closure(list(pure_generator_images(g, m).values()), m)
    return cl.order, cl.min_congruence_level()


def test_criterion_4_pure_braid_image():
    start = time.perf_counter()
    expected = {(1, 2): 8, (1, 3): 64, (1, 4): 512, (2, 2): 1024, (2, 3): 1_048_576}
    results = {case: _theorem_case(*case) for case in expected}
    elapsed = time.perf_counter() - start
    rss = peak_rss_bytes()
    ok = all(results[c] == (expected[c], 1) for c in expected)
    record_criterion(4, "pure braid image mod 2^n has order 2^((n-1)g(2g+1)), all == I mod 2",
                     ok and elapsed < 300 and rss < 4 << 30, f"{elapsed:.1f} s, peak RSS {rss >> 20} MiB")
    assert ok, results
    assert elapsed < 300
    assert rss < 4 << 30


@pytest.mark.stretch
def test_criterion_4_stretch_genus_three():
    start = time.perf_counter()
    order, level = _theorem_case(3, 2)
    elapsed = time.perf_counter() - start
    rss = peak_rss_bytes()
    ok = order == 2**21 and level == 1
    print(f"criterion 4 stretch [{'PASS' if ok else 'FAIL'}] g=3 n=2 order {order} "
          f"({elapsed:.1f} s, peak RSS {rss >> 20} MiB)")
    assert ok
    assert elapsed < 600
    assert rss < 8 << 30


def test_criterion_5_mod4_rank():
    start = time.perf_counter()
    ranks = [gamma2mod4_rank(g) for g in (1, 2, 3)]
    dims = [lie_algebra_dimension(g) for g in (1, 2, 3)]
    elapsed = time.perf_counter() - start
    ok = ranks == dims == [3, 10, 21]
    record_criterion(5, "Gamma(2)/Gamma(4) rank = Lie algebra dimension = 3, 10, 21",
                     ok and elapsed < 30, f"{elapsed:.2f} s")
    assert ok
    assert elapsed < 30


def test_criterion_6_radical_independence():
    start = time.perf_counter()
    r = verify_radical_independence(1)
    elapsed = time.perf_counter() - start
    ok = r.passed and r.computed == 7 and any("2^3 = 8" in d for d in r.details)
    record_criterion(6, "all 7 subset products of a_i - a_j are non-squares, degree 8",
                     ok and elapsed < 1, f"{elapsed:.3f} s")
    assert ok
    assert elapsed < 1


def test_criterion_7_four_torsion():
    start = time.perf_counter()
    tower = HyperellipticTower(1)
    curve = Curve(tower)
    pts = enumerate_4_torsion(curve)
    proper = [p for p in pts if p.order == 4]
    ok = len(proper) == 12 and len({p.point for p in proper}) == 12
    ok &= all(v.tower == tower for p in proper for v in (p.point.x, p.point.y))
    ok &= all(curve.contains(p.point) for p in proper)
    ok &= all(ec_double(curve, p.point) == curve.two_torsion(p.halved_from) for p in proper)
    gen = field_generation(curve, pts)
    ok &= [r.radical for r in gen] == ["i", "s12", "s13", "s23"] and all(r.verified for r in gen)
    ok &= all(v is not None for v in minimality(curve, pts).values())
    elapsed = time.perf_counter() - start
    record_criterion(7, "12 proper 4-torsion points, doubling, generation and minimality",
                     ok and elapsed < 30, f"{elapsed:.2f} s")
    assert ok
    assert elapsed < 30


def test_criterion_8_oracles():
    counts = (brute_force_sp_count(1), brute_force_sp_count(2))
    ok = counts == (6, 720) == (sp_group_order(1, 1), sp_group_order(2, 1))
    curve = Curve(HyperellipticTower(1))
    pts = enumerate_4_torsion(curve)
    rng = random.Random(8)
    failures = []
    for _ in range(10):
        vals = random_specialization(rng)
        failures += check_specialization(curve, pts, vals)
    ok = ok and not failures
    record_criterion(8, "brute-force |Sp| = 6, 720; torsion identities under 10 rational specializations", ok)
    assert counts == (6, 720)
    assert not failures


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "hyperjac", *args], capture_output=True)


def test_criterion_9_determinism(tmp_path):
    args = ("all", "--genus", "2", "--level", "2", "--seed", "7", "--json")
    a, b = _cli(*args), _cli(*args)
    strip = re.compile(rb'"elapsed_ms":\d+')
    same_json = a.returncode == b.returncode == 0 and strip.sub(b"", a.stdout) == strip.sub(b"", b.stdout)
    dumps = []
    for k in range(3):
        path = tmp_path / f"dump{k}.hex"
        verify_theorem_level(2, 2, dump=path, shuffle_seed=k if k else None)
        dumps.append(path.read_bytes())
    same_dump = dumps[0] == dumps[1] == dumps[2] and len(dumps[0]) > 0
    record_criterion(9, "identical JSON for repeated runs; identical dumps for shuffled generators",
                     same_json and same_dump)
    assert same_json
    assert same_dump
