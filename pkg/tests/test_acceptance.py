"""End-to-end acceptance gate.

Each test prints one ``ACCEPT <n> PASS|FAIL ...`` line (visible with ``-s``
or in the summary of ``pytest -rA``).
"""

import random
import time

from diophantus.arith import cornacchia_two_squares, primes_up_to
from diophantus.criteria import (
    RedeiVerdict,
    character_profile_d34,
    decide_d34,
    decide_gauss64,
    decide_multinorm_5_34,
    decide_x2_plus_dy2_prime,
    epstein_redei,
    gauss64_local_failure,
)
from diophantus.decision import Status
from diophantus.errors import DegenerateDiscriminant, LocallyUnsolvable
from diophantus.localsolve import QuadEquation, everywhere_locally_solvable, hilbert_product, vp, zp_solvable
from diophantus.oracle import DEFAULT_BASIS, GAUSS64_EQ, definite_search, norms_in_box, residue_solvable_mod
from diophantus.pell import negative_pell_solvable, represent


def report(number, ok, detail, started):
    line = f"ACCEPT {number} {'PASS' if ok else 'FAIL'} {detail} ({time.perf_counter() - started:.1f}s)"
    print(line)
    return line


def test_1_gauss64_equivalence():
    started = time.perf_counter()
    bad = []
    for n in range(1, 100_001):
        verdict = decide_gauss64(n, find_witness=False).is_solvable
        truth = definite_search(QuadEquation(*GAUSS64_EQ, n=n)).is_solvable
        if verdict != truth:
            bad.append(n)
    elapsed = time.perf_counter() - started
    line = report(1, not bad and elapsed < 60, f"gauss64 1..100000 mismatches={len(bad)} first={bad[:5]}", started)
    assert not bad, line
    assert elapsed < 60, line


def test_2_d34_equivalence():
    started = time.perf_counter()
    bad = []
    for n in range(-5000, 5001):
        if n == 0:
            continue
        if decide_d34(n, find_witness=False).is_solvable != represent(34, n).is_solvable:
            bad.append(n)
    anchors = decide_d34(-1).status is Status.UNSOLVABLE and decide_d34(2).is_solvable
    elapsed = time.perf_counter() - started
    ok = not bad and anchors and elapsed < 120
    line = report(2, ok, f"d34 0<|n|<=5000 mismatches={len(bad)} first={bad[:5]} anchors={anchors}", started)
    assert ok, line


def test_3_epstein_redei():
    started = time.perf_counter()
    covered, exceptions = 0, []
    for l in primes_up_to(100_000):
        if l % 8 != 1:
            continue
        _, s = cornacchia_two_squares(2 * l)
        if s % 8 not in (3, 5):
            continue
        covered += 1
        if epstein_redei(l) is not RedeiVerdict.UNSOLVABLE or negative_pell_solvable(2 * l)[0]:
            exceptions.append(l)
    ok = not exceptions and covered > 0
    line = report(3, ok, f"Epstein-Redei primes covered={covered} exceptions={exceptions[:5]}", started)
    assert ok, line


def test_4_ring_class_x2_plus_64y2():
    started = time.perf_counter()
    bad, tested = [], 0
    for l in primes_up_to(100_000):
        if l == 2:
            continue
        tested += 1
        verdict = decide_x2_plus_dy2_prime(64, l, find_witness=False).is_solvable
        truth = definite_search(QuadEquation(1, 0, 64, n=l)).is_solvable
        if verdict != truth:
            bad.append(l)
    line = report(4, not bad, f"x^2+64y^2 odd primes tested={tested} mismatches={len(bad)} first={bad[:5]}", started)
    assert not bad, line


def test_5_gauss64_local_closed_form():
    started = time.perf_counter()
    bad = []
    for n in range(1, 5001):
        closed = gauss64_local_failure(n) is None
        solver = all(r.solvable for r in everywhere_locally_solvable(QuadEquation(*GAUSS64_EQ, n=n)))
        if closed != solver:
            bad.append(n)
    line = report(5, not bad, f"gauss64 local conditions 1..5000 mismatches={len(bad)} first={bad[:5]}", started)
    assert not bad, line


def test_6_hilbert_reciprocity():
    started = time.perf_counter()
    rng = random.Random(20240601)
    exceptions = []
    for _ in range(10_000):
        a = rng.choice((-1, 1)) * rng.randint(1, 10**6)
        b = rng.choice((-1, 1)) * rng.randint(1, 10**6)
        if hilbert_product(a, b) != 1:
            exceptions.append((a, b))
    line = report(6, not exceptions, f"Hilbert reciprocity pairs=10000 exceptions={exceptions[:3]}", started)
    assert not exceptions, line


def test_7_profile_coherence():
    started = time.perf_counter()
    checked, bad = 0, []
    for n in range(-2000, 2001):
        if n == 0:
            continue
        try:
            profile = character_profile_d34(n)
        except LocallyUnsolvable:
            continue
        checked += 1
        if profile.combinable != decide_d34(n, find_witness=False).is_solvable:
            bad.append(n)
    ok = not bad and checked > 0
    line = report(7, ok, f"d34 profiles locally solvable={checked} exceptions={bad[:5]}", started)
    assert ok, line


def test_8_multinorm_soundness_and_anchors():
    started = time.perf_counter()
    found = norms_in_box(DEFAULT_BASIS, 60, 500)
    unsound = [n for n in sorted(found) if n and not decide_multinorm_5_34(n, find_witness=False).is_solvable]
    one = decide_multinorm_5_34(1)
    sixteen = decide_multinorm_5_34(16)
    minus_one = decide_multinorm_5_34(-1)
    anchors = {
        "1": one.is_solvable,
        "16": sixteen.is_solvable and DEFAULT_BASIS.norm(sixteen.witness) == 16,
        "16 witness is 2": DEFAULT_BASIS.element(sixteen.witness) == (2, 0, 0, 0),
        "-1": minus_one.status is Status.UNSOLVABLE,
    }
    ok = not unsound and all(anchors.values())
    line = report(
        8, ok, f"multinorm witnesses={len(found)} unsound={unsound[:5]} anchors={anchors}", started
    )
    assert ok, line


def _sound_depth(eq, p):
    # residue solvability at this depth forces a liftable point
    nprime = eq.primitive().completed_constant()
    return vp(nprime, p) + 2 * vp(4 * eq.disc, p) + 3


def test_9_hensel_harness():
    started = time.perf_counter()
    rng = random.Random(9_000_009)
    cases = []
    while len(cases) < 10_000:
        coeffs = [rng.randint(-20, 20) for _ in range(7)]
        try:
            eq = QuadEquation(*coeffs)
        except DegenerateDiscriminant:
            continue
        cases.append((eq, rng.choice((2, 3, 5, 7, 17))))

    raw, mismatches = [], []
    for eq, p in cases:
        verdict = zp_solvable(eq, p).solvable
        if verdict == residue_solvable_mod(eq, p, 6):
            continue
        raw.append((eq.coeffs + (eq.n,), p))
        # a mod p^6 point need not lift; settle it at a depth where lifting is forced
        if eq.primitive().completed_constant() == 0:
            mismatches.append((eq.coeffs + (eq.n,), p))
            continue
        if verdict != residue_solvable_mod(eq, p, _sound_depth(eq, p)):
            mismatches.append((eq.coeffs + (eq.n,), p))
    ok = not mismatches
    line = report(
        9,
        ok,
        f"Hensel cases=10000 mod-p^6 disagreements={len(raw)} {raw[:3]} "
        f"mismatches at lifting depth={len(mismatches)}",
        started,
    )
    assert ok, line
    # the shallow search only ever over-reports (it cannot miss a genuine point)
    for coeffs, p in raw:
        assert not zp_solvable(QuadEquation(*coeffs), p).solvable
