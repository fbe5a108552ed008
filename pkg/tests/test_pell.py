import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from diophantus.errors import BadInput, NoWitness, SquareInput, ZeroInput
from diophantus.pell import (
    class_representatives,
    continued_fraction,
    fundamental_solution,
    negative_pell_solvable,
    orbit_enumerate,
    pell_data,
    represent,
    representation_bound,
)

NONSQUARES = [d for d in range(2, 10**4) if math.isqrt(d) ** 2 != d]


def brute_negative_pell(d, ymax=10**4):
    for y in range(1, ymax + 1):
        x = math.isqrt(d * y * y - 1)
        if x * x == d * y * y - 1:
            return True
    return False


def brute_represent(d, n, ymax=10**4):
    for y in range(ymax + 1):
        rhs = n + d * y * y
        if rhs >= 0 and math.isqrt(rhs) ** 2 == rhs:
            return True
    return False


def test_continued_fraction_examples():
    assert continued_fraction(2) == (1, (2,))
    assert continued_fraction(34) == (5, (1, 4, 1, 10))
    assert continued_fraction(82) == (9, (18,))
    with pytest.raises(SquareInput):
        continued_fraction(49)
    with pytest.raises(BadInput):
        continued_fraction(1)


def test_fundamental_examples():
    assert fundamental_solution(2) == (3, 2)
    assert fundamental_solution(34) == (35, 6)
    assert fundamental_solution(82) == (163, 18)


def test_negative_pell_examples():
    assert negative_pell_solvable(2) == (True, (1, 1))
    assert negative_pell_solvable(34) == (False, None)
    assert negative_pell_solvable(82) == (True, (9, 1))


def test_pell_data_invariants():
    for d in NONSQUARES:
        data = pell_data(d)
        assert data.cf_head == math.isqrt(d)
        assert data.cf_period[-1] == 2 * data.cf_head
        t, u = data.fundamental
        assert t * t - d * u * u == 1 and t > 0 and u > 0
        assert (data.neg_fundamental is not None) == (data.period_length % 2 == 1)
        if data.neg_fundamental:
            x, y = data.neg_fundamental
            assert x * x - d * y * y == -1


def test_fundamental_is_minimal():
    for d in NONSQUARES[:300]:
        t, u = fundamental_solution(d)
        if u > 10**5:
            continue
        for y in range(1, u):
            x = math.isqrt(d * y * y + 1)
            assert x * x != d * y * y + 1, (d, y)


def test_negative_pell_matches_search():
    for d in NONSQUARES:
        if d >= 500:
            break
        solvable, witness = negative_pell_solvable(d)
        if solvable:
            x, y = witness
            assert x * x - d * y * y == -1
            # the search range can be too short (d = 109 needs y = 851525)
            assert brute_negative_pell(d) == (y <= 10**4), d
        else:
            assert not brute_negative_pell(d), d


def test_represent_examples():
    assert represent(34, 2).witness == (6, 1)
    assert not represent(34, -1).is_solvable
    assert represent(34, 33).witness == (13, 2)
    with pytest.raises(ZeroInput):
        represent(34, 0)
    with pytest.raises(SquareInput):
        represent(36, 5)


def _represented_by_scan(d, ns, ymax=10**4):
    """Which n in ``ns`` equal x^2 - d y^2 for some 0 <= y <= ymax."""
    dy2 = d * np.arange(ymax + 1, dtype=np.int64) ** 2
    out = set()
    for n in ns:
        rhs = dy2 + n
        rhs = rhs[rhs >= 0]
        r = np.sqrt(rhs.astype(np.float64)).astype(np.int64)
        for adj in (-1, 0, 1):
            rr = r + adj
            if np.any((rr >= 0) & (rr * rr == rhs)):
                out.add(n)
                break
    return out


def test_represent_never_misses_a_witness():
    ns = [n for n in range(-200, 201) if n]
    for d in NONSQUARES:
        if d >= 100:
            break
        found = _represented_by_scan(d, ns)
        for n in ns:
            got = represent(d, n)
            if got.is_solvable:
                x, y = got.witness
                assert x * x - d * y * y == n
                # the witness has minimal y, so the scan sees n iff y is in range
                assert (n in found) == (y <= 10**4), (d, n)
            else:
                assert n not in found, (d, n)


def test_represent_witness_is_canonical():
    for n in range(-300, 301):
        if n == 0:
            continue
        got = represent(34, n)
        if got.is_solvable:
            x, y = got.witness
            assert x >= 0 and y >= 0
            assert not any(brute_represent(34, n, yy) for yy in range(y)) if y else True


def test_representation_bound_covers_every_class():
    for d in (2, 3, 5, 6, 7, 10, 13, 34, 61):
        for n in (-7, -2, -1, 1, 2, 3, 7, 14, 33):
            bound = representation_bound(d, n)
            for x, y in class_representatives(d, n):
                assert 0 <= y <= bound


def test_orbit_examples():
    assert orbit_enumerate(2, 1, 3) == [(1, 0), (3, 2), (17, 12)]
    sols = orbit_enumerate(34, 2, 2)
    assert sols[0] == (6, 1)
    assert all(x * x - 34 * y * y == 2 for x, y in sols)
    with pytest.raises(NoWitness):
        orbit_enumerate(34, -1, 1)
    with pytest.raises(BadInput):
        orbit_enumerate(2, 1, 0)


@given(
    st.sampled_from([2, 3, 5, 7, 10, 13, 34, 82]),
    st.integers(min_value=-60, max_value=60).filter(bool),
    st.integers(min_value=1, max_value=12),
)
def test_orbit_solutions_are_exact(d, n, count):
    try:
        sols = orbit_enumerate(d, n, count)
    except NoWitness:
        assert not represent(d, n).is_solvable
        return
    assert len(sols) == count
    assert all(x * x - d * y * y == n for x, y in sols)


def test_continued_fraction_route_matches_scan():
    from diophantus.pell import _cf_solutions, _same_class, _scan_solutions

    for d in range(2, 60):
        if math.isqrt(d) ** 2 == d:
            continue
        for n in range(-120, 121):
            if n == 0 or representation_bound(d, n) > 10**5:
                continue
            scan = {(abs(x), y) for x, y in _scan_solutions(d, n)}
            cf = _cf_solutions(d, n)
            assert all(x * x - d * y * y == n for x, y in cf)
            best = lambda sols: min(sols, key=lambda s: (s[1], s[0])) if sols else None
            assert best(scan) == best({(abs(x), abs(y)) for x, y in cf}), (d, n)
            classes = []
            for c in cf:
                if not any(_same_class(c, r, d, n) for r in classes):
                    classes.append(c)
            assert len(classes) == len(class_representatives(d, n)), (d, n)
