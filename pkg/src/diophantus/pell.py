"""Continued fractions of sqrt(d), Pell units and exact representation
of integers by x^2 - d y^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .decision import Decision
from .errors import BadInput, NoWitness, SquareInput, ZeroInput


def _check_nonsquare(d: int) -> None:
    if d < 2:
        raise BadInput(f"d must be >= 2, got {d}")
    if math.isqrt(d) ** 2 == d:
        raise SquareInput(f"{d} is a perfect square")


@dataclass(frozen=True)
class PellData:
    d: int
    cf_head: int
    cf_period: tuple[int, ...]
    fundamental: tuple[int, int]
    neg_fundamental: tuple[int, int] | None

    @property
    def period_length(self) -> int:
        return len(self.cf_period)


def continued_fraction(d: int) -> tuple[int, tuple[int, ...]]:
    """(a0, minimal period) of sqrt(d) by the (P, Q) recurrence."""
    _check_nonsquare(d)
    a0 = math.isqrt(d)
    period = []
    P, Q, a = 0, 1, a0
    while a != 2 * a0:
        P = a * Q - P
        Q = (d - P * P) // Q
        a = (a0 + P) // Q
        period.append(a)
    return a0, tuple(period)


@lru_cache(maxsize=4096)
def pell_data(d: int) -> PellData:
    a0, period = continued_fraction(d)
    # convergents p/q over one period; the last-but-one gives the unit
    h_prev, h = 1, a0
    k_prev, k = 0, 1
    for a in period[:-1]:
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
    x, y = h, k
    norm = x * x - d * y * y
    if norm == 1:
        return PellData(d, a0, period, (x, y), None)
    assert norm == -1, (d, x, y, norm)
    t, u = x * x + d * y * y, 2 * x * y
    return PellData(d, a0, period, (t, u), (x, y))


def fundamental_solution(d: int) -> tuple[int, int]:
    """Minimal (t, u) with t^2 - d u^2 = 1."""
    return pell_data(d).fundamental


def negative_pell_solvable(d: int) -> tuple[bool, tuple[int, int] | None]:
    """(solvable, witness) for x^2 - d y^2 = -1; solvable iff the period is odd."""
    data = pell_data(d)
    return data.neg_fundamental is not None, data.neg_fundamental


def representation_bound(d: int, n: int) -> int:
    """Largest y that has to be searched so every solution class of
    x^2 - d y^2 = n has a representative with 0 <= y <= bound."""
    t, u = fundamental_solution(d)
    # u * sqrt(|n| (t + 1) / (2 d)), rounded up, plus one
    num = u * u * abs(n) * (t + 1)
    den = 2 * d
    y = math.isqrt(num // den)
    while y * y * den < num:
        y += 1
    return y + 1


def _same_class(a: tuple[int, int], b: tuple[int, int], d: int, n: int) -> bool:
    # (x'+y'sqrt d)/(x+y sqrt d) is integral iff these congruences hold
    (x, y), (xp, yp) = a, b
    m = abs(n)
    return (x * xp - d * y * yp) % m == 0 and (x * yp - xp * y) % m == 0


SCAN_LIMIT = 10**5


def _scan_solutions(d: int, n: int) -> list[tuple[int, int]]:
    """Every (x, y) with 0 <= y <= representation_bound, both signs of x."""
    out = []
    for y in range(representation_bound(d, n) + 1):
        rhs = n + d * y * y
        if rhs < 0:
            continue
        x = math.isqrt(rhs)
        if x * x == rhs:
            out.append((x, y))
            if x:
                out.append((-x, y))
    return out


def _cf_class_solution(d: int, m: int, z: int) -> tuple[int, int] | None:
    """A solution of x^2 - d y^2 = m in the class attached to z
    (z^2 = d mod |m|), read off the continued fraction of (z + sqrt d)/|m|."""
    s = math.isqrt(d)
    am = abs(m)
    P, Q = z, am
    A1, A2 = 1, 0  # A_{i-1}, A_{i-2}
    B1, B2 = 0, 1
    seen: dict[tuple[int, int], int] = {}
    stop = None
    i = 0
    while stop is None or i < stop:
        if (P, Q) in seen and stop is None:
            # one more full period after the cycle closes
            stop = i + (i - seen[(P, Q)])
        seen.setdefault((P, Q), i)
        if i >= 1 and abs(Q) == 1:
            x, y = am * A1 - z * B1, B1
            if x * x - d * y * y == m:
                return x, y
        a = (P + s) // Q if Q > 0 else -((P + s) // -Q) - 1
        A1, A2 = a * A1 + A2, A1
        B1, B2 = a * B1 + B2, B1
        P = a * Q - P
        Q = (d - P * P) // Q
        i += 1
    return None


def _reduce_in_class(d: int, sol: tuple[int, int]) -> tuple[int, int]:
    """The member of sol's unit orbit with the smallest |y|."""
    t, u = fundamental_solution(d)
    x, y = sol
    for step in (1, -1):
        while True:
            nx, ny = t * x + step * d * u * y, step * u * x + t * y
            if abs(ny) >= abs(y):
                break
            x, y = nx, ny
    return (-x, -y) if y < 0 or (y == 0 and x < 0) else (x, y)


def _cf_solutions(d: int, n: int) -> list[tuple[int, int]]:
    """One solution per z-class for each square divisor f^2 of n."""
    out = []
    for f in range(1, math.isqrt(abs(n)) + 1):
        if n % (f * f):
            continue
        m = n // (f * f)
        if abs(m) == 1:
            if m == 1:
                out.append((f, 0))
            elif pell_data(d).neg_fundamental is not None:
                x, y = pell_data(d).neg_fundamental
                out.append((f * x, f * y))
            continue
        am = abs(m)
        for z in range(-((am - 1) // 2), am // 2 + 1):
            if (z * z - d) % am == 0:
                sol = _cf_class_solution(d, m, z)
                if sol is not None:
                    out.append((f * sol[0], f * sol[1]))
    return [_reduce_in_class(d, sol) for sol in out]


def _candidate_solutions(d: int, n: int) -> list[tuple[int, int]]:
    if representation_bound(d, n) <= SCAN_LIMIT:
        return _scan_solutions(d, n)
    return _cf_solutions(d, n)


def class_representatives(d: int, n: int) -> list[tuple[int, int]]:
    """One solution per class of x^2 - d y^2 = n under +-1 and the unit group.

    Each representative has minimal y >= 0 within its class.
    """
    _check_nonsquare(d)
    if n == 0:
        raise ZeroInput("n must be nonzero")
    reps: list[tuple[int, int]] = []
    for cand in sorted(_candidate_solutions(d, n), key=lambda s: (s[1], -s[0])):
        if not any(_same_class(cand, r, d, n) for r in reps):
            reps.append(cand)
    return reps


def represent(d: int, n: int) -> Decision:
    """Exact decision for x^2 - d y^2 = n; witness has minimal y >= 0, then x >= 0.

    Small cases scan y up to the classical bound; when the fundamental unit
    makes that bound large, each solution class is located through the
    continued fraction of (z + sqrt d)/|m| for the square roots z of d
    modulo |m| = |n|/f^2.
    """
    _check_nonsquare(d)
    if n == 0:
        raise ZeroInput("n must be nonzero")
    sols = _candidate_solutions(d, n)
    if not sols:
        return Decision.unsolvable()
    x, y = min(((abs(x), abs(y)) for x, y in sols), key=lambda s: (s[1], s[0]))
    return Decision.solvable((x, y), check=lambda w: w[0] ** 2 - d * w[1] ** 2 == n)


def orbit_enumerate(d: int, n: int, count: int) -> list[tuple[int, int]]:
    """First ``count`` solutions of x^2 - d y^2 = n, taking each class
    representative through successive powers of the fundamental unit."""
    if count < 1:
        raise BadInput("count must be positive")
    reps = class_representatives(d, n)
    if not reps:
        raise NoWitness(f"x^2 - {d}y^2 = {n} has no integer solution")
    t, u = fundamental_solution(d)
    out: list[tuple[int, int]] = []
    current = list(reps)
    while len(out) < count:
        for i, (x, y) in enumerate(current):
            if len(out) == count:
                break
            out.append((x, y))
            current[i] = (t * x + d * u * y, u * x + t * y)
    return out
