"""Exact integer primitives: primality, factorization, residue symbols,
modular roots, two-squares decompositions and the D-set classification
of the odd primes dividing an integer.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace
from functools import lru_cache
from itertools import product
from typing import Iterable

from .errors import (
    BadInput,
    CompositeModulus,
    EvenModulus,
    FactorizationIncomplete,
    NonPositive,
    UnknownFamily,
    ZeroInput,
)

DEFAULT_FACTOR_BOUND = 10**12
TRIAL_DIVISION_LIMIT = 10**5
RHO_ITERATION_BUDGET = 2_000_000
# direct root scans below this modulus, Frobenius gcd test above
QUARTIC_SCAN_LIMIT = 5000

# Deterministic for n < 3.3e24, which covers every n < 2**64.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_ROUNDS_LARGE = 64

FAMILIES = ("gauss64", "d34", "multinorm534")
_POSITIVE_FAMILIES = ("gauss64",)
# special (ramified) primes split out of D(n), per family
_FAMILY_SPECIAL = {"gauss64": (), "d34": (17,), "multinorm534": (17,)}

# x^4 - 12x^2 + 2, ascending coefficients; the minimal polynomial of sqrt(6 - sqrt 34)
THETA34_POLY = (2, 0, -12, 0, 1)


def _small_primes(limit: int) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i, flag in enumerate(sieve) if flag]


def primes_up_to(limit: int) -> list[int]:
    """All primes p <= limit."""
    if limit < 2:
        return []
    return _small_primes(limit)


_TRIAL_PRIMES = _small_primes(TRIAL_DIVISION_LIMIT)


def _miller_rabin(n: int, bases: Iterable[int]) -> bool:
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in bases:
        a %= n
        if a == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 2**64, 64 seeded rounds above."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n < 2**64:
        return _miller_rabin(n, _MR_BASES)
    rng = random.Random(n)
    return _miller_rabin(n, (rng.randrange(2, n - 1) for _ in range(_MR_ROUNDS_LARGE)))


def _rho_brent(n: int, c: int, budget: int) -> int | None:
    """One Brent-rho run with x -> x^2 + c; returns a factor or None."""
    y, r, q, g = 2, 1, 1, 1
    x = ys = y
    used = 0
    m = 128
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        used += r
        r *= 2
        if used > budget:
            return None
    if g == n:
        while True:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
    return g if g != n else None


def _split_composite(n: int, budget: int) -> list[int]:
    if is_prime(n):
        return [n]
    root = math.isqrt(n)
    if root * root == n:
        return _split_composite(root, budget) * 2
    for c in range(1, 64):
        g = _rho_brent(n, c, budget)
        if g is not None and 1 < g < n:
            return _split_composite(g, budget) + _split_composite(n // g, budget)
    raise FactorizationIncomplete(f"cofactor {n} resisted Pollard rho")


def prime_factors(n: int, bound: int = DEFAULT_FACTOR_BOUND, budget: int = RHO_ITERATION_BUDGET) -> dict[int, int]:
    """Prime factorization of |n| as {p: e}."""
    if n == 0:
        raise ZeroInput("cannot factor 0")
    m = abs(n)
    if m > bound:
        raise BadInput(f"|n| = {m} exceeds factorization bound {bound}")
    out: dict[int, int] = {}
    for p in _TRIAL_PRIMES:
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out[p] = e
    if m > 1:
        for p in _split_composite(m, budget):
            out[p] = out.get(p, 0) + 1
    return dict(sorted(out.items()))


@dataclass(frozen=True)
class FactorProfile:
    """n = (-1)^s0 * 2^s1 * prod(special) * prod(odd_primes)."""

    n: int
    s0: int
    s1: int
    special: dict[int, int] = field(default_factory=dict)
    odd_primes: dict[int, int] = field(default_factory=dict)
    classes: dict[int, str] = field(default_factory=dict)
    n1: int | None = None
    family: str | None = None

    def recompose(self) -> int:
        value = (-1) ** self.s0 * 2**self.s1
        for p, e in self.special.items():
            value *= p**e
        for p, e in self.odd_primes.items():
            value *= p**e
        return value

    def members(self, label: str) -> dict[int, int]:
        """Primes carrying ``label`` with their exponents."""
        return {p: e for p, e in self.odd_primes.items() if self.classes.get(p) == label}

    def exponent(self, p: int) -> int:
        if p == 2:
            return self.s1
        return self.special.get(p, self.odd_primes.get(p, 0))


def factorize(n: int, special: Iterable[int] = (), bound: int = DEFAULT_FACTOR_BOUND) -> FactorProfile:
    """Factor n, splitting out the sign, the power of 2 and any ``special`` primes."""
    if n == 0:
        raise ZeroInput("cannot factor 0")
    factors = prime_factors(n, bound)
    special = set(special)
    return FactorProfile(
        n=n,
        s0=1 if n < 0 else 0,
        s1=factors.pop(2, 0),
        special={p: factors.pop(p, 0) for p in sorted(special)},
        odd_primes=factors,
    )


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd positive n."""
    if n <= 0 or n % 2 == 0:
        raise EvenModulus(f"Jacobi symbol needs an odd positive modulus, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def legendre(a: int, p: int) -> int:
    return jacobi(a, p)


def sqrt_mod(a: int, p: int) -> int | None:
    """Tonelli-Shanks square root of a modulo the prime p.

    Returns the representative in [0, (p-1)/2], or None when a is a non-residue.
    """
    if not is_prime(p):
        raise CompositeModulus(f"{p} is not prime")
    a %= p
    if p == 2 or a == 0:
        return a
    if jacobi(a, p) != 1:
        return None
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
    else:
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while jacobi(z, p) != -1:
            z += 1
        m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
    return min(r, p - r)


def power_residue_solvable(a: int, k: int, p: int) -> bool:
    """Whether x^k = a (mod p) has a solution, for p not dividing a."""
    if k < 1:
        raise BadInput("k must be positive")
    if a % p == 0:
        raise BadInput(f"{p} divides {a}; handle ramified primes separately")
    return pow(a, (p - 1) // math.gcd(k, p - 1), p) == 1


# Polynomials over F_p are ascending coefficient lists with no trailing zeros.


def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _polymod(f: list[int], g: list[int], p: int) -> list[int]:
    f = f[:]
    inv = pow(g[-1], -1, p)
    dg = len(g) - 1
    while len(f) - 1 >= dg and f:
        coef = f[-1] * inv % p
        shift = len(f) - 1 - dg
        for i, gi in enumerate(g):
            f[shift + i] = (f[shift + i] - coef * gi) % p
        _trim(f)
    return f


def _polymulmod(f: list[int], g: list[int], m: list[int], p: int) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, fi in enumerate(f):
        if fi:
            for j, gj in enumerate(g):
                out[i + j] = (out[i + j] + fi * gj) % p
    return _polymod(_trim(out), m, p)


def _polygcd(f: list[int], g: list[int], p: int) -> list[int]:
    while g:
        f, g = g, _polymod(f, g, p)
    return f


def poly_has_root_mod(coeffs: Iterable[int], p: int) -> bool:
    """Root test over F_p via deg gcd(f, x^p - x) > 0."""
    f = _trim([c % p for c in coeffs])
    if not f:
        return True
    if len(f) == 1:
        return False
    if f[0] == 0:
        return True
    # x^p mod f by square-and-multiply
    result, base, e = [1], _polymod([0, 1], f, p), p
    while e:
        if e & 1:
            result = _polymulmod(result, base, f, p)
        base = _polymulmod(base, base, f, p)
        e >>= 1
    h = result + [0] * max(0, 2 - len(result))
    h[1] = (h[1] - 1) % p
    return len(_polygcd(f, _trim(h), p)) > 1


def _scan_roots(coeffs: tuple[int, ...], p: int) -> bool:
    rev = coeffs[::-1]
    for x in range(p):
        acc = 0
        for c in rev:
            acc = (acc * x + c) % p
        if acc == 0:
            return True
    return False


def quartic_roots_mod(coeffs: Iterable[int], p: int) -> bool:
    """Whether c0 + c1 x + ... + c4 x^4 has a root modulo the odd prime p."""
    coeffs = tuple(coeffs)
    if p < QUARTIC_SCAN_LIMIT:
        return _scan_roots(coeffs, p)
    return poly_has_root_mod(coeffs, p)


@lru_cache(maxsize=None)
def _theta34_root(p: int) -> bool:
    return quartic_roots_mod(THETA34_POLY, p)


def _sqrt_minus_one_mod_prime_power(p: int, e: int) -> int:
    r = sqrt_mod(p - 1, p)
    mod = p
    for _ in range(1, e):
        mod *= p
        # Newton step on x^2 + 1
        r = (r - (r * r + 1) * pow(2 * r, -1, mod)) % mod
    return r


def _sqrt_minus_one_all(m: int, factors: dict[int, int]) -> list[int]:
    """Every x mod m with x^2 = -1, via CRT over the prime powers of m."""
    parts: list[tuple[int, list[int]]] = []
    for p, e in factors.items():
        if p == 2:
            parts.append((2, [1]))
        else:
            r = _sqrt_minus_one_mod_prime_power(p, e)
            q = p**e
            parts.append((q, sorted({r, q - r})))
    roots = []
    for choice in product(*(rs for _, rs in parts)):
        x, mod = 0, 1
        for (q, _), r in zip(parts, choice):
            x = x + mod * ((r - x) * pow(mod, -1, q) % q)
            mod *= q
        roots.append(x % m)
    return sorted(set(roots))


def cornacchia_two_squares(m: int) -> tuple[int, int] | None:
    """Primitive decomposition m = r^2 + s^2 with r >= s > 0.

    When m has several primitive representations the one with the largest r
    is returned.
    """
    if m < 2 or m % 4 == 0:
        return None
    factors = prime_factors(m)
    if factors.get(2, 0) > 1 or any(p % 4 == 3 for p in factors):
        return None
    bound = math.isqrt(m)
    best = None
    for x0 in _sqrt_minus_one_all(m, factors):
        a, b = m, x0
        while b > bound:
            a, b = b, a % b
        rest = m - b * b
        s = math.isqrt(rest)
        if s > 0 and s * s == rest and math.gcd(b, s) == 1:
            pair = (max(b, s), min(b, s))
            if best is None or pair > best:
                best = pair
    return best


def classify(profile: FactorProfile, family: str) -> FactorProfile:
    """Label the odd primes of ``profile`` with the family's D-sets and fill n1."""
    if family not in FAMILIES:
        raise UnknownFamily(family)
    if family == "gauss64" and profile.n <= 0:
        raise NonPositive("gauss64 classification needs n > 0")
    special = set(_FAMILY_SPECIAL[family])
    if set(profile.special) != special:
        profile = _respecial(profile, special)

    classes: dict[int, str] = {}
    for p in profile.odd_primes:
        if family == "gauss64":
            if p % 8 == 5:
                classes[p] = "D1"
            elif p % 8 == 1 and not power_residue_solvable(2, 4, p):
                classes[p] = "D2"
            else:
                classes[p] = "unclassified"
        else:
            two, seventeen = legendre(2, p), legendre(17, p)
            if two == seventeen == -1:
                classes[p] = "D1"
            elif two * seventeen == -1:
                classes[p] = "D2"
            elif _theta34_root(p):
                classes[p] = "D3"
            else:
                classes[p] = "D4"

    n1 = (-1) ** profile.s0
    for p, e in profile.odd_primes.items():
        if classes[p] != "D2":
            n1 *= p**e
    return replace(profile, classes=classes, n1=n1, family=family)


def _respecial(profile: FactorProfile, special: set[int]) -> FactorProfile:
    merged = {**profile.odd_primes, **{p: e for p, e in profile.special.items() if e}}
    return replace(
        profile,
        special={p: merged.pop(p, 0) for p in sorted(special)},
        odd_primes=dict(sorted(merged.items())),
    )


def classified(n: int, family: str) -> FactorProfile:
    """factorize + classify in one call."""
    if family not in FAMILIES:
        raise UnknownFamily(family)
    if n <= 0 and family in _POSITIVE_FAMILIES:
        raise NonPositive(f"family {family} needs n > 0, got {n}")
    return classify(factorize(n, special=_FAMILY_SPECIAL[family]), family)
