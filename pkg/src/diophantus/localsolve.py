"""Local solvability of affine binary quadratics over Z_p and R, and
Hilbert symbols over Q_v.

Places are odd or even primes (``int``) or the string ``"inf"``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Union

from .arith import is_prime, legendre, prime_factors, sqrt_mod
from .errors import BadInput, DegenerateDiscriminant, NotPrime, ZeroArgument

INF = "inf"
Place = Union[int, str]
Rational = Union[int, Fraction]


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ZeroArgument("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _is_inf(place) -> bool:
    return place == INF or (isinstance(place, float) and math.isinf(place))


@dataclass(frozen=True)
class QuadEquation:
    """a x^2 + b xy + c y^2 + e x + f y + g = n."""

    a: int
    b: int
    c: int
    e: int = 0
    f: int = 0
    g: int = 0
    n: int = 0
    disc: int = field(init=False)

    def __post_init__(self):
        disc = self.b * self.b - 4 * self.a * self.c
        if disc == 0:
            raise DegenerateDiscriminant("b^2 - 4ac = 0: degenerate quadratic part")
        object.__setattr__(self, "disc", disc)

    @classmethod
    def from_coeffs(cls, coeffs, n: int) -> QuadEquation:
        return cls(*coeffs, n=n)

    @property
    def coeffs(self) -> tuple[int, int, int, int, int, int]:
        return (self.a, self.b, self.c, self.e, self.f, self.g)

    def residual(self, x: int, y: int) -> int:
        """F(x, y) - n."""
        return (
            self.a * x * x + self.b * x * y + self.c * y * y + self.e * x + self.f * y + self.g - self.n
        )

    def gradient(self, x: int, y: int) -> tuple[int, int]:
        return (2 * self.a * x + self.b * y + self.e, self.b * x + 2 * self.c * y + self.f)

    def center(self) -> tuple[Fraction, Fraction]:
        """The unique critical point of F."""
        delta = -self.disc
        return (
            Fraction(self.b * self.f - 2 * self.c * self.e, delta),
            Fraction(self.b * self.e - 2 * self.a * self.f, delta),
        )

    def completed_constant(self) -> int:
        """(4ac - b^2) * (n - F(center)); zero iff the conic is reducible."""
        a, b, c, e, f = self.a, self.b, self.c, self.e, self.f
        return -self.disc * (self.n - self.g) - b * e * f + c * e * e + a * f * f

    def primitive(self) -> QuadEquation:
        """Divide out the content of (a, b, c, e, f, g - n)."""
        content = reduce(math.gcd, (self.a, self.b, self.c, self.e, self.f, self.g - self.n))
        if content <= 1:
            return self
        return QuadEquation(
            self.a // content,
            self.b // content,
            self.c // content,
            self.e // content,
            self.f // content,
            (self.g - self.n) // content,
            0,
        )

    def is_definite(self) -> bool:
        return self.disc < 0


@dataclass(frozen=True)
class LocalReport:
    place: Place
    solvable: bool
    witness_precision: int = 0
    witness: tuple | None = None

    def as_dict(self) -> dict:
        return {
            "place": self.place,
            "solvable": self.solvable,
            "witness_precision": self.witness_precision,
            "witness": list(self.witness) if self.witness is not None else None,
        }


# ---------------------------------------------------------------- Hilbert symbols


def _square_class(x: Rational) -> int:
    if x == 0:
        raise ZeroArgument("Hilbert symbol of 0")
    x = Fraction(x)
    return x.numerator * x.denominator


def _split(x: int, p: int) -> tuple[int, int]:
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v, x


def hilbert_symbol(a: Rational, b: Rational, place: Place) -> int:
    """Hilbert symbol (a, b)_v over Q_v."""
    a, b = _square_class(a), _square_class(b)
    if _is_inf(place):
        return -1 if a < 0 and b < 0 else 1
    p = int(place)
    if not is_prime(p):
        raise NotPrime(f"{p} is not a prime place")
    alpha, u = _split(a, p)
    beta, v = _split(b, p)
    if p == 2:
        eps = lambda t: ((t - 1) // 2) % 2  # noqa: E731
        omega = lambda t: ((t * t - 1) // 8) % 2  # noqa: E731
        exponent = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if exponent % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    if beta % 2:
        sign *= legendre(u, p)
    if alpha % 2:
        sign *= legendre(v, p)
    return sign


def relevant_places(*values: Rational) -> list[Place]:
    """inf, 2 and every odd prime dividing a numerator or denominator."""
    primes = {2}
    for x in values:
        x = Fraction(x)
        for part in (x.numerator, x.denominator):
            if abs(part) > 1:
                primes.update(prime_factors(part))
    return [INF] + sorted(primes)


def hilbert_product(a: Rational, b: Rational) -> int:
    """Product of (a, b)_v over all places; reciprocity makes it +1."""
    result = 1
    for place in relevant_places(a, b):
        result *= hilbert_symbol(a, b, place)
    return result


# ---------------------------------------------------------------- local points


def precision_cap(eq: QuadEquation, p: int) -> int:
    """Residue depth beyond which zp_solvable gives up."""
    base = vp(4 * eq.disc, p)
    nprime = eq.completed_constant()
    if nprime:
        return base + vp(nprime, p) + 3
    return 2 * (base + vp(eq.disc, p)) + 6


def _grad_valuation(eq: QuadEquation, x: int, y: int, p: int, limit: int) -> int:
    best = limit
    for comp in eq.gradient(x, y):
        if comp:
            best = min(best, vp(comp, p))
    return best


def _integral_center(eq: QuadEquation, p: int) -> tuple[int, int] | None:
    """The center as a p-adic integer pair mod p^k when it lies on the conic."""
    if eq.completed_constant() != 0:
        return None
    cx, cy = eq.center()
    if cx.denominator % p == 0 or cy.denominator % p == 0:
        return None
    return cx, cy


_SCAN_BELOW = 64


def _level_one(eq: QuadEquation, p: int):
    """Zeros of F - n mod p, one column of x at a time."""
    if p < _SCAN_BELOW:
        for x in range(p):
            for y in range(p):
                if eq.residual(x, y) % p == 0:
                    yield x, y
        return
    # F(x, y) - n = c y^2 + B y + C as a polynomial in y
    c = eq.c % p
    for x in range(p):
        B = (eq.b * x + eq.f) % p
        C = (eq.a * x * x + eq.e * x + eq.g - eq.n) % p
        if c == 0:
            if B:
                yield x, -C * pow(B, -1, p) % p
            elif C == 0:
                for y in range(p):
                    yield x, y
            continue
        r = sqrt_mod((B * B - 4 * c * C) % p, p)
        if r is None:
            continue
        inv = pow(2 * c, -1, p)
        y1, y2 = (r - B) * inv % p, (-r - B) * inv % p
        yield x, y1
        if y2 != y1:
            yield x, y2


def zp_solvable(eq: QuadEquation, p: int) -> LocalReport:
    """Decide whether F(x, y) = n has a solution in Z_p^2.

    A zero of F - n mod p with a unit partial derivative lifts by Hensel's
    lemma. At a singular zero (x0, y0) every nearby solution has the form
    (x0 + p u, y0 + p v), and (F - n)/p^2 in (u, v) is again a conic with
    the same quadratic part and completed constant divided by p^2, so the
    search descends into it. Each descent doubles the residue precision,
    so a witness found d levels down is a solution mod p^(2d+1) whose
    gradient has valuation d (both measured on the primitive equation).
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    prim = eq.primitive()
    cap = precision_cap(prim, p)

    def descend(g: QuadEquation, ox: int, oy: int, scale: int, depth: int):
        center = _integral_center(g, p)
        if center is not None:
            mod = p**cap
            cx, cy = (t.numerator * pow(t.denominator, -1, mod) % mod for t in center)
            return (ox + scale * cx, oy + scale * cy), max(cap, 2 * depth + 1)
        singular = []
        for x, y in _level_one(g, p):
            if _grad_valuation(g, x, y, p, 1) == 0:
                return (ox + scale * x, oy + scale * y), 2 * depth + 1
            singular.append((x, y))
        for x, y in singular:
            value = g.residual(x, y)
            if value % (p * p):
                continue
            if depth >= cap:
                raise DegenerateDiscriminant(f"no decision at p={p} within {cap} descents")
            gx, gy = g.gradient(x, y)
            sub = QuadEquation(g.a, g.b, g.c, gx // p, gy // p, value // (p * p), 0)
            found = descend(sub, ox + scale * x, oy + scale * y, scale * p, depth + 1)
            if found is not None:
                return found
        return None

    found = descend(prim, 0, 0, 1, 0)
    if found is None:
        return LocalReport(p, False, 0, None)
    (x, y), k = found
    mod = p**k
    return LocalReport(p, True, k, (x % mod, y % mod))


def _real_point_on_quadratic(eq: QuadEquation, target: Fraction) -> tuple[float, float] | None:
    """w with Q(w) = target where Q is the quadratic part."""
    a, b, c = eq.a, eq.b, eq.c
    if target == 0:
        return (0.0, 0.0)
    if a:
        # Q(1, 0) = a and Q(-b, 2a) = -a * disc have opposite signs when disc > 0
        directions = [((1, 0), a), ((-b, 2 * a), -a * eq.disc)]
    else:
        # Q(x, 1) = b x + c takes every real value
        directions = [((float(Fraction(1 - c, b)), 1), 1), ((float(Fraction(-1 - c, b)), 1), -1)]
    for (u, v), q in directions:
        if (q > 0) == (target > 0):
            scale = math.sqrt(float(target / q))
            return (u * scale, v * scale)
    return None


def real_solvable(eq: QuadEquation) -> LocalReport:
    """Whether the real conic F(x, y) = n has a point."""
    cx, cy = eq.center()
    target = Fraction(eq.completed_constant(), -eq.disc)
    if eq.is_definite() and target != 0 and (target > 0) != (eq.a > 0):
        return LocalReport(INF, False, 0, None)
    w = _real_point_on_quadratic(eq, target)
    assert w is not None, eq
    return LocalReport(INF, True, 0, (float(cx) + w[0], float(cy) + w[1]))


def bad_places(eq: QuadEquation) -> list[Place]:
    """inf, 2 and the odd primes dividing the discriminant or the completed
    constant of the primitive equation; every other prime has a point."""
    prim = eq.primitive()
    primes = {2} | set(prime_factors(prim.disc))
    nprime = prim.completed_constant()
    if nprime:
        primes |= set(prime_factors(nprime))
    return [INF] + sorted(primes)


def everywhere_locally_solvable(eq: QuadEquation) -> list[LocalReport]:
    """Reports for inf and every bad prime; the remaining primes are
    certified by good reduction."""
    reports = [real_solvable(eq)]
    for p in bad_places(eq)[1:]:
        reports.append(zp_solvable(eq, p))
    return reports


def locally_solvable(eq: QuadEquation) -> bool:
    return all(r.solvable for r in everywhere_locally_solvable(eq))


def first_failing_place(eq: QuadEquation) -> Place | None:
    for report in everywhere_locally_solvable(eq):
        if not report.solvable:
            return report.place
    return None


def check_place(place) -> Place:
    if _is_inf(place):
        return INF
    if isinstance(place, int) and is_prime(place):
        return place
    raise BadInput(f"not a place: {place!r}")
