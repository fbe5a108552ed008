"""Closed-form solvability criteria.

Each ``decide_*`` function first checks the local conditions (reporting
the failing place) and then evaluates a global reciprocity condition,
attaching the obstructing character when it fails:

* ``gauss64``: x^2 + 64y^2 + 64y + 16 = n, via the ring class field
  Q(i, 2^(1/4)) of the order of conductor 8 in Q(i).
* ``d34``: x^2 - 34y^2 = n, via the Hilbert class field of Q(sqrt34) and the
  quartic field Theta = E(sqrt(6 - sqrt34)).
* ``multinorm534``: n as a norm of an integer of Q(sqrt5, sqrt34).
* ``x2dy2prime``: primes of the form x^2 + d y^2 from a ring class
  polynomial table.
"""

from __future__ import annotations

import enum
import itertools
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import NamedTuple

from .arith import (
    classified,
    cornacchia_two_squares,
    is_prime,
    legendre,
    poly_has_root_mod,
    prime_factors,
    quartic_roots_mod,
)
from .decision import Certificate, Decision
from .errors import (
    BadInput,
    LocallyUnsolvable,
    NotPrime,
    SearchExhausted,
    SquareInput,
    UnsupportedDiscriminant,
    ZeroInput,
)
from .localsolve import QuadEquation, first_failing_place
from .oracle import GAUSS64_EQ as GAUSS64_COEFFS, definite_search, norm_form_search
from .pell import negative_pell_solvable, represent

TABLE_ENV = "DIOPHANTUS_TABLE"
GAUSS64_EQ = QuadEquation(*GAUSS64_COEFFS)
MULTINORM_WITNESS_BOUND = 20
FREE_SIGN_LIMIT = 64

# character names used in certificates and profiles
CHAR_H = "H"
CHAR_THETA = "Theta"
CHAR_RING = "K_L"


# ---------------------------------------------------------------- ring class table


@dataclass(frozen=True)
class RingClassEntry:
    """x^2 + d y^2 represents an odd prime l not dividing d iff l passes the
    local conditions and ``poly`` (ascending coefficients) has a root mod l."""

    d: int
    poly: tuple[int, ...]
    source: str = ""

    def __post_init__(self):
        if self.d < 1:
            raise BadInput(f"d must be positive, got {self.d}")
        if len(self.poly) < 3 or self.poly[-1] != 1:
            raise BadInput(f"ring class polynomial for d={self.d} must be monic of degree >= 2")

    @property
    def degree(self) -> int:
        return len(self.poly) - 1


def parse_table(text: str, source: str = "<string>") -> dict[int, RingClassEntry]:
    """Rows ``d c0 c1 ... ck``; ``#`` starts a comment."""
    table: dict[int, RingClassEntry] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            d, *coeffs = (int(tok) for tok in line.split())
        except ValueError as exc:
            raise BadInput(f"{source}:{lineno}: {exc}") from None
        table[d] = RingClassEntry(d, tuple(coeffs), f"{source}:{lineno}")
    return table


def _default_table_text() -> str:
    return resources.files("diophantus").joinpath("data/ring_class.txt").read_text()


@lru_cache(maxsize=16)
def _load(path: str | None) -> dict[int, RingClassEntry]:
    if path is None:
        return parse_table(_default_table_text(), "default")
    return parse_table(Path(path).read_text(), path)


def load_table(path: str | os.PathLike | None = None) -> dict[int, RingClassEntry]:
    """The table from ``path``, else $DIOPHANTUS_TABLE, else the shipped one."""
    if path is None:
        path = os.environ.get(TABLE_ENV) or None
    return _load(str(path) if path is not None else None)


# ---------------------------------------------------------------- x^2 + d y^2 = l


def _check_prime_argument(d: int, l: int) -> None:
    if d < 1:
        raise BadInput(f"d must be positive, got {d}")
    if l < 3 or not is_prime(l):
        raise NotPrime(f"{l} is not an odd prime")
    if (2 * d) % l == 0:
        raise BadInput(f"{l} divides 2d = {2 * d}")


def _local_failure_x2_plus_dy2(d: int, l: int):
    """The first place where x^2 + d y^2 = l fails, or None."""
    if legendre(-d, l) != 1:
        return l
    for q in prime_factors(d):
        if q != 2 and legendre(l, q) != 1:
            return q
    if d % 2:
        ok = l % 4 in (1, d % 4)
    elif d % 4 == 2:
        ok = l % 8 in (1, (d + 1) % 8)
    elif d % 8 == 4:
        ok = l % 4 == 1
    else:
        ok = l % 8 == 1
    return None if ok else 2


def local_conditions_x2_plus_dy2_prime(d: int, l: int) -> bool:
    """Whether x^2 + d y^2 = l is solvable at every place."""
    _check_prime_argument(d, l)
    return _local_failure_x2_plus_dy2(d, l) is None


def decide_x2_plus_dy2_prime(d: int, l: int, table=None, find_witness: bool = True) -> Decision:
    if table is None:
        table = load_table()
    entry = table.get(d)
    if entry is None:
        raise UnsupportedDiscriminant(f"no ring class polynomial for d={d}")
    _check_prime_argument(d, l)
    place = _local_failure_x2_plus_dy2(d, l)
    if place is not None:
        return Decision.locally_unsolvable(place)
    if entry.degree == 4:
        splits = quartic_roots_mod(entry.poly, l)
    else:
        splits = poly_has_root_mod(entry.poly, l)
    if not splits:
        return Decision.unsolvable(Certificate(CHAR_RING, -1))
    if not find_witness:
        return Decision.solvable()
    found = definite_search(QuadEquation(1, 0, d, n=l))
    if not found.is_solvable:
        raise ArithmeticError(f"criterion says {l} = x^2 + {d}y^2 but no witness exists")
    return found


# ---------------------------------------------------------------- x^2 + 64y^2 + 64y + 16 = n


def gauss64_local_failure(n: int):
    """The place where x^2 + 64y^2 + 64y + 16 = n has no local point, or None."""
    return _gauss64_local_failure(classified(n, "gauss64"))


def _gauss64_local_failure(prof):
    n = prof.n
    for p, e in prof.odd_primes.items():
        if e % 2 and p % 4 == 3:
            return p
    s, m = prof.s1, n >> prof.s1
    if (s == 0 and n % 8 == 1) or (s == 2 and m % 8 == 5) or s in (4, 5):
        return None
    return 2


def decide_gauss64(n: int, find_witness: bool = True) -> Decision:
    prof = classified(n, "gauss64")  # raises NonPositive
    place = _gauss64_local_failure(prof)
    if place is not None:
        return Decision.locally_unsolvable(place)
    if prof.s1 == 0:
        d2_sum = sum(prof.members("D2").values())
        if not prof.members("D1") and d2_sum % 2 == 0:
            return Decision.unsolvable(Certificate(CHAR_RING, -1))
    if not find_witness:
        return Decision.solvable()
    found = definite_search(GAUSS64_EQ, n)
    if not found.is_solvable:
        raise ArithmeticError(f"criterion says {n} is represented but no witness exists")
    return found


# ---------------------------------------------------------------- negative Pell, Theta


class RedeiVerdict(str, enum.Enum):
    UNSOLVABLE = "Unsolvable"
    INAPPLICABLE = "Inapplicable"


def epstein_redei(l: int) -> RedeiVerdict:
    """For l = 1 mod 8 with 2l = r^2 + s^2, s = +-3 mod 8 rules out
    x^2 - 2l y^2 = -1; otherwise nothing is claimed."""
    if l < 2 or not is_prime(l):
        raise NotPrime(f"{l} is not prime")
    if l % 8 != 1:
        return RedeiVerdict.INAPPLICABLE
    _, s = cornacchia_two_squares(2 * l)
    return RedeiVerdict.UNSOLVABLE if s % 8 in (3, 5) else RedeiVerdict.INAPPLICABLE


@dataclass(frozen=True)
class ThetaData:
    """Theta = E(sqrt(x0 - y0 sqrt(2l))) with x0^2 - 2l y0^2 = 2 z0^2."""

    l: int
    cornacchia: tuple[int, int]
    aux: tuple[int, int, int]
    theta_poly: tuple[int, ...]  # ascending: 2 z0^2 - 2 x0 X^2 + X^4


THETA_SEARCH_BOUND = 10**6


def theta_data(l: int, search_bound: int = THETA_SEARCH_BOUND) -> ThetaData:
    """Smallest y0, then smallest x0, giving a primitive positive solution."""
    if l < 2 or not is_prime(l):
        raise NotPrime(f"{l} is not prime")
    if l % 8 != 1:
        raise BadInput(f"{l} is not 1 mod 8")
    two_l = 2 * l
    steps = 0
    for y0 in itertools.count(1):
        # a solution class always has a member with x0 <= 2 y0 sqrt(l)
        lo = math.isqrt(two_l * y0 * y0)
        hi = math.isqrt(4 * l * y0 * y0)
        for x0 in range(max(lo, 1), hi + 1):
            steps += 1
            if steps > search_bound:
                raise SearchExhausted(f"no auxiliary solution for l={l} within {search_bound} steps")
            rest = x0 * x0 - two_l * y0 * y0
            if rest < 0 or rest % 2:
                continue
            z0 = math.isqrt(rest // 2)
            if 2 * z0 * z0 == rest and math.gcd(math.gcd(x0, y0), z0) == 1:
                return ThetaData(
                    l,
                    cornacchia_two_squares(two_l),
                    (x0, y0, z0),
                    (2 * z0 * z0, 0, -2 * x0, 0, 1),
                )


# ---------------------------------------------------------------- x^2 - 34 y^2 = n


def _d34_local_failure(prof):
    for p, e in prof.odd_primes.items():
        if e % 2 and legendre(34, p) != 1:
            return p
    if legendre(prof.n1, 17) != 1:
        return 17
    if prof.n1 % 8 not in (1, 7):
        return 2
    return None


def _parity_target(n1: int) -> int:
    """0 when n1 = 1, -9 mod 16 and 1 when n1 = -1, 9 mod 16."""
    return 0 if n1 % 16 in (1, 7) else 1


def decide_d34(n: int, find_witness: bool = True) -> Decision:
    if n == 0:
        raise ZeroInput("n must be nonzero")
    prof = classified(n, "d34")
    place = _d34_local_failure(prof)
    if place is not None:
        return Decision.locally_unsolvable(place)
    if not prof.members("D1"):
        d4_sum = sum(prof.members("D4").values())
        if (d4_sum - prof.special[17] - _parity_target(prof.n1)) % 2:
            return Decision.unsolvable(Certificate(CHAR_THETA, -1))
    if not find_witness:
        return Decision.solvable()
    found = represent(34, n)
    if not found.is_solvable:
        raise ArithmeticError(f"criterion says x^2 - 34y^2 = {n} is solvable but no witness exists")
    return found


@dataclass(frozen=True)
class ProfileEntry:
    place: int
    character: str
    value: int
    free_sign: bool = False
    exponent: int | None = None

    def as_dict(self) -> dict:
        return {
            "place": self.place,
            "character": self.character,
            "value": self.value,
            "free_sign": self.free_sign,
            "exponent": self.exponent,
        }


@dataclass(frozen=True)
class CharacterProfile:
    n: int
    entries: tuple[ProfileEntry, ...]
    combinable: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "combinable", _combinable(self.entries))

    def free_entries(self) -> list[ProfileEntry]:
        return [e for e in self.entries if e.free_sign]


def _combinable(entries) -> bool:
    """Whether some choice of the free signs makes every character's
    product equal to 1."""
    free = [i for i, e in enumerate(entries) if e.free_sign]
    if len(free) > FREE_SIGN_LIMIT:
        raise BadInput(f"{len(free)} free signs exceed the limit {FREE_SIGN_LIMIT}")
    characters = {e.character for e in entries}
    for flips in itertools.product((1, -1), repeat=len(free)):
        values = [e.value for e in entries]
        for i, s in zip(free, flips):
            values[i] *= s
        if all(
            math.prod(v for v, e in zip(values, entries) if e.character == ch) == 1
            for ch in characters
        ):
            return True
    return False


def character_profile_d34(n: int, local_choice: dict[int, int] | None = None) -> CharacterProfile:
    """Local contributions of the characters of H/E and Theta/E at the
    adelic point built from local solutions.

    ``local_choice`` maps a D1 prime to the exponent a_i of the local
    solution used there; the resulting sign (-1)^a_i can be flipped by
    choosing another local solution, so those entries are free.
    """
    if n == 0:
        raise ZeroInput("n must be nonzero")
    prof = classified(n, "d34")
    place = _d34_local_failure(prof)
    if place is not None:
        raise LocallyUnsolvable(place, f"x^2 - 34y^2 = {n} has no point at {place}")
    local_choice = local_choice or {}
    entries: list[ProfileEntry] = []
    twist = 1
    for p, e in prof.odd_primes.items():
        label = prof.classes[p]
        if label == "D1":
            a = local_choice.get(p, 0)
            entries.append(ProfileEntry(p, CHAR_H, (-1) ** e))
            entries.append(ProfileEntry(p, CHAR_THETA, (-1) ** a, True, a))
        elif label == "D2":
            value = legendre(2, p) ** (e // 2)
            twist *= value
            entries.append(ProfileEntry(p, CHAR_THETA, value))
        elif label == "D4":
            entries.append(ProfileEntry(p, CHAR_THETA, (-1) ** e))
        else:
            entries.append(ProfileEntry(p, CHAR_THETA, 1))
    s2 = prof.special[17]
    if s2:
        entries.append(ProfileEntry(17, CHAR_THETA, (-1) ** s2))
    sign = 1 if _parity_target(prof.n1) == 0 else -1
    entries.append(ProfileEntry(2, CHAR_THETA, sign * twist))
    return CharacterProfile(n, tuple(sorted(entries, key=lambda e: (e.place, e.character))))


# ---------------------------------------------------------------- norms from Q(sqrt5, sqrt34)


def _multinorm_local_failure(prof):
    if prof.s1 % 2:
        return 2
    if prof.special[17] % 2:
        return 17
    for p, e in prof.odd_primes.items():
        if e % 2 and (legendre(34, p) != 1 or (p != 5 and legendre(5, p) != 1)):
            return p
    if legendre(prof.n1, 17) != 1:
        return 17
    if prof.n1 % 8 not in (1, 7):
        return 2
    return None


def decide_multinorm_5_34(
    n: int, find_witness: bool = True, coef_bound: int = MULTINORM_WITNESS_BOUND
) -> Decision:
    """Whether n is the norm of an integer of Q(sqrt5, sqrt34).

    The Theta-sign at a D1 prime can only be adjusted when that prime
    splits in Q(sqrt5) (or is 5 itself); otherwise the parity condition on
    D4 decides. A positive verdict searches for a witness up to
    ``coef_bound`` and reports UnknownWitness when none turns up.
    """
    if n == 0:
        raise ZeroInput("n must be nonzero")
    prof = classified(n, "multinorm534")
    place = _multinorm_local_failure(prof)
    if place is not None:
        return Decision.locally_unsolvable(place)
    flexible = [p for p in prof.members("D1") if p == 5 or legendre(5, p) == 1]
    if not flexible:
        d4_sum = sum(prof.members("D4").values())
        if (d4_sum - _parity_target(prof.n1)) % 2:
            return Decision.unsolvable(Certificate(CHAR_THETA, -1))
    if not find_witness:
        return Decision.solvable()
    return norm_form_search(None, n, coef_bound)


# ---------------------------------------------------------------- Gauss's method


class GaussMethod(str, enum.Enum):
    VIA_NEGATIVE_PELL = "ViaNegativePell"
    VIA_LOCAL_FAILURE = "ViaLocalFailure"
    NOT_APPLICABLE = "NotApplicable"


class GaussApplicability(NamedTuple):
    method: GaussMethod
    place: int | None = None


def gauss_method_applicable(d: int) -> GaussApplicability:
    """Whether the ring class field of Z[sqrt d] already decides
    x^2 - d y^2 = n: it does when x^2 - d y^2 = -1 is solvable globally or
    fails at some prime."""
    if d >= 2 and math.isqrt(d) ** 2 == d:
        raise SquareInput(f"{d} is a perfect square")
    solvable, _ = negative_pell_solvable(d)
    if solvable:
        return GaussApplicability(GaussMethod.VIA_NEGATIVE_PELL)
    place = first_failing_place(QuadEquation(1, 0, -d, n=-1))
    if place is not None:
        return GaussApplicability(GaussMethod.VIA_LOCAL_FAILURE, place)
    return GaussApplicability(GaussMethod.NOT_APPLICABLE)
