"""Ground-truth engines that share no logic with the criteria: exhaustive
definite search, divisor pairs for split forms, a bounded norm-form search
in Q(sqrt 5, sqrt 34), an exhaustive residue search mod p^k, and the sweep
harness that pits criteria against them.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .decision import Certificate, Decision, Status  # noqa: F401  (re-exported)
from .errors import BadBasis, BadInput, DiophantusError, IndefiniteForm, UnknownFamily, ZeroInput
from .localsolve import QuadEquation

__all__ = [
    "Decision",
    "Status",
    "definite_search",
    "split_form_decide",
    "NormBasis",
    "DEFAULT_BASIS",
    "norm_form_search",
    "norms_in_box",
    "characteristic_polynomial",
    "element_norm",
    "residue_solvable_mod",
    "consistency_sweep",
    "SweepReport",
]


# ---------------------------------------------------------------- definite forms


def definite_search(eq: QuadEquation, n: int | None = None) -> Decision:
    """Exhaustive search for F(x, y) = n with F positive (or negative) definite.

    Completing the square in x confines y to a finite interval; each y is
    then tested with an integer square root. The witness minimises |y|,
    preferring y >= 0 and then x >= 0.
    """
    if n is not None:
        eq = QuadEquation(*eq.coeffs, n=n)
    if not eq.is_definite():
        raise IndefiniteForm(f"disc = {eq.disc} >= 0")
    a, b, c, e, f, g, rhs = eq.a, eq.b, eq.c, eq.e, eq.f, eq.g, eq.n
    if a < 0:
        a, b, c, e, f, g, rhs = -a, -b, -c, -e, -f, -g, -rhs
    delta = 4 * a * c - b * b
    # (2ax + by + e)^2 = 4a rhs - delta y^2 - B y - C0 >= 0
    B = 4 * a * f - 2 * b * e
    C0 = 4 * a * g - e * e
    C = C0 - 4 * a * rhs
    disc_y = B * B - 4 * delta * C
    if disc_y < 0:
        return Decision.unsolvable()
    root = math.isqrt(disc_y) + 1
    lo = (-B - root) // (2 * delta) - 1
    hi = (-B + root) // (2 * delta) + 1
    for y in sorted(range(lo, hi + 1), key=lambda t: (abs(t), -t)):
        s2 = 4 * a * rhs - delta * y * y - B * y - C0
        if s2 < 0:
            continue
        s = math.isqrt(s2)
        if s * s != s2:
            continue
        xs = [(sgn * s - b * y - e) // (2 * a) for sgn in (1, -1) if (sgn * s - b * y - e) % (2 * a) == 0]
        if xs:
            x = min(xs, key=lambda t: (abs(t), -t))
            return Decision.solvable((x, y), check=lambda w: eq.residual(*w) == 0)
    return Decision.unsolvable()


# ---------------------------------------------------------------- split forms


def _divisors(m: int) -> list[int]:
    small, large = [], []
    for d in range(1, math.isqrt(m) + 1):
        if m % d == 0:
            small.append(d)
            if d * d != m:
                large.append(m // d)
    return small + large[::-1]


def split_form_decide(k: int, n: int) -> Decision:
    """x^2 - k^2 y^2 = n through the factorisation (x - ky)(x + ky) = n."""
    if k < 1:
        raise BadInput("k must be positive")
    if n == 0:
        raise ZeroInput("n must be nonzero")
    best = None
    for u in _divisors(abs(n)):
        for su in (1, -1):
            uu = su * u
            v = n // uu
            if (uu - v) % 2 or (v - uu) % (2 * k):
                continue
            x, y = abs((uu + v) // 2), abs((v - uu) // (2 * k))
            if best is None or (y, x) < (best[1], best[0]):
                best = (x, y)
    if best is None:
        return Decision.unsolvable()
    return Decision.solvable(best, check=lambda w: w[0] ** 2 - k * k * w[1] ** 2 == n)


# ---------------------------------------------------------------- norm forms
#
# Elements of E = Q(sqrt5, sqrt34) are coordinate vectors over
# (1, sqrt5, sqrt34, sqrt170). Writing a = P + Q sqrt34 with P, Q in Q(sqrt5),
# N_{E/Q(sqrt5)}(a) = X + Y sqrt5 and N_{E/Q}(a) = X^2 - 5 Y^2: this is the
# product of the four real embeddings, expanded exactly.


def _rel_norm(q: Sequence) -> tuple:
    q0, q1, q2, q3 = q
    X = q0 * q0 + 5 * q1 * q1 - 34 * q2 * q2 - 170 * q3 * q3
    Y = 2 * q0 * q1 - 68 * q2 * q3
    return X, Y


def element_norm(q: Sequence) -> Fraction:
    """Exact N_{E/Q} of the element with coordinates q."""
    X, Y = _rel_norm([Fraction(c) for c in q])
    return X * X - 5 * Y * Y


def characteristic_polynomial(q: Sequence) -> tuple[Fraction, ...]:
    """Ascending coefficients of the characteristic polynomial over Q."""
    q0, q1 = Fraction(q[0]), Fraction(q[1])
    X, Y = _rel_norm([Fraction(c) for c in q])
    # (T^2 - 2P T + M)(T^2 - 2P' T + M') with P = q0 + q1 sqrt5, M = X + Y sqrt5
    return (
        X * X - 5 * Y * Y,
        -4 * (q0 * X - 5 * q1 * Y),
        2 * X + 4 * (q0 * q0 - 5 * q1 * q1),
        -4 * q0,
        Fraction(1),
    )


def _multiply(a: Sequence, b: Sequence) -> tuple:
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return (
        a0 * b0 + 5 * a1 * b1 + 34 * a2 * b2 + 170 * a3 * b3,
        a0 * b1 + a1 * b0 + 34 * (a2 * b3 + a3 * b2),
        a0 * b2 + a2 * b0 + 5 * (a1 * b3 + a3 * b1),
        a0 * b3 + a3 * b0 + a1 * b2 + a2 * b1,
    )


def _det(m: list[list[Fraction]]) -> Fraction:
    m = [row[:] for row in m]
    size, det = len(m), Fraction(1)
    for i in range(size):
        pivot = next((r for r in range(i, size) if m[r][i] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != i:
            m[i], m[pivot] = m[pivot], m[i]
            det = -det
        det *= m[i][i]
        for r in range(i + 1, size):
            factor = m[r][i] / m[i][i]
            for col in range(i, size):
                m[r][col] -= factor * m[i][col]
    return det


@dataclass(frozen=True)
class NormBasis:
    """Four algebraic integers of Q(sqrt5, sqrt34) in (1, sqrt5, sqrt34, sqrt170) coordinates."""

    elements: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.elements) != 4 or any(len(el) != 4 for el in self.elements):
            raise BadBasis("need four elements with four coordinates each")
        elems = tuple(tuple(Fraction(c) for c in el) for el in self.elements)
        for el in elems:
            if any((2 * c).denominator != 1 for c in el):
                raise BadBasis(f"{el}: coordinates must be half-integers")
            if any(c.denominator != 1 for c in characteristic_polynomial(el)):
                raise BadBasis(f"{el} is not an algebraic integer")
        object.__setattr__(self, "elements", elems)
        if self.discriminant() == 0:
            raise BadBasis("elements are linearly dependent")

    @classmethod
    def parse(cls, text: str) -> NormBasis:
        """``"1,0,0,0; 1/2,1/2,0,0; ..."`` -> NormBasis."""
        rows = [r for r in text.split(";") if r.strip()]
        return cls(tuple(tuple(Fraction(c.strip()) for c in row.split(",")) for row in rows))

    def element(self, coeffs: Sequence[int]) -> tuple[Fraction, ...]:
        return tuple(sum(c * el[i] for c, el in zip(coeffs, self.elements)) for i in range(4))

    def norm(self, coeffs: Sequence[int]) -> int:
        value = element_norm(self.element(coeffs))
        assert value.denominator == 1
        return int(value)

    def discriminant(self) -> int:
        """det(Tr(e_i e_j)); equals 462400 = 5 * 136 * 680 for a basis of the maximal order."""
        gram = [[4 * _multiply(ei, ej)[0] for ej in self.elements] for ei in self.elements]
        value = _det(gram)
        return int(value) if value.denominator == 1 else value

    def doubled(self) -> np.ndarray:
        return np.array([[int(2 * c) for c in el] for el in self.elements], dtype=np.int64)


DEFAULT_BASIS = NormBasis(
    (
        (1, 0, 0, 0),
        (Fraction(1, 2), Fraction(1, 2), 0, 0),
        (0, 0, 1, 0),
        (0, 0, Fraction(1, 2), Fraction(1, 2)),
    )
)


def _box_norms(basis: NormBasis, bound: int, last: int) -> tuple[np.ndarray, np.ndarray]:
    """Norms of all sum x_i e_i with |x_1|,|x_2|,|x_3| <= bound and x_4 = last,
    as (coefficient grid, norms), exact in int64."""
    W = basis.doubled()
    r = np.arange(-bound, bound + 1, dtype=np.int64)
    x1, x2, x3 = np.meshgrid(r, r, r, indexing="ij")
    w = [x1 * W[0, i] + x2 * W[1, i] + x3 * W[2, i] + last * W[3, i] for i in range(4)]
    X = w[0] * w[0] + 5 * w[1] * w[1] - 34 * w[2] * w[2] - 170 * w[3] * w[3]
    Y = 2 * w[0] * w[1] - 68 * w[2] * w[3]
    N = X * X - 5 * Y * Y
    # doubled coordinates scale the quartic norm by 16
    return (x1, x2, x3), N // 16


def _check_int64_range(basis: NormBasis, bound: int) -> None:
    wmax = int(np.abs(basis.doubled()).sum(axis=0).max()) * bound
    xmax = 170 * 4 * wmax * wmax
    if 6 * xmax * xmax >= 2**62:
        raise BadInput(f"coef_bound {bound} would overflow exact int64 norm evaluation")


def _sup_key(coeffs: tuple[int, ...]) -> tuple:
    return (max(abs(c) for c in coeffs), sum(abs(c) for c in coeffs), tuple(-c for c in coeffs))


def norms_in_box(basis: NormBasis, coef_bound: int, limit: int) -> dict[int, tuple[int, ...]]:
    """Every norm n with |n| <= limit attained in the box, mapped to its
    smallest witness (sup norm, then L1 norm, then lexicographic)."""
    _check_int64_range(basis, coef_bound)
    found: dict[int, tuple[int, ...]] = {}
    for last in range(-coef_bound, coef_bound + 1):
        (x1, x2, x3), N = _box_norms(basis, coef_bound, last)
        mask = np.abs(N) <= limit
        for a, b, c, n in zip(x1[mask], x2[mask], x3[mask], N[mask]):
            cand = (int(a), int(b), int(c), last)
            n = int(n)
            if n not in found or _sup_key(cand) < _sup_key(found[n]):
                found[n] = cand
    return found


def norm_form_search(basis: NormBasis | None, n: int, coef_bound: int) -> Decision:
    """One-sided search for N(x1 e1 + ... + x4 e4) = n in the box |x_i| <= coef_bound.

    Returns Solvable with the smallest witness found, or UnknownWitness.
    """
    basis = basis or DEFAULT_BASIS
    if n == 0:
        raise ZeroInput("n must be nonzero")
    if coef_bound < 1:
        raise BadInput("coef_bound must be positive")
    _check_int64_range(basis, coef_bound)
    bound = 1
    while True:
        bound = min(bound, coef_bound)
        best = None
        for last in range(-bound, bound + 1):
            (x1, x2, x3), N = _box_norms(basis, bound, last)
            hits = np.nonzero(N == n)
            for a, b, c in zip(x1[hits], x2[hits], x3[hits]):
                cand = (int(a), int(b), int(c), last)
                if best is None or _sup_key(cand) < _sup_key(best):
                    best = cand
        if best is not None:
            return Decision.solvable(best, check=lambda w: basis.norm(w) == n)
        if bound == coef_bound:
            return Decision.unknown_witness()
        bound *= 2


# ---------------------------------------------------------------- residues


def residue_solvable_mod(eq: QuadEquation, p: int, k: int) -> bool:
    """Whether F(x, y) = n has a solution modulo p^k.

    Depth-first over p-adic digits: every solution mod p^(j+1) reduces to
    one mod p^j, so extending digit by digit visits them all. No lifting
    lemma is used.
    """

    def extend(x: int, y: int, j: int) -> bool:
        if j == k:
            return True
        mod = p**j
        nxt = mod * p
        for i in range(p):
            for l in range(p):
                xx, yy = x + i * mod, y + l * mod
                if eq.residual(xx, yy) % nxt == 0 and extend(xx, yy, j + 1):
                    return True
        return False

    return extend(0, 0, 0)


# ---------------------------------------------------------------- sweeps


@dataclass
class SweepReport:
    family: str
    oracle: str
    tested: int = 0
    agreements: int = 0
    mismatches: list[dict] = field(default_factory=list)
    rejected: list[dict] = field(default_factory=list)

    @property
    def first_mismatch(self) -> dict | None:
        return self.mismatches[0] if self.mismatches else None

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "oracle": self.oracle,
            "tested": self.tested,
            "agreements": self.agreements,
            "mismatches": len(self.mismatches),
            "first_mismatch": self.first_mismatch,
            "rejected": len(self.rejected),
        }


GAUSS64_EQ = (1, 0, 64, 0, 64, 16)
DEFAULT_ORACLES = {
    "gauss64": "definite_search",
    "d34": "represent",
    "x2dy2prime": "definite_search",
    "multinorm534": "norm_form_search",
    "negpell": "brute",
}
NORM_SWEEP_BOUND = 60
NEGPELL_BRUTE_Y = 10**4


def _negpell_brute(d: int) -> bool | None:
    """Scan y for x^2 - d y^2 = -1; None when the scan cannot decide.

    A solution eta of the -1 equation squares to the fundamental unit, so its
    y is below the unit's y. Seeing the unit in range without any -1 solution
    is therefore a proof of unsolvability.
    """
    unit_seen = False
    for y in range(1, NEGPELL_BRUTE_Y + 1):
        dy2 = d * y * y
        x = math.isqrt(dy2 - 1)
        if x * x == dy2 - 1:
            return True
        x = math.isqrt(dy2 + 1)
        if x * x == dy2 + 1:
            unit_seen = True
            break
    return False if unit_seen else None


def _compare_one(family: str, n: int, context) -> tuple[str, dict]:
    """('agree' | 'mismatch' | 'skip' | 'rejected', detail) for one input."""
    from . import criteria, pell
    from .arith import is_prime

    try:
        if family == "gauss64":
            verdict = criteria.decide_gauss64(n, find_witness=False).is_solvable
            truth = definite_search(QuadEquation(*GAUSS64_EQ, n=n)).is_solvable
        elif family == "d34":
            verdict = criteria.decide_d34(n, find_witness=False).is_solvable
            truth = pell.represent(34, n).is_solvable
        elif family == "x2dy2prime":
            if not is_prime(n) or n == 2:
                return "skip", {}
            verdict = criteria.decide_x2_plus_dy2_prime(64, n, find_witness=False).is_solvable
            truth = definite_search(QuadEquation(1, 0, 64, n=n)).is_solvable
        elif family == "multinorm534":
            truth = context.get(n) is not None
            if not truth:
                # one-sided oracle: silence is not evidence
                return "skip", {}
            verdict = criteria.decide_multinorm_5_34(n, find_witness=False).is_solvable
        elif family == "negpell":
            verdict = pell.negative_pell_solvable(n)[0]
            truth = _negpell_brute(n)
            if truth is None:
                return "skip", {}
        else:
            raise UnknownFamily(family)
    except DiophantusError as exc:
        return "rejected", {"n": n, "error": type(exc).__name__, "message": str(exc)}
    if verdict == truth:
        return "agree", {}
    return "mismatch", {"n": n, "criterion": verdict, "oracle": truth}


def _chunk_worker(args) -> list[tuple[int, str, dict]]:
    family, values, context = args
    return [(n, *_compare_one(family, n, context)) for n in values]


def consistency_sweep(
    family: str,
    values: Iterable[int],
    oracle_choice: str | None = None,
    workers: int = 1,
    norm_bound: int = NORM_SWEEP_BOUND,
) -> SweepReport:
    """Run the family's criterion and an independent oracle on every value.

    Inputs the criterion rejects (zero, out of domain) are recorded and
    skipped. Results are merged in increasing n whatever ``workers`` is.
    """
    if family not in DEFAULT_ORACLES:
        raise UnknownFamily(family)
    oracle_choice = oracle_choice or DEFAULT_ORACLES[family]
    if oracle_choice != DEFAULT_ORACLES[family]:
        raise BadInput(f"oracle {oracle_choice!r} does not apply to family {family!r}")
    values = sorted(set(values))
    context = None
    if family == "multinorm534" and values:
        limit = max(abs(values[0]), abs(values[-1]))
        context = norms_in_box(DEFAULT_BASIS, norm_bound, limit)

    if workers > 1 and len(values) > 1:
        size = math.ceil(len(values) / (4 * workers))
        chunks = [(family, values[i : i + size], context) for i in range(0, len(values), size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = [row for part in pool.map(_chunk_worker, chunks) for row in part]
    else:
        rows = _chunk_worker((family, values, context))

    report = SweepReport(family, oracle_choice)
    for n, outcome, detail in sorted(rows, key=lambda r: r[0]):
        if outcome == "skip":
            continue
        if outcome == "rejected":
            report.rejected.append(detail)
            continue
        report.tested += 1
        if outcome == "agree":
            report.agreements += 1
        else:
            report.mismatches.append(detail)
    return report
