"""Two-generator presentation criterion for odd-order linking pairings.

Given an orthogonal decomposition ``(a1/q1, a2/q2)`` with ``q1 | q2`` odd and a
sign ``u``, decide whether the pairing has an odd symmetric 2x2 integer
presentation matrix with determinant ``u mod 4`` (criterion B), build an
explicit one when it exists, and evaluate the five corollary obstructions.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from sympy import factorint, isprime
from sympy.ntheory import sqrt_mod

from . import exactmat as em
from . import finpair as fp
from .errors import BudgetExceeded, InputError, VerificationError

DEFAULT_PRIME_BOUND = 10 ** 6
SIGMA_ORDER = ((1, 1), (1, -1), (-1, 1), (-1, -1))


def prime_bound() -> int:
    raw = os.environ.get("PRIME_BOUND")
    if raw is None:
        return DEFAULT_PRIME_BOUND
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"PRIME_BOUND must be an integer, got {raw!r}") from None
    if value < 2:
        raise InputError("PRIME_BOUND must be at least 2")
    return value


# ---------------------------------------------------------------------------
# residue symbols


def jacobi(x: int, y: int) -> int:
    """Jacobi symbol (x | y) for odd positive y, by binary reciprocity."""
    if y <= 0 or y % 2 == 0:
        raise InputError(f"Jacobi symbol needs an odd positive modulus, got {y}")
    x %= y
    result = 1
    while x:
        while x % 2 == 0:
            x //= 2
            if y % 8 in (3, 5):
                result = -result
        x, y = y, x
        if x % 4 == 3 and y % 4 == 3:
            result = -result
        x %= y
    return result if y == 1 else 0


def is_square_mod(x: int, q: int) -> bool:
    """Whether x is a square modulo the odd positive integer q.

    Decided prime power by prime power: write x = r^v·w with w a unit; x is a
    square mod r^e iff v >= e, or v is even and w is a residue mod r
    (Hensel lifting works for odd r).
    """
    if q <= 0 or q % 2 == 0:
        raise InputError(f"modulus must be odd and positive, got {q}")
    if q == 1:
        return True
    for r, e in factorint(q).items():
        y = x % r ** e
        if y == 0:
            continue
        v = 0
        while y % r == 0:
            y //= r
            v += 1
        if v % 2 or jacobi(y, r) != 1:
            return False
    return True


def sqrt_mod_any(x: int, q: int) -> int:
    """Some z with z² ≡ x (mod q); the residue must exist."""
    if q == 1:
        return 0
    z = sqrt_mod(x % q, q)
    if z is None:
        raise InputError(f"{x} is not a square modulo {q}")
    return int(z)


# ---------------------------------------------------------------------------
# criterion input and (B)


@dataclass(frozen=True)
class CriterionInput:
    a1: int
    q1: int
    a2: int
    q2: int
    u: int

    def __post_init__(self):
        for q in (self.q1, self.q2):
            if q < 1 or q % 2 == 0:
                raise InputError(f"moduli must be odd and positive, got {q}")
        if self.q2 % self.q1:
            raise InputError(f"q1 = {self.q1} must divide q2 = {self.q2}")
        if self.u not in (1, -1):
            raise InputError("u must be 1 or -1")
        for a, q in ((self.a1, self.q1), (self.a2, self.q2)):
            if q > 1 and math.gcd(a, q) != 1:
                raise InputError(f"a = {a} is not a unit modulo {q}")

    @classmethod
    def from_decomposition(cls, dec: fp.CyclicDecomposition, u: int) -> CriterionInput:
        a1, q1, a2, q2 = dec.padded()
        return cls(a1, q1, a2, q2, u)

    @property
    def sign(self) -> int:
        """(-1)^((q1 q2 - u)/2)."""
        return -1 if ((self.q1 * self.q2 - self.u) // 2) % 2 else 1

    @property
    def ratio(self) -> int:
        return self.q2 // self.q1

    def pairing(self) -> fp.FinitePairing:
        return fp.diagonal_pairing([(self.q1, self.a1 % self.q1), (self.q2, self.a2 % self.q2)])


def condition_b1(c: CriterionInput) -> bool:
    return is_square_mod(c.sign * c.a1 * c.a2, c.q1)


def condition_b2(c: CriterionInput) -> bool:
    return c.u == 1 or (c.q1 * c.q2) % 4 == 3 or jacobi(c.a2, c.ratio) == 1


def criterion_B(c: CriterionInput) -> bool:
    return condition_b1(c) and condition_b2(c)


# ---------------------------------------------------------------------------
# witnesses


@dataclass(frozen=True)
class CWitness:
    alpha: int
    beta: int
    gamma: int
    lambda1: int
    lambda2: int


def check_witness(w: CWitness, c: CriterionInput) -> list[str]:
    """Names of the violated conditions C1..C4 (empty when all hold)."""
    bad = []
    if w.alpha % 2 == 0:
        bad.append("C1")
    if w.alpha * w.gamma - w.beta ** 2 != c.sign * c.ratio:
        bad.append("C2")
    if (w.lambda1 ** 2 * w.alpha - c.a1) % c.q1:
        bad.append("C3")
    if (w.lambda2 ** 2 * w.alpha - c.sign * c.a2) % c.q2:
        bad.append("C4")
    return bad


def _progression(residue: int, modulus: int, bound: int) -> Iterator[int]:
    p = residue % modulus
    if p == 0:
        p = modulus
    while p <= bound:
        yield p
        p += modulus


def construct_witness(c: CriterionInput, bound: int | None = None) -> CWitness:
    """Explicit (alpha, beta, gamma, lambda1, lambda2) satisfying C1..C4.

    For each sign pair (sigma1, sigma2) in fixed order, scans primes
    p ≡ sigma1·s·a2 (mod q2), p ≡ sigma2 (mod 4) up to ``bound`` and accepts
    the first one for which -s·q2/q1 is a square mod p.
    """
    if not criterion_B(c):
        raise InputError("criterion B fails, so no witness exists")
    bound = prime_bound() if bound is None else bound
    s = c.sign
    r = c.ratio
    # lambda1^2 · s·a2 ≡ a1 (mod q1)
    if c.q1 == 1:
        lam1 = 1
    else:
        lam1 = sqrt_mod_any(c.a1 * pow(s * c.a2, -1, c.q1), c.q1)
    modulus = 4 * c.q2
    for sigma1, sigma2 in SIGMA_ORDER:
        # CRT: x ≡ sigma1·s·a2 (mod q2), x ≡ sigma2 (mod 4)
        target = sigma1 * s * c.a2
        residue = next(x for x in range(modulus) if (x - target) % c.q2 == 0
                       and (x - sigma2) % 4 == 0)
        for p in _progression(residue, modulus, bound):
            if not isprime(p):
                continue
            if jacobi(-s * r, p) != 1:
                continue
            alpha = sigma1 * p
            beta = sqrt_mod_any(-s * r, p)
            num = s * r + beta ** 2
            if num % alpha:
                raise VerificationError("beta does not solve the determinant equation")
            w = CWitness(alpha, beta, num // alpha, lam1, 1)
            bad = check_witness(w, c)
            if bad:
                raise VerificationError(f"witness violates {', '.join(bad)}")
            return w
    raise BudgetExceeded(f"no suitable prime below {bound}")


def matrix_from_witness(w: CWitness, c: CriterionInput, isometry_limit: int = 2000):
    """M = q1·[[alpha, beta], [beta, gamma]], checked to present the input pairing."""
    bad = check_witness(w, c)
    if bad:
        raise InputError(f"witness violates {', '.join(bad)}")
    q1 = c.q1
    m = [[q1 * w.alpha, q1 * w.beta], [q1 * w.beta, q1 * w.gamma]]
    if m[0][0] % 2 == 0 and m[1][1] % 2 == 0:
        raise VerificationError("witness matrix is even")
    det = em.determinant(m)
    if (det - c.u) % 4:
        raise VerificationError(f"det {det} is not {c.u} mod 4")
    if abs(det) != c.q1 * c.q2:
        raise VerificationError("witness matrix has the wrong determinant")
    _check_explicit_generators(m, det, w, c)
    if c.q1 * c.q2 <= isometry_limit:
        if fp.isometry_search(fp.pairing_from_matrix(m), c.pairing()) is None:
            raise VerificationError("witness matrix does not present the pairing")
    return m


def _check_explicit_generators(m, det, w: CWitness, c: CriterionInput):
    """lambda1·(alpha, beta) and lambda2·(0, 1) generate an orthogonal (a1/q1, a2/q2) basis."""
    from fractions import Fraction

    adj = em.adjugate(m)
    g1 = [w.lambda1 * w.alpha, w.lambda1 * w.beta]
    g2 = [0, w.lambda2]

    def val(x, y):
        v = Fraction(em.bilinear(x, adj, y), det)
        return v - math.floor(v)

    def order(x):
        # order of [x] in coker m: smallest k with k·m^{-1}x integral
        inv = [Fraction(sum(adj[i][j] * x[j] for j in range(2)), det) for i in range(2)]
        return math.lcm(*(f.denominator for f in inv))

    if order(g1) != c.q1 or order(g2) != c.q2:
        raise VerificationError("witness generators have the wrong orders")
    if val(g1, g2) != 0:
        raise VerificationError("witness generators are not orthogonal")
    if val(g1, g1) != Fraction(c.a1 % c.q1, c.q1) % 1:
        raise VerificationError("first generator has the wrong self-pairing")
    if val(g2, g2) != Fraction(c.a2 % c.q2, c.q2) % 1:
        raise VerificationError("second generator has the wrong self-pairing")


# ---------------------------------------------------------------------------
# corollary obstructions

UA3_GZ2 = "u_a >= 3 and g_Z >= 2"
GZ2 = "g_Z >= 2"


def cor53(a1: int, q1: int, a2: int, q2: int) -> dict[str, str]:
    """Triggered obstruction cases, tag -> implication, for a padded decomposition."""
    for q in (q1, q2):
        if q < 1 or q % 2 == 0:
            raise InputError("moduli must be odd and positive")
    if q2 % q1:
        raise InputError("q1 must divide q2")
    out = {}
    prod_nonsq = not is_square_mod(a1 * a2, q1)
    r = q2 // q1
    # The argument behind (i) needs -a1a2 to be a non-square as well. That is
    # automatic when -1 is a square mod q1 (q1 prime), but not for q1 = 9 or 21:
    # (1/9, 2/9) has the odd presentation [[0, 9], [9, 9]] with det = -1 mod 4.
    if q1 % 4 == 1 and prod_nonsq and not is_square_mod(-a1 * a2, q1):
        out["i"] = UA3_GZ2
    if q1 % 4 == 3 and q2 % 4 == 3 and prod_nonsq and jacobi(a2, r) == -1:
        out["ii"] = UA3_GZ2
    if q1 % 4 == 3 and q2 % 4 == 1 and prod_nonsq:
        out["iii"] = GZ2
    if q1 % 4 == 3 and q2 % 4 == 3 and not is_square_mod(-a1 * a2, q1):
        out["iv"] = GZ2
    if (q1 * q2) % 4 == 1 and jacobi(a2, r) == -1:
        out["v"] = GZ2
    return out


def cor53_decomposition(dec: fp.CyclicDecomposition) -> dict[str, str]:
    return cor53(*dec.padded())


# ---------------------------------------------------------------------------
# exhaustive oracle (independent of criterion B)


def admissible_inputs(max_q2: int) -> Iterator[CriterionInput]:
    """Every CriterionInput with q2 <= max_q2 and residues in [1, q)."""
    for q2 in range(1, max_q2 + 1, 2):
        for q1 in range(1, q2 + 1, 2):
            if q2 % q1:
                continue
            for a1 in range(1, q1 + 1):
                if q1 > 1 and math.gcd(a1, q1) != 1 or (q1 == 1 and a1 != 1):
                    continue
                for a2 in range(1, q2 + 1):
                    if q2 > 1 and math.gcd(a2, q2) != 1 or (q2 == 1 and a2 != 1):
                        continue
                    for u in (1, -1):
                        yield CriterionInput(a1, q1, a2, q2, u)


_CLASS_KEYS: dict[tuple, tuple] = {}


def _class_key(q: tuple[int, ...], a: tuple[int, ...]) -> tuple:
    """Canonical representative (least tuple) of the isometry class of a diagonal pairing.

    Every member of a computed class is cached, so each class is enumerated once.
    """
    hit = _CLASS_KEYS.get((q, a))
    if hit is None:
        reps = fp.diagonal_representatives(fp.diagonal_pairing(list(zip(q, a))))
        hit = min(reps)
        for r in reps:
            _CLASS_KEYS[(q, r)] = hit
    return hit


def _pairing_key(p: fp.FinitePairing) -> tuple:
    dec = fp.decompose(p)
    return dec.q, _class_key(dec.q, dec.a)


def _scan_2x2(order: int, u: int, bound: int, odd: bool, q1: int):
    """Symmetric [[x, y], [y, z]] with |entries| <= bound, det = ±order ≡ u (mod 4),
    gcd(x, y, z) = q1, odd (or even when ``odd`` is False).

    Scan order: x, then y, each running 0, 1, -1, 2, -2, ...
    """
    d = order if (order - u) % 4 == 0 else -order
    values = [0] + [s * k for k in range(1, bound + 1) for s in (1, -1)]
    for x in values:
        for y in values:
            if x == 0:
                # det = -y^2 forces z free; only possible when d = -y^2
                if -y * y != d:
                    continue
                zs = values
            else:
                num = d + y * y
                if num % x:
                    continue
                zs = (num // x,)
            for z in zs:
                if abs(z) > bound:
                    continue
                is_odd = x % 2 == 1 or z % 2 == 1
                if is_odd != odd:
                    continue
                if math.gcd(math.gcd(x, y), z) != q1:
                    continue
                yield [[x, y], [y, z]]


@lru_cache(maxsize=None)
def _realized_classes(q1: int, q2: int, u: int, bound: int, odd: bool) -> dict:
    """class key -> first matrix (scan order) presenting a pairing of that class."""
    found: dict = {}
    for m in _scan_2x2(q1 * q2, u, bound, odd, q1):
        p = fp.pairing_from_matrix(m)
        if p.q != tuple(x for x in (q1, q2) if x > 1):
            continue
        key = _pairing_key(p)
        if key not in found:
            found[key] = m
    return found


def exhaustive_2x2_oracle(p: fp.FinitePairing, u: int, entry_bound: int = 200,
                          odd: bool = True):
    """First odd (or, as a diagnostic, even) symmetric 2x2 matrix presenting p, or None."""
    if p.order() > 10 ** 4:
        raise InputError("oracle supports groups of order at most 10^4")
    if p.rank > 2:
        return None
    if p.order() % 2 == 0:
        raise InputError("oracle supports odd-order groups only")
    qs = (1,) * (2 - p.rank) + p.q
    q1, q2 = qs
    realized = _realized_classes(q1, q2, u, entry_bound, odd)
    key = _pairing_key(p)
    return realized.get(key)
