"""Finite cyclotomic quotient rings Z[t]/(m, Φ_p) and Hermitian forms over them.

Elements are tuples of ``p - 1`` coefficients mod ``m`` in the basis
1, t, ..., t^(p-2). Conjugation is t ↦ t^-1 = t^(p-1). Everything here is
decided by exhaustion, so rings are kept at desk scale (|ring| ≤ 10^6).
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import cached_property

from sympy import isprime

from . import laurent as lp
from .errors import BudgetExceeded, InputError, VerificationError
from .finpair import FinitePairing

RING_BUDGET = 10 ** 6

Elem = tuple


class QuotRing:
    """Z[t]/(m, Φ_p) for an odd prime p and m coprime to p."""

    def __init__(self, p: int, m: int):
        if p < 3 or not isprime(p):
            raise InputError(f"p = {p} must be an odd prime")
        if m < 2:
            raise InputError("modulus must be at least 2")
        if m % p == 0:
            raise InputError(
                f"q = {p} divides the modulus: the prime ramifies, and the order must be "
                "coprime with t - t^-1")
        self.p = p
        self.m = m
        self.d = p - 1

    def __repr__(self):
        return f"QuotRing(p={self.p}, m={self.m})"

    def __eq__(self, other):
        return isinstance(other, QuotRing) and (self.p, self.m) == (other.p, other.m)

    def __hash__(self):
        return hash((self.p, self.m))

    @property
    def size(self) -> int:
        return self.m ** self.d

    # -- construction -----------------------------------------------------

    def elem(self, coeffs) -> Elem:
        coeffs = list(coeffs)
        if len(coeffs) > self.d:
            return self._reduce(coeffs)
        return tuple(c % self.m for c in coeffs + [0] * (self.d - len(coeffs)))

    def const(self, c: int) -> Elem:
        return self.elem([c])

    @property
    def zero(self) -> Elem:
        return (0,) * self.d

    @property
    def one(self) -> Elem:
        return self.const(1)

    @property
    def t(self) -> Elem:
        return self.elem([0, 1])

    def from_poly(self, poly: lp.LaurentPoly) -> Elem:
        """Image of a Laurent polynomial (t^-1 = t^(p-1))."""
        coeffs = [0] * self.p
        for e, c in poly.terms.items():
            coeffs[e % self.p] += c
        return self._reduce(coeffs)

    def parse(self, text: str) -> Elem:
        return self.from_poly(lp.parse_poly(text))

    def format(self, x: Elem) -> str:
        return lp.format_poly(lp.LaurentPoly({i: c for i, c in enumerate(x)}))

    def format_signed(self, x: Elem) -> str:
        """Like format, with coefficients in the symmetric range (-m/2, m/2]."""
        half = self.m // 2
        return lp.format_poly(lp.LaurentPoly(
            {i: (c - self.m if c > half else c) for i, c in enumerate(x)}))

    def _reduce(self, coeffs) -> Elem:
        c = list(coeffs)
        for e in range(len(c) - 1, self.d - 1, -1):
            v = c[e]
            if not v:
                continue
            c[e] = 0
            if e >= self.p:
                c[e - self.p] += v
            else:  # e == p - 1: t^(p-1) = -(1 + t + ... + t^(p-2))
                for i in range(self.d):
                    c[i] -= v
        return tuple(x % self.m for x in c[: self.d]) + (0,) * max(0, self.d - len(c))

    # -- arithmetic -------------------------------------------------------

    def add(self, x: Elem, y: Elem) -> Elem:
        return tuple((a + b) % self.m for a, b in zip(x, y))

    def sub(self, x: Elem, y: Elem) -> Elem:
        return tuple((a - b) % self.m for a, b in zip(x, y))

    def neg(self, x: Elem) -> Elem:
        return tuple(-a % self.m for a in x)

    def scale(self, c: int, x: Elem) -> Elem:
        return tuple(c * a % self.m for a in x)

    def mul(self, x: Elem, y: Elem) -> Elem:
        prod = [0] * (2 * self.d - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    prod[i + j] += a * b
        return self._reduce(prod)

    def conj(self, x: Elem) -> Elem:
        coeffs = [0] * self.p
        coeffs[0] = x[0]
        for i in range(1, self.d):
            coeffs[self.p - i] += x[i]
        return self._reduce(coeffs)

    def norm(self, x: Elem) -> Elem:
        out = self.mul(x, self.conj(x))
        assert out in self.fixed_set
        return out

    def trace(self, x: Elem) -> Elem:
        out = self.add(x, self.conj(x))
        assert out in self.fixed_set
        return out

    def pow(self, x: Elem, n: int) -> Elem:
        out = self.one
        for _ in range(n):
            out = self.mul(out, x)
        return out

    # -- enumeration ------------------------------------------------------

    def elements(self):
        """All elements, coefficient-lexicographic with the top degree most significant.

        Constants come first, so 1 is the first unit found.
        """
        if self.size > RING_BUDGET:
            raise BudgetExceeded(f"ring of size {self.size} exceeds {RING_BUDGET}")
        return (tuple(reversed(c)) for c in itertools.product(range(self.m), repeat=self.d))

    @cached_property
    def fixed_inverse(self) -> dict:
        """Inverses inside the fixed subring, by exhaustion over F."""
        table = {}
        for x in self.fixed:
            for y in self.fixed:
                if self.mul(x, y) == self.one:
                    table[x] = y
                    break
        return table

    def is_unit(self, x: Elem) -> bool:
        # x is a unit iff its norm x·conj(x) is a unit of F
        return self.mul(x, self.conj(x)) in self.fixed_inverse

    def inv(self, x: Elem) -> Elem:
        n = self.mul(x, self.conj(x))
        if n not in self.fixed_inverse:
            raise InputError(f"{self.format(x)} is not a unit")
        return self.mul(self.conj(x), self.fixed_inverse[n])

    def units(self) -> list:
        return [x for x in self.elements() if self.is_unit(x)]

    @cached_property
    def fixed(self) -> list:
        """The conjugation-fixed subring F, in enumeration order."""
        return [x for x in self.elements() if self.conj(x) == x]

    @cached_property
    def fixed_set(self) -> frozenset:
        return frozenset(self.fixed)

    def fixed_units(self) -> list:
        return [x for x in self.fixed if self.is_unit(x)]

    @cached_property
    def norm_table(self) -> dict:
        """fixed unit -> first unit (enumeration order) with that norm."""
        table: dict = {}
        for x in self.elements():
            if self.is_unit(x):
                table.setdefault(self.norm(x), x)
        return table


def ring_for(p: int, q: int, k: int) -> QuotRing:
    if not isprime(q):
        raise InputError(f"q = {q} must be prime")
    if q == p:
        raise InputError(
            f"q = p = {p} is ramified; the order must be coprime with t - t^-1")
    return QuotRing(p, q ** k)


# ---------------------------------------------------------------------------
# norm and trace


def surjectivity_check(ring: QuotRing, which: str) -> bool:
    """Whether norm (onto the units of F) or trace (onto F) is surjective."""
    if ring.size > RING_BUDGET:
        raise BudgetExceeded(f"ring of size {ring.size} exceeds {RING_BUDGET}")
    if which == "norm":
        return set(ring.norm_table) == set(ring.fixed_units())
    if which == "trace":
        image = {ring.trace(x) for x in ring.elements()}
        return image == ring.fixed_set
    raise InputError(f"unknown map {which!r}; expected 'norm' or 'trace'")


def solve_norm(mu: Elem, ring: QuotRing) -> Elem:
    """First λ in enumeration order with norm(λ)·mu = 1."""
    if mu not in ring.fixed_set or not ring.is_unit(mu):
        raise InputError(f"{ring.format(mu)} is not a unit of the fixed subring")
    target = ring.inv(mu)
    lam = ring.norm_table.get(target)
    if lam is None:
        raise VerificationError(
            f"{ring.format(target)} is not a norm in {ring!r}; norm surjectivity is violated")
    if ring.mul(ring.norm(lam), mu) != ring.one:
        raise VerificationError("solve_norm produced a wrong multiplier")
    return lam


def isometry_cyclic(v1: Elem, v2: Elem, ring: QuotRing) -> Elem:
    """Unit λ with λ·conj(λ)·v1 = v2, an isometry x ↦ λx of the 1x1 forms.

    Both values must be non-degenerate (units of the fixed subring).
    """
    for v in (v1, v2):
        if v not in ring.fixed_set:
            raise InputError(f"{ring.format(v)} is not Hermitian")
        if not ring.is_unit(v):
            raise InputError(f"{ring.format(v)} is degenerate")
    lam = ring.norm_table.get(ring.mul(v2, ring.inv(v1)))
    if lam is None:
        raise VerificationError("no multiplier found; norm surjectivity is violated")
    if ring.mul(ring.norm(lam), v1) != v2:
        raise VerificationError("isometry multiplier failed verification")
    return lam


def all_pairings_isometric(p: int, q: int, k: int) -> bool:
    """Every two non-degenerate Hermitian forms on R/(q^k, Φ_p) are isometric."""
    ring = ring_for(p, q, k)
    if ring.size > 10 ** 4:
        raise BudgetExceeded(f"module of size {ring.size} exceeds 10^4")
    values = ring.fixed_units()
    for v1 in values:
        for v2 in values:
            try:
                isometry_cyclic(v1, v2, ring)
            except VerificationError:
                return False
    return True


# ---------------------------------------------------------------------------
# Hermitian Gram matrices on homogeneous modules ⊕ R/(m)


def gram_is_hermitian(ring: QuotRing, g) -> bool:
    n = len(g)
    return all(g[j][i] == ring.conj(g[i][j]) for i in range(n) for j in range(n))


def ring_det(ring: QuotRing, g) -> Elem:
    n = len(g)
    if n == 0:
        return ring.one
    total = ring.zero
    for perm in itertools.permutations(range(n)):
        term = ring.one
        for i, j in enumerate(perm):
            term = ring.mul(term, g[i][j])
        inversions = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
        total = ring.sub(total, term) if inversions % 2 else ring.add(total, term)
    return total


def gram_is_nondegenerate(ring: QuotRing, g) -> bool:
    return ring.is_unit(ring_det(ring, g))


def _mat_mul(ring, a, b):
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = ring.zero
            for r in range(k):
                acc = ring.add(acc, ring.mul(a[i][r], b[r][j]))
            row.append(acc)
        out.append(row)
    return out


def _conj_t(ring, a):
    n = len(a)
    return [[ring.conj(a[j][i]) for j in range(n)] for i in range(n)]


def transform_gram(ring: QuotRing, g, p):
    """conj(P)ᵀ·G·P: the Gram matrix in the basis given by the columns of P."""
    return _mat_mul(ring, _mat_mul(ring, _conj_t(ring, p), g), p)


def _identity(ring, n):
    return [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)]


def _check_gram(ring, g):
    if not gram_is_hermitian(ring, g):
        raise InputError("Gram matrix is not Hermitian")
    if not gram_is_nondegenerate(ring, g):
        raise InputError("Gram matrix is degenerate")


def homogeneous_fix(ring: QuotRing, g, m: int | None = None, budget: int = 10 ** 6):
    """Automorphism P making the Gram entry (m, m) a unit (m defaults to the last index).

    Tries, in order: identity; a swap with a unit diagonal entry; a move
    g_m ↦ g_m + λ·g_j; a general vector g_m + Σ λ_j·g_j.
    """
    _check_gram(ring, g)
    n = len(g)
    m = n - 1 if m is None else m
    p = _identity(ring, n)
    if ring.is_unit(g[m][m]):
        return p
    for i in range(n):
        if i != m and ring.is_unit(g[i][i]):
            p[i][i] = p[m][m] = ring.zero
            p[i][m] = p[m][i] = ring.one
            return _verified_fix(ring, g, p, m)

    def new_entry(coeffs):
        x = [coeffs[i] for i in range(n)]
        val = ring.zero
        for i in range(n):
            for j in range(n):
                if x[i] != ring.zero and x[j] != ring.zero:
                    val = ring.add(val, ring.mul(ring.mul(ring.conj(x[i]), x[j]), g[i][j]))
        return val

    for j in range(n):
        if j == m:
            continue
        for lam in ring.elements():
            coeffs = [ring.zero] * n
            coeffs[m] = ring.one
            coeffs[j] = lam
            if ring.is_unit(new_entry(coeffs)):
                for i in range(n):
                    p[i][m] = coeffs[i]
                return _verified_fix(ring, g, p, m)
    others = [j for j in range(n) if j != m]
    tried = 0
    for combo in itertools.product(list(ring.elements()), repeat=len(others)):
        tried += 1
        if tried > budget:
            break
        coeffs = [ring.zero] * n
        coeffs[m] = ring.one
        for j, lam in zip(others, combo):
            coeffs[j] = lam
        if ring.is_unit(new_entry(coeffs)):
            for i in range(n):
                p[i][m] = coeffs[i]
            return _verified_fix(ring, g, p, m)
    raise BudgetExceeded("homogeneous_fix found no vector with unit self-pairing")


def _verified_fix(ring, g, p, m):
    if not ring.is_unit(ring_det(ring, p)):
        raise VerificationError("automorphism is not invertible")
    if not ring.is_unit(transform_gram(ring, g, p)[m][m]):
        raise VerificationError("fix did not produce a unit diagonal entry")
    return p


def gram_schmidt_diag(ring: QuotRing, g):
    """(diagonal Gram, automorphism P) with conj(P)ᵀ·G·P diagonal."""
    _check_gram(ring, g)
    n = len(g)
    total = _identity(ring, n)
    for size in range(n, 1, -1):
        cur = transform_gram(ring, g, total)
        block = [row[:size] for row in cur[:size]]
        fix = homogeneous_fix(ring, block)
        step = _identity(ring, n)
        for i in range(size):
            for j in range(size):
                step[i][j] = fix[i][j]
        total = _mat_mul(ring, total, step)
        cur = transform_gram(ring, g, total)
        m = size - 1
        inv_mm = ring.inv(cur[m][m])
        step = _identity(ring, n)
        for i in range(m):
            # g_i <- g_i - mu_i g_m with mu_i = l(g_m, g_i) / l(g_m, g_m)
            mu = ring.mul(cur[m][i], inv_mm)
            step[m][i] = ring.neg(mu)
        total = _mat_mul(ring, total, step)
    diag = transform_gram(ring, g, total)
    if any(diag[i][j] != ring.zero for i in range(n) for j in range(n) if i != j):
        raise VerificationError("Gram-Schmidt did not diagonalize")
    if not ring.is_unit(ring_det(ring, total)):
        raise VerificationError("Gram-Schmidt automorphism is not invertible")
    return diag, total


# ---------------------------------------------------------------------------
# bilinear <-> sesquilinear correspondence on explicit tables


def _act(action, x, q):
    return tuple(sum(action[i][j] * x[j] for j in range(len(x))) % q[i] for i in range(len(x)))


def check_module(lk: FinitePairing, action, n: int):
    """The action matrix has order dividing n and lk is t-equivariant."""
    q = lk.q
    gens = [tuple(int(i == j) for j in range(len(q))) for i in range(len(q))]
    for g in gens:
        x = g
        for _ in range(n):
            x = _act(action, x, q)
        if x != g:
            raise InputError(f"t^{n} does not act as the identity")
        for h in gens:
            if lk.value(_act(action, g, q), _act(action, h, q)) != lk.value(g, h):
                raise InputError("lk is not equivariant under t")


def sesquilinearize(lk: FinitePairing, action, n: int) -> dict:
    """ℓ'(x, y) = Σ_{k=1..n} t^k·lk(t^k x, y), as coefficient tuples mod 1.

    Keys are pairs of group elements; values list the coefficients of
    1, t, ..., t^(n-1) in [0, 1).
    """
    check_module(lk, action, n)
    q = lk.q
    elems = list(lk.elements())
    orbit = {}
    for x in elems:
        seq = []
        y = x
        for _ in range(n):
            y = _act(action, y, q)
            seq.append(y)
        orbit[x] = seq  # seq[k-1] = t^k x
    table = {}
    for x in elems:
        for y in elems:
            coeffs = [Fraction(0)] * n
            for k in range(1, n + 1):
                coeffs[k % n] += lk.value(orbit[x][k - 1], y)
            table[(x, y)] = tuple(c - math.floor(c) for c in coeffs)
    return table


def recover_lk(table: dict) -> dict:
    """lk(x, y) = θ(ℓ'(x, y)), θ keeping the coefficient of t^0."""
    return {key: value[0] for key, value in table.items()}


def lk_table(lk: FinitePairing) -> dict:
    elems = list(lk.elements())
    return {(x, y): lk.value(x, y) for x in elems for y in elems}


def evaluate_table(table: dict, t0: int) -> dict:
    """Specialize ℓ' at an integer t0 with t0^n = 1 (e.g. t0 = -1 for n = 2)."""
    out = {}
    for key, coeffs in table.items():
        v = sum(c * t0 ** k for k, c in enumerate(coeffs))
        out[key] = v - math.floor(v)
    return out


def find_equivariant_pairing(q: tuple, action, n: int):
    """First non-degenerate equivariant lk (brute force over Gram matrices mod the exponent)."""
    r = len(q)
    N = q[-1]
    slots = [(i, j) for i in range(r) for j in range(i, r)]
    for vals in itertools.product(range(N), repeat=len(slots)):
        gram = [[0] * r for _ in range(r)]
        for (i, j), v in zip(slots, vals):
            gram[i][j] = gram[j][i] = v
        try:
            lk = FinitePairing(q, tuple(map(tuple, gram)))
        except InputError:
            continue
        if not lk.is_nondegenerate():
            continue
        try:
            check_module(lk, action, n)
        except InputError:
            continue
        return lk
    return None


def cyclotomic_action(p: int) -> list[list[int]]:
    """Matrix of multiplication by t on Z[t]/Φ_p in the basis 1, t, ..., t^(p-2)."""
    d = p - 1
    a = [[0] * d for _ in range(d)]
    for j in range(d - 1):
        a[j + 1][j] = 1
    for i in range(d):
        a[i][d - 1] = -1
    return a


def sweep_cases(limit: int = 10 ** 4, primes_p=(3, 5, 7), primes_q=(2, 3, 5, 7, 11, 13)):
    """(p, q, k) with q != p and q^(k(p-1)) <= limit."""
    out = []
    for p in primes_p:
        for q in primes_q:
            if q == p:
                continue
            k = 1
            while q ** (k * (p - 1)) <= limit:
                out.append((p, q, k))
                k += 1
    return out

