"""Symmetric Q/Z-valued pairings on finite abelian groups.

A pairing lives on ``Z/q_1 ⊕ ... ⊕ Z/q_n`` (invariant factors, ``q_i | q_{i+1}``)
and is stored as an integer Gram matrix over the common denominator
``q_n``: ``b(g_i, g_j) = gram[i][j] / q_n mod 1``. Group elements are
coordinate tuples with respect to the standard generators.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from sympy import factorint

from . import exactmat as em
from .errors import BudgetExceeded, InputError, VerificationError

DEFAULT_ISOMETRY_BUDGET = 10 ** 5


@dataclass(frozen=True)
class FinitePairing:
    q: tuple[int, ...]
    gram: tuple[tuple[int, ...], ...]
    generators: tuple[tuple[int, ...], ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        q = tuple(self.q)
        n = len(q)
        if any(x <= 1 for x in q):
            raise InputError("invariant factors must exceed 1")
        if any(q[i + 1] % q[i] for i in range(n - 1)):
            raise InputError(f"{q} is not a divisor chain")
        if len(self.gram) != n or any(len(r) != n for r in self.gram):
            raise InputError("gram has the wrong shape")
        N = self.exponent
        gram = tuple(tuple(x % N for x in row) for row in self.gram)
        for i in range(n):
            for j in range(n):
                if gram[i][j] != gram[j][i]:
                    raise InputError("gram is not symmetric")
                # b(g_i, g_j) must be killed by gcd(q_i, q_j)
                if (gram[i][j] * math.gcd(q[i], q[j])) % N:
                    raise InputError(f"gram entry ({i},{j}) has the wrong order")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "gram", gram)

    @classmethod
    def from_fractions(cls, q: Sequence[int], values) -> FinitePairing:
        N = q[-1] if q else 1
        gram = []
        for row in values:
            r = []
            for v in row:
                v = Fraction(v)
                x = v * N
                if x.denominator != 1:
                    raise InputError(f"value {v} has denominator not dividing {N}")
                r.append(int(x))
            gram.append(tuple(r))
        return cls(tuple(q), tuple(gram))

    @property
    def exponent(self) -> int:
        return self.q[-1] if self.q else 1

    @property
    def rank(self) -> int:
        return len(self.q)

    def order(self) -> int:
        return math.prod(self.q)

    def value(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        """b(x, y) in [0, 1)."""
        return Fraction(self.value_num(x, y), self.exponent)

    def value_num(self, x, y) -> int:
        N = self.exponent
        g = self.gram
        n = len(self.q)
        return sum(x[i] * y[j] * g[i][j] for i in range(n) for j in range(n)) % N

    def fraction_gram(self) -> list[list[Fraction]]:
        return [[Fraction(x, self.exponent) for x in row] for row in self.gram]

    def scaled(self, c: int) -> FinitePairing:
        """Pairing c·b on the same group (c coprime to the order keeps it non-degenerate)."""
        return FinitePairing(self.q, tuple(tuple(c * x for x in row) for row in self.gram),
                             self.generators)

    def negated(self) -> FinitePairing:
        return self.scaled(-1)

    def elements(self):
        return itertools.product(*(range(x) for x in self.q))

    def reduce(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple(xi % qi for xi, qi in zip(x, self.q))

    def element_order(self, x: Sequence[int]) -> int:
        o = 1
        for xi, qi in zip(x, self.q):
            o = math.lcm(o, qi // math.gcd(xi % qi, qi))
        return o

    def is_nondegenerate(self) -> bool:
        """|image of G -> Hom(G, Q/Z)| == |G|, computed with a Smith form."""
        n = self.rank
        if n == 0:
            return True
        N = self.exponent
        stacked = [list(row) for row in self.gram] + em.scale(N, em.identity(n))
        # rows g_i generate the image; the generator g_i is killed by q_i so we
        # may use the lattice spanned by the gram rows modulo N
        d = em.snf(stacked).d
        if any(x == 0 for x in d):
            return False
        image = N ** n // math.prod(d)
        return image == self.order()

    def __str__(self):
        group = " + ".join(f"Z/{x}" for x in self.q) or "0"
        vals = ", ".join(f"{Fraction(self.gram[i][i], self.exponent)}" for i in range(self.rank))
        return f"{group} [{vals}]"


def trivial_pairing() -> FinitePairing:
    return FinitePairing((), ())


def diagonal_pairing(entries: Sequence[tuple[int, int]]) -> FinitePairing:
    """Orthogonal sum of a_i/q_i on Z/q_i, entries as (q, a) in divisor-chain order."""
    entries = [(q, a) for q, a in entries if q != 1]
    q = tuple(x for x, _ in entries)
    N = q[-1] if q else 1
    n = len(q)
    gram = [[0] * n for _ in range(n)]
    for i, (qi, a) in enumerate(entries):
        gram[i][i] = a * (N // qi)
    return FinitePairing(q, tuple(map(tuple, gram)))


# ---------------------------------------------------------------------------
# construction from matrices


def pairing_from_matrix(a) -> FinitePairing:
    """The pairing ``x^T a^{-1} y`` on coker(a) for a symmetric non-singular integer a.

    Generators are the columns of the inverse of the left Smith certificate,
    so they are recorded in the original coordinates.
    """
    if not em.is_symmetric(a):
        raise InputError("presentation matrix must be symmetric")
    det = em.determinant(a)
    if det == 0:
        raise InputError("presentation matrix is singular")
    res = em.snf(a)
    u_inv = em.inverse_unimodular(res.u)
    keep = [i for i, d in enumerate(res.d) if d > 1]
    gens = [em.column(u_inv, i) for i in keep]
    q = tuple(res.d[i] for i in keep)
    N = q[-1] if q else 1
    adj = em.adjugate(a)
    gram = []
    for gi in gens:
        row = []
        for gj in gens:
            num = em.bilinear(gi, adj, gj)
            # num/det mod 1, rescaled to denominator N
            v = Fraction(num, det)
            v -= math.floor(v)
            x = v * N
            if x.denominator != 1:
                raise VerificationError("pairing value escapes the exponent")
            row.append(int(x))
        gram.append(tuple(row))
    return FinitePairing(q, tuple(gram), tuple(tuple(g) for g in gens))


def double_cover_pairing(v) -> tuple[FinitePairing, FinitePairing]:
    """(lk, ell) on H1 of the double branched cover: lk from V + V^T, ell = 2·lk."""
    s = em.add(v, em.transpose(v)) if v else []
    det = em.determinant(s)
    if det == 0 or det % 2 == 0:
        raise InputError(f"det(V + V^T) = {det} must be odd and non-zero")
    lk = pairing_from_matrix(s)
    return lk, lk.scaled(2)


# ---------------------------------------------------------------------------
# orthogonal cyclic decomposition


@dataclass(frozen=True)
class CyclicDecomposition:
    """Orthogonal sum of a_i/q_i on Z/q_i with q_1 | q_2 | ...; entries are (q, a)."""

    entries: tuple[tuple[int, int], ...]
    generators: tuple[tuple[int, ...], ...] | None = field(default=None, compare=False)

    @property
    def q(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.entries)

    @property
    def a(self) -> tuple[int, ...]:
        return tuple(a for _, a in self.entries)

    def __len__(self):
        return len(self.entries)

    def padded(self) -> tuple[int, int, int, int]:
        """(a1, q1, a2, q2) with q_i = 1, a_i = 1 padding; needs at most 2 summands."""
        if len(self.entries) > 2:
            raise InputError(f"{len(self.entries)} cyclic summands; at most 2 supported")
        ent = [(1, 1)] * (2 - len(self.entries)) + list(self.entries)
        (q1, a1), (q2, a2) = ent
        return a1, q1, a2, q2

    def pairing(self) -> FinitePairing:
        return diagonal_pairing(self.entries)

    def __str__(self):
        if not self.entries:
            return "()"
        return "(" + ", ".join(f"{a}/{q}" for q, a in self.entries) + ")"


def _prime_power_part(p: FinitePairing, r: int):
    """Basis of the r-primary part as (vector, exponent) pairs."""
    out = []
    for i, qi in enumerate(p.q):
        e = 0
        x = qi
        while x % r == 0:
            x //= r
            e += 1
        if e:
            vec = [0] * p.rank
            vec[i] = qi // r ** e
            out.append((vec, e))
    return out


def _decompose_primary(p: FinitePairing, r: int):
    """Wall-style symmetric elimination on the r-primary part (r odd)."""
    N = p.exponent
    basis = _prime_power_part(p, r)

    def val(x, y):  # numerator over N
        return p.value_num(x, y)

    def add(x, y, c=1):
        return [(xi + c * yi) % qi for xi, yi, qi in zip(x, y, p.q)]

    found = []
    while basis:
        k = max(e for _, e in basis)
        rk = r ** k
        # a value of exact order r^k has numerator (over N) not divisible by N/r^(k-1)
        full = N // rk  # numerator multiple for 1/r^k

        def exact_order(num):
            return num % (full * r) != 0

        top = [i for i, (_, e) in enumerate(basis) if e == k]
        pick = next((i for i in top if exact_order(val(basis[i][0], basis[i][0]))), None)
        if pick is None:
            pair = next(((i, j) for i, j in itertools.combinations(top, 2)
                         if exact_order(val(basis[i][0], basis[j][0]))), None)
            if pair is None:
                raise InputError("pairing is degenerate")
            i, j = pair
            # b(h_i + h_j) = b_ii + b_jj + 2 b_ij has exact order r^k since 2 is a unit
            basis[i] = (add(basis[i][0], basis[j][0]), k)
            pick = i
            if not exact_order(val(basis[i][0], basis[i][0])):
                raise VerificationError("fix move failed to produce a maximal value")
        x, _ = basis.pop(pick)
        a_num = val(x, x) // full
        a_inv = pow(a_num, -1, rk)
        new_basis = []
        for y, e in basis:
            b = val(x, y)
            if b % full:
                raise VerificationError("pairing value with wrong denominator")
            c = (b // full) * a_inv % rk
            new_basis.append((add(y, x, -c), e))
        basis = new_basis
        found.append((k, a_num % rk, x))
    found.sort(key=lambda t: t[0])
    return found


def decompose(p: FinitePairing) -> CyclicDecomposition:
    """Orthogonal cyclic decomposition in invariant-factor order (odd order only)."""
    order = p.order()
    if order % 2 == 0:
        raise InputError("decompose supports odd-order groups only")
    if not p.is_nondegenerate():
        raise InputError("pairing is degenerate")
    if order == 1:
        return CyclicDecomposition((), ())
    per_prime = {r: _decompose_primary(p, r) for r in sorted(factorint(order))}
    length = max(len(v) for v in per_prime.values())
    entries = []
    gens = []
    for j in range(length):
        q = 1
        value = Fraction(0)
        g = [0] * p.rank
        for r, lst in per_prime.items():
            idx = j - (length - len(lst))
            if idx < 0:
                continue
            k, a, x = lst[idx]
            q *= r ** k
            value += Fraction(a, r ** k)
            g = [(gi + xi) % qi for gi, xi, qi in zip(g, x, p.q)]
        value -= math.floor(value)
        a = int(value * q) % q
        entries.append((q, a))
        gens.append(tuple(g))
    dec = CyclicDecomposition(tuple(entries), tuple(gens))
    _verify_decomposition(p, dec)
    return dec


def _verify_decomposition(p: FinitePairing, dec: CyclicDecomposition):
    if math.prod(dec.q) != p.order():
        raise VerificationError("decomposition has the wrong order")
    for i, gi in enumerate(dec.generators):
        if p.element_order(gi) != dec.q[i]:
            raise VerificationError("generator has the wrong order")
        for j, gj in enumerate(dec.generators):
            want = Fraction(dec.a[i], dec.q[i]) if i == j else Fraction(0)
            if p.value(gi, gj) != want:
                raise VerificationError("decomposition is not orthogonal/diagonal")


# ---------------------------------------------------------------------------
# brute-force isometry


def _torsion_elements(p: FinitePairing, m: int):
    """Elements x with m·x = 0, in lexicographic coordinate order."""
    ranges = []
    for qi in p.q:
        step = qi // math.gcd(qi, m)
        ranges.append(range(0, qi, step))
    return itertools.product(*ranges)


def isometry_search(p1: FinitePairing, p2: FinitePairing,
                    budget: int = DEFAULT_ISOMETRY_BUDGET) -> tuple[tuple[int, ...], ...] | None:
    """Images of p1's generators in p2 realizing an isometry, or None.

    Depth-first over generator images in lexicographic order, pruned by
    matching each new Gram entry. ``budget`` caps the number of candidate
    images tried; exhausting it raises BudgetExceeded.
    """
    if p1.q != p2.q:
        return None
    n = p1.rank
    if n == 0:
        return ()
    if not (p1.is_nondegenerate() and p2.is_nondegenerate()):
        raise InputError("isometry search needs non-degenerate pairings")
    # candidates by (order bound, self value)
    pools: dict[int, dict[int, list]] = {}
    for qi in set(p1.q):
        by_val: dict[int, list] = {}
        for x in _torsion_elements(p2, qi):
            by_val.setdefault(p2.value_num(x, x), []).append(x)
        pools[qi] = by_val
    images: list = [None] * n
    tried = 0

    def rec(i):
        nonlocal tried
        if i == n:
            return True
        for x in pools[p1.q[i]].get(p1.gram[i][i], ()):
            tried += 1
            if tried > budget:
                raise BudgetExceeded(f"isometry search exceeded {budget} candidates")
            if all(p2.value_num(images[j], x) == p1.gram[j][i] for j in range(i)):
                images[i] = x
                if rec(i + 1):
                    return True
        return False

    if not rec(0):
        return None
    # form-preserving + non-degenerate source => injective; equal orders => bijective
    return tuple(tuple(x) for x in images)


def is_isometric(p1: FinitePairing, p2: FinitePairing, budget: int = DEFAULT_ISOMETRY_BUDGET) -> bool:
    return isometry_search(p1, p2, budget) is not None


def diagonal_representatives(p: FinitePairing) -> set[tuple[int, ...]]:
    """All tuples (a_1, ..., a_n) arising from orthogonal cyclic bases of p.

    Brute force, so only for small groups with at most two cyclic summands.
    Two such pairings are isometric iff their sets intersect (equivalently,
    coincide).
    """
    n = p.rank
    if n > 2:
        raise InputError("diagonal_representatives supports at most 2 summands")
    N = p.exponent
    if n == 0:
        return {()}
    q1 = p.q[0]
    firsts = [x for x in _torsion_elements(p, q1) if p.element_order(x) == q1
              and math.gcd(p.value_num(x, x) // (N // q1), q1) == 1]
    if n == 1:
        return {(p.value_num(x, x) // (N // q1),) for x in firsts}
    q2 = p.q[1]
    out = set()
    for x in firsts:
        ax = p.value_num(x, x) // (N // q1)
        # <x> is an orthogonal summand, so its complement is cyclic of order q2;
        # its generators are the unit multiples of any one generator y0
        y0 = next((y for y in p.elements() if p.value_num(x, y) == 0
                   and p.element_order(y) == q2), None)
        if y0 is None:
            continue
        b = p.value_num(y0, y0) // (N // q2)
        for k in range(1, q2):
            if math.gcd(k, q2) == 1:
                out.add((ax, k * k * b % q2))
    return out
