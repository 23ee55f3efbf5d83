"""Knot records and the classical invariants read off a Seifert matrix.

Knot file format (``#`` at the start of a line or after whitespace starts a
comment, so names such as ``3_1#3_1`` survive; blank lines are ignored)::

    knot 3_1
    source hand computation
    seifert 2
    -1 1
     0 -1

The ``source`` line is optional. Several records may follow each other.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from sympy import cyclotomic_poly
from sympy.abc import x as _x

from . import exactmat as em
from . import laurent as lp
from .errors import InputError, VerificationError

START_PREC = 128
_COMMENT = re.compile(r"(^|\s)#.*$")
MAX_PREC = 1024


@dataclass(frozen=True)
class KnotRecord:
    name: str
    seifert: tuple[tuple[int, ...], ...]
    source: str = ""

    @classmethod
    def make(cls, name: str, seifert, source: str = "") -> KnotRecord:
        return cls(name, tuple(tuple(int(x) for x in row) for row in seifert), source)

    @property
    def v(self) -> em.Matrix:
        return [list(row) for row in self.seifert]

    @property
    def size(self) -> int:
        return len(self.seifert)

    @property
    def genus(self) -> int:
        return self.size // 2

    def symmetrized(self) -> em.Matrix:
        v = self.v
        return em.add(v, em.transpose(v)) if v else []

    def alexander(self) -> lp.LaurentPoly:
        return lp.alexander_from_seifert(self.v)


def validate(r: KnotRecord) -> KnotRecord:
    """Check the record is a Seifert matrix of a knot: even size, det(V - Vᵀ) = 1."""
    v = r.v
    n = len(v)
    for i, row in enumerate(v):
        if len(row) != n:
            raise InputError(f"{r.name}: row {i + 1} has {len(row)} entries, expected {n}")
    if n % 2:
        raise InputError(f"{r.name}: Seifert matrix has odd size {n}")
    if n == 0:
        return r
    d = em.determinant(em.sub(v, em.transpose(v)))
    if d != 1:
        raise InputError(f"{r.name}: det(V - V^T) = {d}, expected 1")
    return r


def knot_determinant(r: KnotRecord) -> int:
    return abs(em.determinant(r.symmetrized()))


def min_generators_double_cover(r: KnotRecord) -> int:
    """Minimal number of generators of H1 of the double branched cover."""
    s = r.symmetrized()
    if not s:
        return 0
    return sum(1 for d in em.invariant_factors(s) if d != 1)


# ---------------------------------------------------------------------------
# Levine-Tristram signatures


def _is_alexander_root(delta: lp.LaurentPoly, turn: Fraction) -> bool:
    """Whether Δ vanishes at exp(2πi·turn), i.e. Φ_N divides Δ (N = denominator)."""
    n = turn.denominator
    phi = cyclotomic_poly(n, _x).as_poly(_x)
    phi_lp = lp.LaurentPoly({int(e[0]): int(c) for e, c in zip(phi.monoms(), phi.coeffs())})
    return phi_lp.divides(delta)


def _certified_inertia(re_part, im_part, turn: Fraction):
    """Inertia of the Hermitian matrix whose entries are given by callables.

    ``re_part(ctx, c, s)`` and ``im_part(ctx, c, s)`` build the real and
    imaginary parts from cos and sin of 2π·turn, evaluated in the given
    mpmath context. Eigenvectors from a floating point solve give a
    congruence Qᵀ·S·Q which is re-evaluated in interval arithmetic; when all
    Gershgorin discs avoid 0 the signs are certified.
    """
    prec = START_PREC
    while prec <= MAX_PREC:
        mpmath.mp.prec = prec
        mpmath.iv.prec = prec
        c = mpmath.cos(2 * mpmath.pi * turn.numerator / turn.denominator)
        s = mpmath.sin(2 * mpmath.pi * turn.numerator / turn.denominator)
        real = _realify(re_part(mpmath.mp, c, s), im_part(mpmath.mp, c, s))
        n = len(real)
        _, q = mpmath.eigsy(mpmath.matrix(real))
        ci = mpmath.iv.cos(2 * mpmath.iv.pi * turn.numerator / turn.denominator)
        si = mpmath.iv.sin(2 * mpmath.iv.pi * turn.numerator / turn.denominator)
        real_iv = _realify(re_part(mpmath.iv, ci, si), im_part(mpmath.iv, ci, si))
        qi = [[mpmath.iv.mpf(q[i, j]) for j in range(n)] for i in range(n)]
        sq = [[sum((real_iv[i][k] * qi[k][j] for k in range(n)), mpmath.iv.mpf(0))
               for j in range(n)] for i in range(n)]
        d = [[sum((qi[k][i] * sq[k][j] for k in range(n)), mpmath.iv.mpf(0))
              for j in range(n)] for i in range(n)]
        pos = neg = 0
        ok = True
        for i in range(n):
            radius = sum((abs(d[i][j]) for j in range(n) if j != i), mpmath.iv.mpf(0))
            lo = d[i][i] - radius
            hi = d[i][i] + radius
            if lo.a > 0:
                pos += 1
            elif hi.b < 0:
                neg += 1
            else:
                ok = False
                break
        mpmath.mp.prec = 53
        mpmath.iv.prec = 53
        if ok:
            # each eigenvalue of the Hermitian matrix appears twice in the realification
            if pos % 2 or neg % 2:
                raise VerificationError("realified inertia is not even")
            return pos // 2, neg // 2
        prec *= 2
    raise VerificationError(f"could not certify signs at precision {MAX_PREC}")


def _realify(a, b):
    """[[A, -B], [B, A]] for the Hermitian matrix A + iB."""
    n = len(a)
    top = [list(a[i]) + [-b[i][j] for j in range(n)] for i in range(n)]
    bottom = [list(b[i]) + list(a[i]) for i in range(n)]
    return top + bottom


def lt_signature(r: KnotRecord, turn) -> int:
    """Signature of (1 - ω)V + (1 - ω̄)Vᵀ at ω = exp(2πi·turn), turn in [0, 1).

    Exact at ω = -1; otherwise certified with interval arithmetic.
    """
    turn = Fraction(turn) % 1
    v = r.v
    n = len(v)
    if n == 0 or turn == 0:
        return 0
    if _is_alexander_root(r.alexander(), turn):
        raise InputError(f"{r.name}: ω = exp(2πi·{turn}) is a root of the Alexander polynomial")
    if turn == Fraction(1, 2):
        return em.signature(r.symmetrized())
    vt = em.transpose(v)
    # (1 - ω)V + (1 - ω̄)Vᵀ = (1 - c)(V + Vᵀ) + i·s·(Vᵀ - V) with ω = c + i s
    sym = em.add(v, vt)
    skew = em.sub(vt, v)

    def re_part(ctx, c, s):
        return [[(1 - c) * sym[i][j] for j in range(n)] for i in range(n)]

    def im_part(ctx, c, s):
        return [[s * skew[i][j] for j in range(n)] for i in range(n)]

    pos, neg = _certified_inertia(re_part, im_part, turn)
    if pos + neg != n:
        raise VerificationError("matrix is singular away from Alexander roots")
    return pos - neg


def sample_turns(max_a: int = 6) -> list[Fraction]:
    """ω = -1, then primitive 2^a-th roots in the upper half plane, a = 2..max_a."""
    out = [Fraction(1, 2)]
    for a in range(2, max_a + 1):
        n = 2 ** a
        out.extend(Fraction(k, n) for k in range(1, n // 2, 2))
    return out


def sampled_signatures(r: KnotRecord, max_a: int = 6) -> dict[Fraction, int]:
    """LT signatures over the sample set, skipping Alexander roots."""
    delta = r.alexander()
    out = {}
    for turn in sample_turns(max_a):
        if r.size and _is_alexander_root(delta, turn):
            continue
        out[turn] = lt_signature(r, turn)
    return out


# ---------------------------------------------------------------------------
# Arf invariant


def symplectic_basis(omega) -> em.Matrix:
    """Unimodular P with Pᵀ·Ω·P = ⊕ [[0, 1], [-1, 0]] for unimodular skew Ω."""
    n = len(omega)
    basis = em.identity(n)  # columns, in original coordinates
    done = []
    while basis and basis[0]:
        k = len(basis[0])
        g = em.congruent_transform(omega, basis)
        e = [1] + [0] * (k - 1)
        f = em.solve_unit_functional(g[0])
        u = em.complete_basis([e, f], k)
        cols = [em.column(u, j) for j in range(k)]

        def w(a, b):
            return em.bilinear(a, g, b)

        rest = []
        for x in cols[2:]:
            wf, we = w(x, f), w(x, e)
            rest.append([xi - wf * ei + we * fi for xi, ei, fi in zip(x, e, f)])
        new = em.matmul(basis, em.from_columns([e, f] + rest))
        done.extend([em.column(new, 0), em.column(new, 1)])
        basis = [row[2:] for row in new]
    p = em.from_columns(done)
    if n and em.congruent_transform(omega, p) != em.block_diag(*[[[0, 1], [-1, 0]]] * (n // 2)):
        raise VerificationError("symplectic reduction failed")
    return p


def arf(r: KnotRecord) -> int:
    """Σ q(a_i)·q(b_i) mod 2 over a symplectic basis, q(v) = vᵀ V v."""
    validate(r)
    v = r.v
    if not v:
        return 0
    p = symplectic_basis(em.sub(v, em.transpose(v)))
    total = 0
    for i in range(0, len(v), 2):
        a, b = em.column(p, i), em.column(p, i + 1)
        total += em.bilinear(a, v, a) * em.bilinear(b, v, b)
    return total % 2


# ---------------------------------------------------------------------------
# file format


def parse_knots(text: str) -> list[KnotRecord]:
    records = []
    lines = text.splitlines()
    i = 0
    name = source = None

    def content(k):
        return _COMMENT.sub("", lines[k]).strip()

    while i < len(lines):
        line = content(i)
        lineno = i + 1
        i += 1
        if not line:
            continue
        word, _, rest = line.partition(" ")
        rest = rest.strip()
        if word == "knot":
            if name is not None:
                raise InputError(f"line {lineno}: knot {name!r} has no seifert block")
            if not rest:
                raise InputError(f"line {lineno}: knot needs a name")
            name, source = rest, ""
        elif word == "source":
            if name is None:
                raise InputError(f"line {lineno}: source outside a knot record")
            source = rest
        elif word == "seifert":
            if name is None:
                raise InputError(f"line {lineno}: seifert outside a knot record")
            try:
                n = int(rest)
            except ValueError:
                raise InputError(f"line {lineno}: bad matrix size {rest!r}") from None
            if n < 0:
                raise InputError(f"line {lineno}: negative matrix size")
            if n % 2:
                raise InputError(f"line {lineno}: Seifert matrix size {n} is odd")
            rows = []
            while len(rows) < n:
                if i >= len(lines):
                    raise InputError(f"line {i}: file ended inside the matrix of {name!r}")
                row_text = content(i)
                i += 1
                if not row_text:
                    continue
                try:
                    row = [int(x) for x in row_text.split()]
                except ValueError:
                    raise InputError(f"line {i}: non-integer matrix entry") from None
                if len(row) != n:
                    raise InputError(f"line {i}: expected {n} entries, got {len(row)}")
                rows.append(row)
            rec = KnotRecord.make(name, rows, source or "")
            try:
                validate(rec)
            except InputError as err:
                raise InputError(f"line {lineno}: {err}") from None
            records.append(rec)
            name = source = None
        else:
            raise InputError(f"line {lineno}: unexpected {word!r}")
    if name is not None:
        raise InputError(f"knot {name!r} has no seifert block")
    return records


def format_knots(records) -> str:
    out = []
    for r in records:
        out.append(f"knot {r.name}")
        if r.source:
            out.append(f"source {r.source}")
        out.append(f"seifert {r.size}")
        for row in r.seifert:
            out.append(" ".join(str(x) for x in row))
    return "\n".join(out) + "\n"


def read_knot_file(path) -> list[KnotRecord]:
    with open(path, encoding="utf-8") as fh:
        return parse_knots(fh.read())


# ---------------------------------------------------------------------------
# small built-in examples (Seifert matrices computed by hand)

TREFOIL = KnotRecord.make("3_1", [[-1, 1], [0, -1]], "standard genus one surface")
FIGURE_EIGHT = KnotRecord.make("4_1", [[1, 1], [0, -1]], "standard genus one surface")
UNKNOT = KnotRecord.make("0_1", [], "empty surface")
GRANNY = KnotRecord.make("3_1#3_1", em.block_diag(TREFOIL.v, TREFOIL.v), "block sum")
CINQUEFOIL = KnotRecord.make(
    "5_1", [[-1, 1, 0, 0], [0, -1, 1, 0], [0, 0, -1, 1], [0, 0, 0, -1]], "torus knot T(2,5)")


def connected_sum(a: KnotRecord, b: KnotRecord, name: str | None = None) -> KnotRecord:
    return KnotRecord.make(name or f"{a.name}#{b.name}", em.block_diag(a.v, b.v),
                           "block sum")


BUILTIN = {r.name: r for r in (UNKNOT, TREFOIL, FIGURE_EIGHT, GRANNY, CINQUEFOIL)}
