"""Integer Laurent polynomials, the localization at (1 - t), and matrices over them.

``LaurentPoly`` is the ring Z[t, t^-1] with the involution t -> t^-1.
``Lambda0Scalar`` is ``num / (1 - t)^k``, which covers every scalar
needed to invert (t - 1). Hermitian matrices are plain nested lists of
``LaurentPoly``.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping, Sequence

from .errors import InputError
from . import exactmat as em


class LaurentPoly:
    """Immutable element of Z[t, t^-1], stored as exponent -> nonzero coefficient."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, int] = {}
        for e, c in items:
            acc[e] = acc.get(e, 0) + c
        self._terms = tuple(sorted((e, c) for e, c in acc.items() if c))
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, c: int) -> LaurentPoly:
        return cls({0: c})

    @classmethod
    def monomial(cls, e: int, c: int = 1) -> LaurentPoly:
        return cls({e: c})

    @classmethod
    def coerce(cls, x) -> LaurentPoly:
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, int):
            return cls.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPoly")

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def coeff(self, e: int) -> int:
        return dict(self._terms).get(e, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def min_exp(self) -> int:
        return self._terms[0][0]

    def max_exp(self) -> int:
        return self._terms[-1][0]

    def span(self) -> int:
        """max exponent minus min exponent (the degree of a symmetric polynomial
        counted as in deg(t - 1 + t^-1) = 2)."""
        return self.max_exp() - self.min_exp() if self._terms else 0

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_unit(self) -> bool:
        """True for ±t^k, the units of Z[t, t^-1]."""
        return len(self._terms) == 1 and self._terms[0][1] in (1, -1)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and self._terms[0][0] == 0)

    def constant_value(self) -> int:
        if not self.is_constant():
            raise InputError(f"{self} is not constant")
        return self.coeff(0)

    # -- ring operations --------------------------------------------------
    def __add__(self, other):
        other = LaurentPoly.coerce(other)
        return LaurentPoly(self._terms + other._terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly((e, -c) for e, c in self._terms)

    def __sub__(self, other):
        return self + (-LaurentPoly.coerce(other))

    def __rsub__(self, other):
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other):
        other = LaurentPoly.coerce(other)
        acc: dict[int, int] = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_monomial():
                raise InputError("negative power of a non-monomial")
            (e, c), = self._terms
            if c not in (1, -1):
                raise InputError("negative power of a non-unit")
            return LaurentPoly({e * n: c ** (-n)})
        out = LaurentPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by t^k."""
        return LaurentPoly((e + k, c) for e, c in self._terms)

    def involute(self) -> LaurentPoly:
        return LaurentPoly((-e, c) for e, c in self._terms)

    conj = involute

    def is_symmetric(self) -> bool:
        return self == self.involute()

    def substitute_power(self, w: int) -> LaurentPoly:
        """p(t) -> p(t^w)."""
        return LaurentPoly((w * e, c) for e, c in self._terms)

    def __call__(self, x):
        """Evaluate; ``x`` may be any number supporting integer powers."""
        if isinstance(x, int) and x not in (1, -1) and self._terms and self.min_exp() < 0:
            from fractions import Fraction
            x = Fraction(x)
        return sum((c * x ** e for e, c in self._terms), 0 * x)

    def eval_at_pm1(self, sign: int) -> int:
        if sign not in (1, -1):
            raise InputError("sign must be +1 or -1")
        return sum(c * (sign ** (e % 2)) for e, c in self._terms)

    def exact_div(self, other, strict: bool = True) -> LaurentPoly | None:
        """Quotient in Z[t, t^-1]; raises (or returns None) when not exact."""
        other = LaurentPoly.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero Laurent polynomial")
        if self.is_zero():
            return LaurentPoly()
        shift = self.min_exp() - other.min_exp()
        num = {e - self.min_exp(): c for e, c in self._terms}
        den = {e - other.min_exp(): c for e, c in other._terms}
        dn = max(den)
        lead = den[dn]
        quot: dict[int, int] = {}
        while num:
            top = max(num)
            if top < dn:
                break
            c = num[top]
            if c % lead:
                break
            qc = c // lead
            qe = top - dn
            quot[qe] = qc
            for e, d in den.items():
                v = num.get(e + qe, 0) - qc * d
                if v:
                    num[e + qe] = v
                else:
                    num.pop(e + qe, None)
        if num:
            if strict:
                raise InputError(f"{other} does not divide {self}")
            return None
        return LaurentPoly((e + shift, c) for e, c in quot.items())

    def divides(self, other: LaurentPoly) -> bool:
        return LaurentPoly.coerce(other).exact_div(self, strict=False) is not None

    # -- text ---------------------------------------------------------------
    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"LaurentPoly('{format_poly(self)}')"


T = LaurentPoly.monomial(1)
ONE = LaurentPoly.const(1)
ZERO = LaurentPoly()
ONE_MINUS_T = ONE - T


def involute(p: LaurentPoly) -> LaurentPoly:
    return p.involute()


def eval_at_pm1(p: LaurentPoly, sign: int) -> int:
    return p.eval_at_pm1(sign)


def substitute_power(p: LaurentPoly, w: int) -> LaurentPoly:
    return p.substitute_power(w)


# ---------------------------------------------------------------------------
# polynomial text format

_TERM = re.compile(
    r"""(?P<sign>[+-]?)
        (?:
          (?P<coef>\d+)\s*(?:\*?\s*(?P<t1>t)(?:\s*\^\s*(?P<e1>[+-]?\d+))?)?
        | (?P<t2>t)(?:\s*\^\s*(?P<e2>[+-]?\d+))?
        )""",
    re.VERBOSE,
)


def parse_poly(text: str) -> LaurentPoly:
    """Parse e.g. ``t^-1 - 1 + t`` or ``3+6*t``; whitespace is ignored."""
    s = re.sub(r"\s+", "", text)
    if not s:
        raise InputError("empty polynomial")
    pos = 0
    acc: dict[int, int] = {}
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (not first and not m.group("sign")):
            raise InputError(f"cannot parse polynomial {text!r} at offset {pos}")
        sign = -1 if m.group("sign") == "-" else 1
        if m.group("coef") is not None:
            c = int(m.group("coef"))
            if m.group("t1"):
                e = int(m.group("e1")) if m.group("e1") else 1
            else:
                e = 0
        else:
            c = 1
            e = int(m.group("e2")) if m.group("e2") else 1
        acc[e] = acc.get(e, 0) + sign * c
        pos = m.end()
        first = False
    return LaurentPoly(acc)


def format_poly(p: LaurentPoly) -> str:
    """Canonical text: ascending exponents, e.g. ``t^-1 - 1 + t``."""
    if p.is_zero():
        return "0"
    parts = []
    for i, (e, c) in enumerate(p._terms):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if e == 0:
            body = str(a)
        else:
            mono = "t" if e == 1 else f"t^{e}"
            body = mono if a == 1 else f"{a}*{mono}"
        if i == 0:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# localization at (1 - t)


class Lambda0Scalar:
    """``num / (1 - t)^k`` in canonical form: (1 - t) does not divide num when k > 0."""

    __slots__ = ("num", "k")

    def __init__(self, num, k: int = 0):
        num = LaurentPoly.coerce(num)
        if k < 0:
            num = num * ONE_MINUS_T ** (-k)
            k = 0
        while k > 0 and (num.is_zero() or num.eval_at_pm1(1) == 0):
            if num.is_zero():
                k = 0
                break
            num = num.exact_div(ONE_MINUS_T)
            k -= 1
        self.num = num
        self.k = k

    @classmethod
    def coerce(cls, x) -> Lambda0Scalar:
        if isinstance(x, Lambda0Scalar):
            return x
        return cls(LaurentPoly.coerce(x))

    def in_lambda(self) -> bool:
        return self.k == 0

    def to_poly(self) -> LaurentPoly:
        if self.k:
            raise InputError(f"{self} is not in Z[t, t^-1]")
        return self.num

    def __add__(self, other):
        other = Lambda0Scalar.coerce(other)
        k = max(self.k, other.k)
        num = self.num * ONE_MINUS_T ** (k - self.k) + other.num * ONE_MINUS_T ** (k - other.k)
        return Lambda0Scalar(num, k)

    __radd__ = __add__

    def __neg__(self):
        return Lambda0Scalar(-self.num, self.k)

    def __sub__(self, other):
        return self + (-Lambda0Scalar.coerce(other))

    def __rsub__(self, other):
        return Lambda0Scalar.coerce(other) - self

    def __mul__(self, other):
        other = Lambda0Scalar.coerce(other)
        return Lambda0Scalar(self.num * other.num, self.k + other.k)

    __rmul__ = __mul__

    def involute(self) -> Lambda0Scalar:
        # 1/(1 - t^-1) = -t/(1 - t)
        return Lambda0Scalar(self.num.involute() * LaurentPoly.monomial(self.k, (-1) ** self.k), self.k)

    conj = involute

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            other = Lambda0Scalar.coerce(other)
        if not isinstance(other, Lambda0Scalar):
            return NotImplemented
        return self.k == other.k and self.num == other.num

    def __hash__(self):
        return hash((self.num, self.k))

    def __repr__(self):
        if self.k == 0:
            return f"Lambda0Scalar({format_poly(self.num)})"
        return f"Lambda0Scalar(({format_poly(self.num)}) / (1 - t)^{self.k})"


INV_ONE_MINUS_T = Lambda0Scalar(ONE, 1)


# ---------------------------------------------------------------------------
# matrices over Λ and Λ0

PolyMatrix = list[list[LaurentPoly]]


def poly_matrix(rows: Sequence[Sequence]) -> PolyMatrix:
    return [[LaurentPoly.coerce(x) for x in row] for row in rows]


def constant_matrix(a) -> PolyMatrix:
    return [[LaurentPoly.const(x) for x in row] for row in a]


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_mul(a, b):
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    zero = a[0][0] * 0 if a[0] else 0
    out = []
    for row in a:
        out_row = []
        for j in range(cols):
            acc = zero
            for k in range(inner):
                acc = acc + row[k] * b[k][j]
            out_row.append(acc)
        out.append(out_row)
    return out


def conj_transpose(a):
    n = len(a)
    m = len(a[0]) if n else 0
    return [[a[i][j].involute() for i in range(n)] for j in range(m)]


def is_hermitian(a) -> bool:
    return a == conj_transpose(a)


def evaluate(a, sign: int) -> em.Matrix:
    """Entrywise evaluation at t = ±1 (an integer matrix)."""
    return [[x.eval_at_pm1(sign) for x in row] for row in a]


def substitute_matrix(a, w: int) -> PolyMatrix:
    return [[x.substitute_power(w) for x in row] for row in a]


def block_sum(a, b) -> PolyMatrix:
    n, m = len(a), len(b)
    out = [[ZERO] * (n + m) for _ in range(n + m)]
    for i in range(n):
        for j in range(n):
            out[i][j] = a[i][j]
    for i in range(m):
        for j in range(m):
            out[n + i][n + j] = b[i][j]
    return out


def poly_det(a) -> LaurentPoly:
    """Determinant over Z[t, t^-1] by Bareiss elimination with exact division."""
    n = len(a)
    if n == 0:
        return ONE
    if any(len(r) != n for r in a):
        raise InputError("determinant of a non-square matrix")
    m = [list(r) for r in a]
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return ZERO
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]).exact_div(prev)
            m[i][k] = ZERO
        prev = pivot
    return m[n - 1][n - 1] * sign


def is_unit_matrix(a) -> bool:
    """det is ±t^k."""
    return poly_det(a).is_unit()


def lambda0_matrix(a) -> list[list[Lambda0Scalar]]:
    return [[Lambda0Scalar.coerce(x) for x in row] for row in a]


def lambda0_det(t) -> Lambda0Scalar:
    """Determinant of a Λ0-matrix: clear denominators, Bareiss over Λ, divide back."""
    n = len(t)
    if n == 0:
        return Lambda0Scalar(ONE)
    kmax = max(x.k for row in t for x in row)
    cleared = [[x.num * ONE_MINUS_T ** (kmax - x.k) for x in row] for row in t]
    return Lambda0Scalar(poly_det(cleared), n * kmax)


def lambda0_congruence(a, t) -> list[list[Lambda0Scalar]]:
    """``conj(t)ᵀ · a · t`` computed in Λ0."""
    a0 = lambda0_matrix(a)
    t0 = lambda0_matrix(t)
    return mat_mul(mat_mul(conj_transpose(t0), a0), t0)


def to_lambda_matrix(b) -> PolyMatrix:
    """Demand every entry of a Λ0-matrix lies in Λ."""
    out = []
    for i, row in enumerate(b):
        r = []
        for j, x in enumerate(row):
            x = Lambda0Scalar.coerce(x)
            if not x.in_lambda():
                raise InputError(f"entry ({i},{j}) = {x!r} is not in Z[t, t^-1]")
            r.append(x.num)
        out.append(r)
    return out


# ---------------------------------------------------------------------------
# Alexander polynomial


def normalize_alexander(p: LaurentPoly) -> LaurentPoly:
    """Multiply by ±t^k so the result is symmetric with value 1 at t = 1."""
    if p.is_zero():
        raise InputError("Alexander polynomial is zero")
    total = p.min_exp() + p.max_exp()
    if total % 2:
        raise InputError(f"{p} has no symmetric representative")
    q = p.shift(-total // 2)
    if not q.is_symmetric():
        raise InputError(f"{p} has no symmetric representative")
    v = q.eval_at_pm1(1)
    if v not in (1, -1):
        raise InputError(f"{p} evaluates to {v} at t = 1, expected ±1")
    return q if v == 1 else -q


def alexander_from_seifert(v) -> LaurentPoly:
    """Normalized det(t·V - Vᵀ)."""
    n, cols = em.shape(v)
    if n != cols:
        raise InputError("Seifert matrix must be square")
    if n == 0:
        return ONE
    vt = em.transpose(v)
    m = [[T * v[i][j] - vt[i][j] for j in range(n)] for i in range(n)]
    raw = poly_det(m)
    at1 = raw.eval_at_pm1(1) if not raw.is_zero() else 0
    if at1 not in (1, -1):
        raise InputError(
            f"det(tV - V^T) = {raw} evaluates to {at1} at t = 1; not a knot Seifert matrix")
    return normalize_alexander(raw)


def format_matrix(a) -> str:
    """Λ-matrix text format: size line, then rows of ';'-separated entries."""
    lines = [str(len(a))]
    for row in a:
        lines.append("; ".join(format_poly(x) for x in row))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> PolyMatrix:
    """Inverse of :func:`format_matrix`; ``#`` starts a comment."""
    rows: list[list[LaurentPoly]] = []
    n = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            try:
                n = int(line)
            except ValueError:
                raise InputError(f"line {lineno}: expected matrix size, got {line!r}") from None
            if n < 0:
                raise InputError(f"line {lineno}: negative matrix size")
            continue
        if len(rows) == n:
            raise InputError(f"line {lineno}: extra row beyond declared size {n}")
        cells = [c for c in line.split(";")]
        if len(cells) != n:
            raise InputError(f"line {lineno}: expected {n} entries, found {len(cells)}")
        try:
            rows.append([parse_poly(c) for c in cells])
        except InputError as exc:
            raise InputError(f"line {lineno}: {exc}") from None
    if n is None:
        raise InputError("empty matrix file")
    if len(rows) != n:
        raise InputError(f"expected {n} rows, found {len(rows)}")
    return rows
