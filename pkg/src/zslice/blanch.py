"""Hermitian presentation matrices over Λ = Z[t, t^-1].

The main entry point is :func:`normalize_blanchfield`. It takes a Hermitian
A(t) whose value at t = 1 is unimodular and indefinite, and returns a
transformation T over Λ0 (Λ with (1 - t) inverted) such that

    B = conj(T)^T · A · T

lies in Λ, det T is a unit ±t^k of Λ, and B(1) is diagonal with ±1 entries.
Every certificate is re-verified symbolically before it is returned.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from . import exactmat as em
from . import laurent as lp
from .errors import BudgetExceeded, InputError, VerificationError
from .laurent import Lambda0Scalar, LaurentPoly

HYPERBOLIC = [[0, 1], [1, 0]]
MAX_SIZE = 8
DEFAULT_SHELL_BUDGET = 200_000
DEFAULT_RANDOM_TRIES = 20_000
WIDENINGS = 3


@dataclass
class NormalizationCertificate:
    b: list  # Hermitian matrix over Λ
    t: list  # matrix of Lambda0Scalar
    det_t: LaurentPoly

    def b_at_one(self) -> em.Matrix:
        return lp.evaluate(self.b, 1)


def parity(s) -> str:
    if not em.is_symmetric(s):
        raise InputError("parity needs a symmetric matrix")
    return "even" if all(s[i][i] % 2 == 0 for i in range(len(s))) else "odd"


def _check_unimodular_indefinite(s, what="matrix"):
    if not em.is_symmetric(s):
        raise InputError(f"{what} is not symmetric")
    if len(s) > MAX_SIZE:
        raise InputError(f"{what} has size {len(s)} > {MAX_SIZE}")
    det = em.determinant(s)
    if det not in (1, -1):
        raise InputError(f"{what} is not unimodular (det = {det})")
    pos, neg, _ = em.inertia(s)
    if pos == 0 or neg == 0:
        raise InputError(f"{what} is definite")
    return pos, neg


# ---------------------------------------------------------------------------
# vector searches


def _l1_shell(n: int, r: int):
    """Integer vectors of L1 norm r whose first non-zero entry is positive."""

    def rec(i, left, started):
        if i == n:
            if left == 0:
                yield ()
            return
        for c in range(-left, left + 1):
            if not started and c < 0:
                continue
            for rest in rec(i + 1, left - abs(c), started or c != 0):
                yield (c,) + rest

    return rec(0, r, False)


def _search(s, accept, budget: int = DEFAULT_SHELL_BUDGET, seed: int = 0,
            random_tries: int = DEFAULT_RANDOM_TRIES):
    """First vector accepted by ``accept`` in L1 shells, then random boxes.

    The box of the random phase starts at 20 and is widened (doubled) up to
    three times. Raises BudgetExceeded when every phase fails.
    """
    n = len(s)
    seen = 0
    r = 1
    while seen < budget:
        for v in _l1_shell(n, r):
            seen += 1
            if accept(list(v)):
                return list(v)
            if seen >= budget:
                break
        r += 1
    rng = random.Random(seed)
    box = 20
    for _ in range(WIDENINGS + 1):
        for _ in range(random_tries):
            v = [rng.randint(-box, box) for _ in range(n)]
            if any(v) and accept(v):
                return v
        box *= 2
    raise BudgetExceeded("vector search exhausted its budget")


def _primitive(v):
    g = 0
    for x in v:
        g = math.gcd(g, x)
    return [x // g for x in v] if g > 1 else list(v)


def _isotropic_from_pair(s, x, y):
    """Primitive isotropic vector in span(x, y) if the binary form splits over Q."""
    qx = em.bilinear(x, s, x)
    qy = em.bilinear(y, s, y)
    b = em.bilinear(x, s, y)
    if qx == 0 and any(x):
        return _primitive(x)
    if qy == 0 and any(y):
        return _primitive(y)
    disc = b * b - qx * qy
    if disc < 0:
        return None
    root = math.isqrt(disc)
    if root * root != disc:
        return None
    # Q(qy·x + mu·y) = qy·(mu^2 + 2·b·mu + qx·qy), with roots mu = -b ± root
    mu = -b + root
    v = [qy * xi + mu * yi for xi, yi in zip(x, y)]
    if not any(v):
        mu = -b - root
        v = [qy * xi + mu * yi for xi, yi in zip(x, y)]
    if not any(v):
        return None
    v = _primitive(v)
    return v if em.bilinear(v, s, v) == 0 else None


def find_isotropic(s, budget: int = DEFAULT_SHELL_BUDGET, seed: int = 0):
    """A primitive v != 0 with vᵀ s v = 0."""
    n = len(s)
    try:
        return _search(s, lambda v: em.bilinear(v, s, v) == 0 and math.gcd(*v) == 1,
                       budget=min(budget, 20_000), seed=seed, random_tries=0)
    except BudgetExceeded:
        pass
    rng = random.Random(seed)
    box = 3
    for _ in range(WIDENINGS + 1):
        for _ in range(DEFAULT_RANDOM_TRIES):
            x = [rng.randint(-box, box) for _ in range(n)]
            y = [rng.randint(-box, box) for _ in range(n)]
            v = _isotropic_from_pair(s, x, y)
            if v is not None:
                return v
        box *= 2
    raise BudgetExceeded("no isotropic vector found")


# ---------------------------------------------------------------------------
# integer base changes


def _project_out(s, basis_cols, k):
    """Make columns k.. of basis orthogonal to the unimodular block spanned by columns < k.

    The Gram of the first k columns must be unimodular with integral inverse.
    """
    first = basis_cols[:k]
    g = [[em.bilinear(a, s, b) for b in first] for a in first]
    g_inv = em.scale(em.determinant(g), em.adjugate(g))  # det is ±1
    out = [list(c) for c in first]
    for x in basis_cols[k:]:
        pairs = [em.bilinear(a, s, x) for a in first]
        coef = em.matvec(g_inv, pairs)
        out.append([xi - sum(c * a[i] for c, a in zip(coef, first)) for i, xi in enumerate(x)])
    return out


def split_hyperbolic(s, seed: int = 0) -> em.Matrix:
    """Unimodular u with uᵀ s u = H ⊕ R for an even unimodular indefinite s."""
    _check_unimodular_indefinite(s, "A(1)")
    if parity(s) != "even":
        raise InputError("split_hyperbolic needs an even form")
    n = len(s)
    if [row[:2] for row in s[:2]] == HYPERBOLIC and all(
            s[i][j] == 0 for i in range(2) for j in range(2, n)):
        return em.identity(n)
    v = find_isotropic(s, seed=seed)
    w = em.solve_unit_functional(em.matvec(s, v))
    # f = w - (wᵀsw/2)·v is isotropic with vᵀ s f = 1 (s is even)
    half = em.bilinear(w, s, w) // 2
    f = [wi - half * vi for wi, vi in zip(w, v)]
    u = em.complete_basis([v, f], n)
    cols = _project_out(s, [em.column(u, j) for j in range(n)], 2)
    u = em.from_columns(cols)
    if abs(em.determinant(u)) != 1:
        raise VerificationError("hyperbolic split is not unimodular")
    t = em.congruent_transform(s, u)
    if [row[:2] for row in t[:2]] != HYPERBOLIC or any(t[i][j] for i in range(2) for j in range(2, n)):
        raise VerificationError("hyperbolic split failed")
    return u


def _is_characteristic(s, v) -> bool:
    sv = em.matvec(s, v)
    return all((sv[i] - s[i][i]) % 2 == 0 for i in range(len(s)))


def diagonalize_odd_indefinite(s, seed: int = 0) -> em.Matrix:
    """Unimodular u with uᵀ s u = diag(±1, ..., ±1) for an odd unimodular indefinite s.

    Splits off unit vectors one at a time. The sign of each split vector is
    chosen so the remainder stays indefinite, and characteristic vectors are
    skipped so the remainder stays odd.
    """
    _check_unimodular_indefinite(s, "A(1)")
    if parity(s) != "odd":
        raise InputError("diagonalize_odd_indefinite needs an odd form")
    n = len(s)
    if all(s[i][j] == 0 for i in range(n) for j in range(n) if i != j):
        return em.identity(n)
    sig = em.signature(s)
    done: list[list[int]] = []          # split vectors, in original coordinates
    basis = em.identity(n)               # columns span the remainder
    while True:
        k = len(basis[0]) if basis else 0
        if k == 0:
            break
        g = em.congruent_transform(s, basis)
        if k == 1:
            done.append(em.column(basis, 0))
            break
        pos, neg, _ = em.inertia(g)
        eps = 1 if pos >= 2 or neg < 2 else -1

        def accept(v, g=g, eps=eps, k=k):
            if em.bilinear(v, g, v) != eps:
                return False
            return k == 2 or not _is_characteristic(g, v)

        v = _search(g, accept, seed=seed)
        u = em.complete_basis([v], k)
        cols = _project_out(g, [em.column(u, j) for j in range(k)], 1)
        new = em.matmul(basis, em.from_columns(cols))
        done.append(em.column(new, 0))
        basis = [row[1:] for row in new]
    u = em.from_columns(done)
    d = em.congruent_transform(s, u)
    if abs(em.determinant(u)) != 1:
        raise VerificationError("diagonalizing base change is not unimodular")
    if any(d[i][j] for i in range(n) for j in range(n) if i != j) or any(
            abs(d[i][i]) != 1 for i in range(n)):
        raise VerificationError("diagonalization failed")
    if em.signature(d) != sig:
        raise VerificationError("signature changed")
    return u


# ---------------------------------------------------------------------------
# Λ0 steps

X = lp.ONE_MINUS_T * lp.ONE_MINUS_T.involute()  # (1 - t)(1 - t^-1)


def _identity0(n):
    return [[Lambda0Scalar(int(i == j)) for j in range(n)] for i in range(n)]


def _const0(u):
    return [[Lambda0Scalar(x) for x in row] for row in u]


def _det_unit(t) -> LaurentPoly:
    d = lp.lambda0_det(t)
    if not d.in_lambda() or not d.num.is_unit():
        raise VerificationError(f"transformation determinant {d!r} is not a unit")
    return d.num


def hyperbolic_coefficients(a):
    """(b11, b12, b22) of the top-left block x·b11, 1 + (1-t)·b12, x·b22."""
    b11 = a[0][0].exact_div(X)
    b12 = (a[0][1] - 1).exact_div(lp.ONE_MINUS_T)
    b22 = a[1][1].exact_div(X)
    return b11, b12, b22


def even_to_odd(a) -> NormalizationCertificate:
    """Λ0 base change making A(1) odd, for A(1) = H ⊕ R.

    If b11(1) is even, T = I + E12/(1 - t^-1) (determinant 1).
    If b11(1) is odd, T = diag(1/(1 - t), 1 - t^-1, 1, ...) (determinant -t^-1).
    """
    n = len(a)
    if not lp.is_hermitian(a):
        raise InputError("matrix is not Hermitian")
    s = lp.evaluate(a, 1)
    if parity(s) == "odd":
        return NormalizationCertificate([list(r) for r in a], _identity0(n), lp.ONE)
    if n < 2 or [row[:2] for row in s[:2]] != HYPERBOLIC or any(
            s[i][j] for i in range(2) for j in range(2, n)):
        raise InputError("even_to_odd needs A(1) = H ⊕ R")
    b11, _, _ = hyperbolic_coefficients(a)
    t = _identity0(n)
    if b11.eval_at_pm1(1) % 2 == 0:
        t[0][1] = lp.INV_ONE_MINUS_T.involute()
    else:
        t[0][0] = lp.INV_ONE_MINUS_T
        t[1][1] = Lambda0Scalar(lp.ONE_MINUS_T.involute())
    det_t = _det_unit(t)
    c = lp.to_lambda_matrix(lp.lambda0_congruence(a, t))
    if parity(lp.evaluate(c, 1)) != "odd":
        raise VerificationError("even_to_odd did not produce an odd form")
    return NormalizationCertificate(c, t, det_t)


def verify_certificate(a, cert: NormalizationCertificate):
    """Re-check every certificate invariant exactly; raises VerificationError."""
    b = lp.to_lambda_matrix(lp.lambda0_congruence(a, cert.t))
    if b != cert.b:
        raise VerificationError("B differs from conj(T)ᵀ·A·T")
    if not lp.is_hermitian(b):
        raise VerificationError("B is not Hermitian")
    if _det_unit(cert.t) != cert.det_t:
        raise VerificationError("recorded det T is wrong")
    b1 = lp.evaluate(b, 1)
    n = len(b1)
    if any(b1[i][j] for i in range(n) for j in range(n) if i != j) or any(
            abs(b1[i][i]) != 1 for i in range(n)):
        raise VerificationError("B(1) is not diagonal with ±1 entries")
    if em.signature(b1) != em.signature(lp.evaluate(a, 1)):
        raise VerificationError("signature not preserved")


def normalize_blanchfield(a, seed: int = 0) -> NormalizationCertificate:
    """Full normalization for Hermitian A(t) with A(1) unimodular and indefinite."""
    if not a:
        raise InputError("empty matrix")
    if not lp.is_hermitian(a):
        raise InputError("matrix is not Hermitian")
    n = len(a)
    s = lp.evaluate(a, 1)
    _check_unimodular_indefinite(s, "A(1)")
    t = _identity0(n)
    current = [list(r) for r in a]
    if parity(s) == "even":
        u1 = split_hyperbolic(s, seed=seed)
        t = lp.mat_mul(t, _const0(u1))
        current = lp.to_lambda_matrix(lp.lambda0_congruence(a, t))
        step = even_to_odd(current)
        t = lp.mat_mul(t, step.t)
        current = step.b
    u = diagonalize_odd_indefinite(lp.evaluate(current, 1), seed=seed)
    t = lp.mat_mul(t, _const0(u))
    b = lp.to_lambda_matrix(lp.lambda0_congruence(a, t))
    cert = NormalizationCertificate(b, t, _det_unit(t))
    verify_certificate(a, cert)
    return cert


# ---------------------------------------------------------------------------
# reports and combinators


def _diagonalize_definite(s, seed: int = 0):
    """Orthonormal (±) basis of a definite unimodular form, or BudgetExceeded."""
    n = len(s)
    eps = 1 if s[0][0] > 0 else -1
    basis = em.identity(n)
    done = []
    while basis and basis[0]:
        g = em.congruent_transform(s, basis)
        k = len(g)
        v = _search(g, lambda v: em.bilinear(v, g, v) == eps, budget=50_000, seed=seed,
                    random_tries=0)
        u = em.complete_basis([v], k)
        cols = _project_out(g, [em.column(u, j) for j in range(k)], 1)
        new = em.matmul(basis, em.from_columns(cols))
        done.append(em.column(new, 0))
        basis = [row[1:] for row in new]
    return em.from_columns(done)


def signed_unknotting_report(a, seed: int = 0) -> tuple[int, int]:
    """(p, n): positive and negative diagonal entries of the diagonalized A(1).

    A knot whose Blanchfield pairing A presents can be turned into an
    Alexander-polynomial-1 knot by p positive and n negative crossing changes.
    """
    if not lp.is_hermitian(a):
        raise InputError("matrix is not Hermitian")
    s = lp.evaluate(a, 1)
    if not s:
        return 0, 0
    if em.determinant(s) not in (1, -1):
        raise InputError("A(1) is not unimodular")
    pos, neg, _ = em.inertia(s)
    if pos and neg:
        d = normalize_blanchfield(a, seed=seed).b_at_one()
    else:
        try:
            u = _diagonalize_definite(s, seed=seed)
        except BudgetExceeded:
            raise InputError("A(1) is definite and not diagonalizable over Z") from None
        d = em.congruent_transform(s, u)
    return (sum(1 for i in range(len(d)) if d[i][i] > 0),
            sum(1 for i in range(len(d)) if d[i][i] < 0))


def satellite_sum(a_k, a_p, w: int):
    """A_K(t) ⊕ A_P(t^w)."""
    for m in (a_k, a_p):
        if m and not lp.is_hermitian(m):
            raise InputError("satellite_sum needs Hermitian inputs")
    return lp.block_sum(a_k, lp.substitute_matrix(a_p, w))


# ---------------------------------------------------------------------------
# random test inputs


def _random_poly(rng: random.Random, span: int = 1, coef: int = 2) -> LaurentPoly:
    return LaurentPoly({e: rng.randint(-coef, coef) for e in range(-span, span + 1)})


def _random_unimodular(rng: random.Random, n: int, moves: int) -> em.Matrix:
    u = em.identity(n)
    for _ in range(moves):
        i, j = rng.sample(range(n), 2)
        c = rng.choice((-1, 1))
        for row in u:
            row[i] += c * row[j]
    if rng.random() < 0.5:
        perm = list(range(n))
        rng.shuffle(perm)
        u = [[row[p] for p in perm] for row in u]
    return u


def random_hermitian(rng: random.Random, n: int, even: bool | None = None):
    """Hermitian A(t) of size n with A(1) unimodular and indefinite.

    A = conj(T)ᵀ·D·T + x·P where D is a constant sum of ±1 and hyperbolic
    blocks, T(1) is unimodular, x = (1 - t)(1 - t^-1) and P is Hermitian.
    ``even`` forces an even A(1) (n must then be even).
    """
    if n < 2:
        raise InputError("indefinite forms need size >= 2")
    if even is None:
        even = n % 2 == 0 and rng.random() < 0.4
    if even:
        if n % 2:
            raise InputError("even unimodular forms here have even size")
        d = em.block_diag(*[HYPERBOLIC] * (n // 2))
    else:
        signs = [rng.choice((1, -1)) for _ in range(n)]
        signs[0], signs[1] = 1, -1
        h = rng.randint(0, (n - 2) // 2)
        d = em.block_diag(*([[[e]] for e in signs[: n - 2 * h]] + [HYPERBOLIC] * h))
    u0 = _random_unimodular(rng, n, moves=rng.randint(0, 2 * n))
    t = [[LaurentPoly.const(u0[i][j]) + lp.ONE_MINUS_T * _random_poly(rng, 1, 1)
          if rng.random() < 0.5 else LaurentPoly.const(u0[i][j])
          for j in range(n)] for i in range(n)]
    dm = lp.constant_matrix(d)
    a = lp.mat_mul(lp.mat_mul(lp.conj_transpose(t), dm), t)
    p = [[lp.ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            if rng.random() < 0.4:
                x = _random_poly(rng, 1, 2)
                if i == j:
                    x = x + x.involute()
                p[i][j] = x
                p[j][i] = x.involute()
    a = lp.mat_add(a, [[X * p[i][j] for j in range(n)] for i in range(n)])
    return a

