import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from zslice import exactmat as em
from zslice import knotio
from zslice.errors import InputError


def random_seifert(seed, g):
    """V = U + M with U - Uᵀ the standard symplectic form and M symmetric, then scrambled."""
    rng = random.Random(seed)
    n = 2 * g
    v = [[0] * n for _ in range(n)]
    for i in range(0, n, 2):
        v[i][i + 1] = 1
    for i in range(n):
        for j in range(i, n):
            c = rng.randint(-2, 2)
            v[i][j] += c
            if i != j:
                v[j][i] += c
    p = em.identity(n)
    for _ in range(6):
        i, j = rng.sample(range(n), 2)
        c = rng.choice((1, -1))
        for k in range(n):
            p[k][i] += c * p[k][j]
    return knotio.KnotRecord.make(f"random{seed}", em.congruent_transform(v, p))


seifert_records = st.tuples(st.integers(0, 10 ** 6), st.integers(1, 3)).map(
    lambda args: random_seifert(*args))


def float_signature(r, turn):
    """Signature from a double precision Hermitian eigensolver (test oracle only)."""
    w = mpmath.exp(2j * mpmath.pi * turn.numerator / turn.denominator)
    n = r.size
    v = r.v
    m = mpmath.matrix(n, n)
    for i in range(n):
        for j in range(n):
            m[i, j] = (1 - w) * v[i][j] + (1 - mpmath.conj(w)) * v[j][i]
    ev = mpmath.eighe(m, eigvals_only=True)
    if min(abs(x) for x in ev) < 1e-6:
        return None
    return sum(1 if x > 0 else -1 for x in ev)


def test_examples():
    tre, fig8, unk = knotio.TREFOIL, knotio.FIGURE_EIGHT, knotio.UNKNOT
    assert knotio.knot_determinant(tre) == 3
    assert knotio.knot_determinant(fig8) == 5
    assert knotio.knot_determinant(unk) == 1
    assert knotio.lt_signature(tre, Fraction(1, 2)) == -2
    assert knotio.lt_signature(fig8, Fraction(1, 2)) == 0
    assert knotio.lt_signature(unk, Fraction(1, 3)) == 0
    assert [knotio.arf(r) for r in (unk, tre, fig8)] == [0, 1, 1]
    assert knotio.min_generators_double_cover(tre) == 1
    assert knotio.min_generators_double_cover(unk) == 0
    assert knotio.min_generators_double_cover(knotio.GRANNY) == 2


def test_torus_knot_signature_function():
    # roots of Δ(T(2,5)) sit at 1/10 and 3/10 of a turn
    c = knotio.CINQUEFOIL
    assert knotio.lt_signature(c, Fraction(1, 16)) == 0
    assert knotio.lt_signature(c, Fraction(1, 8)) == -2
    assert knotio.lt_signature(c, Fraction(3, 8)) == -4
    with pytest.raises(InputError, match="root"):
        knotio.lt_signature(c, Fraction(1, 10))


def test_validate():
    with pytest.raises(InputError):
        knotio.validate(knotio.KnotRecord.make("odd", [[1]]))
    with pytest.raises(InputError):
        knotio.validate(knotio.KnotRecord.make("zero", [[0, 0], [0, 0]]))
    knotio.validate(knotio.TREFOIL)
    knotio.validate(knotio.UNKNOT)


@given(seifert_records)
@settings(max_examples=40, deadline=None)
def test_arf_matches_levine(r):
    d = knotio.knot_determinant(r)
    assert knotio.arf(r) == (0 if d % 8 in (1, 7) else 1)


@given(seifert_records)
@settings(max_examples=40, deadline=None)
def test_determinant_is_alexander_at_minus_one(r):
    assert knotio.knot_determinant(r) == abs(r.alexander().eval_at_pm1(-1))


@given(seifert_records, st.sampled_from(knotio.sample_turns(4)))
@settings(max_examples=40, deadline=None)
def test_lt_signature_matches_float_oracle(r, turn):
    try:
        exact = knotio.lt_signature(r, turn)
    except InputError:
        return  # Alexander root
    want = float_signature(r, turn)
    if want is not None:
        assert exact == want
    assert abs(exact) <= r.size


@given(seifert_records)
@settings(max_examples=20, deadline=None)
def test_signature_at_minus_one_is_exact(r):
    assert knotio.lt_signature(r, Fraction(1, 2)) == em.signature(r.symmetrized())


def test_sample_turns():
    turns = knotio.sample_turns(3)
    assert turns == [Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(3, 8)]
    assert len(knotio.sample_turns(6)) == 1 + 1 + 2 + 4 + 8 + 16


TWO_RECORDS = """\
# two knots
knot 3_1
source hand
seifert 2
-1 1
 0 -1

knot 3_1#3_1   # the granny knot
seifert 4
-1 1 0 0
0 -1 0 0
0 0 -1 1
0 0 0 -1
"""


def test_parse_two_records():
    recs = knotio.parse_knots(TWO_RECORDS)
    assert [r.name for r in recs] == ["3_1", "3_1#3_1"]
    assert recs[0].source == "hand"
    assert recs[1] == knotio.GRANNY.__class__.make("3_1#3_1", knotio.GRANNY.v, "")


def test_format_parse_round_trip():
    recs = list(knotio.BUILTIN.values())
    text = knotio.format_knots(recs)
    assert knotio.parse_knots(text) == recs
    assert knotio.format_knots(knotio.parse_knots(text)) == text


@pytest.mark.parametrize("text, line", [
    ("knot a\nseifert 3\n1 0 0\n0 1 0\n0 0 1\n", 2),
    ("knot a\nseifert 2\n1 0\n0\n", 4),
    ("knot a\nseifert 2\n1 x\n0 1\n", 3),
    ("seifert 2\n", 1),
    ("knot a\nseifert 2\n0 0\n0 0\n", 2),
    ("bogus\n", 1),
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(InputError, match=f"line {line}"):
        knotio.parse_knots(text)
