import itertools
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix

from zslice import exactmat as em
from zslice import finpair as fp
from zslice.errors import BudgetExceeded, InputError


def self_value_histogram(p):
    """Isometry invariant: how often each value b(x, x) occurs."""
    return Counter(p.value(x, x) for x in p.elements())


def unit(q):
    return st.integers(1, q - 1).filter(lambda a: Fraction(a, q).denominator == q)


cyclic_entries = st.sampled_from([3, 5, 7, 9, 15, 25, 27]).flatmap(
    lambda q: st.tuples(st.just(q), unit(q)))
two_entries = st.sampled_from([(3, 3), (3, 9), (5, 5), (3, 15), (9, 9), (3, 27)]).flatmap(
    lambda qs: st.tuples(st.tuples(st.just(qs[0]), unit(qs[0])),
                         st.tuples(st.just(qs[1]), unit(qs[1]))))


def test_worked_example_with_annihilator_93():
    a = fp.pairing_from_matrix([[12, 3], [3, 24]])
    b = fp.pairing_from_matrix([[3, 3], [3, 96]])
    assert a.q == b.q == (3, 93)
    assert a.exponent == 93
    assert fp.isometry_search(a, b) is not None
    dec = fp.decompose(a)
    assert dec.q == (3, 93)
    assert fp.is_isometric(dec.pairing(), a)


def test_pairing_values_match_rational_inverse():
    s = [[5, 2, 1], [2, 7, 3], [1, 3, 9]]
    p = fp.pairing_from_matrix(s)
    inv = Matrix(s).inv()
    for i, gi in enumerate(p.generators):
        for j, gj in enumerate(p.generators):
            v = (Matrix([gi]) * inv * Matrix(gj))[0]
            want = Fraction(int(v.p), int(v.q)) % 1
            assert p.value([int(i == k) for k in range(p.rank)],
                           [int(j == k) for k in range(p.rank)]) == want


def test_trefoil_pairings():
    lk, ell = fp.double_cover_pairing([[-1, 1], [0, -1]])
    assert str(fp.decompose(lk)) == "(1/3)"
    assert str(fp.decompose(ell)) == "(2/3)"
    with pytest.raises(InputError):
        fp.double_cover_pairing([[1, 0], [0, 1]])  # det(V + V^T) = 4 is even


def test_seven_examples():
    assert fp.isometry_search(fp.diagonal_pairing([(7, 1)]), fp.diagonal_pairing([(7, 3)])) is None
    assert fp.is_isometric(fp.diagonal_pairing([(7, 1)]), fp.diagonal_pairing([(7, 2)]))


def test_hyperbolic_decomposes():
    h = fp.FinitePairing.from_fractions((3, 3), [[0, Fraction(1, 3)], [Fraction(1, 3), 0]])
    dec = fp.decompose(h)
    assert dec.q == (3, 3)
    assert fp.is_isometric(dec.pairing(), h)


@given(two_entries, two_entries)
@settings(max_examples=60, deadline=None)
def test_isometry_search_agrees_with_histograms(e1, e2):
    p1, p2 = fp.diagonal_pairing(list(e1)), fp.diagonal_pairing(list(e2))
    found = fp.isometry_search(p1, p2)
    assert (found is not None) == (self_value_histogram(p1) == self_value_histogram(p2))


@given(two_entries)
@settings(max_examples=40, deadline=None)
def test_found_isometry_preserves_values(e):
    p1 = fp.diagonal_pairing(list(e))
    # scramble with a unimodular change of generators when the orders allow it
    dec = fp.decompose(p1)
    img = fp.isometry_search(p1, dec.pairing())
    assert img is not None
    for i, j in itertools.product(range(p1.rank), repeat=2):
        ei = [int(k == i) for k in range(p1.rank)]
        ej = [int(k == j) for k in range(p1.rank)]
        assert dec.pairing().value(img[i], img[j]) == p1.value(ei, ej)


@given(st.lists(st.integers(-6, 6), min_size=3, max_size=3))
@settings(max_examples=60, deadline=None)
def test_decompose_matrix_pairings(xs):
    a, b, c = xs
    s = [[2 * a + 1, b], [b, 2 * c + 3]]
    det = em.determinant(s)
    if det == 0 or det % 2 == 0 or abs(det) > 400:
        return
    p = fp.pairing_from_matrix(s)
    dec = fp.decompose(p)
    assert dec.q == p.q
    assert fp.is_isometric(dec.pairing(), p)
    assert p.order() == abs(det)


def test_negation_and_scaling():
    p = fp.diagonal_pairing([(5, 1)])
    assert p.negated() == fp.diagonal_pairing([(5, 4)])
    assert p.scaled(2) == fp.diagonal_pairing([(5, 2)])
    assert not fp.is_isometric(p, p.scaled(2))  # 2 is not a square mod 5


def test_validation():
    with pytest.raises(InputError):
        fp.FinitePairing((3, 5), ((0, 0), (0, 0)))  # not a divisor chain
    with pytest.raises(InputError):
        fp.FinitePairing((3,), ((1, 2),))
    assert fp.trivial_pairing().order() == 1
    assert not fp.FinitePairing((3,), ((0,),)).is_nondegenerate()


def test_budget():
    p = fp.diagonal_pairing([(27, 1), (27, 2)])
    with pytest.raises(BudgetExceeded):
        fp.isometry_search(p, fp.diagonal_pairing([(27, 1), (27, 1)]), budget=5)
