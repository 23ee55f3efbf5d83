import json

import pytest
from hypothesis import given, settings, strategies as st

from zslice import bounds, knotio
from zslice.errors import InputError

from test_knotio import random_seifert

seifert_records = st.tuples(st.integers(0, 10 ** 6), st.integers(1, 3)).map(
    lambda args: random_seifert(*args))


def test_examples():
    assert bounds.gz_lower(knotio.UNKNOT) == (0, ["ALEX1"])
    assert bounds.gz_lower(knotio.TREFOIL)[0] == 1
    assert bounds.gz_lower(knotio.TREFOIL)[1][0] == "LT_SIG"
    lo, tags = bounds.gz_lower(knotio.GRANNY)
    assert lo == 2 and tags[:2] == ["COR53_iv", "LT_SIG"]
    assert bounds.ua_lower(knotio.UNKNOT)[0] == 0
    assert bounds.ua_lower(knotio.TREFOIL)[0] == 1
    assert bounds.gz_upper_search(knotio.UNKNOT) == (0, None)
    assert bounds.gz_upper_search(knotio.TREFOIL, budget=100) == (1, None)
    assert bounds.gz_upper_search(knotio.GRANNY, budget=200)[0] == 2


def test_case_i_knot_has_ua_three():
    # ℓ = (1/5) ⊕ (2/5): 2 is no square mod 5, so case (i) fires
    k = knotio.connected_sum(knotio.FIGURE_EIGHT, knotio.CINQUEFOIL)
    assert "i" in bounds.cor53_cases(k)
    lo, tags = bounds.ua_lower(k)
    assert lo == 3 and tags == ["COR53_i"]


def test_reports():
    assert bounds.report(knotio.TREFOIL).g_z == 1
    assert bounds.report(knotio.UNKNOT).g_z == 0
    rep = bounds.report(knotio.GRANNY)
    assert rep.g_z == 2
    assert rep.gz_upper_tag == "FALLBACK"
    line = rep.line()
    assert line.startswith("3_1#3_1 2(COR53_iv+LT_SIG) 2(FALLBACK)") and line.endswith("g_Z=2")
    data = json.loads(bounds.format_reports([rep], as_json=True))
    assert data[0]["gz_lower"] == 2 and data[0]["g_Z"] == 2


def test_witnessed_upper_bound():
    k = knotio.connected_sum(knotio.TREFOIL, knotio.FIGURE_EIGHT)
    g, w = bounds.gz_upper_search(k, seed=0, budget=5000, target=1)
    assert g == 1 and w is not None
    assert bounds.verify_upper_witness(k, w)
    rep = bounds.report(k, budget=5000)
    assert rep.gz_upper_tag == "WITNESSED" and rep.g_z == 1


def test_more_than_two_generators_skips_cor53():
    k = knotio.connected_sum(knotio.GRANNY, knotio.TREFOIL)
    assert knotio.min_generators_double_cover(k) == 3
    assert bounds.cor53_cases(k) == {}
    assert bounds.lower_sources(k, max_a=2)["MIN_GENS"] == 2


@given(seifert_records)
@settings(max_examples=15, deadline=None)
def test_report_consistency(r):
    rep = bounds.report(r, budget=300, max_a=3)
    assert rep.gz_lower <= rep.gz_upper <= r.genus
    assert rep.ua_lower <= rep.ua_upper == 2 * rep.gz_upper
    deg = r.alexander().span()
    assert 2 * rep.gz_upper <= deg
    if rep.gz_upper_tag == "WITNESSED":
        assert bounds.verify_upper_witness(r, rep.witness)


@given(seifert_records)
@settings(max_examples=10, deadline=None)
def test_removing_a_source_never_raises_the_bound(r):
    src = bounds.lower_sources(r, max_a=3)
    full = bounds.best_bound(src)[0]
    for tag in src:
        assert bounds.best_bound(src, exclude=(tag,))[0] <= full


def test_determinism():
    k = knotio.connected_sum(knotio.FIGURE_EIGHT, knotio.FIGURE_EIGHT)
    a = bounds.gz_upper_search(k, seed=7, budget=3000)
    b = bounds.gz_upper_search(k, seed=7, budget=3000)
    assert a == b


def test_budget_env(monkeypatch):
    monkeypatch.setenv("OBSTRUCT_BUDGET", "12")
    assert bounds.obstruct_budget() == 12
    monkeypatch.setenv("OBSTRUCT_BUDGET", "-1")
    with pytest.raises(InputError):
        bounds.obstruct_budget()
