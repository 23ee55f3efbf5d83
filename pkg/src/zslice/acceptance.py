"""The acceptance suite: one function per criterion, each returning a CheckResult.

Used by ``zslice selftest`` and by tests/test_acceptance.py.
"""

from __future__ import annotations

import os
import random
import time
from dataclasses import dataclass

from sympy import factorint, legendre_symbol

from . import blanch, bounds, crit2, cycres, knotio
from . import exactmat as em
from . import finpair as fp
from . import laurent as lp
from .errors import BudgetExceeded, InputError


@dataclass
class CheckResult:
    number: int
    title: str
    status: str  # PASS, FAIL or SKIPPED
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        return f"{self.status} {self.number}. {self.title} ({self.seconds:.1f}s) {self.detail}".rstrip()


class _Fail(Exception):
    pass


def _expect(cond, message):
    if not cond:
        raise _Fail(message)


def _timed(number, title, limit, fn) -> CheckResult:
    start = time.perf_counter()
    try:
        detail = fn() or ""
        status = "PASS"
    except _Skip as skip:
        status, detail = "SKIPPED", str(skip)
    except (_Fail, InputError, BudgetExceeded, AssertionError) as err:
        status, detail = "FAIL", f"{type(err).__name__}: {err}"
    elapsed = time.perf_counter() - start
    if status == "PASS" and elapsed > limit:
        status, detail = "FAIL", f"took {elapsed:.1f}s, limit {limit}s"
    return CheckResult(number, title, status, detail, elapsed)


class _Skip(Exception):
    pass


# ---------------------------------------------------------------------------


def _check_1():
    a = [[12, 3], [3, 24]]
    b = [[3, 3], [3, 96]]
    pa, pb = fp.pairing_from_matrix(a), fp.pairing_from_matrix(b)
    _expect(pa.exponent == 93, f"annihilator of coker A is {pa.exponent}")
    _expect(pb.exponent == 93, f"annihilator of coker B is {pb.exponent}")
    _expect(em.determinant(a) == em.determinant(b) == 279, "determinants differ from 279")
    _expect(fp.isometry_search(pa, pb) is not None, "no isometry found")
    return "annihilator 93, det 279, isometric"


def _check_2():
    ring = cycres.QuotRing(3, 7)
    lam = ring.parse("3 + 6*t")
    _expect(ring.norm(lam) == ring.const(-1), f"norm(3+6t) = {ring.format(ring.norm(lam))}")
    _expect(cycres.all_pairings_isometric(3, 7, 1), "pairings for p=3, q=7 not all isometric")
    # t = -1 on Z/7: the form is plain symmetric and 1/7, -1/7 differ by a non-square
    p1 = fp.diagonal_pairing([(7, 1)])
    p2 = fp.diagonal_pairing([(7, 6)])
    _expect(fp.isometry_search(p1, p2) is None, "1/7 and -1/7 reported isometric")
    return "norm(3+6t) = -1; all isometric; 1/7 vs -1/7 distinct"


def _check_3():
    count = 0
    for c in crit2.admissible_inputs(27):
        count += 1
        if crit2.criterion_B(c):
            w = crit2.construct_witness(c)
            crit2.matrix_from_witness(w, c)
        else:
            hit = crit2.exhaustive_2x2_oracle(c.pairing(), c.u, 200)
            _expect(hit is None, f"B false for {c} but oracle found {hit}")
    return f"{count} inputs, zero mismatches"


def _check_4():
    rng = random.Random(20240601)
    literal = blanch.normalize_blanchfield(lp.constant_matrix(blanch.HYPERBOLIC))
    blanch.verify_certificate(lp.constant_matrix(blanch.HYPERBOLIC), literal)
    _expect(literal.b_at_one() == [[1, 0], [0, -1]], f"H normalizes to {literal.b_at_one()}")
    step = blanch.even_to_odd(lp.constant_matrix(blanch.HYPERBOLIC))
    _expect(lp.evaluate(step.b, 1) == [[0, 1], [1, 1]], "row operation on H is not [[0,1],[1,1]]")
    for case in range(200):
        n = rng.randint(2, 6)
        a = blanch.random_hermitian(rng, n)
        cert = blanch.normalize_blanchfield(a, seed=case)
        blanch.verify_certificate(a, cert)
        _expect(em.signature(cert.b_at_one()) == em.signature(lp.evaluate(a, 1)),
                f"case {case}: signature changed")
    return "200 random cases plus the literal hyperbolic case"


def _check_5():
    cases = cycres.sweep_cases()
    for p, q, k in cases:
        ring = cycres.ring_for(p, q, k)
        _expect(cycres.surjectivity_check(ring, "norm"), f"norm not onto for {(p, q, k)}")
        _expect(cycres.surjectivity_check(ring, "trace"), f"trace not onto for {(p, q, k)}")
        _expect(cycres.all_pairings_isometric(p, q, k), f"pairings differ for {(p, q, k)}")
    return f"{len(cases)} (p, q, k) cases"


def _check_6():
    tre, unk = knotio.TREFOIL, knotio.UNKNOT
    _expect(tre.alexander() == lp.parse_poly("t - 1 + t^-1"), f"Δ(trefoil) = {tre.alexander()}")
    _expect(knotio.knot_determinant(tre) == 3, "det(trefoil) != 3")
    _expect(abs(knotio.lt_signature(tre, "1/2")) == 2, "σ(trefoil) != ±2")
    _expect(knotio.arf(tre) == 1, "Arf(trefoil) != 1")
    _expect(bounds.report(tre).g_z == 1, "g_Z(trefoil) != 1")
    _expect(unk.alexander() == lp.ONE and knotio.knot_determinant(unk) == 1, "unknot not trivial")
    _expect(knotio.lt_signature(unk, "1/2") == 0 and knotio.arf(unk) == 0, "unknot not trivial")
    _expect(bounds.report(unk).g_z == 0, "g_Z(unknot) != 0")
    rep = bounds.report(knotio.GRANNY)
    _expect(rep.g_z == 2, f"g_Z(granny) = {rep.g_z}")
    _expect({"COR53_iv", "LT_SIG"} <= set(rep.gz_lower_tags), f"granny tags {rep.gz_lower_tags}")
    return "trefoil, unknot, granny"


TABLE1_ROWS = {
    "iii": "9_48 10_74 11a155 11a173 11a352 11n71 11n75 11n167 12a164 12a166 12a177 "
           "12a244 12a298 12a413 12a493 12a503 12a810 12a895 12a1142 12n334 12n379 "
           "12n460 12n495 12n549 12n583 12n869",
    "iv": "9_37 11a135 12a265 12a396 12a769 12a873 12a905 12n388 12n480 12n737 12n813 12n846",
    "i": "10_103 11n148 12a327 12a921 12a1194 12n147",
    "gens": "12a554 12a750 12n553 12n554 12n555 12n556 12n642",
}


def table1_key(name: str) -> str:
    """Normalize table names so 9_48, 9-48 and 11a_155 match 948 and 11a155."""
    return "".join(ch for ch in name.lower() if ch.isalnum())


def table1_rows() -> dict[str, str]:
    """Normalized knot name -> row of the obstruction table."""
    out = {}
    for row, names in TABLE1_ROWS.items():
        for name in names.split():
            out[table1_key(name)] = row
    return out


def check_table1_record(r: knotio.KnotRecord, row: str) -> str | None:
    """None if the record behaves as its table row says, else a message."""
    if row == "gens":
        src = bounds.lower_sources(r, max_a=2)
        if knotio.min_generators_double_cover(r) <= 2 or src["MIN_GENS"] != 2:
            return f"{r.name}: MIN_GENS does not give 2"
        return None
    cases = bounds.cor53_cases(r)
    if row not in cases:
        return f"{r.name}: Cor 5.3({row}) does not fire (fired: {sorted(cases)})"
    if row == "i" and bounds.ua_lower(r)[0] < 3:
        return f"{r.name}: u_a lower bound below 3"
    if bounds.gz_lower(r, max_a=2)[0] != 2:
        return f"{r.name}: gz_lower != 2"
    return None


def _check_7():
    path = os.environ.get("TABLE1_KNOTS")
    if not path:
        raise _Skip("set TABLE1_KNOTS to a knot file with Seifert matrices to run")
    rows = table1_rows()
    records = [r for r in knotio.read_knot_file(path) if table1_key(r.name) in rows]
    if not records:
        raise _Skip(f"{path} has no knots named in the table")
    problems = [m for r in records if (m := check_table1_record(r, rows[table1_key(r.name)]))]
    _expect(not problems, "; ".join(problems))
    return f"{len(records)} table knots checked"


def _check_8():
    table = {}  # (p, x mod p) -> Legendre symbol from sympy
    for y in range(1, 1000, 2):
        fac = factorint(y)
        for p in fac:
            if (p, 0) not in table:
                table.update({(p, r): (legendre_symbol(r, p) if r else 0) for r in range(p)})
        # the Legendre product only depends on x mod y
        wants = []
        for r in range(y):
            want = 1
            for p, e in fac.items():
                want *= table[(p, r % p)] ** e
            wants.append(want)
        for x in range(-1000, 1001):
            _expect(crit2.jacobi(x, y) == wants[x % y], f"jacobi({x}, {y})")
    return "all odd y < 1000, |x| <= 1000"


CRITERIA = [
    (1, "coker annihilator and isometry of the worked example", 1, _check_1),
    (2, "norm and isometry examples in Z[t]/(7, Phi_3)", 1, _check_2),
    (3, "criterion B against the exhaustive 2x2 oracle, q2 <= 27", 300, _check_3),
    (4, "Hermitian normalization fuzz", 60, _check_4),
    (5, "norm/trace surjectivity and cyclic isometry sweep", 120, _check_5),
    (6, "classical invariants and g_Z of small knots", 1, _check_6),
    (7, "table reproduction from user supplied Seifert matrices", 3600, _check_7),
    (8, "jacobi against Legendre products", 10, _check_8),
]


def run_criterion(number: int) -> CheckResult:
    for num, title, limit, fn in CRITERIA:
        if num == number:
            return _timed(num, title, limit, fn)
    raise InputError(f"no acceptance criterion {number}")


def run_all(numbers=None) -> list[CheckResult]:
    return [run_criterion(n) for n, *_ in CRITERIA if numbers is None or n in numbers]
