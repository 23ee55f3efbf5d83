"""Command line front end.

Exit codes: 0 success, 1 input error (including usage errors), 2 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import acceptance, blanch, bounds, crit2, cycres, knotio
from . import finpair as fp
from . import laurent as lp
from .errors import BudgetExceeded, InputError, VerificationError

EXIT_OK, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    """Usage errors count as input errors (exit 1), keeping exit 2 for budgets."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zslice", description=(
        "Bounds for the Z-slice genus and the algebraic unknotting number of knots "
        "from Seifert matrices, with the linking form tools behind them."))
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def knot_cmd(name, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("file", help="knot file (records: knot NAME / seifert N / N rows)")
        p.add_argument("--json", action="store_true", help="machine readable output")
        return p

    knot_cmd("invariants", "Alexander polynomial, determinant, signature, Arf invariant")
    p = knot_cmd("bounds", "lower and upper bounds for g_Z and u_a")
    p.add_argument("--seed", type=int, default=0, help="seed of the upper bound search")
    p.add_argument("--budget", type=int, default=None,
                   help="moves of the upper bound search (default: OBSTRUCT_BUDGET or 100000)")
    p.add_argument("--threads", type=int, default=0,
                   help="worker processes; 1 runs serially (default: one per CPU)")
    p.add_argument("--max-a", type=int, default=6,
                   help="sample signatures at 2^a-th roots of unity for a up to this value")
    p = knot_cmd("obstruct", "lower bound obstructions only, with every source listed")
    p.add_argument("--max-a", type=int, default=6)
    knot_cmd("decompose", "orthogonal cyclic decomposition of lk and of ell = 2 lk")

    p = sub.add_parser("criterion", help="criterion B and Cor 5.3 for (a1/q1, a2/q2) and u",
                       description="Decide whether the pairing (a1/q1) + (a2/q2) has an odd "
                                   "2x2 presentation with determinant congruent to u mod 4.")
    for flag in ("--a1", "--q1", "--a2", "--q2"):
        p.add_argument(flag, type=int, required=True)
    p.add_argument("--u", type=int, required=True, choices=(1, -1))
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("normalize-blanchfield",
                       help="normalize a Hermitian Laurent matrix so A(1) is diagonal +-1")
    p.add_argument("file", help="Laurent matrix file (size line, rows of ';'-separated entries)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("verify-odd-cover",
                       help="norm/trace surjectivity and isometry of cyclic Hermitian pairings "
                            "over Z[t]/(q^k, Phi_p)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--lambda", dest="lam", default=None,
                   help="element whose norm should be -1 (default: first one found)")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("selftest", help="run the acceptance suite")
    p.add_argument("--only", type=int, action="append", help="run only this criterion")
    return parser


def parse_args(argv=None) -> argparse.Namespace:
    return build_parser().parse_args(argv)


# ---------------------------------------------------------------------------


def _emit(obj, as_json: bool, text: str):
    print(json.dumps(obj, indent=2, default=str) if as_json else text)


def cmd_invariants(args) -> int:
    out, lines = [], []
    for r in knotio.read_knot_file(args.file):
        row = {
            "name": r.name,
            "alexander": lp.format_poly(r.alexander()),
            "determinant": knotio.knot_determinant(r),
            "signature": knotio.lt_signature(r, Fraction(1, 2)),
            "arf": knotio.arf(r),
            "min_generators": knotio.min_generators_double_cover(r),
        }
        out.append(row)
        lines.append(f"knot {r.name}")
        lines.extend(f"  {k}: {v}" for k, v in row.items() if k != "name")
    _emit(out, args.json, "\n".join(lines))
    return EXIT_OK


def _report_task(task):
    r, seed, budget, max_a = task
    return bounds.report(r, seed, budget, max_a)


def cmd_bounds(args) -> int:
    records = knotio.read_knot_file(args.file)
    tasks = [(r, args.seed, args.budget, args.max_a) for r in records]
    if args.threads == 1 or len(tasks) <= 1:
        reports = [_report_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=args.threads or None) as pool:
            reports = list(pool.map(_report_task, tasks))
    print(bounds.format_reports(reports, args.json))
    return EXIT_OK


def cmd_obstruct(args) -> int:
    out, lines = [], []
    for r in knotio.read_knot_file(args.file):
        src = bounds.lower_sources(r, args.max_a)
        lo, tags = bounds.best_bound(src)
        cases = bounds.cor53_cases(r)
        out.append({"name": r.name, "gz_lower": lo, "tags": tags, "sources": src,
                    "cor53": cases})
        fired = ", ".join(f"Cor5.3({c}): {imp}" for c, imp in cases.items()) or "no Cor5.3 case"
        lines.append(f"{r.name} g_Z >= {lo} ({'+'.join(tags)}); {fired}")
    _emit(out, args.json, "\n".join(lines))
    return EXIT_OK


def cmd_decompose(args) -> int:
    out, lines = [], []
    for r in knotio.read_knot_file(args.file):
        if not r.size:
            out.append({"name": r.name, "lk": [], "ell": []})
            lines.append(f"{r.name} lk=() ell=()")
            continue
        lk, ell = fp.double_cover_pairing(r.v)
        dl, de = fp.decompose(lk), fp.decompose(ell)
        out.append({"name": r.name, "lk": [list(e) for e in dl.entries],
                    "ell": [list(e) for e in de.entries]})
        lines.append(f"{r.name} lk={dl} ell={de}")
    _emit(out, args.json, "\n".join(lines))
    return EXIT_OK


def cmd_criterion(args) -> int:
    c = crit2.CriterionInput(args.a1, args.q1, args.a2, args.q2, args.u)
    ok = crit2.criterion_B(c)
    cases = crit2.cor53(c.a1, c.q1, c.a2, c.q2)
    parts = [f"B: {'true' if ok else 'false'}"]
    obj = {"B": ok, "cor53": cases}
    if ok:
        w = crit2.construct_witness(c)
        m = crit2.matrix_from_witness(w, c)
        obj.update(witness=vars(w), matrix=m)
        parts.append(f"M = {m}")
    parts.extend(f"Cor5.3({k}): {v}" for k, v in cases.items())
    _emit(obj, args.json, "; ".join(parts))
    return EXIT_OK


def cmd_normalize(args) -> int:
    with open(args.file, encoding="utf-8") as fh:
        a = lp.parse_matrix(fh.read())
    cert = blanch.normalize_blanchfield(a, seed=args.seed)
    blanch.verify_certificate(a, cert)
    pos, neg = blanch.signed_unknotting_report(a, seed=args.seed)
    obj = {"B": lp.format_matrix(cert.b), "B(1)": cert.b_at_one(),
           "det_T": lp.format_poly(cert.det_t), "positive": pos, "negative": neg}
    text = (f"B =\n{lp.format_matrix(cert.b)}B(1) = {cert.b_at_one()}\n"
            f"det T = {lp.format_poly(cert.det_t)}\n"
            f"crossing changes: {pos} positive, {neg} negative")
    _emit(obj, args.json, text)
    return EXIT_OK


def cmd_verify_odd_cover(args) -> int:
    ring = cycres.ring_for(args.p, args.q, args.k)
    norm_ok = cycres.surjectivity_check(ring, "norm")
    trace_ok = cycres.surjectivity_check(ring, "trace")
    iso = cycres.all_pairings_isometric(args.p, args.q, args.k)
    lam = ring.parse(args.lam) if args.lam else cycres.solve_norm(ring.const(-1), ring)
    lam_ok = ring.norm(lam) == ring.const(-1)
    shown = ring.format(lam).replace(" ", "").replace("*", "")
    obj = {"norm_surjective": norm_ok, "trace_surjective": trace_ok,
           "all_pairings_isometric": iso, "lambda": shown, "norm_is_minus_one": lam_ok}
    text = (f"all pairings isometric: {str(iso).lower()}; norm({shown}) = -1 "
            f"{'verified' if lam_ok else 'FAILED'}")
    if not (norm_ok and trace_ok):
        text += f"\nnorm surjective: {norm_ok}; trace surjective: {trace_ok}"
    _emit(obj, args.json, text)
    return EXIT_OK if iso and lam_ok and norm_ok and trace_ok else EXIT_INPUT


def cmd_selftest(args) -> int:
    failed = False
    for res in acceptance.run_all(args.only):
        print(res.line(), flush=True)
        failed |= res.status == "FAIL"
    return EXIT_INPUT if failed else EXIT_OK


COMMANDS = {
    "invariants": cmd_invariants,
    "bounds": cmd_bounds,
    "obstruct": cmd_obstruct,
    "decompose": cmd_decompose,
    "criterion": cmd_criterion,
    "normalize-blanchfield": cmd_normalize,
    "verify-odd-cover": cmd_verify_odd_cover,
    "selftest": cmd_selftest,
}


def run(args: argparse.Namespace) -> int:
    try:
        return COMMANDS[args.command](args)
    except BudgetExceeded as err:
        print(f"budget exhausted: {err}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, VerificationError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT


def main(argv=None) -> int:
    return run(parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
